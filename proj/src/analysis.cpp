#include "qcrit/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qcrit/parallel.hpp"

namespace qcrit {

double attainable_qfi(const ModelConfig& config, double gbar, double sigma,
                      int quad_nodes, const Tolerances& tol) {
  config.validate();
  if (sigma == 0.0) {
    switch (config.model) {
      case ProbeModel::Lz:
        return lz_qfim_closed({config.omega, gbar}).i_oo;
      case ProbeModel::Tfim:
        return tfim_qfim_closed({config.omega, gbar, config.n_spins}).i_oo;
      case ProbeModel::Lmg:
        return lmg_qfim_numeric({config.omega, gbar, config.n_spins}).i_oo;
    }
  }
  const GaussianBelief belief{gbar, sigma, quad_nodes};
  return config.model == ProbeModel::Tfim
             ? averaged_qfi_lowrank(config, belief, tol)
             : averaged_qfi(config, belief, tol);
}

std::vector<double> lin_grid(double lo, double hi, int count) {
  if (count < 1 || !(hi >= lo))
    throw std::invalid_argument("lin_grid: bad range");
  std::vector<double> g(count);
  if (count == 1) {
    g[0] = lo;
    return g;
  }
  for (int i = 0; i < count; ++i)
    g[i] = lo + (hi - lo) * i / static_cast<double>(count - 1);
  return g;
}

std::vector<double> log_grid(double lo, double hi, int per_decade) {
  if (!(lo > 0.0) || !(hi > lo) || per_decade < 1)
    throw std::invalid_argument("log_grid: bad range");
  const double l0 = std::log10(lo), l1 = std::log10(hi);
  const int count = static_cast<int>(std::ceil((l1 - l0) * per_decade)) + 1;
  std::vector<double> g(count);
  for (int i = 0; i < count; ++i) {
    const double l = l0 + (l1 - l0) * i / static_cast<double>(count - 1);
    g[i] = std::pow(10.0, l);
  }
  g.back() = hi;
  return g;
}

PeakResult peak_qfi(const ModelConfig& config, double sigma,
                    const PeakOptions& opt) {
  config.validate();
  if (opt.coarse < 3)
    throw std::invalid_argument("peak_qfi: coarse grid needs >= 3 points");
  const double hi = opt.hi > 0.0 ? opt.hi : 2.0 * config.omega;
  std::vector<double> grid(opt.coarse);
  if (opt.lo > 0.0) {
    grid = lin_grid(opt.lo, hi, opt.coarse);
  } else {
    // default grid over (0, hi]
    for (int i = 0; i < opt.coarse; ++i)
      grid[i] = hi * (i + 1) / static_cast<double>(opt.coarse);
  }

  auto eval = [&](double g) {
    return attainable_qfi(config, g, sigma, opt.quad_nodes);
  };

  std::vector<double> values(grid.size());
  parallel_for(static_cast<int>(grid.size()), opt.workers,
               [&](int i) { values[i] = eval(grid[i]); });

  int imax = 0;
  int local_maxima = 0;
  for (int i = 0; i < static_cast<int>(grid.size()); ++i) {
    if (values[i] > values[imax]) imax = i;
    const bool left_ok = i == 0 || values[i] > values[i - 1];
    const bool right_ok = i + 1 == static_cast<int>(grid.size()) ||
                          values[i] > values[i + 1];
    if (i > 0 && i + 1 < static_cast<int>(grid.size()) && left_ok && right_ok)
      ++local_maxima;
  }
  if (local_maxima > 1) return {grid[imax], values[imax], true};

  double a = grid[std::max(0, imax - 1)];
  double b = grid[std::min(static_cast<int>(grid.size()) - 1, imax + 1)];
  double best_x = grid[imax];
  double best_f = values[imax];
  auto consider = [&](double x, double f) {
    if (f > best_f || (f == best_f && x < best_x)) {
      best_x = x;
      best_f = f;
    }
  };

  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  const double tol = opt.g_tol_rel * config.omega;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = eval(x1), f2 = eval(x2);
  consider(x1, f1);
  consider(x2, f2);
  while (b - a > tol) {
    if (f1 >= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = eval(x1);
      consider(x1, f1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = eval(x2);
      consider(x2, f2);
    }
  }
  return {best_x, best_f, false};
}

SigmaFResult sigma_f(const ModelConfig& config, const SigmaFOptions& opt) {
  config.validate();
  if (!(opt.eps_rel > 0.0))
    throw std::invalid_argument("sigma_f: eps_rel must be positive");
  std::vector<double> grid = opt.sigma_grid;
  if (grid.empty()) {
    grid = log_grid(1e-4, 1.0, 48);
    for (double& s : grid) s *= config.omega;
  }
  if (!std::is_sorted(grid.begin(), grid.end()))
    throw std::invalid_argument("sigma_f: sigma grid must be ascending");

  SigmaFResult out;
  out.eps_rel = opt.eps_rel;
  const PeakResult ideal = peak_qfi(config, 0.0, opt.peak);
  out.peak_ideal = ideal.value;
  if (!(ideal.value > 0.0))
    throw std::runtime_error("sigma_f: ideal peak is not positive");

  std::vector<SigmaFPoint> pts(grid.size());
  std::vector<bool> have(grid.size(), false);
  auto deviation = [&](int i) {
    if (!have[i]) {
      const PeakResult p = peak_qfi(config, grid[i], opt.peak);
      pts[i] = {grid[i], std::abs(p.value - ideal.value) / ideal.value,
                p.g_star, p.value};
      have[i] = true;
    }
    return pts[i].deviation;
  };

  const int last = static_cast<int>(grid.size()) - 1;
  int lo = 0, hi = last;
  if (deviation(0) > opt.eps_rel) {
    out.at_lower = true;
    out.value = grid[0];
  } else if (deviation(last) <= opt.eps_rel) {
    out.at_upper = true;
    out.value = grid[last];
  } else {
    // Deviation grows with sigma, so the bracketing pair is found by
    // bisection over the grid; identical outcome to a full scan, at a
    // fraction of the evaluations.
    while (hi - lo > 1) {
      const int mid = lo + (hi - lo) / 2;
      if (deviation(mid) <= opt.eps_rel)
        lo = mid;
      else
        hi = mid;
    }
    const double d_lo = pts[lo].deviation, d_hi = pts[hi].deviation;
    const double t = (opt.eps_rel - d_lo) / (d_hi - d_lo);
    out.value = std::exp(std::log(grid[lo]) +
                         t * (std::log(grid[hi]) - std::log(grid[lo])));
  }

  for (std::size_t i = 0; i < grid.size(); ++i)
    if (have[i]) out.evaluated.push_back(pts[i]);
  for (std::size_t i = 1; i < out.evaluated.size(); ++i) {
    const double slack =
        1e-9 + 1e-6 * std::abs(out.evaluated[i - 1].deviation);
    if (out.evaluated[i].deviation + slack < out.evaluated[i - 1].deviation)
      out.monotone = false;
  }
  return out;
}

PowerLawFit power_law_fit(
    const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 3)
    throw std::invalid_argument("power_law_fit: need at least 3 points");
  const int n = static_cast<int>(points.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [x, y] : points) {
    if (!(x > 0.0) || !(y > 0.0) || !std::isfinite(x) || !std::isfinite(y))
      throw std::invalid_argument("power_law_fit: points must be positive");
    const double lx = std::log(x), ly = std::log(y);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0)
    throw std::invalid_argument("power_law_fit: degenerate abscissae");
  PowerLawFit fit;
  fit.exponent = (n * sxy - sx * sy) / denom;
  const double intercept = (sy - fit.exponent * sx) / n;
  fit.prefactor = std::exp(intercept);
  double ss = 0;
  for (const auto& [x, y] : points) {
    const double r = std::log(y) - (intercept + fit.exponent * std::log(x));
    ss += r * r;
  }
  fit.rms_residual = std::sqrt(ss / n);
  fit.points_used = n;
  return fit;
}

const char* to_string(ScalingClass c) {
  switch (c) {
    case ScalingClass::SubLinear: return "sub-linear";
    case ScalingClass::SuperLinear: return "super-linear";
    case ScalingClass::SuperQuadratic: return "super-quadratic";
  }
  return "?";
}

ScalingClass scaling_class(const PowerLawFit& fit) {
  if (fit.exponent < 1.0) return ScalingClass::SubLinear;
  if (fit.exponent <= 2.0) return ScalingClass::SuperLinear;
  return ScalingClass::SuperQuadratic;
}

SweepResult qfi_sweep(const ModelConfig& config,
                      const std::vector<double>& g_values,
                      const std::vector<double>& sigma_values,
                      const SweepOptions& opt) {
  config.validate();
  if (g_values.empty() || sigma_values.empty())
    throw std::invalid_argument("qfi_sweep: grids must be non-empty");
  SweepResult out;
  out.axes = {{"sigma", sigma_values}, {"g", g_values}};
  out.meta = {"sweep",       to_string(config.model), config.omega,
              config.n_spins, opt.quad_nodes,          0.0,
              opt.workers,    opt.check_convergence};
  const int ng = static_cast<int>(g_values.size());
  const int total = ng * static_cast<int>(sigma_values.size());
  out.cells.resize(total);
  parallel_for(total, opt.workers, [&](int idx) {
    const double sigma = sigma_values[idx / ng];
    const double g = g_values[idx % ng];
    SweepCell& cell = out.cells[idx];
    try {
      if (opt.check_convergence && sigma > 0.0) {
        const ConvergenceCheck c = averaged_qfi_convergence(
            config, {g, sigma, opt.quad_nodes}, opt.tol);
        cell.value = c.value;
        cell.converged = c.converged;
      } else {
        cell.value = attainable_qfi(config, g, sigma, opt.quad_nodes, opt.tol);
        cell.converged = true;  // point mass: the quadrature is exact
      }
      cell.ok = true;
    } catch (const std::exception& e) {
      cell.ok = false;
      cell.error = e.what();
      cell.value = std::numeric_limits<double>::quiet_NaN();
    }
  });
  return out;
}

SweepResult peak_scaling(ProbeModel model, double omega,
                         const std::vector<int>& n_values,
                         const std::vector<double>& sigma_values,
                         const PeakOptions& peak_opt, int workers) {
  if (n_values.empty() || sigma_values.empty())
    throw std::invalid_argument("peak_scaling: grids must be non-empty");
  SweepResult out;
  std::vector<double> n_axis(n_values.begin(), n_values.end());
  out.axes = {{"n", n_axis}, {"sigma", sigma_values}};
  out.meta = {"peak-scaling", to_string(model), omega, 0,
              peak_opt.quad_nodes, 0.0, workers, false};
  const int ns = static_cast<int>(sigma_values.size());
  const int total = ns * static_cast<int>(n_values.size());
  out.cells.resize(total);
  parallel_for(total, workers, [&](int idx) {
    const int n = n_values[idx / ns];
    const double sigma = sigma_values[idx % ns];
    SweepCell& cell = out.cells[idx];
    try {
      const ModelConfig config{model, omega, n};
      PeakOptions po = peak_opt;
      po.workers = 1;
      const PeakResult p = peak_qfi(config, sigma, po);
      cell.value = p.value;
      cell.aux = p.g_star;
      cell.converged = !p.multi_peak;
      cell.ok = true;
    } catch (const std::exception& e) {
      cell.ok = false;
      cell.error = e.what();
      cell.value = std::numeric_limits<double>::quiet_NaN();
    }
  });
  return out;
}

SweepResult sigma_f_sweep(ProbeModel model, double omega,
                          const std::vector<int>& n_values,
                          const SigmaFOptions& opt, int workers) {
  if (n_values.empty())
    throw std::invalid_argument("sigma_f_sweep: n grid must be non-empty");
  SweepResult out;
  std::vector<double> n_axis(n_values.begin(), n_values.end());
  out.axes = {{"n", n_axis}};
  out.meta = {"sigma-f", to_string(model), omega, 0,
              opt.peak.quad_nodes, opt.eps_rel, workers, false};
  out.cells.resize(n_values.size());
  parallel_for(static_cast<int>(n_values.size()), workers, [&](int idx) {
    SweepCell& cell = out.cells[idx];
    try {
      const ModelConfig config{model, omega, n_values[idx]};
      SigmaFOptions o = opt;
      o.peak.workers = 1;
      const SigmaFResult r = sigma_f(config, o);
      cell.value = r.value;
      cell.converged = !r.at_lower && !r.at_upper && r.monotone;
      cell.ok = true;
      if (r.at_lower) cell.error = "below sigma grid";
      if (r.at_upper) cell.error = "above sigma grid";
    } catch (const std::exception& e) {
      cell.ok = false;
      cell.error = e.what();
      cell.value = std::numeric_limits<double>::quiet_NaN();
    }
  });
  return out;
}

}  // namespace qcrit
