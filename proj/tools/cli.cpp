#include "cli.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "qcrit/analysis.hpp"
#include "qcrit/csv.hpp"
#include "qcrit/qfi.hpp"
#include "qcrit/version.hpp"

namespace qcrit::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, sep)) parts.push_back(item);
  return parts;
}

double to_double(const std::string& s) {
  std::size_t pos = 0;
  const double v = std::stod(s, &pos);
  if (pos != s.size()) throw std::invalid_argument("bad number: " + s);
  return v;
}

// "a:b:c" -> c uniform points on [a, b]; "a:b" -> default_count points;
// otherwise a comma list of values.
std::vector<double> parse_grid(const std::string& spec, int default_count) {
  if (spec.empty()) throw std::invalid_argument("empty grid spec");
  if (spec.find(':') != std::string::npos) {
    const auto parts = split(spec, ':');
    if (parts.size() < 2 || parts.size() > 3)
      throw std::invalid_argument("grid spec must be start:stop[:count]");
    const double a = to_double(parts[0]);
    const double b = to_double(parts[1]);
    const int count = parts.size() == 3 ? std::stoi(parts[2]) : default_count;
    return lin_grid(a, b, count);
  }
  std::vector<double> out;
  for (const auto& p : split(spec, ',')) out.push_back(to_double(p));
  return out;
}

// System sizes: a comma list taken verbatim, or "a:b[:count]" expanded to
// count log-spaced values (default 8), rounded to integers and, for the TFIM,
// to the nearest even size.
std::vector<int> parse_n_list(const std::string& spec,
                              const std::string& model) {
  std::vector<int> out;
  if (spec.find(':') != std::string::npos) {
    const auto parts = split(spec, ':');
    if (parts.size() < 2 || parts.size() > 3)
      throw std::invalid_argument("n spec must be lo:hi[:count]");
    const double lo = to_double(parts[0]);
    const double hi = to_double(parts[1]);
    const int count = parts.size() == 3 ? std::stoi(parts[2]) : 8;
    if (!(lo >= 2.0) || !(hi >= lo) || count < 1)
      throw std::invalid_argument("bad n range");
    for (int i = 0; i < count; ++i) {
      const double t = count == 1 ? 0.0 : i / static_cast<double>(count - 1);
      const double v =
          std::exp(std::log(lo) + t * (std::log(hi) - std::log(lo)));
      int n = static_cast<int>(std::lround(v));
      if (model == "tfim") n = 2 * static_cast<int>(std::lround(n / 2.0));
      out.push_back(std::max(2, n));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
  } else {
    for (const auto& p : split(spec, ',')) {
      std::size_t pos = 0;
      const int n = std::stoi(p, &pos);
      if (pos != p.size()) throw std::invalid_argument("bad n value: " + p);
      out.push_back(n);
    }
  }
  if (out.empty()) throw std::invalid_argument("empty n spec");
  return out;
}

ProbeModel parse_model(const std::string& m) {
  if (m == "lz") return ProbeModel::Lz;
  if (m == "tfim") return ProbeModel::Tfim;
  if (m == "lmg") return ProbeModel::Lmg;
  throw std::invalid_argument("unknown model: " + m);
}

PeakOptions parse_peak_options(const RunConfig& c) {
  PeakOptions opt;
  opt.quad_nodes = c.quad_nodes;
  opt.workers = 1;
  if (!c.search_spec.empty()) {
    const auto parts = split(c.search_spec, ':');
    if (parts.size() < 2 || parts.size() > 3)
      throw std::invalid_argument("search spec must be lo:hi[:count]");
    opt.lo = to_double(parts[0]);
    opt.hi = to_double(parts[1]);
    if (parts.size() == 3) opt.coarse = std::stoi(parts[2]);
  }
  return opt;
}

std::string iso_timestamp() {
  const std::time_t t =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json config_to_json(const RunConfig& c) {
  return json{{"command", c.command},
              {"model", c.model},
              {"omega", c.omega},
              {"g", c.g},
              {"g_spec", c.g_spec},
              {"sigma_spec", c.sigma_spec},
              {"n_spec", c.n_spec},
              {"quad_nodes", c.quad_nodes},
              {"workers", c.workers},
              {"epsilon_rel", c.epsilon_rel},
              {"sigma_grid_spec", c.sigma_grid_spec},
              {"search_spec", c.search_spec},
              {"check_convergence", c.check_convergence},
              {"rank_cutoff", c.rank_cutoff},
              {"out_dir", c.out_dir},
              {"prefix", c.prefix},
              {"fit_input", c.fit_input},
              {"fit_x", c.fit_x},
              {"fit_y", c.fit_y},
              {"fit_where", c.fit_where}};
}

RunConfig config_from_json(const json& j) {
  RunConfig c;
  c.command = j.at("command").get<std::string>();
  c.model = j.value("model", c.model);
  c.omega = j.value("omega", c.omega);
  c.g = j.value("g", c.g);
  c.g_spec = j.value("g_spec", c.g_spec);
  c.sigma_spec = j.value("sigma_spec", c.sigma_spec);
  c.n_spec = j.value("n_spec", c.n_spec);
  c.quad_nodes = j.value("quad_nodes", c.quad_nodes);
  c.workers = j.value("workers", c.workers);
  c.epsilon_rel = j.value("epsilon_rel", c.epsilon_rel);
  c.sigma_grid_spec = j.value("sigma_grid_spec", c.sigma_grid_spec);
  c.search_spec = j.value("search_spec", c.search_spec);
  c.check_convergence = j.value("check_convergence", c.check_convergence);
  c.rank_cutoff = j.value("rank_cutoff", c.rank_cutoff);
  c.out_dir = j.value("out_dir", c.out_dir);
  c.prefix = j.value("prefix", c.prefix);
  c.fit_input = j.value("fit_input", c.fit_input);
  c.fit_x = j.value("fit_x", c.fit_x);
  c.fit_y = j.value("fit_y", c.fit_y);
  c.fit_where = j.value("fit_where", c.fit_where);
  return c;
}

// Writes base.csv and base.json; returns kExitIo on filesystem failure.
int write_outputs(const RunConfig& c, const CsvTable& table,
                  const SweepResult* sweep, double wall_seconds,
                  std::string* csv_path_out = nullptr) {
  const std::string base = c.prefix.empty() ? c.command : c.prefix;
  try {
    fs::create_directories(c.out_dir);
    const std::string csv_path = (fs::path(c.out_dir) / (base + ".csv")).string();
    const std::string json_path =
        (fs::path(c.out_dir) / (base + ".json")).string();
    write_file(csv_path, to_csv(table));
    json sidecar{{"version", kVersion},
                 {"timestamp", iso_timestamp()},
                 {"wall_seconds", wall_seconds},
                 {"config", config_to_json(c)},
                 {"outputs", {{"csv", base + ".csv"}}}};
    if (sweep != nullptr) {
      json cells = json::array();
      for (std::size_t i = 0; i < sweep->cells.size(); ++i) {
        const SweepCell& cell = sweep->cells[i];
        json e{{"index", i}, {"ok", cell.ok}, {"converged", cell.converged}};
        if (!cell.error.empty()) e["error"] = cell.error;
        cells.push_back(std::move(e));
      }
      sidecar["cells"] = std::move(cells);
    }
    write_file(json_path, sidecar.dump(2) + "\n");
    if (csv_path_out != nullptr) *csv_path_out = csv_path;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitOk;
}

void print_qfim_row(const char* label, const QfiMatrix& m) {
  std::cout << label << "  I_oo=" << format_double(m.i_oo)
            << "  I_og=" << format_double(m.i_og)
            << "  I_gg=" << format_double(m.i_gg)
            << "  det=" << format_double(qfim_det(m))
            << "  singular=" << (is_singular(m) ? "yes" : "no")
            << "  bound(omega)=" << format_double(crb_variance(m, ParameterId::Omega))
            << "  bound(g)=" << format_double(crb_variance(m, ParameterId::Coupling))
            << "\n";
}

int cmd_qfim(const RunConfig& c) {
  std::cout << "model=" << c.model << " omega=" << format_double(c.omega)
            << " g=" << format_double(c.g);
  if (c.model == "tfim" || c.model == "lmg") {
    const int n = parse_n_list(c.n_spec, c.model).front();
    std::cout << " n=" << n;
    std::cout << "\n";
    if (c.model == "tfim") {
      print_qfim_row("closed ", tfim_qfim_closed({c.omega, c.g, n}));
      print_qfim_row("numeric", tfim_qfim_numeric({c.omega, c.g, n}));
    } else {
      print_qfim_row("numeric", lmg_qfim_numeric({c.omega, c.g, n}));
    }
  } else if (c.model == "lz") {
    std::cout << "\n";
    print_qfim_row("closed ", lz_qfim_closed({c.omega, c.g}));
    const LzParams p{c.omega, c.g};
    const Eigen::Vector2d psi = lz_ground_state(p);
    const Eigen::Vector2d d_o = lz_ground_state_grad(p, ParameterId::Omega);
    const Eigen::Vector2d d_g = lz_ground_state_grad(p, ParameterId::Coupling);
    const QfiMatrix m{qfim_pure(psi, d_o, d_o), qfim_pure(psi, d_o, d_g),
                      qfim_pure(psi, d_g, d_g)};
    print_qfim_row("numeric", m);
  } else if (c.model == "lmg-thermo") {
    std::cout << "\n";
    print_qfim_row("closed ", lmg_thermo_qfim(c.omega, c.g));
  } else {
    throw std::invalid_argument("unknown model: " + c.model);
  }
  return kExitOk;
}

int cmd_sweep(const RunConfig& c) {
  const ModelConfig config{parse_model(c.model), c.omega,
                           parse_n_list(c.n_spec, c.model).front()};
  const std::vector<double> gs = parse_grid(c.g_spec, 101);
  const std::vector<double> sigmas = parse_grid(c.sigma_spec, 51);
  SweepOptions opt;
  opt.quad_nodes = c.quad_nodes;
  opt.workers = c.workers;
  opt.check_convergence = c.check_convergence;
  opt.tol.rank_cutoff = c.rank_cutoff;

  const auto t0 = std::chrono::steady_clock::now();
  const SweepResult sweep = qfi_sweep(config, gs, sigmas, opt);
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();

  CsvTable table;
  table.columns = {"g_over_omega", "sigma_over_omega", "qfi_times_omega2",
                   "converged"};
  const double w2 = c.omega * c.omega;
  int failed = 0;
  for (std::size_t is = 0; is < sigmas.size(); ++is)
    for (std::size_t ig = 0; ig < gs.size(); ++ig) {
      const SweepCell& cell = sweep.cells[is * gs.size() + ig];
      if (!cell.ok) ++failed;
      table.rows.push_back({gs[ig] / c.omega, sigmas[is] / c.omega,
                            cell.value * w2, cell.converged ? 1.0 : 0.0});
    }
  std::string csv_path;
  const int io = write_outputs(c, table, &sweep, wall, &csv_path);
  if (io != kExitOk) return io;
  std::cout << "wrote " << csv_path << " (" << table.rows.size() << " cells, "
            << failed << " failed)\n";
  return failed == 0 ? kExitOk : kExitPartial;
}

int cmd_peak_scaling(const RunConfig& c) {
  const ProbeModel model = parse_model(c.model);
  const std::vector<int> ns = parse_n_list(c.n_spec, c.model);
  for (int n : ns) ModelConfig{model, c.omega, n}.validate();
  const std::vector<double> sigmas = parse_grid(c.sigma_spec, 11);
  const PeakOptions peak = parse_peak_options(c);

  const auto t0 = std::chrono::steady_clock::now();
  const SweepResult sweep =
      peak_scaling(model, c.omega, ns, sigmas, peak, c.workers);
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();

  CsvTable table;
  table.columns = {"n", "sigma_over_omega", "peak_qfi_times_omega2",
                   "g_star_over_omega"};
  const double w2 = c.omega * c.omega;
  int failed = 0;
  for (std::size_t in = 0; in < ns.size(); ++in)
    for (std::size_t is = 0; is < sigmas.size(); ++is) {
      const SweepCell& cell = sweep.cells[in * sigmas.size() + is];
      if (!cell.ok) ++failed;
      table.rows.push_back({static_cast<double>(ns[in]), sigmas[is] / c.omega,
                            cell.value * w2, cell.aux / c.omega});
    }
  std::string csv_path;
  const int io = write_outputs(c, table, &sweep, wall, &csv_path);
  if (io != kExitOk) return io;
  std::cout << "wrote " << csv_path << " (" << table.rows.size() << " cells, "
            << failed << " failed)\n";
  return failed == 0 ? kExitOk : kExitPartial;
}

int cmd_sigma_f(const RunConfig& c) {
  const ProbeModel model = parse_model(c.model);
  const std::vector<int> ns = parse_n_list(c.n_spec, c.model);
  for (int n : ns) ModelConfig{model, c.omega, n}.validate();
  SigmaFOptions opt;
  opt.eps_rel = c.epsilon_rel;
  opt.peak = parse_peak_options(c);
  if (!c.sigma_grid_spec.empty()) {
    const auto parts = split(c.sigma_grid_spec, ':');
    if (parts.size() != 3)
      throw std::invalid_argument("sigma grid spec must be lo:hi:per_decade");
    opt.sigma_grid =
        log_grid(to_double(parts[0]), to_double(parts[1]), std::stoi(parts[2]));
  }

  const auto t0 = std::chrono::steady_clock::now();
  const SweepResult sweep = sigma_f_sweep(model, c.omega, ns, opt, c.workers);
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();

  CsvTable table;
  table.columns = {"n", "sigma_f_over_omega", "epsilon_rel"};
  int failed = 0;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const SweepCell& cell = sweep.cells[i];
    if (!cell.ok) ++failed;
    table.rows.push_back(
        {static_cast<double>(ns[i]), cell.value / c.omega, c.epsilon_rel});
  }
  std::string csv_path;
  const int io = write_outputs(c, table, &sweep, wall, &csv_path);
  if (io != kExitOk) return io;
  std::cout << "wrote " << csv_path << " (" << table.rows.size() << " rows, "
            << failed << " failed)\n";
  return failed == 0 ? kExitOk : kExitPartial;
}

int cmd_fit(const RunConfig& c) {
  if (c.fit_input.empty())
    throw std::invalid_argument("fit: --input is required");
  std::string content;
  try {
    content = read_file(c.fit_input);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  std::istringstream is(content);
  std::string line;
  if (!std::getline(is, line)) throw std::invalid_argument("fit: empty input");
  const std::vector<std::string> header = split(line, ',');
  auto column = [&](const std::string& name) {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return static_cast<int>(i);
    return -1;
  };
  int xc = c.fit_x.empty() ? column("n") : column(c.fit_x);
  int yc = -1;
  if (c.fit_y.empty()) {
    for (const char* name :
         {"sigma_f_over_omega", "peak_qfi_times_omega2", "qfi_times_omega2"})
      if ((yc = column(name)) >= 0) break;
  } else {
    yc = column(c.fit_y);
  }
  if (xc < 0 && c.fit_x.empty()) xc = 0;
  if (yc < 0 && c.fit_y.empty()) yc = 1;
  if (xc < 0 || yc < 0)
    throw std::invalid_argument("fit: requested columns not found");

  int wc = -1;
  double wv = 0.0;
  if (!c.fit_where.empty()) {
    const auto parts = split(c.fit_where, '=');
    if (parts.size() != 2)
      throw std::invalid_argument("fit: --where expects column=value");
    wc = column(parts[0]);
    if (wc < 0) throw std::invalid_argument("fit: filter column not found");
    wv = to_double(parts[1]);
  }

  std::vector<std::pair<double, double>> points;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    if (static_cast<int>(cells.size()) <= std::max({xc, yc, wc}))
      throw std::invalid_argument("fit: short row in input");
    if (wc >= 0 &&
        std::abs(to_double(cells[wc]) - wv) >
            1e-12 * std::max(1.0, std::abs(wv)))
      continue;
    points.emplace_back(to_double(cells[xc]), to_double(cells[yc]));
  }
  const PowerLawFit fit = power_law_fit(points);
  std::cout << "fit: y = " << format_double(fit.prefactor) << " * x^"
            << format_double(fit.exponent)
            << "  rms_residual=" << format_double(fit.rms_residual)
            << "  points=" << fit.points_used << "  scaling="
            << to_string(scaling_class(fit)) << "\n";

  CsvTable table;
  table.columns = {"prefactor", "exponent", "rms_residual", "points_used"};
  table.rows.push_back({fit.prefactor, fit.exponent, fit.rms_residual,
                        static_cast<double>(fit.points_used)});
  return write_outputs(c, table, nullptr, 0.0);
}

int cmd_rerun(const RunConfig& c) {
  if (c.rerun_path.empty())
    throw std::invalid_argument("rerun: sidecar path is required");
  std::string content;
  try {
    content = read_file(c.rerun_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  const json sidecar = json::parse(content);
  RunConfig replay = config_from_json(sidecar.at("config"));
  if (c.out_dir != ".") replay.out_dir = c.out_dir;
  if (replay.command == "rerun")
    throw std::invalid_argument("rerun: sidecar does not describe a run");
  return run_command(replay);
}

}  // namespace

int run_command(const RunConfig& config) {
  try {
    if (config.command == "qfim") return cmd_qfim(config);
    if (config.command == "sweep" || config.command == "phase-diagram")
      return cmd_sweep(config);
    if (config.command == "peak-scaling") return cmd_peak_scaling(config);
    if (config.command == "sigma-f") return cmd_sigma_f(config);
    if (config.command == "fit") return cmd_fit(config);
    if (config.command == "rerun") return cmd_rerun(config);
    std::cerr << "error: unknown command " << config.command << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace qcrit::cli
