#pragma once

// Sweep-level machinery: peak-QFI search over the coupling, phase diagrams
// over (g, sigma), departure-uncertainty detection, power-law fitting and
// scaling classification. Grid cells are independent tasks; results are
// aggregated by cell index so worker count never changes the output.

#include <string>
#include <vector>

#include "qcrit/types.hpp"
#include "qcrit/uncertainty.hpp"

namespace qcrit {

// Attainable QFI with respect to omega at one (gbar, sigma) cell.
// sigma == 0 uses the single-parameter value (closed form for LZ/TFIM,
// numerical ground state for LMG); sigma > 0 averages over the Gaussian
// belief, through the low-rank path for the TFIM and the dense path
// otherwise.
double attainable_qfi(const ModelConfig& config, double gbar, double sigma,
                      int quad_nodes = 64,
                      const Tolerances& tol = default_tolerances);

struct PeakOptions {
  double lo = 0.0;        // <= 0 selects the default grid over (0, hi]
  double hi = 0.0;        // <= 0 selects 2 * omega
  int coarse = 201;       // coarse grid points
  double g_tol_rel = 1e-6;  // golden-section window, relative to omega
  int quad_nodes = 64;
  int workers = 1;        // coarse-grid evaluation parallelism
};

struct PeakResult {
  double g_star = 0.0;
  double value = 0.0;
  bool multi_peak = false;  // coarse profile had several strict local maxima
};

// Coarse scan followed by golden-section refinement. Ties on the coarse grid
// resolve to the smallest g. A non-unimodal coarse profile returns the global
// grid maximum flagged multi_peak without refinement.
PeakResult peak_qfi(const ModelConfig& config, double sigma,
                    const PeakOptions& opt = {});

std::vector<double> lin_grid(double lo, double hi, int count);
std::vector<double> log_grid(double lo, double hi, int per_decade);

struct SigmaFOptions {
  double eps_rel = 0.01;          // departure criterion on the peak QFI
  std::vector<double> sigma_grid;  // empty selects log_grid(1e-4, 1, 48)*omega
  PeakOptions peak;
};

struct SigmaFPoint {
  double sigma = 0.0;
  double deviation = 0.0;  // |peak(sigma) - peak(0)| / peak(0)
  double g_star = 0.0;
  double value = 0.0;
};

struct SigmaFResult {
  double value = 0.0;       // interpolated in log(sigma) at the criterion
  bool at_lower = false;    // first grid point already deviates
  bool at_upper = false;    // last grid point still within the criterion
  bool monotone = true;     // deviations non-decreasing among evaluated points
  double eps_rel = 0.0;
  double peak_ideal = 0.0;  // sigma = 0 reference peak
  std::vector<SigmaFPoint> evaluated;  // sorted by sigma
};

// Largest sigma at which the peak QFI still tracks the sigma = 0 peak within
// eps_rel, located by bisection over the grid (the deviation is monotone in
// sigma) and interpolated linearly in log(sigma) between the bracketing
// points. Grid boundaries are reported as flagged sentinels.
SigmaFResult sigma_f(const ModelConfig& config, const SigmaFOptions& opt = {});

struct PowerLawFit {
  double prefactor = 0.0;
  double exponent = 0.0;
  double rms_residual = 0.0;  // RMS of log-log residuals
  int points_used = 0;
};

// Least squares of ln y against ln x; requires >= 3 strictly positive points.
PowerLawFit power_law_fit(const std::vector<std::pair<double, double>>& points);

enum class ScalingClass { SubLinear, SuperLinear, SuperQuadratic };
const char* to_string(ScalingClass c);

// b < 1: sub-linear; 1 <= b <= 2: super-linear; b > 2: super-quadratic.
ScalingClass scaling_class(const PowerLawFit& fit);

// ---------------------------------------------------------------------------
// Tabulated sweeps
// ---------------------------------------------------------------------------

struct Axis {
  std::string name;
  std::vector<double> values;
};

struct SweepCell {
  double value = 0.0;
  double aux = 0.0;       // second output where one exists (e.g. g_star)
  bool converged = false;
  bool ok = false;
  std::string error;
};

struct SweepMeta {
  std::string kind;
  std::string model;
  double omega = 1.0;
  int n_spins = 0;
  int quad_nodes = 64;
  double eps_rel = 0.0;
  int workers = 1;
  bool convergence_checked = false;
};

// Row-major table over the axes in order; every cell carries its own
// success/convergence flags so one failed cell never aborts a sweep.
struct SweepResult {
  std::vector<Axis> axes;
  std::vector<SweepCell> cells;
  SweepMeta meta;
};

struct SweepOptions {
  int quad_nodes = 64;
  int workers = 1;
  bool check_convergence = true;
  Tolerances tol = default_tolerances;
};

// QFI table over (sigma outer, g inner); axes are "sigma" then "g".
SweepResult qfi_sweep(const ModelConfig& config,
                      const std::vector<double>& g_values,
                      const std::vector<double>& sigma_values,
                      const SweepOptions& opt = {});

// A phase diagram is the same table evaluated over two full grids.
inline SweepResult phase_diagram(const ModelConfig& config,
                                 const std::vector<double>& g_grid,
                                 const std::vector<double>& sigma_grid,
                                 const SweepOptions& opt = {}) {
  return qfi_sweep(config, g_grid, sigma_grid, opt);
}

// Peak QFI and its location over (n outer, sigma inner); cells store the
// peak value and g_star in aux.
SweepResult peak_scaling(ProbeModel model, double omega,
                         const std::vector<int>& n_values,
                         const std::vector<double>& sigma_values,
                         const PeakOptions& peak_opt = {}, int workers = 1);

// sigma_f per system size; cells store sigma_f (converged = not clipped at a
// grid boundary).
SweepResult sigma_f_sweep(ProbeModel model, double omega,
                          const std::vector<int>& n_values,
                          const SigmaFOptions& opt = {}, int workers = 1);

}  // namespace qcrit
