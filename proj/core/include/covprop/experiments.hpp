#pragma once

#include "covprop/covariance.hpp"
#include "covprop/csv.hpp"
#include "covprop/grid.hpp"
#include "covprop/kernels.hpp"
#include "covprop/schemes.hpp"

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace covprop {

enum class FigureId {
  VarianceVsSpectrum,
  FullSupportGC,
  TraceSeries,
  GC025,
  FOAR025,
  ZeroLength,
  DiagSweepGC,
  DiagSweepFOAR,
  VarianceTimeSeries,
  StateSolutions,
};

std::span<const FigureId> all_figures();
std::string_view to_string(FigureId figure);
std::optional<FigureId> parse_figure(std::string_view text);
std::string_view describe(FigureId figure);

/// Overrides left empty fall back to what each figure sweeps by default.
struct ExperimentConfig {
  int n = 200;
  double lambda = 1.0;
  double final_time = 3.979;
  std::optional<CorrelationKernel> kernel;
  std::optional<VarianceProfile> variance;
  std::string output_dir;
};

/// Reads the keys n, lambda, final_time, kernel, variance and out from a JSON
/// object, on top of `base`. Unknown keys are rejected.
ExperimentConfig merge_config_json(const std::string& json_text, ExperimentConfig base = {});

enum class Method { Traditional, Polar };

struct Variant {
  Scheme scheme;
  Method method;

  /// "cn_trad", "cn_polar", "lw_trad" or "lw_polar".
  std::string column() const;
};

inline constexpr std::array<Variant, 4> kVariants{{
    {Scheme::CrankNicolson, Method::Traditional},
    {Scheme::CrankNicolson, Method::Polar},
    {Scheme::LaxWendroff, Method::Traditional},
    {Scheme::LaxWendroff, Method::Polar},
}};

/// Grid, time stepping and the four propagators shared by every run of one
/// configuration.
class ExperimentContext {
 public:
  explicit ExperimentContext(const ExperimentConfig& config);

  const ExperimentConfig& config() const { return config_; }
  const Grid& grid() const { return grid_; }
  const TimeStepping& stepping() const { return stepping_; }
  int steps() const { return steps_; }
  double arrival_time() const { return stepping_.time_at(steps_); }
  /// Node closest to 3pi/2, the velocity minimum (150 at n = 200).
  int peak_row() const;
  /// Quarter, half, three-quarter and final step.
  std::vector<int> snapshot_steps() const;

  /// alpha = 1 for traditional, 1/2 for polar.
  const PropagatorMatrix& propagator(Scheme scheme, Method method) const;

 private:
  ExperimentConfig config_;
  Grid grid_;
  TimeStepping stepping_;
  int steps_;
  PropagatorMatrix cn_m_, cn_u_, lw_m_, lw_u_;
};

struct VariantRun {
  Matrix final_covariance;
  /// trace[k] for k = 0..steps, only when requested.
  std::vector<double> trace;
  std::map<int, Vector> diagonal_snapshots;
};

VariantRun run_variant(const ExperimentContext& ctx, const Variant& variant,
                       const CovarianceMatrix& initial, bool record_trace,
                       std::span<const int> snapshot_steps = {});

// Exact reference curves, independent of the discrete propagators.

/// sigma^2(x_i, t) for a continuous initial covariance.
Vector exact_variance_on_grid(const VarianceProfile& variance, const Grid& grid, double t);
/// P^c(x_i, t) for white-noise initial covariance with diagonal sigma0^2.
Vector exact_cts_spectrum_on_grid(const VarianceProfile& variance, const Grid& grid, double t);
/// Exact diagonal for the kernel: variance for continuous kernels,
/// continuous spectrum for Dirac.
Vector exact_diagonal_on_grid(const CorrelationKernel& kernel, const VarianceProfile& variance,
                              const Grid& grid, double t);
/// m_i m_j sigma0(s_i) sigma0(s_j) C(r(s_i, s_j)); diag(P^c) for Dirac.
Matrix exact_covariance_on_grid(const CorrelationKernel& kernel, const VarianceProfile& variance,
                                const Grid& grid, double t);

struct ErrorMetrics {
  double l2 = 0.0;    // sqrt(dx * sum (num - ex)^2)
  double linf = 0.0;  // max |num - ex|
};

/// Throws std::invalid_argument on a length mismatch.
ErrorMetrics error_metrics(std::span<const double> numeric, std::span<const double> exact, double dx);
ErrorMetrics error_metrics(const Vector& numeric, const Vector& exact, double dx);

struct OutputBundle {
  FigureId figure;
  std::string manifest_json;
  std::vector<CsvTable> tables;

  /// nullptr when absent.
  const CsvTable* find(const std::string& file_name) const;
};

OutputBundle run_figure(FigureId figure, const ExperimentConfig& config);

/// Writes every table plus manifest.json into `dir`, creating it if needed.
/// Throws std::runtime_error when the directory cannot be written.
void write_bundle(const OutputBundle& bundle, const std::filesystem::path& dir);

}  // namespace covprop
