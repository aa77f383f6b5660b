#include "covprop/experiments.hpp"

#include "covprop/flow_exact.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <system_error>

#ifndef COVPROP_VERSION
#define COVPROP_VERSION "dev"
#endif
#ifndef COVPROP_GIT_REVISION
#define COVPROP_GIT_REVISION "unknown"
#endif

namespace covprop {

using nlohmann::json;

namespace {

constexpr std::array<FigureId, 10> kFigures{
    FigureId::VarianceVsSpectrum, FigureId::FullSupportGC, FigureId::TraceSeries,
    FigureId::GC025,              FigureId::FOAR025,       FigureId::ZeroLength,
    FigureId::DiagSweepGC,        FigureId::DiagSweepFOAR, FigureId::VarianceTimeSeries,
    FigureId::StateSolutions,
};

const std::vector<std::string> kDiagColumns{"x",       "exact_variance", "exact_cts_spectrum", "cn_trad",
                                            "cn_polar", "lw_trad",        "lw_polar"};
const std::vector<std::string> kTraceColumns{"t", "exact", "cn_trad", "cn_polar", "lw_trad", "lw_polar"};
const std::vector<std::string> kSpectrumColumns{"rank", "exact", "cn_trad", "cn_polar", "lw_trad", "lw_polar"};
const std::vector<std::string> kRowColumns{"x", "exact", "cn_trad", "cn_polar", "lw_trad", "lw_polar"};
const std::vector<std::string> kStateColumns{"x", "t", "exact", "cn", "lw"};
const std::vector<std::string> kRegionColumns{"t", "start", "end", "kind"};

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

json config_to_json(const ExperimentConfig& cfg) {
  json j;
  j["n"] = cfg.n;
  j["lambda"] = cfg.lambda;
  j["final_time"] = cfg.final_time;
  j["kernel"] = cfg.kernel ? json(cfg.kernel->spec()) : json(nullptr);
  j["variance"] = cfg.variance ? json(cfg.variance->name()) : json(nullptr);
  return j;
}

std::vector<CorrelationKernel> kernels_or(const ExperimentConfig& cfg, std::vector<CorrelationKernel> fallback) {
  if (cfg.kernel) return {*cfg.kernel};
  return fallback;
}

std::vector<VarianceProfile> variances_or(const ExperimentConfig& cfg, std::vector<VarianceProfile> fallback) {
  if (cfg.variance) return {*cfg.variance};
  return fallback;
}

const VarianceProfile kUnit{VarianceProfile::Kind::Unit};
const VarianceProfile kSin{VarianceProfile::Kind::SinusoidalStd};

std::vector<CorrelationKernel> gc_sweep() {
  return {CorrelationKernel::gaspari_cohn(1.0), CorrelationKernel::gaspari_cohn(0.25),
          CorrelationKernel::gaspari_cohn(0.05), CorrelationKernel::dirac()};
}

std::vector<CorrelationKernel> foar_sweep() {
  return {CorrelationKernel::foar(0.5), CorrelationKernel::foar(0.25), CorrelationKernel::foar(0.03),
          CorrelationKernel::dirac()};
}

// Accumulates tables and their error metrics for one figure.
class BundleBuilder {
 public:
  BundleBuilder(FigureId figure, const ExperimentContext& ctx) : figure_(figure), ctx_(ctx) {}

  // metrics[file][curve][reference] = {l2, linf}
  void add(CsvTable table, const std::vector<std::pair<std::string, std::string>>& comparisons, double spacing) {
    json& entry = metrics_[table.file_name()];
    entry = json::object();
    for (const auto& [curve, reference] : comparisons) {
      const auto num = table.column(curve);
      const auto ex = table.column(reference);
      const ErrorMetrics e = error_metrics(num, ex, spacing);
      entry[curve][reference] = {{"l2", e.l2}, {"linf", e.linf}};
    }
    tables_.push_back(std::move(table));
  }

  void add_plain(CsvTable table) { tables_.push_back(std::move(table)); }

  void note(const std::string& key, json value) { extra_[key] = std::move(value); }

  OutputBundle finish() && {
    json m;
    m["figure"] = std::string(to_string(figure_));
    m["description"] = std::string(describe(figure_));
    m["generator"] = {{"name", "covprop"}, {"version", COVPROP_VERSION}, {"revision", COVPROP_GIT_REVISION}};
    const json cfg = config_to_json(ctx_.config());
    m["config"] = cfg;
    char digest[17];
    std::snprintf(digest, sizeof digest, "%016llx", static_cast<unsigned long long>(fnv1a(cfg.dump())));
    m["config_digest"] = digest;
    m["dx"] = ctx_.grid().dx;
    m["dt"] = ctx_.stepping().dt;
    m["steps"] = ctx_.steps();
    m["arrival_time"] = ctx_.arrival_time();
    m["peak_row"] = ctx_.peak_row();
    m["snapshot_steps"] = ctx_.snapshot_steps();
    json files = json::array();
    for (const auto& t : tables_) files.push_back(t.file_name());
    m["files"] = files;
    m["metrics"] = metrics_;
    for (auto& [k, v] : extra_.items()) m[k] = v;

    OutputBundle out{figure_, m.dump(2) + "\n", std::move(tables_)};
    return out;
  }

 private:
  FigureId figure_;
  const ExperimentContext& ctx_;
  std::vector<CsvTable> tables_;
  json metrics_ = json::object();
  json extra_ = json::object();
};

std::vector<std::pair<std::string, std::string>> against(const std::string& reference,
                                                         const std::vector<std::string>& curves) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& c : curves) out.emplace_back(c, reference);
  return out;
}

const std::vector<std::string> kVariantColumns{"cn_trad", "cn_polar", "lw_trad", "lw_polar"};

CsvTable diag_table(const std::string& name, const ExperimentContext& ctx, const VarianceProfile& var,
                    double t, const std::array<Vector, 4>& diags) {
  const Grid& g = ctx.grid();
  const Vector sigma2 = exact_variance_on_grid(var, g, t);
  const Vector pc = exact_cts_spectrum_on_grid(var, g, t);
  CsvTable table(name, kDiagColumns);
  for (int i = 0; i < g.n; ++i)
    table.add_row({g.node(i), sigma2[i], pc[i], diags[0][i], diags[1][i], diags[2][i], diags[3][i]});
  return table;
}

std::vector<std::pair<std::string, std::string>> diag_comparisons() {
  auto a = against("exact_variance", kVariantColumns);
  auto b = against("exact_cts_spectrum", kVariantColumns);
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

std::array<VariantRun, 4> run_all_variants(const ExperimentContext& ctx, const CovarianceMatrix& p0,
                                           bool record_trace, std::span<const int> snapshots = {}) {
  std::array<VariantRun, 4> runs;
  for (std::size_t v = 0; v < kVariants.size(); ++v)
    runs[v] = run_variant(ctx, kVariants[v], p0, record_trace, snapshots);
  return runs;
}

// Spectrum, diagonal and peak-row correlation panels at the final time.
void add_final_time_panels(BundleBuilder& b, const ExperimentContext& ctx, const CorrelationKernel& kernel,
                           const VarianceProfile& var, const std::string& suffix) {
  const Grid& g = ctx.grid();
  const double t = ctx.arrival_time();
  const CovarianceMatrix p0 = build_initial_covariance(kernel, var, g);
  const auto runs = run_all_variants(ctx, p0, false);

  std::array<Vector, 4> diags;
  for (int v = 0; v < 4; ++v) diags[v] = diagonal(runs[v].final_covariance);
  b.add(diag_table("diag_" + suffix + ".csv", ctx, var, t, diags), diag_comparisons(), g.dx);

  const Matrix exact = exact_covariance_on_grid(kernel, var, g, t);
  const Vector exact_spec = normalized_spectrum(exact).normalized;
  std::array<Vector, 4> specs;
  for (int v = 0; v < 4; ++v) specs[v] = normalized_spectrum(runs[v].final_covariance).normalized;
  CsvTable spectrum("spectrum_" + suffix + ".csv", kSpectrumColumns);
  for (int k = 0; k < g.n; ++k)
    spectrum.add_row({static_cast<double>(k + 1), exact_spec[k], specs[0][k], specs[1][k], specs[2][k], specs[3][k]});
  b.add(std::move(spectrum), against("exact", kVariantColumns), 1.0);

  const int row = ctx.peak_row();
  const Vector exact_row = correlation_row(exact, row);
  std::array<Vector, 4> rows;
  for (int v = 0; v < 4; ++v) rows[v] = correlation_row(runs[v].final_covariance, row);
  CsvTable corr("row_" + suffix + ".csv", kRowColumns);
  for (int i = 0; i < g.n; ++i)
    corr.add_row({g.node(i), exact_row[i], rows[0][i], rows[1][i], rows[2][i], rows[3][i]});
  b.add(std::move(corr), against("exact", kVariantColumns), g.dx);
}

void add_trace_panel(BundleBuilder& b, const ExperimentContext& ctx, const CorrelationKernel& kernel,
                     const VarianceProfile& var, const std::string& name) {
  const Grid& g = ctx.grid();
  const CovarianceMatrix p0 = build_initial_covariance(kernel, var, g);
  const auto runs = run_all_variants(ctx, p0, true);
  CsvTable table(name, kTraceColumns);
  for (int k = 0; k <= ctx.steps(); ++k) {
    const double t = ctx.stepping().time_at(k);
    const double exact = exact_diagonal_on_grid(kernel, var, g, t).sum();
    table.add_row({t, exact, runs[0].trace[k], runs[1].trace[k], runs[2].trace[k], runs[3].trace[k]});
  }
  b.add(std::move(table), against("exact", kVariantColumns), ctx.stepping().dt);
}

// CN and LW solutions of a scalar equation with weight alpha, stacked over the
// snapshot times.
void add_state_table(BundleBuilder& b, const ExperimentContext& ctx, const std::string& name, double alpha,
                     const ExactProfile& profile) {
  const Grid& g = ctx.grid();
  const auto steps = ctx.snapshot_steps();
  const PropagatorMatrix cn = build_propagator(Scheme::CrankNicolson, alpha, g, ctx.stepping());
  const PropagatorMatrix lw = build_propagator(Scheme::LaxWendroff, alpha, g, ctx.stepping());
  Vector q_cn(g.n);
  for (int i = 0; i < g.n; ++i) q_cn[i] = profile.initial(g.node(i));
  Vector q_lw = q_cn;

  CsvTable table(name, kStateColumns);
  int done = 0;
  for (int k : steps) {
    q_cn = propagate_state(cn, q_cn, k - done);
    q_lw = propagate_state(lw, q_lw, k - done);
    done = k;
    const double t = ctx.stepping().time_at(k);
    for (int i = 0; i < g.n; ++i)
      table.add_row({g.node(i), t, exact_weighted_solution(profile, g.node(i), t), q_cn[i], q_lw[i]});
  }
  b.add(std::move(table), against("exact", {"cn", "lw"}), g.dx);
}

void add_regions_table(BundleBuilder& b, const ExperimentContext& ctx) {
  CsvTable table("regions.csv", kRegionColumns);
  for (int k : ctx.snapshot_steps()) {
    const double t = ctx.stepping().time_at(k);
    const ConvergenceBoundaries cb = convergence_boundaries(t, ctx.grid().n);
    const std::string ts = format_real(t);
    if (cb.everywhere_neutral || cb.roots.empty()) {
      const char* kind = cb.everywhere_neutral ? "neutral" : (mass_ratio(0.0, t) > 1.0 ? "convergence" : "divergence");
      table.add_text_row({ts, format_real(0.0), format_real(kTwoPi), kind});
      continue;
    }
    const auto& r = cb.roots;
    auto kind_at = [t](double x) { return mass_ratio(x, t) > 1.0 ? "convergence" : "divergence"; };
    // Arc before the first root joins the one after the last root across 0.
    const char* wrap_kind = kind_at(0.5 * (r.back() + r.front() + kTwoPi));
    if (r.front() > 0.0) table.add_text_row({ts, format_real(0.0), format_real(r.front()), wrap_kind});
    for (std::size_t i = 0; i + 1 < r.size(); ++i)
      table.add_text_row({ts, format_real(r[i]), format_real(r[i + 1]), kind_at(0.5 * (r[i] + r[i + 1]))});
    table.add_text_row({ts, format_real(r.back()), format_real(kTwoPi), wrap_kind});
  }
  b.add_plain(std::move(table));
}

json kernel_list(const std::vector<CorrelationKernel>& ks) {
  json j = json::array();
  for (const auto& k : ks) j.push_back(k.spec());
  return j;
}

json variance_list(const std::vector<VarianceProfile>& vs) {
  json j = json::array();
  for (const auto& v : vs) j.push_back(v.name());
  return j;
}

void run_final_time_figure(BundleBuilder& b, const ExperimentContext& ctx, CorrelationKernel fallback) {
  const auto kernel = ctx.config().kernel.value_or(fallback);
  const auto vars = variances_or(ctx.config(), {kUnit, kSin});
  for (const auto& var : vars) add_final_time_panels(b, ctx, kernel, var, var.name());
  b.note("kernels", kernel_list({kernel}));
  b.note("variances", variance_list(vars));
}

void run_diag_sweep(BundleBuilder& b, const ExperimentContext& ctx, std::vector<CorrelationKernel> sweep) {
  const auto kernels = kernels_or(ctx.config(), std::move(sweep));
  const auto vars = variances_or(ctx.config(), {kUnit, kSin});
  const Grid& g = ctx.grid();
  for (const auto& var : vars) {
    for (const auto& kernel : kernels) {
      const CovarianceMatrix p0 = build_initial_covariance(kernel, var, g);
      const auto runs = run_all_variants(ctx, p0, false);
      std::array<Vector, 4> diags;
      for (int v = 0; v < 4; ++v) diags[v] = diagonal(runs[v].final_covariance);
      b.add(diag_table("diag_" + var.name() + "_" + kernel.tag() + ".csv", ctx, var, ctx.arrival_time(), diags),
            diag_comparisons(), g.dx);
    }
  }
  b.note("kernels", kernel_list(kernels));
  b.note("variances", variance_list(vars));
}

}  // namespace

std::span<const FigureId> all_figures() { return kFigures; }

std::string_view to_string(FigureId figure) {
  switch (figure) {
    case FigureId::VarianceVsSpectrum: return "VarianceVsSpectrum";
    case FigureId::FullSupportGC: return "FullSupportGC";
    case FigureId::TraceSeries: return "TraceSeries";
    case FigureId::GC025: return "GC025";
    case FigureId::FOAR025: return "FOAR025";
    case FigureId::ZeroLength: return "ZeroLength";
    case FigureId::DiagSweepGC: return "DiagSweepGC";
    case FigureId::DiagSweepFOAR: return "DiagSweepFOAR";
    case FigureId::VarianceTimeSeries: return "VarianceTimeSeries";
    case FigureId::StateSolutions: return "StateSolutions";
  }
  return "?";
}

std::optional<FigureId> parse_figure(std::string_view text) {
  for (FigureId f : kFigures)
    if (to_string(f) == text) return f;
  return std::nullopt;
}

std::string_view describe(FigureId figure) {
  switch (figure) {
    case FigureId::VarianceVsSpectrum:
      return "variance and continuous-spectrum equations solved directly, exact vs CN/LW";
    case FigureId::FullSupportGC: return "final-time spectrum, diagonal and row 150 for GC c=1";
    case FigureId::TraceSeries: return "trace time series for GC and FOAR length scales down to zero";
    case FigureId::GC025: return "final-time spectrum, diagonal and row 150 for GC c=0.25";
    case FigureId::FOAR025: return "final-time spectrum, diagonal and row 150 for FOAR L=0.25";
    case FigureId::ZeroLength: return "final-time spectrum, diagonal and row 150 for zero correlation length";
    case FigureId::DiagSweepGC: return "final-time diagonals for GC c in {1, 0.25, 0.05, 0}";
    case FigureId::DiagSweepFOAR: return "final-time diagonals for FOAR L in {0.5, 0.25, 0.03, 0}";
    case FigureId::VarianceTimeSeries: return "diagonal snapshots for GC c=0.05 with convergence regions";
    case FigureId::StateSolutions: return "state propagation for q0=1 and q0=sin(3x)/3+1";
  }
  return "";
}

ExperimentConfig merge_config_json(const std::string& json_text, ExperimentConfig base) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("config: top level must be an object");
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "n") {
        base.n = value.get<int>();
      } else if (key == "lambda") {
        base.lambda = value.get<double>();
      } else if (key == "final_time") {
        base.final_time = value.get<double>();
      } else if (key == "kernel") {
        if (value.is_null()) base.kernel.reset();
        else base.kernel = CorrelationKernel::parse(value.get<std::string>());
      } else if (key == "variance") {
        if (value.is_null()) base.variance.reset();
        else base.variance = VarianceProfile::parse(value.get<std::string>());
      } else if (key == "out") {
        base.output_dir = value.get<std::string>();
      } else {
        throw std::invalid_argument("config: unknown key '" + key + "'");
      }
    }
  } catch (const json::type_error& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  return base;
}

std::string Variant::column() const {
  std::string s = scheme == Scheme::CrankNicolson ? "cn_" : "lw_";
  return s + (method == Method::Traditional ? "trad" : "polar");
}

ExperimentContext::ExperimentContext(const ExperimentConfig& config)
    : config_(config),
      grid_(build_grid(config.n)),
      stepping_(timestep_from_cfl(config.lambda, grid_)),
      steps_(stepping_.steps_to(config.final_time)),
      cn_m_(build_propagator(Scheme::CrankNicolson, 1.0, grid_, stepping_)),
      cn_u_(build_propagator(Scheme::CrankNicolson, 0.5, grid_, stepping_)),
      lw_m_(build_propagator(Scheme::LaxWendroff, 1.0, grid_, stepping_)),
      lw_u_(build_propagator(Scheme::LaxWendroff, 0.5, grid_, stepping_)) {
  if (steps_ < 1) throw std::invalid_argument("final time is shorter than half a time step");
}

int ExperimentContext::peak_row() const { return grid_.nearest_index(1.5 * kPi); }

std::vector<int> ExperimentContext::snapshot_steps() const {
  std::vector<int> out;
  for (int q = 1; q <= 4; ++q) {
    const int k = static_cast<int>(std::lround(q * steps_ / 4.0));
    if (k > 0 && (out.empty() || out.back() != k)) out.push_back(k);
  }
  return out;
}

const PropagatorMatrix& ExperimentContext::propagator(Scheme scheme, Method method) const {
  if (scheme == Scheme::CrankNicolson) return method == Method::Traditional ? cn_m_ : cn_u_;
  return method == Method::Traditional ? lw_m_ : lw_u_;
}

VariantRun run_variant(const ExperimentContext& ctx, const Variant& variant, const CovarianceMatrix& initial,
                       bool record_trace, std::span<const int> snapshot_steps) {
  VariantRun out;
  if (record_trace) {
    out.trace.reserve(ctx.steps() + 1);
    out.trace.push_back(trace(initial.entries));
  }
  auto observer = [&](int k, const Matrix& p) {
    if (record_trace) out.trace.push_back(trace(p));
    if (std::find(snapshot_steps.begin(), snapshot_steps.end(), k) != snapshot_steps.end())
      out.diagonal_snapshots[k] = diagonal(p);
  };
  const bool observe = record_trace || !snapshot_steps.empty();
  const PropagatorMatrix& prop = ctx.propagator(variant.scheme, variant.method);
  CovarianceMatrix result =
      variant.method == Method::Traditional
          ? propagate_traditional(initial, prop, ctx.steps(), observe ? StepObserver(observer) : StepObserver())
          : propagate_polar(initial, prop, ctx.grid(), ctx.steps(), ctx.stepping(),
                            observe ? StepObserver(observer) : StepObserver());
  out.final_covariance = std::move(result.entries);
  return out;
}

Vector exact_variance_on_grid(const VarianceProfile& variance, const Grid& grid, double t) {
  const ExactProfile profile = ExactProfile::variance([variance](double x) { return variance.variance(x); });
  Vector out(grid.n);
  for (int i = 0; i < grid.n; ++i) out[i] = exact_weighted_solution(profile, grid.node(i), t);
  return out;
}

Vector exact_cts_spectrum_on_grid(const VarianceProfile& variance, const Grid& grid, double t) {
  const ExactProfile profile =
      ExactProfile::continuous_spectrum([variance](double x) { return variance.variance(x); });
  Vector out(grid.n);
  for (int i = 0; i < grid.n; ++i) out[i] = exact_weighted_solution(profile, grid.node(i), t);
  return out;
}

Vector exact_diagonal_on_grid(const CorrelationKernel& kernel, const VarianceProfile& variance, const Grid& grid,
                              double t) {
  return kernel.is_dirac() ? exact_cts_spectrum_on_grid(variance, grid, t)
                           : exact_variance_on_grid(variance, grid, t);
}

Matrix exact_covariance_on_grid(const CorrelationKernel& kernel, const VarianceProfile& variance, const Grid& grid,
                                double t) {
  const int n = grid.n;
  if (kernel.is_dirac()) return exact_cts_spectrum_on_grid(variance, grid, t).asDiagonal();
  Vector s(n), weight(n);
  for (int i = 0; i < n; ++i) {
    s[i] = departure_point(grid.node(i), t);
    weight[i] = mass_ratio(grid.node(i), t) * variance.stddev(s[i]);
  }
  Matrix out(n, n);
  for (int i = 0; i < n; ++i) {
    out(i, i) = weight[i] * weight[i];
    for (int j = i + 1; j < n; ++j) {
      const double value = weight[i] * kernel(chordal_distance(s[i], s[j])) * weight[j];
      out(i, j) = value;
      out(j, i) = value;
    }
  }
  return out;
}

ErrorMetrics error_metrics(std::span<const double> numeric, std::span<const double> exact, double dx) {
  if (numeric.size() != exact.size()) throw std::invalid_argument("error_metrics: length mismatch");
  double sum = 0.0, worst = 0.0;
  for (std::size_t i = 0; i < numeric.size(); ++i) {
    const double e = numeric[i] - exact[i];
    sum += e * e;
    worst = std::max(worst, std::abs(e));
  }
  return {std::sqrt(dx * sum), worst};
}

ErrorMetrics error_metrics(const Vector& numeric, const Vector& exact, double dx) {
  return error_metrics(std::span<const double>(numeric.data(), static_cast<std::size_t>(numeric.size())),
                       std::span<const double>(exact.data(), static_cast<std::size_t>(exact.size())), dx);
}

const CsvTable* OutputBundle::find(const std::string& file_name) const {
  for (const auto& t : tables)
    if (t.file_name() == file_name) return &t;
  return nullptr;
}

OutputBundle run_figure(FigureId figure, const ExperimentConfig& config) {
  const ExperimentContext ctx(config);
  BundleBuilder b(figure, ctx);
  const Grid& g = ctx.grid();

  switch (figure) {
    case FigureId::VarianceVsSpectrum: {
      const auto vars = variances_or(config, {kUnit, kSin});
      for (const auto& var : vars) {
        auto sq = [var](double x) { return var.variance(x); };
        add_state_table(b, ctx, "variance_eq_" + var.name() + ".csv", 2.0, ExactProfile::variance(sq));
        add_state_table(b, ctx, "cts_spectrum_" + var.name() + ".csv", 1.0, ExactProfile::continuous_spectrum(sq));
      }
      add_regions_table(b, ctx);
      b.note("variances", variance_list(vars));
      break;
    }
    case FigureId::FullSupportGC: run_final_time_figure(b, ctx, CorrelationKernel::gaspari_cohn(1.0)); break;
    case FigureId::GC025: run_final_time_figure(b, ctx, CorrelationKernel::gaspari_cohn(0.25)); break;
    case FigureId::FOAR025: run_final_time_figure(b, ctx, CorrelationKernel::foar(0.25)); break;
    case FigureId::ZeroLength: run_final_time_figure(b, ctx, CorrelationKernel::dirac()); break;
    case FigureId::TraceSeries: {
      const auto var = config.variance.value_or(kSin);
      if (config.kernel) {
        add_trace_panel(b, ctx, *config.kernel, var, "trace_series.csv");
        b.note("kernels", kernel_list({*config.kernel}));
      } else {
        // GC and FOAR sweeps share the zero-length panel.
        std::vector<CorrelationKernel> kernels = gc_sweep();
        kernels.pop_back();
        for (const auto& k : foar_sweep()) kernels.push_back(k);
        for (const auto& k : kernels) add_trace_panel(b, ctx, k, var, "trace_series_" + k.tag() + ".csv");
        b.note("kernels", kernel_list(kernels));
      }
      b.note("variances", variance_list({var}));
      break;
    }
    case FigureId::DiagSweepGC: run_diag_sweep(b, ctx, gc_sweep()); break;
    case FigureId::DiagSweepFOAR: run_diag_sweep(b, ctx, foar_sweep()); break;
    case FigureId::VarianceTimeSeries: {
      const auto kernel = config.kernel.value_or(CorrelationKernel::gaspari_cohn(0.05));
      const auto vars = variances_or(config, {kUnit, kSin});
      const auto steps = ctx.snapshot_steps();
      for (const auto& var : vars) {
        const CovarianceMatrix p0 = build_initial_covariance(kernel, var, g);
        const auto runs = run_all_variants(ctx, p0, false, steps);
        for (int k : steps) {
          std::array<Vector, 4> diags;
          for (int v = 0; v < 4; ++v) diags[v] = runs[v].diagonal_snapshots.at(k);
          b.add(diag_table("diag_" + var.name() + "_k" + std::to_string(k) + ".csv", ctx, var,
                           ctx.stepping().time_at(k), diags),
                diag_comparisons(), g.dx);
        }
        auto sq = [var](double x) { return var.variance(x); };
        add_state_table(b, ctx, "variance_eq_" + var.name() + ".csv", 2.0, ExactProfile::variance(sq));
      }
      add_regions_table(b, ctx);
      b.note("kernels", kernel_list({kernel}));
      b.note("variances", variance_list(vars));
      break;
    }
    case FigureId::StateSolutions: {
      const auto vars = variances_or(config, {kUnit, kSin});
      for (const auto& var : vars)
        add_state_table(b, ctx, "state_" + var.name() + ".csv", 1.0,
                        ExactProfile::state([var](double x) { return var.stddev(x); }));
      b.note("initial_states", variance_list(vars));
      break;
    }
  }
  return std::move(b).finish();
}

void write_bundle(const OutputBundle& bundle, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir))
    throw std::runtime_error("cannot create output directory " + dir.string() + ": " + ec.message());
  for (const auto& table : bundle.tables) table.write(dir / table.file_name());
  std::ofstream manifest(dir / "manifest.json", std::ios::binary | std::ios::trunc);
  if (!manifest) throw std::runtime_error("cannot write " + (dir / "manifest.json").string());
  manifest << bundle.manifest_json;
  if (!manifest) throw std::runtime_error("failed writing manifest in " + dir.string());
}

}  // namespace covprop
