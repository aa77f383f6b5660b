#include "covprop/experiments.hpp"
#include "covprop/flow_exact.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

using namespace covprop;
using nlohmann::json;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig cfg;
  cfg.n = 32;
  cfg.final_time = 1.0;
  return cfg;
}

std::set<std::string> file_names(const OutputBundle& b) {
  std::set<std::string> out;
  for (const auto& t : b.tables) out.insert(t.file_name());
  return out;
}

const std::vector<std::string> kDiag{"x", "exact_variance", "exact_cts_spectrum", "cn_trad", "cn_polar", "lw_trad", "lw_polar"};
const std::vector<std::string> kTrace{"t", "exact", "cn_trad", "cn_polar", "lw_trad", "lw_polar"};
const std::vector<std::string> kSpectrum{"rank", "exact", "cn_trad", "cn_polar", "lw_trad", "lw_polar"};
const std::vector<std::string> kRow{"x", "exact", "cn_trad", "cn_polar", "lw_trad", "lw_polar"};
const std::vector<std::string> kState{"x", "t", "exact", "cn", "lw"};

const std::vector<std::string>& schema_for(const std::string& file) {
  if (file.starts_with("diag_")) return kDiag;
  if (file.starts_with("trace_series")) return kTrace;
  if (file.starts_with("spectrum_")) return kSpectrum;
  if (file.starts_with("row_")) return kRow;
  return kState;
}

std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("covprop_test_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

}  // namespace

TEST(Figures, Registry) {
  EXPECT_EQ(all_figures().size(), 10u);
  for (FigureId f : all_figures()) {
    EXPECT_EQ(parse_figure(to_string(f)), f);
    EXPECT_FALSE(describe(f).empty());
  }
  EXPECT_FALSE(parse_figure("Figure2").has_value());
  EXPECT_FALSE(parse_figure("").has_value());
}

TEST(Context, Defaults) {
  const ExperimentContext ctx(ExperimentConfig{});
  EXPECT_EQ(ctx.steps(), 380);
  EXPECT_NEAR(ctx.arrival_time(), 380 * kTwoPi / 600, 1e-12);
  EXPECT_EQ(ctx.peak_row(), 150);
  EXPECT_EQ(ctx.snapshot_steps(), (std::vector<int>{95, 190, 285, 380}));
  EXPECT_EQ(ctx.propagator(Scheme::CrankNicolson, Method::Polar).alpha, 0.5);
  EXPECT_EQ(ctx.propagator(Scheme::LaxWendroff, Method::Traditional).alpha, 1.0);
}

TEST(Context, RejectsBadConfig) {
  ExperimentConfig cfg;
  cfg.n = 4;
  EXPECT_THROW(ExperimentContext{cfg}, std::invalid_argument);
  cfg = ExperimentConfig{};
  cfg.lambda = 2.0;
  EXPECT_THROW(ExperimentContext{cfg}, std::invalid_argument);
  cfg = ExperimentConfig{};
  cfg.final_time = 0.0;
  EXPECT_THROW(ExperimentContext{cfg}, std::invalid_argument);
}

TEST(Variants, Columns) {
  std::vector<std::string> cols;
  for (const auto& v : kVariants) cols.push_back(v.column());
  EXPECT_EQ(cols, (std::vector<std::string>{"cn_trad", "cn_polar", "lw_trad", "lw_polar"}));
}

TEST(ErrorMetrics, Examples) {
  const Vector a = Vector::LinSpaced(200, 0.0, 1.0);
  const auto zero = error_metrics(a, a, 0.1);
  EXPECT_EQ(zero.l2, 0.0);
  EXPECT_EQ(zero.linf, 0.0);
  const double dx = kTwoPi / 200;
  const auto off = error_metrics(Vector(a.array() + 1.0), a, dx);
  EXPECT_NEAR(off.linf, 1.0, 1e-15);
  EXPECT_NEAR(off.l2, std::sqrt(kTwoPi), 1e-12);
  EXPECT_THROW(error_metrics(a, Vector::Zero(3), dx), std::invalid_argument);
}

TEST(ConfigJson, Merge) {
  const auto cfg = merge_config_json(
      R"({"n": 64, "lambda": 0.5, "final_time": 2.0, "kernel": "foar:0.25", "variance": "sin", "out": "o"})");
  EXPECT_EQ(cfg.n, 64);
  EXPECT_EQ(cfg.lambda, 0.5);
  EXPECT_EQ(cfg.final_time, 2.0);
  EXPECT_EQ(cfg.kernel, CorrelationKernel::foar(0.25));
  EXPECT_EQ(cfg.variance, VarianceProfile::parse("sin"));
  EXPECT_EQ(cfg.output_dir, "o");
  const auto reset = merge_config_json(R"({"kernel": null})", cfg);
  EXPECT_FALSE(reset.kernel.has_value());
  EXPECT_EQ(reset.n, 64);
}

TEST(ConfigJson, Rejects) {
  EXPECT_THROW(merge_config_json(R"({"steps": 3})"), std::invalid_argument);
  EXPECT_THROW(merge_config_json(R"({"n": "big"})"), std::invalid_argument);
  EXPECT_THROW(merge_config_json("[1, 2]"), std::invalid_argument);
  EXPECT_THROW(merge_config_json("{"), std::invalid_argument);
  EXPECT_THROW(merge_config_json(R"({"kernel": "gauss:1"})"), std::invalid_argument);
}

TEST(ExactCurves, Consistency) {
  const Grid g = build_grid(48);
  const VarianceProfile sin(VarianceProfile::Kind::SinusoidalStd);
  const double t = 2.0;
  const Vector s2 = exact_variance_on_grid(sin, g, t);
  const Vector pc = exact_cts_spectrum_on_grid(sin, g, t);
  for (int i = 0; i < g.n; ++i) EXPECT_NEAR(s2[i] / pc[i], mass_ratio(g.node(i), t), 1e-13);
  EXPECT_EQ(exact_diagonal_on_grid(CorrelationKernel::dirac(), sin, g, t), pc);
  EXPECT_EQ(exact_diagonal_on_grid(CorrelationKernel::foar(0.5), sin, g, t), s2);
  const Matrix full = exact_covariance_on_grid(CorrelationKernel::gaspari_cohn(0.25), sin, g, t);
  EXPECT_LE((full.diagonal() - s2).cwiseAbs().maxCoeff(), 1e-13);
  EXPECT_EQ((full - full.transpose()).cwiseAbs().maxCoeff(), 0.0);
  const Matrix dirac = exact_covariance_on_grid(CorrelationKernel::dirac(), sin, g, t);
  EXPECT_EQ(Vector(dirac.diagonal()), pc);
  EXPECT_EQ(dirac.cwiseAbs().sum(), pc.cwiseAbs().sum());
}

class EveryFigure : public ::testing::TestWithParam<FigureId> {};

TEST_P(EveryFigure, SchemasManifestAndDeterminism) {
  const ExperimentConfig cfg = small_config();
  const OutputBundle a = run_figure(GetParam(), cfg);
  const OutputBundle b = run_figure(GetParam(), cfg);
  ASSERT_FALSE(a.tables.empty());
  ASSERT_EQ(a.tables.size(), b.tables.size());
  EXPECT_EQ(a.manifest_json, b.manifest_json);
  for (std::size_t i = 0; i < a.tables.size(); ++i) EXPECT_EQ(a.tables[i].to_string(), b.tables[i].to_string());

  const json m = json::parse(a.manifest_json);
  EXPECT_EQ(m["figure"], std::string(to_string(GetParam())));
  EXPECT_EQ(m["config"]["n"], 32);
  EXPECT_EQ(m["steps"], ExperimentContext(cfg).steps());
  EXPECT_TRUE(m.contains("dt"));
  EXPECT_TRUE(m.contains("arrival_time"));
  EXPECT_TRUE(m.contains("generator"));
  EXPECT_EQ(m["files"].size(), a.tables.size());
  for (const auto& t : a.tables) {
    if (t.file_name() == "regions.csv") {
      EXPECT_EQ(t.columns(), (std::vector<std::string>{"t", "start", "end", "kind"}));
      continue;
    }
    EXPECT_EQ(t.columns(), schema_for(t.file_name())) << t.file_name();
    ASSERT_TRUE(m["metrics"].contains(t.file_name())) << t.file_name();
    for (const auto& [curve, refs] : m["metrics"][t.file_name()].items())
      for (const auto& [ref, e] : refs.items()) {
        EXPECT_TRUE(t.has_column(curve));
        EXPECT_TRUE(t.has_column(ref));
        EXPECT_GE(e["l2"].get<double>(), 0.0);
        EXPECT_GE(e["linf"].get<double>(), 0.0);
      }
    for (const auto& col : t.columns())
      for (double v : t.column(col)) EXPECT_TRUE(std::isfinite(v)) << t.file_name() << ":" << col;
  }
}

INSTANTIATE_TEST_SUITE_P(All, EveryFigure, ::testing::ValuesIn(all_figures().begin(), all_figures().end()),
                         [](const auto& info) { return std::string(to_string(info.param)); });

TEST(FigureFiles, DefaultSweeps) {
  const ExperimentConfig cfg = small_config();
  EXPECT_EQ(file_names(run_figure(FigureId::FullSupportGC, cfg)),
            (std::set<std::string>{"diag_unit.csv", "diag_sin.csv", "spectrum_unit.csv", "spectrum_sin.csv",
                                   "row_unit.csv", "row_sin.csv"}));
  EXPECT_EQ(file_names(run_figure(FigureId::DiagSweepFOAR, cfg)),
            (std::set<std::string>{"diag_unit_foar_0.5.csv", "diag_unit_foar_0.25.csv", "diag_unit_foar_0.03.csv",
                                   "diag_unit_dirac.csv", "diag_sin_foar_0.5.csv", "diag_sin_foar_0.25.csv",
                                   "diag_sin_foar_0.03.csv", "diag_sin_dirac.csv"}));
  EXPECT_EQ(file_names(run_figure(FigureId::StateSolutions, cfg)),
            (std::set<std::string>{"state_unit.csv", "state_sin.csv"}));
  EXPECT_EQ(file_names(run_figure(FigureId::VarianceVsSpectrum, cfg)),
            (std::set<std::string>{"variance_eq_unit.csv", "variance_eq_sin.csv", "cts_spectrum_unit.csv",
                                   "cts_spectrum_sin.csv", "regions.csv"}));
  const auto traces = file_names(run_figure(FigureId::TraceSeries, cfg));
  EXPECT_EQ(traces.size(), 7u);
  EXPECT_TRUE(traces.count("trace_series_gc_0.05.csv"));
  EXPECT_TRUE(traces.count("trace_series_foar_0.03.csv"));
  EXPECT_TRUE(traces.count("trace_series_dirac.csv"));
}

TEST(FigureFiles, OverridesNarrowTheSweep) {
  ExperimentConfig cfg = small_config();
  cfg.kernel = CorrelationKernel::gaspari_cohn(0.05);
  const OutputBundle trace = run_figure(FigureId::TraceSeries, cfg);
  ASSERT_EQ(file_names(trace), (std::set<std::string>{"trace_series.csv"}));
  EXPECT_EQ(trace.tables[0].row_count(), static_cast<std::size_t>(ExperimentContext(cfg).steps() + 1));
  cfg.variance = VarianceProfile::parse("unit");
  EXPECT_EQ(file_names(run_figure(FigureId::DiagSweepGC, cfg)), (std::set<std::string>{"diag_unit_gc_0.05.csv"}));
  const json m = json::parse(run_figure(FigureId::GC025, cfg).manifest_json);
  EXPECT_EQ(m["config"]["kernel"], "gc:0.05");
  EXPECT_EQ(m["config"]["variance"], "unit");
}

TEST(FigureContent, TraceSeriesStartsAtInitialTrace) {
  ExperimentConfig cfg = small_config();
  cfg.kernel = CorrelationKernel::foar(0.25);
  cfg.variance = VarianceProfile::parse("unit");
  const OutputBundle b = run_figure(FigureId::TraceSeries, cfg);
  const auto* t = b.find("trace_series.csv");
  ASSERT_NE(t, nullptr);
  for (const auto& col : {"exact", "cn_trad", "cn_polar", "lw_trad", "lw_polar"})
    EXPECT_NEAR(t->column(col).front(), 32.0, 1e-12) << col;
  EXPECT_EQ(t->column("t").front(), 0.0);
}

TEST(FigureContent, DiracTraceReferenceIsConstant) {
  ExperimentConfig cfg;
  cfg.n = 64;
  cfg.kernel = CorrelationKernel::dirac();
  const auto exact = run_figure(FigureId::TraceSeries, cfg).find("trace_series.csv")->column("exact");
  for (double v : exact) EXPECT_NEAR(v / exact.front(), 1.0, 1e-8);
}

TEST(FigureContent, ZeroLengthUnitPolarOverlapsExact) {
  ExperimentConfig cfg;
  cfg.variance = VarianceProfile::parse("unit");
  const OutputBundle b = run_figure(FigureId::ZeroLength, cfg);
  const auto* t = b.find("diag_unit.csv");
  ASSERT_NE(t, nullptr);
  const auto e = error_metrics(t->column("cn_polar"), t->column("exact_cts_spectrum"), kTwoPi / 200);
  EXPECT_LE(e.linf, 1e-10);
}

TEST(FigureContent, StateSolutionsAccuracy) {
  const OutputBundle b = run_figure(FigureId::StateSolutions, ExperimentConfig{});
  const json m = json::parse(b.manifest_json);
  const auto& unit = m["metrics"]["state_unit.csv"];
  EXPECT_LE(unit["cn"]["exact"]["linf"].get<double>(), 2e-2);
  EXPECT_LE(unit["lw"]["exact"]["linf"].get<double>(), 2e-2);
  // The oscillating initial state carries the dominant phase error; bounds
  // pinned about 10% above the first verified run.
  const auto& sin = m["metrics"]["state_sin.csv"];
  EXPECT_LE(sin["cn"]["exact"]["linf"].get<double>(), 0.16);
  EXPECT_LE(sin["lw"]["exact"]["linf"].get<double>(), 0.12);
  const auto* t = b.find("state_unit.csv");
  EXPECT_EQ(t->row_count(), 4u * 200u);
}

TEST(FigureContent, Gc025TraditionalCloserToContinuousSpectrum) {
  ExperimentConfig cfg;
  cfg.variance = VarianceProfile::parse("sin");
  const json m = json::parse(run_figure(FigureId::GC025, cfg).manifest_json);
  const auto& cn = m["metrics"]["diag_sin.csv"]["cn_trad"];
  EXPECT_GT(cn["exact_variance"]["l2"].get<double>(), cn["exact_cts_spectrum"]["l2"].get<double>());
}

TEST(FigureContent, RegionsMatchVarianceOrdering) {
  ExperimentConfig cfg;
  cfg.n = 100;
  const OutputBundle b = run_figure(FigureId::VarianceVsSpectrum, cfg);
  const auto* regions = b.find("regions.csv");
  ASSERT_NE(regions, nullptr);
  const ExperimentContext ctx(cfg);
  const double t_final = ctx.arrival_time();
  const Grid& g = ctx.grid();
  const VarianceProfile unit;
  const Vector s2 = exact_variance_on_grid(unit, g, t_final);
  const Vector pc = exact_cts_spectrum_on_grid(unit, g, t_final);
  int checked = 0;
  for (std::size_t r = 0; r < regions->row_count(); ++r) {
    const auto& row = regions->row(r);
    if (std::abs(std::stod(row[0]) - t_final) > 1e-12) continue;
    const double start = std::stod(row[1]), end = std::stod(row[2]);
    for (int i = 0; i < g.n; ++i) {
      const double x = g.node(i);
      if (x <= start || x >= end) continue;
      EXPECT_EQ(row[3], s2[i] > pc[i] ? "convergence" : "divergence") << x;
      ++checked;
    }
  }
  EXPECT_GT(checked, g.n - 10);
}

TEST(FigureContent, VarianceTimeSeriesSnapshots) {
  const ExperimentConfig cfg = small_config();
  const ExperimentContext ctx(cfg);
  const auto names = file_names(run_figure(FigureId::VarianceTimeSeries, cfg));
  for (int k : ctx.snapshot_steps()) {
    EXPECT_TRUE(names.count("diag_unit_k" + std::to_string(k) + ".csv")) << k;
    EXPECT_TRUE(names.count("diag_sin_k" + std::to_string(k) + ".csv")) << k;
  }
  EXPECT_TRUE(names.count("regions.csv"));
}

TEST(WriteBundle, WritesFilesAndManifest) {
  const auto dir = scratch_dir("write");
  const OutputBundle b = run_figure(FigureId::StateSolutions, small_config());
  write_bundle(b, dir / "nested");
  for (const auto& t : b.tables) {
    std::ifstream in(dir / "nested" / t.file_name(), std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    EXPECT_EQ(ss.str(), t.to_string());
  }
  EXPECT_TRUE(std::filesystem::exists(dir / "nested" / "manifest.json"));
  std::filesystem::remove_all(dir);
}

TEST(WriteBundle, UnwritableDirectoryThrows) {
  const auto dir = scratch_dir("blocked");
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "file") << "x";
  const OutputBundle b = run_figure(FigureId::StateSolutions, small_config());
  EXPECT_THROW(write_bundle(b, dir / "file" / "sub"), std::runtime_error);
  std::filesystem::remove_all(dir);
}
