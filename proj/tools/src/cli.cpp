#include "covprop/cli.hpp"

#include "covprop/checks.hpp"
#include "covprop/experiments.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <stdexcept>

namespace covprop {

namespace {

namespace fs = std::filesystem;

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kBadArguments = 2;

struct RunOptions {
  std::string figure;
  std::string config_file;
  int n = 0;
  double lambda = 0.0;
  double final_time = 0.0;
  std::string kernel;
  std::string variance;
  std::string out;
};

std::string default_output_dir() {
  if (const char* env = std::getenv("COVPROP_OUT"); env && *env) return env;
  return "covprop_out";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot read config file " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Creating the directory and a probe file up front turns an unwritable
// destination into an argument error before any computation starts.
bool ensure_writable(const fs::path& dir, std::string& why) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    why = ec ? ec.message() : "not a directory";
    return false;
  }
  const fs::path probe = dir / ".covprop_write_probe";
  {
    std::ofstream f(probe);
    if (!f) {
      why = "permission denied";
      return false;
    }
  }
  fs::remove(probe, ec);
  return true;
}

int run_command(const RunOptions& opt, const CLI::App& run, std::ostream& out, std::ostream& err) {
  ExperimentConfig cfg;
  std::vector<FigureId> figures;
  try {
    if (!opt.config_file.empty()) cfg = merge_config_json(read_file(opt.config_file), cfg);
    if (run.count("--n")) cfg.n = opt.n;
    if (run.count("--lambda")) cfg.lambda = opt.lambda;
    if (run.count("--final-time")) cfg.final_time = opt.final_time;
    if (run.count("--kernel")) cfg.kernel = CorrelationKernel::parse(opt.kernel);
    if (run.count("--variance")) cfg.variance = VarianceProfile::parse(opt.variance);
    if (run.count("--out")) cfg.output_dir = opt.out;
    if (cfg.output_dir.empty()) cfg.output_dir = default_output_dir();
    if (!(cfg.final_time > 0.0)) throw std::invalid_argument("--final-time must be > 0");

    if (opt.figure == "all") {
      figures.assign(all_figures().begin(), all_figures().end());
    } else if (auto f = parse_figure(opt.figure)) {
      figures.push_back(*f);
    } else {
      throw std::invalid_argument("unknown figure '" + opt.figure + "' (see list-figures)");
    }
    // Surface grid and CFL problems as argument errors.
    (void)build_grid(cfg.n);
    (void)timestep_from_cfl(cfg.lambda, build_grid(cfg.n));
  } catch (const std::invalid_argument& e) {
    err << "covprop run: " << e.what() << "\n";
    return kBadArguments;
  }

  const fs::path root(cfg.output_dir);
  std::string why;
  if (!ensure_writable(root, why)) {
    err << "covprop run: output directory " << root.string() << " is not writable: " << why << "\n";
    return kBadArguments;
  }

  try {
    for (FigureId f : figures) {
      const fs::path dir = figures.size() > 1 ? root / std::string(to_string(f)) : root;
      const OutputBundle bundle = run_figure(f, cfg);
      write_bundle(bundle, dir);
      out << to_string(f) << ": " << bundle.tables.size() << " tables -> " << dir.string() << "\n";
    }
  } catch (const std::invalid_argument& e) {
    err << "covprop run: " << e.what() << "\n";
    return kBadArguments;
  } catch (const std::exception& e) {
    err << "covprop run: " << e.what() << "\n";
    return kFailed;
  }
  return kOk;
}

int validate_command(const std::vector<int>& only, std::ostream& out, std::ostream& err) {
  std::vector<int> ids = only.empty() ? acceptance_ids() : only;
  const auto known = acceptance_ids();
  for (int id : ids) {
    if (std::find(known.begin(), known.end(), id) == known.end()) {
      err << "covprop validate: no criterion " << id << "\n";
      return kBadArguments;
    }
  }
  int failed = 0;
  for (int id : ids) {
    const CriterionResult r = run_criterion(id);
    out << format_result(r) << "\n" << std::flush;
    failed += !r.passed;
  }
  out << (failed ? "FAILED " : "OK ") << ids.size() - failed << "/" << ids.size() << " criteria\n";
  return failed ? kFailed : kOk;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Covariance propagation experiments for the 1-D continuity equation", "covprop"};
  app.require_subcommand(1);

  RunOptions run_opt;
  CLI::App* run = app.add_subcommand("run", "Run one figure (or all) and write CSV tables plus manifest.json");
  run->add_option("--figure", run_opt.figure, "Figure id, or 'all'")->required();
  run->add_option("--config", run_opt.config_file, "JSON config file; flags take precedence");
  run->add_option("--n", run_opt.n, "Grid size");
  run->add_option("--lambda", run_opt.lambda, "CFL number in (0, 1]");
  run->add_option("--final-time", run_opt.final_time, "Final time T");
  run->add_option("--kernel", run_opt.kernel, "gc:<c>, foar:<L> or dirac");
  run->add_option("--variance", run_opt.variance, "unit or sin");
  run->add_option("--out", run_opt.out, "Output directory (default $COVPROP_OUT or ./covprop_out)");

  bool verbose = false;
  CLI::App* list = app.add_subcommand("list-figures", "Print the figure ids");
  list->add_flag("-v,--verbose", verbose, "Include a one-line description");

  std::vector<int> only;
  CLI::App* validate = app.add_subcommand("validate", "Run the acceptance invariant suite");
  validate->add_option("--criterion", only, "Run only these criterion ids");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kBadArguments;
  }

  if (run->parsed()) return run_command(run_opt, *run, out, err);
  if (list->parsed()) {
    for (FigureId f : all_figures()) {
      out << to_string(f);
      if (verbose) out << "\t" << describe(f);
      out << "\n";
    }
    return kOk;
  }
  return validate_command(only, out, err);
}

}  // namespace covprop
