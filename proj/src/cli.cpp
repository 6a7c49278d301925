#include "hbl/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "hbl/bands.hpp"
#include "hbl/error.hpp"
#include "hbl/io.hpp"
#include "hbl/simulation.hpp"

namespace hbl::cli {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int parse_threads(const std::string& text) {
  if (text.empty() || text == "auto") return 0;
  try {
    std::size_t used = 0;
    const int n = std::stoi(text, &used);
    if (used != text.size() || n < 1) throw UsageError("");
    return n;
  } catch (const std::exception&) {
    throw UsageError("--threads expects a positive integer or 'auto', got '" + text + "'");
  }
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot open output file " + path);
  return out;
}

struct FitOptions {
  std::string data;
  std::string method;
  double theta = 0.05;
  double s_start = 0.0;
  double s_end = 0.0;
  int resamples = 200;
  Studentization studentize = Studentization::replicate;
  int paths = 100000;
  int grid = 1000;
  std::uint64_t seed = 1;
  std::string out;
  std::string threads = "auto";
};

struct CoverageOptions {
  std::vector<std::string> alphas{"alpha1", "alpha2", "alpha3", "alpha4"};
  std::vector<int> y0{25, 50, 75};
  std::vector<std::string> methods{"HW", "EP", "B1", "B2"};
  int iterations = 10000;
  int resamples = 200;
  Studentization studentize = Studentization::replicate;
  double theta = 0.05;
  double s_start = 0.2;
  double s_end = 0.8;
  double termination_mean = 1.0;
  int bridge_paths = 10000;
  int bridge_cells = 1000;
  std::uint64_t seed = 20240501;
  std::string threads = "auto";
  std::string out;
};

struct BridgeOptions {
  std::string weight = "hw";
  double c1 = 0.0;
  double c2 = 1.0;
  double theta = 0.05;
  int paths = 100000;
  int grid = 1000;
  std::uint64_t seed = 1;
  std::string threads = "auto";
};

// Values from the file fill options that were not given on the command line.
void apply_config(CLI::App& cmd, const std::string& path) {
  for (const auto& item : CLI::ConfigINI().from_file(path)) {
    if (!item.parents.empty()) throw UsageError("config sections are not supported: " + path);
    CLI::Option* opt = nullptr;
    try {
      opt = cmd.get_option("--" + item.name);
    } catch (const CLI::OptionNotFound&) {
      throw UsageError("unknown config key '" + item.name + "' in " + path);
    }
    if (item.name == "config") throw UsageError("config files cannot nest");
    if (opt->count() > 0) continue;
    for (const auto& v : item.inputs) opt->add_result(v);
    opt->run_callback();
  }
}

int fit_bands(const FitOptions& o, const CLI::App& sub, std::ostream& out) {
  BandMethod method{};
  try {
    method = parse_band_method(o.method);
  } catch (const InvalidInput& e) {
    throw UsageError(e.what());
  }
  if (!is_bootstrap(method) && (sub.count("--resamples") > 0 || sub.count("--studentize") > 0)) {
    throw UsageError("--resamples and --studentize apply only to B1 and B2");
  }
  if (is_bootstrap(method) && (sub.count("--paths") > 0 || sub.count("--grid") > 0)) {
    throw UsageError("--paths and --grid apply only to asymptotic bands");
  }
  if (!(o.s_start < o.s_end) || o.s_start < 0.0) throw UsageError("need 0 <= --s-start < --s-end");
  const Execution exec = Execution::omp(parse_threads(o.threads));

  std::vector<SurvivalRecord> records;
  std::optional<ObservedProcess> observed;
  try {
    records = read_survival_csv(o.data);
    observed = build_from_censored_sample(records);
  } catch (const Error& e) {
    throw DataError(o.data + ": " + e.what());
  }
  const auto estimate = nelson_aalen(observed->events, observed->risk);

  BandSpec spec;
  spec.method = method;
  spec.theta = o.theta;
  spec.s = TimeInterval(o.s_start, o.s_end);
  spec.b_resamples = o.resamples;
  spec.studentization = o.studentize;
  spec.bridge_paths = o.paths;
  spec.bridge_grid = o.grid;
  const auto band = build_band(estimate, spec, o.seed, exec);
  const auto exported = make_band_export(band, estimate, o.seed);
  {
    auto file = open_output(o.out);
    write_band_csv(file, exported);
  }

  int censored = 0;
  for (const auto& r : records) censored += r.status == Status::censored ? 1 : 0;
  out << "method " << to_string(method) << ", theta " << format_real(o.theta) << ", S ["
      << format_real(o.s_start) << ", " << format_real(o.s_end) << "], seed " << o.seed << '\n';
  out << "records " << records.size() << " (" << censored << " censored), event times "
      << estimate.jumps.size() << '\n';
  for (const auto& [k, v] : exported.metadata) {
    if (k == "t1" || k == "t2" || k == "t3" || k == "k" || k == "c1" || k == "c2") {
      out << k << " = " << v << '\n';
    }
  }
  out << "wrote " << exported.rows.size() << " rows to " << o.out << '\n';
  return ok;
}

int coverage(const CoverageOptions& o, std::ostream& out) {
  ExperimentConfig config;
  try {
    config.alphas.clear();
    for (const auto& a : o.alphas) config.alphas.push_back(parse_intensity(a));
    config.methods.clear();
    for (const auto& m : o.methods) config.methods.push_back(parse_band_method(m));
    config.y0_values = o.y0;
    config.iterations = o.iterations;
    config.b_resamples = o.resamples;
    config.studentization = o.studentize;
    config.theta = o.theta;
    config.s = TimeInterval(o.s_start, o.s_end);
    config.termination_mean = o.termination_mean;
    config.bridge_paths = o.bridge_paths;
    config.bridge_cells = o.bridge_cells;
    config.master_seed = o.seed;
    config.validate();
  } catch (const InvalidInput& e) {
    throw UsageError(e.what());
  }
  const auto table = coverage_experiment(config, Execution::omp(parse_threads(o.threads)));
  if (o.out.empty()) {
    write_coverage_csv(out, table, config);
  } else {
    auto file = open_output(o.out);
    write_coverage_csv(file, table, config);
    out << "wrote " << table.rows.size() << " cells to " << o.out << " (seed " << o.seed
        << ")\n";
  }
  return ok;
}

int bridge_quantile(const BridgeOptions& o, std::ostream& out) {
  Weight weight{};
  if (o.weight == "hw") {
    weight = Weight::hw;
  } else if (o.weight == "ep") {
    weight = Weight::ep;
  } else {
    throw UsageError("--weight must be hw or ep");
  }
  if (!(o.c1 >= 0.0 && o.c1 <= o.c2 && o.c2 <= 1.0)) {
    throw UsageError("need 0 <= --c1 <= --c2 <= 1");
  }
  if (weight == Weight::ep && (o.c1 <= 0.0 || o.c2 >= 1.0)) {
    throw UsageError("ep weight needs 0 < --c1 and --c2 < 1");
  }
  if (!(o.theta > 0.0 && o.theta < 1.0)) throw UsageError("--theta must lie in (0, 1)");
  if (o.paths < 1000 || o.grid < 100) throw UsageError("need --paths >= 1000 and --grid >= 100");
  const double k = brownian_bridge_sup_quantile(weight, o.c1, o.c2, o.theta, o.paths, o.grid,
                                                o.seed, Execution::omp(parse_threads(o.threads)));
  std::ostringstream line;
  line << std::fixed << std::setprecision(4) << k;
  out << line.str() << '\n';
  return ok;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  const std::map<std::string, Studentization> scales{{"original", Studentization::original},
                                                     {"replicate", Studentization::replicate}};

  CLI::App app{"Simultaneous confidence bands for the integrated hazard", "hbl"};
  app.require_subcommand(1);

  FitOptions fit;
  auto* fit_cmd = app.add_subcommand("fit-bands", "Estimate A and build one band from survival data");
  fit_cmd->add_option("--data", fit.data, "CSV with header time,status")->required();
  fit_cmd->add_option("--method", fit.method, "B1|B2|HW|EP|AHW|AEP|LHW|LEP")->required();
  fit_cmd->add_option("--theta", fit.theta, "1 - nominal coverage");
  fit_cmd->add_option("--s-start", fit.s_start, "start of the band interval S")->required();
  fit_cmd->add_option("--s-end", fit.s_end, "end of the band interval S")->required();
  fit_cmd->add_option("--resamples", fit.resamples, "bootstrap resamples (B1, B2)");
  fit_cmd->add_option("--studentize", fit.studentize, "T* scale: replicate or original")
      ->transform(CLI::CheckedTransformer(scales));
  fit_cmd->add_option("--paths", fit.paths, "bridge paths (asymptotic bands)");
  fit_cmd->add_option("--grid", fit.grid, "bridge grid points (asymptotic bands)");
  fit_cmd->add_option("--seed", fit.seed, "random seed");
  fit_cmd->add_option("--out", fit.out, "band export CSV")->required();
  fit_cmd->add_option("--threads", fit.threads, "worker threads or 'auto'")->envname("HBL_THREADS");

  CoverageOptions cov;
  auto* cov_cmd = app.add_subcommand("coverage", "Monte Carlo coverage of simultaneous bands");
  std::string config_path;
  cov_cmd->add_option("--config", config_path, "flat key=value experiment file")
      ->check(CLI::ExistingFile);
  cov_cmd->add_option("--alphas", cov.alphas, "intensities, e.g. alpha1,alpha4")->delimiter(',');
  cov_cmd->add_option("--y0", cov.y0, "initial numbers at risk")->delimiter(',');
  cov_cmd->add_option("--methods", cov.methods, "band methods")->delimiter(',');
  cov_cmd->add_option("--iterations", cov.iterations, "trials per cell");
  cov_cmd->add_option("--resamples", cov.resamples, "bootstrap resamples per trial");
  cov_cmd->add_option("--studentize", cov.studentize, "T* scale: replicate or original")
      ->transform(CLI::CheckedTransformer(scales));
  cov_cmd->add_option("--theta", cov.theta, "1 - nominal coverage");
  cov_cmd->add_option("--s-start", cov.s_start, "start of S");
  cov_cmd->add_option("--s-end", cov.s_end, "end of S");
  cov_cmd->add_option("--termination-mean", cov.termination_mean, "mean termination time");
  cov_cmd->add_option("--bridge-paths", cov.bridge_paths, "paths in each cell's bridge bank");
  cov_cmd->add_option("--bridge-cells", cov.bridge_cells, "grid cells in the bridge bank");
  cov_cmd->add_option("--seed", cov.seed, "master seed");
  cov_cmd->add_option("--threads", cov.threads, "worker threads or 'auto'")->envname("HBL_THREADS");
  cov_cmd->add_option("--out", cov.out, "coverage CSV (stdout if omitted)");

  BridgeOptions br;
  auto* br_cmd = app.add_subcommand("bridge-quantile", "Upper quantile of sup |q(x) W0(x)|");
  br_cmd->add_option("--weight", br.weight, "hw or ep");
  br_cmd->add_option("--c1", br.c1, "interval start in [0, 1]");
  br_cmd->add_option("--c2", br.c2, "interval end in [0, 1]");
  br_cmd->add_option("--theta", br.theta, "upper tail probability");
  br_cmd->add_option("--paths", br.paths, "simulated paths");
  br_cmd->add_option("--grid", br.grid, "grid points over [c1, c2]");
  br_cmd->add_option("--seed", br.seed, "random seed");
  br_cmd->add_option("--threads", br.threads, "worker threads or 'auto'")->envname("HBL_THREADS");

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? ok : usage_error;
  }

  try {
    if (*fit_cmd) return fit_bands(fit, *fit_cmd, out);
    if (*cov_cmd) {
      if (!config_path.empty()) apply_config(*cov_cmd, config_path);
      return coverage(cov, out);
    }
    return bridge_quantile(br, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return usage_error;
  } catch (const CLI::Error& e) {
    err << "usage error: " << e.what() << '\n';
    return usage_error;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return data_error;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return numerical_error;
  }
}

}  // namespace hbl::cli
