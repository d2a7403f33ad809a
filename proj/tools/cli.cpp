#include "cli.hpp"

#include <CLI11.hpp>
#include <openssl/evp.h>

#include <chrono>
#include <ctime>
#include <iomanip>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "softecm/dataset_io.hpp"
#include "softecm/datasets.hpp"
#include "softecm/ecm.hpp"
#include "softecm/errors.hpp"
#include "softecm/evaluation.hpp"
#include "softecm/report.hpp"
#include "softecm/soft_ecm.hpp"

namespace softecm::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 computation failed");
  }
  std::ostringstream hex;
  for (unsigned int k = 0; k < len; ++k) hex << std::hex << std::setw(2) << std::setfill('0') << int{digest[k]};
  return hex.str();
}

std::string sha256_file(const fs::path& path) { return sha256_hex(read_text(path)); }

bool verify_manifest(const fs::path& manifest, std::string* problem) {
  auto fail = [&](const std::string& why) {
    if (problem) *problem = why;
    return false;
  };
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_text(manifest));
  } catch (const std::exception& e) {
    return fail(std::string("unreadable manifest: ") + e.what());
  }
  if (!j.contains("inputs") || !j["inputs"].is_array()) return fail("manifest has no inputs list");
  for (const auto& input : j["inputs"]) {
    const std::string path = input.value("path", "");
    const std::string stored = input.value("sha256", "");
    std::string actual;
    try {
      actual = sha256_file(path);
    } catch (const std::exception& e) {
      return fail("cannot read input " + path);
    }
    if (actual != stored) return fail("digest mismatch for " + path);
  }
  return true;
}

namespace {

// Raised for bad flags or inputs that the user can fix; maps to exit 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string timestamp_utc() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw UsageError("bad grid value '" + item + "'");
    }
    if (used != item.size()) throw UsageError("bad grid value '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw UsageError("empty grid");
  return out;
}

struct DataOptions {
  std::string path;
  std::string format = "auto";
  std::string label_column = "auto";
  std::string labels_path;
  std::string schema_path;
  bool zscore = false;
};

void add_data_options(CLI::App* cmd, DataOptions& d) {
  cmd->add_option("--data", d.path, "Input dataset (CSV or JSON lines)")->required()->check(CLI::ExistingFile);
  cmd->add_option("--format", d.format, "auto, numeric, categorical or timeseries")
      ->check(CLI::IsMember({"auto", "numeric", "categorical", "timeseries"}));
  cmd->add_option("--label-column", d.label_column,
                  "Label column in CSV input: auto (header 'label'), none, last, a name or a 1-based index");
  cmd->add_option("--labels", d.labels_path, "Separate label file, one integer per line")->check(CLI::ExistingFile);
  cmd->add_option("--schema", d.schema_path, "Categorical schema JSON (inferred when absent)")
      ->check(CLI::ExistingFile);
  cmd->add_flag("--zscore", d.zscore, "Z-score numeric columns before clustering");
}

Dataset load_raw(const DataOptions& o) {
  CsvOptions csv;
  csv.label_column = o.label_column;
  const fs::path path = o.path;
  std::string format = o.format;
  if (format == "auto") {
    const auto ext = path.extension().string();
    if (ext == ".jsonl" || ext == ".json" || ext == ".ndjson") {
      format = "timeseries";
    } else if (!o.schema_path.empty()) {
      format = "categorical";
    } else {
      // Numeric unless a body cell refuses to parse as a number.
      try {
        return load_numeric_csv(path, csv);
      } catch (const DataFormatError& e) {
        if (std::string(e.what()).find("non-numeric") == std::string::npos) throw;
      }
      format = "categorical";
    }
  }
  if (format == "numeric") return load_numeric_csv(path, csv);
  if (format == "categorical") {
    std::optional<CategoricalSchema> schema;
    if (!o.schema_path.empty()) schema = CategoricalSchema::from_json(nlohmann::json::parse(read_text(o.schema_path)));
    return load_categorical_csv(path, csv, schema);
  }
  return load_timeseries(path, csv);
}

Dataset load_data(const DataOptions& o) {
  Dataset d = load_raw(o);
  if (o.zscore) {
    if (d.kind != DataKind::Numeric) throw UsageError("--zscore applies to numeric data only");
    d.standardize();
  }
  if (!o.labels_path.empty()) d.labels = load_labels(o.labels_path);
  try {
    d.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return d;
}

SemiMetric default_metric(DataKind kind) {
  switch (kind) {
    case DataKind::Categorical:
      return SemiMetric::onehot_hamming();
    case DataKind::TimeSeries:
      return SemiMetric::soft_dtw();
    case DataKind::Numeric:
      break;
  }
  return SemiMetric::sq_euclidean();
}

struct ModelOptions {
  int clusters = 2;
  double alpha = 1.0;
  double beta = 2.0;
  double delta = 10.0;
  double lambda = 1.0;
  double rho = 0.05;
  double epsilon = 1e-3;
  double xi = 1e-4;
  int max_card = 2;
  bool include_omega = false;
  std::string metric;
  double gamma = std::numeric_limits<double>::quiet_NaN();
  int max_outer = 100;
  int max_inner = 200;
  std::uint64_t seed = 0;
  int prototype_length = 0;
  int threads = 0;
};

void add_model_options(CLI::App* cmd, ModelOptions& m, bool with_lambda_beta) {
  cmd->add_option("--clusters,-c", m.clusters, "Number of clusters c")->capture_default_str();
  cmd->add_option("--alpha", m.alpha, "Cardinality penalty exponent")->capture_default_str();
  if (with_lambda_beta) {
    cmd->add_option("--beta", m.beta, "Mass exponent (> 1)")->capture_default_str();
    cmd->add_option("--lambda", m.lambda, "Weight of the meta-prototype consistency penalty")->capture_default_str();
  }
  cmd->add_option("--delta", m.delta, "Outlier distance; the empty set costs delta^2")->capture_default_str();
  cmd->add_option("--rho", m.rho, "Gradient step size")->capture_default_str();
  cmd->add_option("--epsilon", m.epsilon, "Outer stop: Frobenius change of the mass matrix")->capture_default_str();
  cmd->add_option("--xi", m.xi, "Inner stop: Frobenius change of the prototypes")->capture_default_str();
  cmd->add_option("--max-card", m.max_card, "Largest meta-cluster cardinality")->capture_default_str();
  cmd->add_flag("--include-omega", m.include_omega, "Also model the whole frame when max-card < c");
  cmd->add_option("--metric", m.metric,
                  "euclidean, hamming, softdtw or softdtw:<gamma> (default from the data kind)");
  cmd->add_option("--gamma", m.gamma, "Soft-DTW smoothing (overrides the metric's gamma)");
  cmd->add_option("--max-outer", m.max_outer, "Outer iteration cap")->capture_default_str();
  cmd->add_option("--max-inner", m.max_inner, "Gradient steps per prototype update")->capture_default_str();
  cmd->add_option("--seed", m.seed, "Random seed for initialization")->capture_default_str();
  cmd->add_option("--prototype-length", m.prototype_length,
                  "Soft-DTW prototype frames (0 = longest series)")
      ->capture_default_str();
  cmd->add_option("--threads", m.threads, "Worker threads (0 = SOFTECM_THREADS or hardware)")->capture_default_str();
}

SoftEcmConfig soft_config(const ModelOptions& m, const Dataset& data) {
  SoftEcmConfig cfg;
  cfg.clusters = m.clusters;
  cfg.alpha = m.alpha;
  cfg.beta = m.beta;
  cfg.delta = m.delta;
  cfg.lambda = m.lambda;
  cfg.max_card = m.max_card;
  cfg.include_omega = m.include_omega;
  try {
    cfg.metric = m.metric.empty() ? default_metric(data.kind) : SemiMetric::parse(m.metric);
    if (!std::isnan(m.gamma)) {
      if (cfg.metric.kind() != MetricKind::SoftDtw) throw UsageError("--gamma needs the softdtw metric");
      cfg.metric = SemiMetric::soft_dtw(m.gamma);
    }
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  cfg.epsilon = m.epsilon;
  cfg.xi = m.xi;
  cfg.rho = m.rho;
  cfg.max_outer = m.max_outer;
  cfg.max_inner = m.max_inner;
  cfg.seed = m.seed;
  cfg.prototype_length = m.prototype_length;
  cfg.threads = m.threads;
  try {
    cfg.validate();
    check_dataset(data.objects, cfg.metric);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (data.size() < static_cast<std::size_t>(cfg.clusters)) {
    throw UsageError("need at least as many objects (" + std::to_string(data.size()) + ") as clusters (" +
                     std::to_string(cfg.clusters) + ")");
  }
  return cfg;
}

ordered_json input_entry(const std::string& path) {
  ordered_json j;
  j["path"] = fs::absolute(path).string();
  j["sha256"] = sha256_file(path);
  return j;
}

void write_manifest(const fs::path& out_dir, const std::vector<std::string>& args, const ordered_json& config,
                    const DataOptions& data, const std::vector<fs::path>& outputs, std::uint64_t seed,
                    std::chrono::steady_clock::time_point started, const std::string& started_at) {
  ordered_json m;
  m["command"] = args;
  m["config"] = config;
  ordered_json inputs = ordered_json::array();
  inputs.push_back(input_entry(data.path));
  if (!data.labels_path.empty()) inputs.push_back(input_entry(data.labels_path));
  if (!data.schema_path.empty()) inputs.push_back(input_entry(data.schema_path));
  m["inputs"] = inputs;
  std::vector<std::string> out_paths;
  for (const auto& p : outputs) out_paths.push_back(p.string());
  m["outputs"] = out_paths;
  m["seed"] = seed;
  m["started_at"] = started_at;
  m["duration_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  write_text(out_dir / "manifest.json", m.dump(2) + "\n");
}

std::string fmt(double v) {
  std::ostringstream s;
  s << std::setprecision(4) << v;
  return s.str();
}

// ---- generate ----

struct GenerateOptions {
  std::string kind;
  std::string out;
  int per_class = 50;
  int length = 128;
  std::uint64_t seed = 0;
  bool no_noise = false;
  int clusters = 2;
  int dim = 2;
  double separation = 10.0;
  double spread = 1.0;
  int attributes = 8;
  int levels = 4;
  double flip = 0.1;
};

int cmd_generate(const GenerateOptions& g, std::ostream& out) {
  Dataset d;
  if (g.kind == "diamond") {
    d = gen_diamond();
  } else if (g.kind == "cbf" || g.kind == "bellfunnelmix") {
    if (g.per_class < 1) throw UsageError("--per-class must be >= 1");
    if (g.length < 16) throw UsageError("--length must be >= 16");
    d = g.kind == "cbf" ? gen_cbf(g.per_class, g.length, g.seed, !g.no_noise)
                        : gen_bell_funnel_mix(g.per_class, g.length, g.seed, !g.no_noise);
  } else if (g.kind == "blobs") {
    BlobOptions b;
    b.clusters = g.clusters;
    b.per_class = g.per_class;
    b.dim = g.dim;
    b.separation = g.separation;
    b.spread = g.spread;
    b.seed = g.seed;
    try {
      d = gen_blobs(b);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  } else {
    CategoricalBlobOptions b;
    b.clusters = g.clusters;
    b.per_class = g.per_class;
    b.attributes = g.attributes;
    b.levels = g.levels;
    b.flip_probability = g.flip;
    b.seed = g.seed;
    try {
      d = gen_categorical_blobs(b);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  const fs::path path = g.out;
  switch (d.kind) {
    case DataKind::Numeric:
      save_numeric_csv(path, d);
      break;
    case DataKind::Categorical:
      save_categorical_csv(path, d);
      write_text(fs::path(path).replace_extension(".schema.json"), d.schema->to_json().dump(2) + "\n");
      break;
    case DataKind::TimeSeries:
      save_timeseries_jsonl(path, d);
      break;
  }
  out << "generated " << g.kind << ": " << d.size() << " " << to_string(d.kind) << " objects -> " << path.string()
      << "\n";
  return kExitOk;
}

// ---- fit ----

struct FitOptions {
  std::string algo;
  std::string out_dir;
  int restarts = 1;
};

int cmd_fit(const FitOptions& f, const DataOptions& data_opts, const ModelOptions& m,
            const std::vector<std::string>& args, std::ostream& out) {
  const auto started = std::chrono::steady_clock::now();
  const std::string started_at = timestamp_utc();
  const Dataset data = load_data(data_opts);
  if (f.restarts < 1) throw UsageError("--restarts must be >= 1");
  const fs::path dir = f.out_dir;
  fs::create_directories(dir);

  ordered_json summary;
  ordered_json prototypes;
  ordered_json config;
  CredalPartition partition;
  bool converged = false;
  std::uint64_t best_seed = m.seed;

  if (f.algo == "ecm") {
    if (data.kind == DataKind::TimeSeries) throw UsageError("ecm needs vector data; use softecm for time series");
    if (!m.metric.empty() && SemiMetric::parse(m.metric).kind() != MetricKind::SqEuclidean) {
      throw UsageError("ecm supports only the euclidean metric");
    }
    EcmConfig cfg;
    cfg.clusters = m.clusters;
    cfg.alpha = m.alpha;
    cfg.beta = m.beta;
    cfg.delta = m.delta;
    cfg.epsilon = m.epsilon;
    cfg.max_iter = m.max_outer;
    cfg.max_card = m.max_card;
    cfg.include_omega = m.include_omega;
    try {
      cfg.validate();
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    if (data.size() < static_cast<std::size_t>(cfg.clusters)) {
      throw UsageError("need at least as many objects as clusters");
    }
    const Eigen::MatrixXd x = data.as_matrix();
    std::optional<EcmResult> best;
    for (int r = 0; r < f.restarts; ++r) {
      cfg.seed = m.seed + static_cast<std::uint64_t>(r);
      EcmResult res = ecm_fit(x, cfg);
      if (!best || res.objective_trace.back() < best->objective_trace.back()) {
        best = std::move(res);
        best_seed = cfg.seed;
      }
    }
    cfg.seed = best_seed;
    summary = fit_summary(*best, cfg, data.labels);
    prototypes = prototypes_json(best->centroids, best->partition.family());
    config = to_json(cfg);
    partition = best->partition;
    converged = best->converged;
  } else {
    SoftEcmConfig cfg = soft_config(m, data);
    std::optional<FitResult> best;
    for (int r = 0; r < f.restarts; ++r) {
      cfg.seed = m.seed + static_cast<std::uint64_t>(r);
      FitResult res = fit(data.objects, cfg);
      if (!best || res.objective_trace.back() < best->objective_trace.back()) {
        best = std::move(res);
        best_seed = cfg.seed;
      }
    }
    summary = fit_summary(*best, data.labels);
    prototypes = prototypes_json(best->prototypes);
    config = to_json(cfg);
    config["seed"] = m.seed;
    partition = best->partition;
    converged = best->converged;
  }
  summary["restarts"] = f.restarts;
  summary["best_seed"] = best_seed;
  summary["data_kind"] = to_string(data.kind);
  if (!data.names.empty()) summary["object_ids"] = data.names;

  const std::vector<fs::path> outputs{dir / "masses.csv", dir / "summary.json", dir / "prototypes.json"};
  save_masses_csv(outputs[0], partition, data.names);
  write_text(outputs[1], summary.dump(2) + "\n");
  write_text(outputs[2], prototypes.dump(2) + "\n");
  config["restarts"] = f.restarts;
  write_manifest(dir, args, config, data_opts, outputs, m.seed, started, started_at);

  out << f.algo << ": n=" << data.size() << " J=" << fmt(summary["final_objective"].get<double>())
      << " N*=" << fmt(summary.value("normalized_specificity", 0.0));
  if (summary.contains("rand_index")) out << " RI=" << fmt(summary["rand_index"].get<double>());
  out << (converged ? " converged" : " NOT converged") << " after " << summary["outer_iterations"].get<int>()
      << " iterations -> " << dir.string() << "\n";
  return converged ? kExitOk : kExitNotConverged;
}

// ---- sweep ----

struct SweepOptions {
  std::string betas;
  std::string lambdas;
  int runs = 5;
  std::string out_dir;
};

int cmd_sweep(const SweepOptions& s, const DataOptions& data_opts, const ModelOptions& m,
              const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  const auto started = std::chrono::steady_clock::now();
  const std::string started_at = timestamp_utc();
  const Dataset data = load_data(data_opts);
  const auto betas = s.betas.empty() ? default_beta_grid() : parse_grid(s.betas);
  const auto lambdas = s.lambdas.empty() ? default_lambda_grid() : parse_grid(s.lambdas);
  if (s.runs < 1) throw UsageError("--runs must be >= 1");
  for (double b : betas) {
    if (!(b > 1.0)) throw UsageError("beta grid values must be > 1");
  }
  for (double l : lambdas) {
    if (!(l >= 0.0)) throw UsageError("lambda grid values must be >= 0");
  }
  const SoftEcmConfig cfg = soft_config(m, data);
  const SweepResult result = sweep(data.objects, cfg, betas, lambdas, s.runs);

  const fs::path dir = s.out_dir;
  fs::create_directories(dir);
  std::string table = "beta,lambda,mean_nstar,std_nstar,runs_ok,runs_failed\n";
  for (const auto& cell : result.cells) {
    table += format_double(cell.beta) + ',' + format_double(cell.lambda) + ',';
    table += cell.ok() ? format_double(cell.mean_nstar) + ',' + format_double(cell.std_nstar) : std::string("nan,nan");
    table += ',' + std::to_string(cell.nstar.size()) + ',' + std::to_string(cell.errors.size()) + '\n';
  }
  const std::vector<fs::path> outputs{dir / "sweep.csv", dir / "best.json"};
  write_text(outputs[0], table);

  ordered_json best;
  if (result.best) {
    const auto& cell = result.cells[*result.best];
    best["beta"] = cell.beta;
    best["lambda"] = cell.lambda;
    best["mean_nstar"] = cell.mean_nstar;
    best["std_nstar"] = cell.std_nstar;
    best["nstar"] = cell.nstar;
  } else {
    best["error"] = "every cell failed";
    if (!result.cells.empty() && !result.cells.front().errors.empty()) {
      best["first_error"] = result.cells.front().errors.front();
    }
  }
  best["runs_per_cell"] = s.runs;
  best["cells"] = result.cells.size();
  write_text(outputs[1], best.dump(2) + "\n");
  ordered_json config = to_json(cfg);
  config["beta_grid"] = betas;
  config["lambda_grid"] = lambdas;
  config["runs"] = s.runs;
  write_manifest(dir, args, config, data_opts, outputs, m.seed, started, started_at);

  if (!result.best) {
    err << "sweep failed: every cell raised an error\n";
    return kExitSweepFailed;
  }
  const auto& cell = result.cells[*result.best];
  out << "sweep: " << result.cells.size() << " cells, best beta=" << fmt(cell.beta) << " lambda=" << fmt(cell.lambda)
      << " N*=" << fmt(cell.mean_nstar) << " -> " << dir.string() << "\n";
  return kExitOk;
}

// ---- eval ----

struct EvalOptions {
  std::string masses;
  std::string labels;
  std::string out;
};

int cmd_eval(const EvalOptions& e, std::ostream& out) {
  const CredalPartition partition = load_masses_csv(e.masses);
  std::optional<std::vector<int>> truth;
  if (!e.labels.empty()) {
    truth = load_labels(e.labels);
    if (truth->size() != partition.num_objects()) {
      throw UsageError("label file has " + std::to_string(truth->size()) + " labels for " +
                       std::to_string(partition.num_objects()) + " mass rows");
    }
  }
  ordered_json j;
  const auto summary = partition_summary(partition, truth);
  for (const char* key : {"n_objects", "rand_index", "accuracy", "normalized_specificity"}) {
    if (summary.contains(key)) j[key] = summary[key];
  }
  j["hard_labels"] = summary["hard_labels"];
  if (e.out.empty()) {
    out << j.dump(2) << "\n";
  } else {
    write_text(e.out, j.dump(2) + "\n");
    out << "eval: n=" << partition.num_objects();
    if (j.contains("rand_index")) out << " RI=" << fmt(j["rand_index"].get<double>());
    if (j.contains("accuracy")) out << " accuracy=" << fmt(j["accuracy"].get<double>());
    out << " -> " << e.out << "\n";
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Evidential clustering (ECM and Soft-ECM) with pluggable semi-metrics"};
  app.name(args.empty() ? "softecm" : fs::path(args[0]).filename().string());
  app.require_subcommand(1, 1);
  app.footer("Exit codes: 0 success, 2 usage or validation error, 3 stopped at the iteration cap, "
             "4 every sweep cell failed.\nEnvironment: SOFTECM_THREADS sets the default worker count.");

  GenerateOptions gen;
  auto* generate = app.add_subcommand("generate", "Write a synthetic dataset");
  generate->add_option("kind", gen.kind, "diamond, cbf, bellfunnelmix, blobs or categorical")
      ->required()
      ->check(CLI::IsMember({"diamond", "cbf", "bellfunnelmix", "blobs", "categorical"}));
  generate->add_option("--out,-o", gen.out, "Output file (.csv for tables, .jsonl for series)")->required();
  generate->add_option("--per-class", gen.per_class, "Objects per class")->capture_default_str();
  generate->add_option("--length", gen.length, "Series length (cbf, bellfunnelmix)")->capture_default_str();
  generate->add_option("--seed", gen.seed, "Random seed")->capture_default_str();
  generate->add_flag("--no-noise", gen.no_noise, "Series without amplitude jitter or additive noise");
  generate->add_option("--clusters", gen.clusters, "Classes (blobs, categorical)")->capture_default_str();
  generate->add_option("--dim", gen.dim, "Dimension (blobs)")->capture_default_str();
  generate->add_option("--separation", gen.separation, "Distance between neighbouring centers (blobs)")
      ->capture_default_str();
  generate->add_option("--spread", gen.spread, "Per-coordinate standard deviation (blobs)")->capture_default_str();
  generate->add_option("--attributes", gen.attributes, "Attributes (categorical)")->capture_default_str();
  generate->add_option("--levels", gen.levels, "Levels per attribute (categorical)")->capture_default_str();
  generate->add_option("--flip", gen.flip, "Chance an attribute leaves its class mode (categorical)")
      ->capture_default_str();

  FitOptions fit_opts;
  DataOptions fit_data;
  ModelOptions fit_model;
  auto* fit_cmd = app.add_subcommand("fit", "Fit ECM or Soft-ECM and write masses, summary, prototypes, manifest");
  fit_cmd->add_option("algo", fit_opts.algo, "ecm or softecm")
      ->required()
      ->check(CLI::IsMember({"ecm", "softecm"}));
  add_data_options(fit_cmd, fit_data);
  add_model_options(fit_cmd, fit_model, true);
  fit_cmd->add_option("--restarts", fit_opts.restarts, "Seeded restarts (seed, seed+1, ...); lowest objective wins")
      ->capture_default_str();
  fit_cmd->add_option("--out-dir,-o", fit_opts.out_dir, "Output directory")->required();

  SweepOptions sweep_opts;
  DataOptions sweep_data;
  ModelOptions sweep_model;
  auto* sweep_cmd = app.add_subcommand("sweep", "Mean/std of N* over a (beta, lambda) grid");
  add_data_options(sweep_cmd, sweep_data);
  add_model_options(sweep_cmd, sweep_model, false);
  sweep_cmd->add_option("--betas", sweep_opts.betas, "Comma-separated beta grid (default 1.1,1.2,...,2.0)");
  sweep_cmd->add_option("--lambdas", sweep_opts.lambdas, "Comma-separated lambda grid (default 1,2,...,10)");
  sweep_cmd->add_option("--runs", sweep_opts.runs, "Seeded runs per cell")->capture_default_str();
  sweep_cmd->add_option("--out-dir,-o", sweep_opts.out_dir, "Output directory")->required();

  EvalOptions eval_opts;
  auto* eval_cmd = app.add_subcommand("eval", "Score a mass file against labels");
  eval_cmd->add_option("--masses", eval_opts.masses, "Mass CSV written by fit")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--labels", eval_opts.labels, "Label file, one integer per line")->check(CLI::ExistingFile);
  eval_cmd->add_option("--out,-o", eval_opts.out, "Metrics JSON (stdout when absent)");

  std::string manifest_path;
  auto* verify_cmd = app.add_subcommand("verify", "Recompute the input digests recorded in a manifest");
  verify_cmd->add_option("manifest", manifest_path, "manifest.json")->required()->check(CLI::ExistingFile);

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  if (argv.empty()) argv.push_back("softecm");
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    err << "run with --help for usage\n";
    return kExitUsage;
  }

  try {
    if (generate->parsed()) return cmd_generate(gen, out);
    if (fit_cmd->parsed()) return cmd_fit(fit_opts, fit_data, fit_model, args, out);
    if (sweep_cmd->parsed()) return cmd_sweep(sweep_opts, sweep_data, sweep_model, args, out, err);
    if (eval_cmd->parsed()) return cmd_eval(eval_opts, out);
    std::string problem;
    if (verify_manifest(manifest_path, &problem)) {
      out << "manifest ok: " << manifest_path << "\n";
      return kExitOk;
    }
    err << "manifest check failed: " << problem << "\n";
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DataFormatError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace softecm::cli
