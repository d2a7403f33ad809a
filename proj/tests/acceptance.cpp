// Acceptance run: one PASS/FAIL line per criterion, exit status 0 only when all pass.

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "softecm/datasets.hpp"
#include "softecm/ecm.hpp"
#include "softecm/evaluation.hpp"
#include "softecm/mass_update.hpp"
#include "softecm/soft_ecm.hpp"

using namespace softecm;

namespace {

using Clock = std::chrono::steady_clock;

// N* of every fit made during the run, checked by criterion 8.
std::vector<double> g_nstar;

void record(const CredalPartition& p) {
  if (p.num_clusters() >= 2) g_nstar.push_back(normalized_specificity(p));
}

bool non_increasing(const std::vector<double>& trace) {
  for (std::size_t t = 1; t < trace.size(); ++t) {
    if (trace[t] > trace[t - 1] + 1e-9 * std::abs(trace[t - 1])) return false;
  }
  return true;
}

std::vector<Object> rows_of(const Eigen::MatrixXd& m) {
  std::vector<Object> out;
  for (Eigen::Index i = 0; i < m.rows(); ++i) out.push_back(m.row(i));
  return out;
}

Object random_object(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> g(0.0, 1.0);
  Object o(rows, cols);
  for (Eigen::Index k = 0; k < o.size(); ++k) o(k) = g(rng);
  return o;
}

struct Verdict {
  bool pass = true;
  std::string detail;
};

// ---- 1: diamond -----------------------------------------------------------

FitResult best_of_ten(const Dataset& data, double lambda) {
  SoftEcmConfig cfg;
  cfg.clusters = 2;
  cfg.alpha = 1.0 / 6.0;
  cfg.beta = 2.0;
  cfg.delta = 11.0;
  cfg.lambda = lambda;
  FitResult best;
  double best_j = std::numeric_limits<double>::infinity();
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    cfg.seed = seed;
    auto r = fit(data.objects, cfg);
    record(r.partition);
    if (r.objective_trace.back() < best_j) {
      best_j = r.objective_trace.back();
      best = std::move(r);
    }
  }
  return best;
}

Verdict diamond() {
  const auto data = gen_diamond();
  Verdict v;
  const auto low = best_of_ten(data, 1.5);
  const auto& fam = low.partition.family();
  const auto top = argmax_focal(low.partition);
  const bool outlier = top[11] == 0;
  bool groups = fam[top[0]].cardinality() == 1 && fam[top[7]].cardinality() == 1 && top[0] != top[7];
  for (std::size_t i : {1u, 2u, 3u, 4u}) groups = groups && top[i] == top[0];
  for (std::size_t i : {8u, 9u, 10u}) groups = groups && top[i] == top[7];
  const bool seven = fam[top[6]].cardinality() == 1;

  const auto high = best_of_ten(data, 3.5);
  const bool six = high.partition.family()[argmax_focal(high.partition)[5]].cardinality() == 1;

  v.pass = outlier && groups && seven && six;
  v.detail = std::string("lambda=1.5: object12=") + fam[top[11]].label() + " object7=" + fam[top[6]].label() +
             " groups " + (groups ? "split" : "NOT split") + "; lambda=3.5: object6=" +
             high.partition.family()[argmax_focal(high.partition)[5]].label();
  return v;
}

// ---- 2: equivalence with ECM under squared Euclidean ------------------------

Verdict equivalence() {
  Verdict v;
  const double lambdas[] = {0.1, 1.0, 10.0, 100.0};
  std::vector<double> deviation(4, 0.0);
  double worst_gap = 0.0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    std::mt19937_64 rng(1000 + seed);
    BlobOptions opt;
    opt.clusters = 2 + static_cast<int>(seed % 2);
    opt.per_class = 10 + static_cast<int>(rng() % 11);  // n <= 60
    opt.dim = 2;
    opt.separation = 4.0;
    opt.spread = 1.0;
    opt.seed = seed;
    const auto data = gen_blobs(opt);
    const Eigen::MatrixXd x = data.as_matrix();

    EcmConfig ecfg;
    ecfg.clusters = opt.clusters;
    ecfg.alpha = 1.0;
    ecfg.beta = 2.0;
    ecfg.delta = 10.0;
    ecfg.seed = seed;
    ecfg.max_iter = 100;
    const Eigen::MatrixXd v0 = ecm_initial_centroids(x, ecfg);
    const auto ecm = ecm_fit(x, ecfg, v0);
    record(ecm.partition);
    const double j_ecm = ecm.objective_trace.back();

    for (std::size_t l = 0; l < 4; ++l) {
      SoftEcmConfig scfg;
      scfg.clusters = ecfg.clusters;
      scfg.alpha = ecfg.alpha;
      scfg.beta = ecfg.beta;
      scfg.delta = ecfg.delta;
      scfg.lambda = lambdas[l];
      scfg.seed = seed;
      scfg.max_outer = 100;
      scfg.max_inner = 200;
      PrototypeSet init;
      init.family = scfg.family();
      init.values.resize(init.family.size());
      const auto meta = meta_centroids(v0, init.family);
      for (std::size_t k = 1; k < init.size(); ++k) init[k] = meta.row(static_cast<Eigen::Index>(k));
      const auto objs = rows_of(x);
      const auto res = fit(objs, scfg, init);
      record(res.partition);

      Eigen::MatrixXd singles(scfg.clusters, x.cols());
      for (int k = 0; k < scfg.clusters; ++k) singles.row(k) = res.prototypes[init.family.singleton_index(k)];
      double dev = 0.0;
      int metas = 0;
      for (std::size_t k = 1; k < init.size(); ++k) {
        if (init.family[k].cardinality() < 2) continue;
        dev += (res.prototypes[k] - meta_centroid(singles, init.family[k])).norm();
        ++metas;
      }
      deviation[l] += dev / metas / 10.0;
      if (lambdas[l] == 100.0) {
        const double j_soft = soft_objective_data_term(res.partition, res.prototypes, objs, scfg);
        worst_gap = std::max(worst_gap, std::abs(j_ecm - j_soft) / j_ecm);
      }
    }
  }
  bool monotone = true;
  for (std::size_t l = 1; l < 4; ++l) monotone = monotone && deviation[l] <= deviation[l - 1];
  v.pass = worst_gap <= 0.02 && monotone;
  char buf[256];
  std::snprintf(buf, sizeof buf, "max |J_ECM - J_soft|/J_ECM = %.4f; deviation by lambda 0.1/1/10/100 = %.4g %.4g %.4g %.4g",
                worst_gap, deviation[0], deviation[1], deviation[2], deviation[3]);
  v.detail = buf;
  return v;
}

// ---- 3: monotone convergence ---------------------------------------------

Verdict monotone() {
  Verdict v;
  int runs = 0;
  int bad_trace = 0;
  int capped = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    BlobOptions bopt;
    bopt.clusters = 3;
    bopt.per_class = 15;
    bopt.separation = 6.0;
    bopt.seed = seed;
    CategoricalBlobOptions copt;
    copt.clusters = 3;
    copt.per_class = 15;
    copt.seed = seed;
    const Dataset suites[] = {gen_blobs(bopt), gen_categorical_blobs(copt), gen_cbf(8, 32, seed)};
    const SemiMetric metrics[] = {SemiMetric::sq_euclidean(), SemiMetric::onehot_hamming(), SemiMetric::soft_dtw(0.1)};
    const double deltas[] = {10.0, 3.0, 10.0};
    for (int s = 0; s < 3; ++s) {
      SoftEcmConfig cfg;
      cfg.clusters = 3;
      cfg.metric = metrics[s];
      cfg.delta = deltas[s];
      cfg.seed = seed;
      cfg.max_outer = 100;
      if (s == 2) {
        cfg.beta = 1.2;
        cfg.max_inner = 20;
        cfg.epsilon = 1e-2;
      }
      const auto res = fit(suites[s].objects, cfg);
      record(res.partition);
      ++runs;
      if (!non_increasing(res.objective_trace)) ++bad_trace;
      if (!res.converged) ++capped;
    }
  }
  v.pass = bad_trace == 0 && capped == 0;
  v.detail = std::to_string(runs) + " runs, " + std::to_string(bad_trace) + " non-monotone traces, " +
             std::to_string(capped) + " hit max_outer";
  return v;
}

// ---- 4: mass update optimality -------------------------------------------

Verdict mass_optimality() {
  Verdict v;
  std::mt19937_64 rng(44);
  int worse = 0;
  double worst = -std::numeric_limits<double>::infinity();
  for (int inst = 0; inst < 50; ++inst) {
    SoftEcmConfig cfg;
    cfg.clusters = 2;
    cfg.alpha = 0.5 * (inst % 3);
    cfg.beta = 1.3 + 0.1 * (inst % 8);
    cfg.delta = 1.0 + inst % 4;
    PrototypeSet protos;
    protos.family = cfg.family();
    protos.values.resize(protos.family.size());
    for (std::size_t k = 1; k < protos.size(); ++k) protos[k] = random_object(rng, 1, 2);
    std::vector<Object> x;
    for (int i = 0; i < 3; ++i) x.push_back(random_object(rng, 1, 2));
    const auto m = update_masses(x, protos, cfg).partition;
    for (std::size_t i = 0; i < x.size(); ++i) {
      auto row_cost = [&](const Eigen::RowVectorXd& row) {
        double j = cfg.delta * cfg.delta * std::pow(row(0), cfg.beta);
        for (std::size_t k = 1; k < protos.size(); ++k) {
          j += std::pow(protos.family[k].cardinality(), cfg.alpha) *
               std::pow(row(static_cast<Eigen::Index>(k)), cfg.beta) * cfg.metric.distance(x[i], protos[k]);
        }
        return j;
      };
      const double closed = row_cost(m.masses().row(static_cast<Eigen::Index>(i)));
      double best = std::numeric_limits<double>::infinity();
      for (int s = 0; s < 10000; ++s) best = std::min(best, row_cost(oracle::simplex_row(rng, 4)));
      worst = std::max(worst, closed - best);
      if (closed > best + 1e-9) ++worse;
    }
  }
  v.pass = worse == 0;
  char buf[160];
  std::snprintf(buf, sizeof buf, "150 rows, %d beaten by random rows; max(J_closed - J_best_random) = %.3g", worse, worst);
  v.detail = buf;
  return v;
}

// ---- 5: gradients --------------------------------------------------------

oracle::Mat flatten(const PrototypeSet& v) {
  Eigen::Index total = 0;
  for (std::size_t k = 1; k < v.size(); ++k) total += v[k].size();
  oracle::Mat flat(total, 1);
  Eigen::Index at = 0;
  for (std::size_t k = 1; k < v.size(); ++k) {
    for (Eigen::Index e = 0; e < v[k].size(); ++e) flat(at++, 0) = v[k](e);
  }
  return flat;
}

PrototypeSet unflatten(const oracle::Mat& flat, PrototypeSet shape) {
  Eigen::Index at = 0;
  for (std::size_t k = 1; k < shape.size(); ++k) {
    for (Eigen::Index e = 0; e < shape[k].size(); ++e) shape[k](e) = flat(at++, 0);
  }
  return shape;
}

Verdict gradients() {
  Verdict v;
  std::mt19937_64 rng(55);
  std::uniform_int_distribution<int> len(1, 8);
  double worst_distance = 0.0;
  double worst_objective = 0.0;
  const SemiMetric metrics[] = {SemiMetric::sq_euclidean(), SemiMetric::onehot_hamming(), SemiMetric::soft_dtw(1.0)};
  for (const auto& metric : metrics) {
    const bool dtw = metric.kind() == MetricKind::SoftDtw;
    for (int trial = 0; trial < 100; ++trial) {
      const Object x = random_object(rng, dtw ? len(rng) : 1, dtw ? 2 : 5);
      const Object p = random_object(rng, dtw ? len(rng) : 1, dtw ? 2 : 5);
      const auto f = [&](const oracle::Mat& probe) { return metric.distance(x, probe); };
      worst_distance = std::max(worst_distance, oracle::relative_error(metric.grad_v(x, p), oracle::fd_gradient(f, p)));

      SoftEcmConfig cfg;
      cfg.clusters = 2 + trial % 2;
      cfg.max_card = cfg.clusters;
      cfg.lambda = 0.2 * (trial % 10);
      cfg.metric = metric;
      PrototypeSet protos;
      protos.family = cfg.family();
      protos.values.resize(protos.family.size());
      for (std::size_t k = 1; k < protos.size(); ++k) protos[k] = random_object(rng, dtw ? 4 : 1, 2);
      std::vector<Object> data;
      for (int i = 0; i < 4; ++i) data.push_back(random_object(rng, dtw ? 3 + i : 1, 2));
      const CredalPartition m(protos.family,
                              oracle::random_masses(rng, 4, static_cast<Eigen::Index>(protos.family.size())));
      const auto g = prototype_gradient(m, protos, data, cfg);
      const auto obj = [&](const oracle::Mat& flat) { return soft_objective(m, unflatten(flat, protos), data, cfg); };
      worst_objective =
          std::max(worst_objective, oracle::relative_error(flatten(g), oracle::fd_gradient(obj, flatten(protos))));
    }
  }
  double worst_dtw = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const Object a = random_object(rng, len(rng), 1);
    const Object b = random_object(rng, len(rng), 1);
    worst_dtw = std::max(worst_dtw, std::abs(soft_dtw(a, b, 1e-3) - oracle::dtw(a, b)));
  }
  v.pass = worst_distance < 1e-4 && worst_objective < 1e-4 && worst_dtw < 1e-2;
  char buf[200];
  std::snprintf(buf, sizeof buf, "max rel err: distance %.2e, objective %.2e; |softDTW(1e-3) - DTW| max %.2e",
                worst_distance, worst_objective, worst_dtw);
  v.detail = buf;
  return v;
}

// ---- 6 and 7: time series ---------------------------------------------------

SoftEcmConfig series_config(int clusters, const SemiMetric& metric, std::uint64_t seed) {
  SoftEcmConfig cfg;
  cfg.clusters = clusters;
  cfg.metric = metric;
  cfg.beta = 1.2;
  cfg.max_inner = 20;
  cfg.epsilon = 1e-2;
  cfg.seed = seed;
  if (metric.kind() == MetricKind::SoftDtw) cfg.prototype_length = 32;
  return cfg;
}

Verdict cbf_contrast() {
  Verdict v;
  double ri_dtw = 0.0;
  double ri_l2 = 0.0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto data = gen_cbf(50, 64, seed);
    const auto a = fit(data.objects, series_config(3, SemiMetric::soft_dtw(0.1), seed));
    const auto b = fit(data.objects, series_config(3, SemiMetric::sq_euclidean(), seed));
    record(a.partition);
    record(b.partition);
    ri_dtw += rand_index(hard_assign(a.partition), *data.labels) / 5.0;
    ri_l2 += rand_index(hard_assign(b.partition), *data.labels) / 5.0;
  }
  v.pass = ri_dtw >= 0.80 && ri_dtw - ri_l2 >= 0.10;
  char buf[160];
  std::snprintf(buf, sizeof buf, "mean RI soft-DTW %.3f, squared Euclidean %.3f", ri_dtw, ri_l2);
  v.detail = buf;
  return v;
}

Verdict mixture() {
  Verdict v;
  int hits = 0;
  std::string per_seed;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto data = gen_bell_funnel_mix(50, 32, seed);
    auto cfg = series_config(2, SemiMetric::soft_dtw(0.1), seed);
    cfg.alpha = 0.0;  // no size penalty, so the pair prototype competes on distance alone
    cfg.prototype_length = 16;
    const auto res = fit(data.objects, cfg);
    record(res.partition);
    const auto& fam = res.partition.family();
    const std::size_t pair = *fam.index_of(FocalSet::omega(2));
    // class-average masses
    Eigen::MatrixXd avg = Eigen::MatrixXd::Zero(3, static_cast<Eigen::Index>(fam.size()));
    for (std::size_t i = 0; i < data.size(); ++i) {
      avg.row((*data.labels)[i]) += res.partition.masses().row(static_cast<Eigen::Index>(i)) / 50.0;
    }
    bool hit = false;
    for (Eigen::Index c = 0; c < 3; ++c) {
      Eigen::Index top = 0;
      avg.row(c).maxCoeff(&top);
      bool beats = true;
      for (Eigen::Index o = 0; o < 3; ++o) {
        if (o != c) beats = beats && avg(c, static_cast<Eigen::Index>(pair)) > avg(o, static_cast<Eigen::Index>(pair));
      }
      if (static_cast<std::size_t>(top) == pair && beats) {
        hit = true;
        per_seed += " " + data.class_names[static_cast<std::size_t>(c)];
      }
    }
    if (!hit) per_seed += " -";
    hits += hit ? 1 : 0;
  }
  v.pass = hits >= 3;
  v.detail = std::to_string(hits) + "/5 runs with a class on {1,2}:" + per_seed;
  return v;
}

// ---- 8: index sanity -------------------------------------------------------

Verdict indices() {
  Verdict v;
  std::size_t out_of_range = 0;
  for (double n : g_nstar) out_of_range += (n < 0.0 || n > 1.0) ? 1 : 0;
  std::mt19937_64 rng(88);
  int mismatches = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 2 + rng() % 7;
    std::uniform_int_distribution<int> ka(0, static_cast<int>(rng() % 4));
    std::uniform_int_distribution<int> kb(0, static_cast<int>(rng() % 4));
    std::vector<int> a(n);
    std::vector<int> b(n);
    for (auto& x : a) x = ka(rng);
    for (auto& x : b) x = kb(rng);
    if (std::abs(rand_index(a, b) - oracle::rand_index_pairs(a, b)) > 1e-12) ++mismatches;
    if (std::abs(matched_accuracy(a, b) - oracle::accuracy_brute_force(a, b)) > 1e-12) ++mismatches;
  }
  v.pass = out_of_range == 0 && mismatches == 0 && !g_nstar.empty();
  v.detail = std::to_string(g_nstar.size()) + " fits, " + std::to_string(out_of_range) + " N* outside [0,1]; " +
             std::to_string(mismatches) + " oracle mismatches in 1000 labelings";
  return v;
}

struct Criterion {
  int id;
  const char* name;
  double budget_seconds;
  std::function<Verdict()> run;
};

}  // namespace

int main(int argc, char** argv) {
  // Optional criterion ids on the command line select a subset.
  std::vector<int> only;
  for (int a = 1; a < argc; ++a) only.push_back(std::atoi(argv[a]));
  const Criterion criteria[] = {
      {1, "diamond reproduction", 10.0, diamond},
      {2, "ECM equivalence under squared Euclidean", 120.0, equivalence},
      {3, "monotone convergence", 0.0, monotone},
      {4, "mass update optimality", 0.0, mass_optimality},
      {5, "gradient correctness", 0.0, gradients},
      {6, "CBF metric contrast", 600.0, cbf_contrast},
      {7, "mixture detection", 0.0, mixture},
      {8, "index sanity", 0.0, indices},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    const auto start = Clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail = std::string("error: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    if (c.budget_seconds > 0.0 && secs > c.budget_seconds) {
      v.pass = false;
      v.detail += " (over the " + std::to_string(static_cast<int>(c.budget_seconds)) + " s budget)";
    }
    std::printf("%s %d %s: %s [%.1f s]\n", v.pass ? "PASS" : "FAIL", c.id, c.name, v.detail.c_str(), secs);
    std::fflush(stdout);
    failed += v.pass ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
