#include "softecm/datasets.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace softecm {

std::string to_string(DataKind kind) {
  switch (kind) {
    case DataKind::Numeric:
      return "numeric";
    case DataKind::Categorical:
      return "categorical";
    case DataKind::TimeSeries:
      return "timeseries";
  }
  return "unknown";
}

void Dataset::validate() const {
  if (labels && labels->size() != objects.size()) {
    throw std::invalid_argument("dataset has " + std::to_string(labels->size()) + " labels for " +
                                std::to_string(objects.size()) + " objects");
  }
  if (!names.empty() && names.size() != objects.size()) {
    throw std::invalid_argument("dataset names do not match object count");
  }
  if (objects.empty()) return;
  for (const auto& x : objects) {
    if (x.cols() != objects.front().cols()) throw std::invalid_argument("objects differ in channel count");
    if (kind != DataKind::TimeSeries && x.rows() != 1) {
      throw std::invalid_argument("numeric and categorical objects must be single rows");
    }
  }
  if (kind == DataKind::Categorical) {
    if (!schema) throw std::invalid_argument("categorical dataset without a schema");
    if (static_cast<std::size_t>(objects.front().cols()) != schema->dimension()) {
      throw std::invalid_argument("categorical objects do not match schema dimension");
    }
  }
}

Eigen::MatrixXd Dataset::as_matrix() const {
  if (objects.empty()) return {};
  Eigen::MatrixXd out(static_cast<Eigen::Index>(objects.size()), objects.front().size());
  for (std::size_t i = 0; i < objects.size(); ++i) {
    if (objects[i].rows() != 1 || objects[i].cols() != out.cols()) {
      throw std::invalid_argument("as_matrix needs equal-width single-row objects");
    }
    out.row(static_cast<Eigen::Index>(i)) = objects[i].row(0);
  }
  return out;
}

void Dataset::standardize() {
  if (kind != DataKind::Numeric) throw std::invalid_argument("z-scoring applies to numeric data only");
  Eigen::MatrixXd x = as_matrix();
  if (x.rows() == 0) return;
  const Eigen::RowVectorXd mean = x.colwise().mean();
  x.rowwise() -= mean;
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    const double sd = std::sqrt(x.col(j).squaredNorm() / static_cast<double>(x.rows()));
    if (sd > 0.0) x.col(j) /= sd;
  }
  for (std::size_t i = 0; i < objects.size(); ++i) objects[i] = x.row(static_cast<Eigen::Index>(i));
}

Dataset gen_diamond() {
  // Objects 1-5 and 7-11 are mirror images; 5 and 7 are the inner tips.
  static constexpr std::array<std::array<double, 2>, 12> kPoints{{
      {-7.0, 0.0},
      {-5.0, 2.0},
      {-5.0, 0.0},
      {-5.0, -2.0},
      {-2.0, 0.0},
      {0.0, 0.0},
      {2.0, 0.0},
      {5.0, 2.0},
      {5.0, 0.0},
      {5.0, -2.0},
      {7.0, 0.0},
      {0.0, 15.0},
  }};
  Dataset d;
  d.kind = DataKind::Numeric;
  d.class_names = {"left", "right", "outlier"};
  std::vector<int> labels;
  for (std::size_t i = 0; i < kPoints.size(); ++i) {
    Object x(1, 2);
    x << kPoints[i][0], kPoints[i][1];
    d.objects.push_back(std::move(x));
    d.names.push_back(std::to_string(i + 1));
    labels.push_back(i < 6 ? 0 : (i < 11 ? 1 : 2));
  }
  d.labels = std::move(labels);
  return d;
}

namespace {

void check_series_params(int per_class, int length) {
  if (per_class < 1) throw std::invalid_argument("per_class must be >= 1");
  if (length < 16) throw std::invalid_argument("series length must be >= 16");
}

struct Window {
  int start;
  int end;  // inclusive
};

// Standard CBF window scaled to the length (a in [L/8, L/4], b - a in [L/4, 3L/4]).
Window cbf_window(std::mt19937_64& rng, int length) {
  std::uniform_int_distribution<int> start(length / 8, length / 4);
  std::uniform_int_distribution<int> span(length / 4, 3 * length / 4);
  const int a = start(rng);
  const int b = std::min(length - 1, a + span(rng));
  return {a, b};
}

enum class Shape { Cylinder, Bell, Funnel };

void add_shape(Object& series, Shape shape, Window w, double amplitude) {
  const double width = static_cast<double>(std::max(1, w.end - w.start));
  for (int t = w.start; t <= w.end; ++t) {
    double value = amplitude;
    if (shape == Shape::Bell) value *= static_cast<double>(t - w.start) / width;
    if (shape == Shape::Funnel) value *= static_cast<double>(w.end - t) / width;
    series(t, 0) += value;
  }
}

double draw_amplitude(std::mt19937_64& rng, std::normal_distribution<double>& gauss, bool noise) {
  const double eta = gauss(rng);
  return noise ? 6.0 + eta : 6.0;
}

void add_noise(Object& series, std::mt19937_64& rng, std::normal_distribution<double>& gauss, bool noise) {
  for (Eigen::Index t = 0; t < series.rows(); ++t) {
    const double eps = gauss(rng);
    if (noise) series(t, 0) += eps;
  }
}

}  // namespace

Dataset gen_cbf(int per_class, int length, std::uint64_t seed, bool noise) {
  check_series_params(per_class, length);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Dataset d;
  d.kind = DataKind::TimeSeries;
  d.class_names = {"cylinder", "bell", "funnel"};
  std::vector<int> labels;
  const std::array<Shape, 3> shapes{Shape::Cylinder, Shape::Bell, Shape::Funnel};
  for (int c = 0; c < 3; ++c) {
    for (int r = 0; r < per_class; ++r) {
      Object series = Object::Zero(length, 1);
      const Window w = cbf_window(rng, length);
      add_shape(series, shapes[static_cast<std::size_t>(c)], w, draw_amplitude(rng, gauss, noise));
      add_noise(series, rng, gauss, noise);
      d.objects.push_back(std::move(series));
      d.names.push_back(d.class_names[static_cast<std::size_t>(c)] + "_" + std::to_string(r + 1));
      labels.push_back(c);
    }
  }
  d.labels = std::move(labels);
  return d;
}

Dataset gen_bell_funnel_mix(int per_class, int length, std::uint64_t seed, bool noise) {
  check_series_params(per_class, length);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Dataset d;
  d.kind = DataKind::TimeSeries;
  d.class_names = {"bell", "funnel", "bell+funnel"};
  std::vector<int> labels;

  // Complementary halves: bell inside [L/16, 7L/16], funnel inside [L/2 + 1, 15L/16].
  const int short_span_lo = length / 8;
  const int short_span_hi = length / 4 + length / 16;
  std::uniform_int_distribution<int> first_start(length / 16, length / 8);
  std::uniform_int_distribution<int> second_start(length / 2 + 1, length / 2 + length / 8);
  std::uniform_int_distribution<int> short_span(short_span_lo, short_span_hi);

  for (int c = 0; c < 3; ++c) {
    for (int r = 0; r < per_class; ++r) {
      Object series = Object::Zero(length, 1);
      if (c == 0) {
        add_shape(series, Shape::Bell, cbf_window(rng, length), draw_amplitude(rng, gauss, noise));
      } else if (c == 1) {
        add_shape(series, Shape::Funnel, cbf_window(rng, length), draw_amplitude(rng, gauss, noise));
      } else {
        const int a1 = first_start(rng);
        const Window bell{a1, a1 + short_span(rng)};
        const double amp1 = draw_amplitude(rng, gauss, noise);
        const int a2 = second_start(rng);
        const Window funnel{a2, std::min(length - 1, a2 + short_span(rng))};
        const double amp2 = draw_amplitude(rng, gauss, noise);
        add_shape(series, Shape::Bell, bell, amp1);
        add_shape(series, Shape::Funnel, funnel, amp2);
      }
      add_noise(series, rng, gauss, noise);
      d.objects.push_back(std::move(series));
      d.names.push_back(d.class_names[static_cast<std::size_t>(c)] + "_" + std::to_string(r + 1));
      labels.push_back(c);
    }
  }
  d.labels = std::move(labels);
  return d;
}

Dataset gen_blobs(const BlobOptions& options) {
  if (options.clusters < 1 || options.per_class < 1 || options.dim < 1) {
    throw std::invalid_argument("blobs need clusters, per_class and dim >= 1");
  }
  if (!(options.spread >= 0.0) || !(options.separation >= 0.0)) {
    throw std::invalid_argument("blob spread and separation must be >= 0");
  }
  // Centers on a circle (a line in 1-D) with neighbours `separation` apart.
  const int k = options.clusters;
  Eigen::MatrixXd centers = Eigen::MatrixXd::Zero(k, options.dim);
  if (options.dim == 1 || k == 2) {
    for (int c = 0; c < k; ++c) centers(c, 0) = options.separation * c;
  } else {
    const double radius = options.separation / (2.0 * std::sin(std::numbers::pi / k));
    for (int c = 0; c < k; ++c) {
      const double angle = 2.0 * std::numbers::pi * c / k;
      centers(c, 0) = radius * std::cos(angle);
      centers(c, 1) = radius * std::sin(angle);
    }
  }

  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> gauss(0.0, options.spread);
  Dataset d;
  d.kind = DataKind::Numeric;
  std::vector<int> labels;
  for (int c = 0; c < k; ++c) {
    for (int r = 0; r < options.per_class; ++r) {
      Object x(1, options.dim);
      for (int j = 0; j < options.dim; ++j) x(0, j) = centers(c, j) + gauss(rng);
      d.objects.push_back(std::move(x));
      labels.push_back(c);
    }
  }
  d.labels = std::move(labels);
  return d;
}

Dataset gen_categorical_blobs(const CategoricalBlobOptions& options) {
  if (options.clusters < 1 || options.per_class < 1 || options.attributes < 1 || options.levels < 2) {
    throw std::invalid_argument("categorical blobs need clusters, per_class, attributes >= 1 and levels >= 2");
  }
  if (!(options.flip_probability >= 0.0 && options.flip_probability <= 1.0)) {
    throw std::invalid_argument("flip probability must be in [0, 1]");
  }
  std::mt19937_64 rng(options.seed);
  std::uniform_int_distribution<int> level(0, options.levels - 1);
  std::uniform_int_distribution<int> other(1, options.levels - 1);
  std::bernoulli_distribution flip(options.flip_probability);

  CategoricalSchema schema;
  for (int a = 0; a < options.attributes; ++a) {
    CategoricalAttribute attr;
    attr.name = "a" + std::to_string(a + 1);
    for (int l = 0; l < options.levels; ++l) attr.levels.push_back(std::string(1, static_cast<char>('a' + l)));
    schema.attributes.push_back(std::move(attr));
  }

  std::vector<std::vector<int>> modes(static_cast<std::size_t>(options.clusters));
  for (auto& mode : modes) {
    for (int a = 0; a < options.attributes; ++a) mode.push_back(level(rng));
  }
  CategoricalTable table;
  std::vector<int> labels;
  for (int c = 0; c < options.clusters; ++c) {
    for (int r = 0; r < options.per_class; ++r) {
      std::vector<std::string> row;
      for (int a = 0; a < options.attributes; ++a) {
        int value = modes[static_cast<std::size_t>(c)][static_cast<std::size_t>(a)];
        if (flip(rng)) value = (value + other(rng)) % options.levels;
        row.push_back(schema.attributes[static_cast<std::size_t>(a)].levels[static_cast<std::size_t>(value)]);
      }
      table.push_back(std::move(row));
      labels.push_back(c);
    }
  }
  Dataset d;
  d.kind = DataKind::Categorical;
  d.objects = encode_categorical(table, schema);
  d.schema = std::move(schema);
  d.labels = std::move(labels);
  return d;
}

}  // namespace softecm
