#include "ensnap/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "ensnap/rng.hpp"

namespace ensnap {

void MLPParams::validate() const {
  if (input_dim < 1 || hidden_units < 1)
    throw std::invalid_argument("MLPParams: dimensions must be >= 1");
  if (hidden_weights.size() != hidden_units * input_dim ||
      hidden_biases.size() != hidden_units ||
      output_weights.size() != hidden_units)
    throw std::invalid_argument("MLPParams: shape mismatch");
  auto finite = [](std::span<const double> v) {
    return std::all_of(v.begin(), v.end(),
                       [](double x) { return std::isfinite(x); });
  };
  if (!finite(hidden_weights) || !finite(hidden_biases) ||
      !finite(output_weights) || !std::isfinite(output_bias))
    throw std::invalid_argument("MLPParams: non-finite parameter");
}

void TrainConfig::validate() const {
  if (hidden_units < 1)
    throw std::invalid_argument("TrainConfig: hidden_units must be >= 1");
  if (snapshot_count < 1)
    throw std::invalid_argument("TrainConfig: snapshot_count must be >= 1");
  if (total_epochs % snapshot_count != 0)
    throw std::invalid_argument(
        "TrainConfig: total_epochs must be divisible by snapshot_count");
  if (learning_rate < 0.0)
    throw std::invalid_argument("TrainConfig: negative learning rate");
}

void SnapshotStore::validate() const {
  if (snapshots.empty()) throw std::invalid_argument("SnapshotStore: empty");
  if (epoch_of.size() != snapshots.size() ||
      train_losses.size() != snapshots.size())
    throw std::invalid_argument("SnapshotStore: ragged bookkeeping");
  for (std::size_t k = 0; k + 1 < epoch_of.size(); ++k)
    if (epoch_of[k] >= epoch_of[k + 1])
      throw std::invalid_argument("SnapshotStore: epochs not increasing");
  for (const auto& p : snapshots) {
    if (p.input_dim != input_dim || p.hidden_units != hidden_units)
      throw std::invalid_argument("SnapshotStore: inconsistent shapes");
    p.validate();
  }
}

MLPParams init_params(std::size_t input_dim, std::size_t hidden_units,
                      std::uint64_t seed) {
  if (input_dim < 1 || hidden_units < 1)
    throw std::invalid_argument("init_params: dimensions must be >= 1");
  MLPParams p;
  p.input_dim = input_dim;
  p.hidden_units = hidden_units;
  p.hidden_weights.resize(hidden_units * input_dim);
  p.hidden_biases.resize(hidden_units);
  p.output_weights.resize(hidden_units);
  Rng rng(seed);
  const double hidden_bound = 1.0 / std::sqrt(static_cast<double>(input_dim));
  const double output_bound =
      1.0 / std::sqrt(static_cast<double>(hidden_units));
  for (double& w : p.hidden_weights)
    w = rng.uniform(-hidden_bound, hidden_bound);
  for (double& b : p.hidden_biases)
    b = rng.uniform(-hidden_bound, hidden_bound);
  for (double& v : p.output_weights)
    v = rng.uniform(-output_bound, output_bound);
  p.output_bias = rng.uniform(-output_bound, output_bound);
  return p;
}

double forward(const MLPParams& params, std::span<const double> x) {
  if (x.size() != params.input_dim)
    throw std::invalid_argument("forward: input dimension mismatch");
  const std::size_t d = params.input_dim;
  double out = params.output_bias;
  for (std::size_t j = 0; j < params.hidden_units; ++j) {
    const double* w = params.hidden_weights.data() + j * d;
    double z = params.hidden_biases[j];
    for (std::size_t i = 0; i < d; ++i) z += w[i] * x[i];
    out += params.output_weights[j] * std::tanh(z);
  }
  return out;
}

double mse_loss(const MLPParams& params, const RegressionDataset& data) {
  if (data.rows == 0) throw std::invalid_argument("mse_loss: empty dataset");
  double sse = 0.0;
  for (std::size_t r = 0; r < data.rows; ++r) {
    const double e = data.targets[r] - forward(params, data.row(r));
    sse += e * e;
  }
  return sse / static_cast<double>(data.rows);
}

namespace {

// Accumulates d(err^2)/d(params) for one pattern into grad, scaled by
// `scale` (2/N for the batch MSE gradient, 2 for a per-pattern update).
void accumulate_gradient(const MLPParams& params, std::span<const double> x,
                         double target, double scale, MLPParams& grad,
                         std::vector<double>& activations) {
  const std::size_t d = params.input_dim;
  const std::size_t h = params.hidden_units;
  double out = params.output_bias;
  for (std::size_t j = 0; j < h; ++j) {
    const double* w = params.hidden_weights.data() + j * d;
    double z = params.hidden_biases[j];
    for (std::size_t i = 0; i < d; ++i) z += w[i] * x[i];
    activations[j] = std::tanh(z);
    out += params.output_weights[j] * activations[j];
  }
  const double delta = scale * (out - target);
  grad.output_bias += delta;
  for (std::size_t j = 0; j < h; ++j) {
    const double a = activations[j];
    grad.output_weights[j] += delta * a;
    const double back = delta * params.output_weights[j] * (1.0 - a * a);
    grad.hidden_biases[j] += back;
    double* gw = grad.hidden_weights.data() + j * d;
    for (std::size_t i = 0; i < d; ++i) gw[i] += back * x[i];
  }
}

MLPParams zeros_like(const MLPParams& params) {
  MLPParams g;
  g.input_dim = params.input_dim;
  g.hidden_units = params.hidden_units;
  g.hidden_weights.assign(params.hidden_weights.size(), 0.0);
  g.hidden_biases.assign(params.hidden_units, 0.0);
  g.output_weights.assign(params.hidden_units, 0.0);
  g.output_bias = 0.0;
  return g;
}

void fill_zero(MLPParams& g) {
  std::fill(g.hidden_weights.begin(), g.hidden_weights.end(), 0.0);
  std::fill(g.hidden_biases.begin(), g.hidden_biases.end(), 0.0);
  std::fill(g.output_weights.begin(), g.output_weights.end(), 0.0);
  g.output_bias = 0.0;
}

// In-place step on the squared error of a single pattern; hidden deltas use
// the pre-update output weights.
void per_pattern_update(MLPParams& params, std::span<const double> x,
                        double target, double lr,
                        std::vector<double>& activations) {
  const std::size_t d = params.input_dim;
  const std::size_t h = params.hidden_units;
  double out = params.output_bias;
  for (std::size_t j = 0; j < h; ++j) {
    const double* w = params.hidden_weights.data() + j * d;
    double z = params.hidden_biases[j];
    for (std::size_t i = 0; i < d; ++i) z += w[i] * x[i];
    activations[j] = std::tanh(z);
    out += params.output_weights[j] * activations[j];
  }
  const double delta = 2.0 * (out - target);
  params.output_bias -= lr * delta;
  for (std::size_t j = 0; j < h; ++j) {
    const double a = activations[j];
    const double back = delta * params.output_weights[j] * (1.0 - a * a);
    params.output_weights[j] -= lr * delta * a;
    params.hidden_biases[j] -= lr * back;
    double* w = params.hidden_weights.data() + j * d;
    for (std::size_t i = 0; i < d; ++i) w[i] -= lr * back * x[i];
  }
}

void axpy(MLPParams& params, double a, const MLPParams& direction) {
  for (std::size_t i = 0; i < params.hidden_weights.size(); ++i)
    params.hidden_weights[i] += a * direction.hidden_weights[i];
  for (std::size_t j = 0; j < params.hidden_units; ++j) {
    params.hidden_biases[j] += a * direction.hidden_biases[j];
    params.output_weights[j] += a * direction.output_weights[j];
  }
  params.output_bias += a * direction.output_bias;
}

}  // namespace

MLPParams mse_gradient(const MLPParams& params, const RegressionDataset& data) {
  if (data.rows == 0)
    throw std::invalid_argument("mse_gradient: empty dataset");
  if (data.cols != params.input_dim)
    throw std::invalid_argument("mse_gradient: input dimension mismatch");
  MLPParams grad = zeros_like(params);
  std::vector<double> activations(params.hidden_units);
  const double scale = 2.0 / static_cast<double>(data.rows);
  for (std::size_t r = 0; r < data.rows; ++r)
    accumulate_gradient(params, data.row(r), data.targets[r], scale, grad,
                        activations);
  return grad;
}

SnapshotStore train_with_snapshots(const RegressionDataset& data,
                                   const TrainConfig& cfg) {
  cfg.validate();
  if (data.rows == 0)
    throw std::invalid_argument("train_with_snapshots: empty dataset");

  MLPParams params =
      init_params(data.cols, cfg.hidden_units, derive_seed(cfg.seed, 0));
  Rng order_rng(derive_seed(cfg.seed, 1));

  SnapshotStore store;
  store.input_dim = data.cols;
  store.hidden_units = cfg.hidden_units;
  store.snapshots.reserve(cfg.snapshot_count);
  store.epoch_of.reserve(cfg.snapshot_count);
  store.train_losses.reserve(cfg.snapshot_count);

  const std::size_t epochs_per_snapshot = cfg.total_epochs / cfg.snapshot_count;
  std::vector<double> activations(cfg.hidden_units);
  std::vector<std::size_t> order(data.rows);
  std::iota(order.begin(), order.end(), std::size_t{0});
  MLPParams grad = zeros_like(params);

  for (std::size_t epoch = 1; epoch <= cfg.total_epochs; ++epoch) {
    if (cfg.batch_mode == BatchMode::full_batch) {
      fill_zero(grad);
      const double scale = 2.0 / static_cast<double>(data.rows);
      for (std::size_t r = 0; r < data.rows; ++r)
        accumulate_gradient(params, data.row(r), data.targets[r], scale, grad,
                            activations);
      axpy(params, -cfg.learning_rate, grad);
    } else {
      // Seeded Fisher-Yates reshuffle each epoch.
      for (std::size_t i = data.rows; i > 1; --i)
        std::swap(order[i - 1], order[order_rng.index(i)]);
      for (std::size_t r : order)
        per_pattern_update(params, data.row(r), data.targets[r],
                           cfg.learning_rate, activations);
    }

    if (epoch % epochs_per_snapshot == 0) {
      const double loss = mse_loss(params, data);
      if (!std::isfinite(loss)) throw TrainingDiverged(epoch);
      store.snapshots.push_back(params);
      store.epoch_of.push_back(epoch);
      store.train_losses.push_back(loss);
    }
  }
  store.validate();
  return store;
}

}  // namespace ensnap
