#ifndef ENSNAP_MLP_HPP
#define ENSNAP_MLP_HPP

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ensnap/dataset.hpp"

namespace ensnap {

/// Thrown when the training loss turns non-finite.
struct TrainingDiverged : std::runtime_error {
  std::size_t epoch;
  explicit TrainingDiverged(std::size_t at)
      : std::runtime_error("training loss diverged at epoch " +
                           std::to_string(at)),
        epoch(at) {}
};

/// One-hidden-layer perceptron, tanh hidden units, linear output.
struct MLPParams {
  std::size_t input_dim = 0;
  std::size_t hidden_units = 0;
  std::vector<double> hidden_weights;  // h x d, row-major
  std::vector<double> hidden_biases;   // h
  std::vector<double> output_weights;  // h
  double output_bias = 0.0;

  std::size_t scalar_count() const {
    return hidden_units * input_dim + 2 * hidden_units + 1;
  }
  void validate() const;
};

enum class BatchMode { full_batch, per_pattern };

struct TrainConfig {
  std::size_t hidden_units = 5;
  std::size_t total_epochs = 2000;
  std::size_t snapshot_count = 200;  // T
  double learning_rate = 0.01;
  BatchMode batch_mode = BatchMode::full_batch;
  std::uint64_t seed = 0;

  void validate() const;
};

/// The T intermediate parameter states of one training run, evenly spaced:
/// snapshot k holds the state after epoch (k+1) * total_epochs / T.
struct SnapshotStore {
  std::size_t input_dim = 0;
  std::size_t hidden_units = 0;
  std::vector<MLPParams> snapshots;
  std::vector<std::size_t> epoch_of;
  std::vector<double> train_losses;  // MSE on the training set per snapshot

  std::size_t size() const { return snapshots.size(); }
  void validate() const;
};

/// Uniform init on [-1/sqrt(fan_in), +1/sqrt(fan_in)] per layer.
MLPParams init_params(std::size_t input_dim, std::size_t hidden_units,
                      std::uint64_t seed);

double forward(const MLPParams& params, std::span<const double> x);

double mse_loss(const MLPParams& params, const RegressionDataset& data);

/// Analytic gradient of mse_loss with respect to every parameter, returned
/// in an MLPParams-shaped container.
MLPParams mse_gradient(const MLPParams& params, const RegressionDataset& data);

/// Gradient descent on squared error with a snapshot saved every
/// total_epochs / snapshot_count epochs. Throws TrainingDiverged if the
/// loss turns non-finite.
SnapshotStore train_with_snapshots(const RegressionDataset& data,
                                   const TrainConfig& cfg);

}  // namespace ensnap

#endif
