#ifndef ENSNAP_DATASET_HPP
#define ENSNAP_DATASET_HPP

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace ensnap {

/// The universal data carrier: an N x d input matrix plus a target vector.
struct RegressionDataset {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> inputs;  // row-major, rows * cols
  std::vector<double> targets;
  std::string name;
  double noise_sigma = 0.0;     // std. dev. of the additive target noise
  std::size_t clipped_rows = 0; // Friedman #2 rows whose radicand was clipped

  double input(std::size_t r, std::size_t c) const {
    return inputs[r * cols + c];
  }
  std::span<const double> row(std::size_t r) const {
    return {inputs.data() + r * cols, cols};
  }

  /// Throws std::invalid_argument on shape mismatch or non-finite values.
  void validate() const;

  /// New dataset holding the given rows (duplicates allowed, order kept).
  RegressionDataset gather(std::span<const std::size_t> row_ids) const;
};

/// Per-column input statistics plus target statistics, computed on one
/// dataset and applicable to others (train-derived, applied to test).
struct ColumnStats {
  std::vector<double> input_mean;
  std::vector<double> input_std;  // zero-variance columns get std 1
  double target_mean = 0.0;
  double target_std = 1.0;
};

ColumnStats compute_stats(const RegressionDataset& data);

/// In-place standardization of inputs and targets with the given statistics.
void apply_stats(RegressionDataset& data, const ColumnStats& stats);

/// In-place standardization of input columns only, statistics from the data
/// itself. Targets untouched.
void standardize_inputs(RegressionDataset& data);

double mean_of(std::span<const double> v);

/// Population variance (divide by N).
double variance_of(std::span<const double> v);

}  // namespace ensnap

#endif
