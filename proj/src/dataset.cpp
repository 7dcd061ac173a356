#include "ensnap/dataset.hpp"

#include <cmath>
#include <stdexcept>

namespace ensnap {

void RegressionDataset::validate() const {
  if (inputs.size() != rows * cols)
    throw std::invalid_argument("dataset: input matrix size mismatch");
  if (targets.size() != rows)
    throw std::invalid_argument("dataset: input rows != target length");
  for (double v : inputs)
    if (!std::isfinite(v))
      throw std::invalid_argument("dataset: non-finite input value");
  for (double v : targets)
    if (!std::isfinite(v))
      throw std::invalid_argument("dataset: non-finite target value");
  if (noise_sigma < 0.0)
    throw std::invalid_argument("dataset: negative noise sigma");
}

RegressionDataset RegressionDataset::gather(
    std::span<const std::size_t> row_ids) const {
  RegressionDataset out;
  out.rows = row_ids.size();
  out.cols = cols;
  out.name = name;
  out.noise_sigma = noise_sigma;
  out.inputs.reserve(out.rows * cols);
  out.targets.reserve(out.rows);
  for (std::size_t r : row_ids) {
    if (r >= rows) throw std::out_of_range("gather: row index out of range");
    auto src = row(r);
    out.inputs.insert(out.inputs.end(), src.begin(), src.end());
    out.targets.push_back(targets[r]);
  }
  return out;
}

double mean_of(std::span<const double> v) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double variance_of(std::span<const double> v) {
  if (v.empty()) return 0.0;
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size());
}

ColumnStats compute_stats(const RegressionDataset& data) {
  ColumnStats st;
  st.input_mean.assign(data.cols, 0.0);
  st.input_std.assign(data.cols, 1.0);
  const auto n = static_cast<double>(data.rows);
  if (data.rows == 0) return st;
  for (std::size_t c = 0; c < data.cols; ++c) {
    double m = 0.0;
    for (std::size_t r = 0; r < data.rows; ++r) m += data.input(r, c);
    m /= n;
    double var = 0.0;
    for (std::size_t r = 0; r < data.rows; ++r) {
      const double d = data.input(r, c) - m;
      var += d * d;
    }
    var /= n;
    st.input_mean[c] = m;
    st.input_std[c] = var > 0.0 ? std::sqrt(var) : 1.0;
  }
  st.target_mean = mean_of(data.targets);
  const double tvar = variance_of(data.targets);
  st.target_std = tvar > 0.0 ? std::sqrt(tvar) : 1.0;
  return st;
}

void apply_stats(RegressionDataset& data, const ColumnStats& stats) {
  if (stats.input_mean.size() != data.cols)
    throw std::invalid_argument("apply_stats: column count mismatch");
  for (std::size_t r = 0; r < data.rows; ++r)
    for (std::size_t c = 0; c < data.cols; ++c)
      data.inputs[r * data.cols + c] =
          (data.inputs[r * data.cols + c] - stats.input_mean[c]) /
          stats.input_std[c];
  for (double& t : data.targets) t = (t - stats.target_mean) / stats.target_std;
}

void standardize_inputs(RegressionDataset& data) {
  ColumnStats st = compute_stats(data);
  st.target_mean = 0.0;
  st.target_std = 1.0;
  apply_stats(data, st);
}

}  // namespace ensnap
