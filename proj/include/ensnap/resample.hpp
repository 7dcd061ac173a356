#ifndef ENSNAP_RESAMPLE_HPP
#define ENSNAP_RESAMPLE_HPP

#include <cstdint>
#include <utility>
#include <vector>

namespace ensnap {

/// M with-replacement re-samples of {0..N-1} plus the out-of-bag complement
/// of each and the membership matrix gamma[p][n] (pattern p unseen by net n).
struct BootstrapPlan {
  std::size_t data_size = 0;    // N
  std::size_t ensemble_size = 0;  // M
  std::vector<std::vector<std::size_t>> train_indices;  // M multisets, size N
  std::vector<std::vector<std::size_t>> oob_indices;    // M sorted sets
  std::vector<std::uint8_t> gamma;  // N x M, row-major

  bool in_oob(std::size_t pattern, std::size_t net) const {
    return gamma[pattern * ensemble_size + net] != 0;
  }
  void validate() const;
};

BootstrapPlan make_bootstrap_plan(std::size_t data_size,
                                  std::size_t ensemble_size,
                                  std::uint64_t seed);

/// Disjoint, exhaustive (learn, validation) index partition with
/// |validation| = round(fraction * N).
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> external_split(
    std::size_t data_size, double fraction, std::uint64_t seed);

/// Per-pattern aggregation weights w[p][n] = gamma[p][n] / sum_n gamma[p][n].
/// Patterns that appear in every re-sample have no out-of-bag coverage; their
/// rows are zero and their indices land in `uncovered`.
struct OobWeights {
  std::size_t rows = 0;  // N
  std::size_t cols = 0;  // M
  std::vector<double> w;  // N x M, row-major
  std::vector<std::size_t> uncovered;

  double at(std::size_t pattern, std::size_t net) const {
    return w[pattern * cols + net];
  }
};

OobWeights oob_prediction_weights(const BootstrapPlan& plan);

}  // namespace ensnap

#endif
