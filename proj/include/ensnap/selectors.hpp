#ifndef ENSNAP_SELECTORS_HPP
#define ENSNAP_SELECTORS_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ensnap/cube.hpp"

namespace ensnap {

struct SimAnnConfig {
  std::size_t steps = 0;      // 0 with defaults_for: p * T, p = 15
  double delta_scale = 0.0;   // 0 means T / 20
  double cooling_base = 0.995;
  std::uint64_t seed = 0;

  static SimAnnConfig defaults_for(std::size_t num_snapshots,
                                   std::uint64_t seed,
                                   std::size_t step_multiplier = 15);
};

/// Counts network prediction rows consumed by error evaluations, for
/// comparing selector costs.
struct SelectorStats {
  std::size_t net_evaluations = 0;
};

Selection select_bagging(const PredictionCube& cube, ValidationKind kind,
                         SelectorStats* stats = nullptr);

Selection select_epoch(const PredictionCube& cube, ValidationKind kind,
                       SelectorStats* stats = nullptr);

/// Out-of-bag only: net n stops where the oob-weighted ensemble, all nets
/// at a common snapshot, has minimal error over the patterns n held out.
Selection select_neuralbag(const PredictionCube& cube,
                           SelectorStats* stats = nullptr);

/// Stepwise construction in the given net order: each added net stops where
/// the growing simple-average ensemble has minimal validation error.
Selection select_seca(const PredictionCube& cube, ValidationKind kind,
                      std::span<const std::size_t> order,
                      SelectorStats* stats = nullptr);

Selection select_simann(const PredictionCube& cube, ValidationKind kind,
                        const SimAnnConfig& cfg, const Selection& start,
                        SelectorStats* stats = nullptr);

std::vector<std::size_t> identity_order(std::size_t count);
std::vector<std::size_t> shuffled_order(std::size_t count, std::uint64_t seed);

}  // namespace ensnap

#endif
