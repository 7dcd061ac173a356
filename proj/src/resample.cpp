#include "ensnap/resample.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ensnap/rng.hpp"

namespace ensnap {

void BootstrapPlan::validate() const {
  if (train_indices.size() != ensemble_size ||
      oob_indices.size() != ensemble_size ||
      gamma.size() != data_size * ensemble_size)
    throw std::invalid_argument("BootstrapPlan: shape mismatch");
  std::vector<std::uint8_t> seen(data_size);
  for (std::size_t n = 0; n < ensemble_size; ++n) {
    if (train_indices[n].size() != data_size)
      throw std::invalid_argument("BootstrapPlan: draw size != N");
    std::fill(seen.begin(), seen.end(), 0);
    for (std::size_t p : train_indices[n]) {
      if (p >= data_size)
        throw std::invalid_argument("BootstrapPlan: index out of range");
      seen[p] = 1;
    }
    for (std::size_t p = 0; p < data_size; ++p)
      if (static_cast<bool>(gamma[p * ensemble_size + n]) == static_cast<bool>(seen[p]))
        throw std::invalid_argument("BootstrapPlan: gamma inconsistent");
    for (std::size_t p : oob_indices[n])
      if (seen[p])
        throw std::invalid_argument("BootstrapPlan: oob index was drawn");
    std::size_t distinct = 0;
    for (std::uint8_t s : seen) distinct += s;
    if (distinct + oob_indices[n].size() != data_size)
      throw std::invalid_argument("BootstrapPlan: oob set incomplete");
  }
}

BootstrapPlan make_bootstrap_plan(std::size_t data_size,
                                  std::size_t ensemble_size,
                                  std::uint64_t seed) {
  if (data_size < 2)
    throw std::invalid_argument("make_bootstrap_plan: need N >= 2");
  if (ensemble_size < 1)
    throw std::invalid_argument("make_bootstrap_plan: need M >= 1");

  BootstrapPlan plan;
  plan.data_size = data_size;
  plan.ensemble_size = ensemble_size;
  plan.train_indices.resize(ensemble_size);
  plan.oob_indices.resize(ensemble_size);
  plan.gamma.assign(data_size * ensemble_size, 0);

  Rng rng(seed);
  std::vector<std::uint8_t> drawn(data_size);
  for (std::size_t n = 0; n < ensemble_size; ++n) {
    auto& train = plan.train_indices[n];
    train.resize(data_size);
    std::fill(drawn.begin(), drawn.end(), 0);
    for (std::size_t k = 0; k < data_size; ++k) {
      const std::size_t p = rng.index(data_size);
      train[k] = p;
      drawn[p] = 1;
    }
    for (std::size_t p = 0; p < data_size; ++p) {
      if (!drawn[p]) {
        plan.oob_indices[n].push_back(p);
        plan.gamma[p * ensemble_size + n] = 1;
      }
    }
  }
  return plan;
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> external_split(
    std::size_t data_size, double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction < 1.0))
    throw std::invalid_argument("external_split: fraction outside (0,1)");
  const auto val_size = static_cast<std::size_t>(
      std::lround(fraction * static_cast<double>(data_size)));
  if (val_size == 0)
    throw std::invalid_argument("external_split: empty validation set");
  if (val_size >= data_size)
    throw std::invalid_argument("external_split: empty learn set");

  std::vector<std::size_t> perm(data_size);
  for (std::size_t i = 0; i < data_size; ++i) perm[i] = i;
  Rng rng(seed);
  for (std::size_t i = data_size; i > 1; --i)
    std::swap(perm[i - 1], perm[rng.index(i)]);

  std::vector<std::size_t> validation(perm.begin(), perm.begin() + val_size);
  std::vector<std::size_t> learn(perm.begin() + val_size, perm.end());
  std::sort(validation.begin(), validation.end());
  std::sort(learn.begin(), learn.end());
  return {learn, validation};
}

OobWeights oob_prediction_weights(const BootstrapPlan& plan) {
  OobWeights out;
  out.rows = plan.data_size;
  out.cols = plan.ensemble_size;
  out.w.assign(out.rows * out.cols, 0.0);
  for (std::size_t p = 0; p < plan.data_size; ++p) {
    std::size_t support = 0;
    for (std::size_t n = 0; n < plan.ensemble_size; ++n)
      if (plan.in_oob(p, n)) ++support;
    if (support == 0) {
      out.uncovered.push_back(p);
      continue;
    }
    const double w = 1.0 / static_cast<double>(support);
    for (std::size_t n = 0; n < plan.ensemble_size; ++n)
      if (plan.in_oob(p, n)) out.w[p * out.cols + n] = w;
  }
  return out;
}

}  // namespace ensnap
