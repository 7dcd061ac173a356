#include "ensnap/selectors.hpp"

#include <cmath>
#include <stdexcept>

#include "ensnap/rng.hpp"

namespace ensnap {

namespace {

void tick(SelectorStats* stats, std::size_t rows) {
  if (stats) stats->net_evaluations += rows;
}

void require_oob(const PredictionCube& cube, const char* who) {
  if (!cube.has_oob_weights())
    throw std::invalid_argument(std::string(who) + ": cube has no oob weights");
}

// Ensemble error at a common snapshot under the mode's functional.
double common_tau_energy(const PredictionCube& cube, ValidationKind kind,
                         std::size_t tau, std::vector<std::size_t>& scratch) {
  scratch.assign(cube.num_nets, tau);
  if (kind == ValidationKind::out_of_bag)
    return oob_ensemble_sse(cube, scratch);
  Selection sel = Selection::uniform(scratch);
  return ensemble_sse(cube, sel);
}

double sweep_energy(const PredictionCube& cube, ValidationKind kind,
                    const std::vector<std::size_t>& tau) {
  if (kind == ValidationKind::out_of_bag) return oob_ensemble_sse(cube, tau);
  Selection sel = Selection::uniform(tau);
  return ensemble_sse(cube, sel);
}

}  // namespace

SimAnnConfig SimAnnConfig::defaults_for(std::size_t num_snapshots,
                                        std::uint64_t seed,
                                        std::size_t step_multiplier) {
  SimAnnConfig cfg;
  cfg.steps = step_multiplier * num_snapshots;
  cfg.delta_scale = static_cast<double>(num_snapshots) / 20.0;
  cfg.cooling_base = 0.995;
  cfg.seed = seed;
  return cfg;
}

Selection select_bagging(const PredictionCube& cube, ValidationKind kind,
                         SelectorStats* stats) {
  cube.validate();
  if (kind == ValidationKind::out_of_bag) require_oob(cube, "select_bagging");
  std::vector<std::size_t> tau(cube.num_nets, 0);
  for (std::size_t n = 0; n < cube.num_nets; ++n) {
    double best = per_net_val_sse(cube, n, 0, kind);
    tick(stats, 1);
    for (std::size_t t = 1; t < cube.num_snapshots; ++t) {
      const double e = per_net_val_sse(cube, n, t, kind);
      tick(stats, 1);
      if (e < best) {
        best = e;
        tau[n] = t;
      }
    }
  }
  return Selection::uniform(std::move(tau));
}

Selection select_epoch(const PredictionCube& cube, ValidationKind kind,
                       SelectorStats* stats) {
  cube.validate();
  if (kind == ValidationKind::out_of_bag) require_oob(cube, "select_epoch");
  std::vector<std::size_t> scratch;
  std::size_t best_tau = 0;
  double best = common_tau_energy(cube, kind, 0, scratch);
  tick(stats, cube.num_nets);
  for (std::size_t t = 1; t < cube.num_snapshots; ++t) {
    const double e = common_tau_energy(cube, kind, t, scratch);
    tick(stats, cube.num_nets);
    if (e < best) {
      best = e;
      best_tau = t;
    }
  }
  return Selection::uniform(
      std::vector<std::size_t>(cube.num_nets, best_tau));
}

Selection select_neuralbag(const PredictionCube& cube, SelectorStats* stats) {
  cube.validate();
  require_oob(cube, "select_neuralbag");
  std::vector<std::size_t> tau(cube.num_nets, 0);
  for (std::size_t n = 0; n < cube.num_nets; ++n) {
    double best = 0.0;
    for (std::size_t t = 0; t < cube.num_snapshots; ++t) {
      double sse = 0.0;
      for (std::size_t p = 0; p < cube.num_points; ++p) {
        if (cube.oob_weight(p, n) == 0.0) continue;
        double pred = 0.0;
        double support = 0.0;
        for (std::size_t m = 0; m < cube.num_nets; ++m) {
          const double w = cube.oob_weight(p, m);
          if (w == 0.0) continue;
          pred += w * cube.value(m, t, p);
          support += w;
        }
        if (support == 0.0) continue;
        const double d = pred - cube.point_targets[p];
        sse += d * d;
      }
      tick(stats, cube.num_nets);
      if (t == 0 || sse < best) {
        best = sse;
        tau[n] = t;
      }
    }
  }
  return Selection::uniform(std::move(tau));
}

Selection select_seca(const PredictionCube& cube, ValidationKind kind,
                      std::span<const std::size_t> order,
                      SelectorStats* stats) {
  cube.validate();
  if (kind == ValidationKind::out_of_bag) require_oob(cube, "select_seca");
  if (order.size() != cube.num_nets)
    throw std::invalid_argument("select_seca: order size mismatch");
  std::vector<std::uint8_t> seen(cube.num_nets, 0);
  for (std::size_t n : order) {
    if (n >= cube.num_nets || seen[n])
      throw std::invalid_argument("select_seca: order is not a permutation");
    seen[n] = 1;
  }

  std::vector<std::size_t> tau(cube.num_nets, 0);
  for (std::size_t stage = 1; stage <= cube.num_nets; ++stage) {
    const std::size_t net = order[stage - 1];
    std::size_t best_tau = 0;
    double best = 0.0;
    for (std::size_t t = 0; t < cube.num_snapshots; ++t) {
      double sse = 0.0;
      for (std::size_t p = 0; p < cube.num_points; ++p) {
        if (kind == ValidationKind::out_of_bag &&
            cube.oob_weight(p, net) == 0.0)
          continue;
        double sum = cube.value(net, t, p);
        for (std::size_t j = 0; j + 1 < stage; ++j)
          sum += cube.value(order[j], tau[order[j]], p);
        const double d = sum / static_cast<double>(stage) -
                         cube.point_targets[p];
        sse += d * d;
      }
      tick(stats, stage);
      if (t == 0 || sse < best) {
        best = sse;
        best_tau = t;
      }
    }
    tau[net] = best_tau;
  }
  return Selection::uniform(std::move(tau));
}

Selection select_simann(const PredictionCube& cube, ValidationKind kind,
                        const SimAnnConfig& cfg, const Selection& start,
                        SelectorStats* stats) {
  cube.validate();
  if (kind == ValidationKind::out_of_bag) require_oob(cube, "select_simann");
  start.validate(cube.num_snapshots);
  if (!(cfg.cooling_base > 0.0 && cfg.cooling_base < 1.0))
    throw std::invalid_argument("select_simann: cooling_base outside (0,1)");
  if (cfg.steps == 0) return start;

  const double scale = cfg.delta_scale > 0.0
                           ? cfg.delta_scale
                           : static_cast<double>(cube.num_snapshots) / 20.0;
  const auto t_max = static_cast<long>(cube.num_snapshots) - 1;

  std::vector<std::size_t> tau = start.tau;
  const double e_start = sweep_energy(cube, kind, tau);
  double e_cur = e_start;
  std::vector<std::size_t> best_tau = tau;
  double e_best = e_cur;

  Rng rng(cfg.seed);
  double cooling = 1.0;
  for (std::size_t q = 1; q <= cfg.steps; ++q) {
    cooling *= cfg.cooling_base;
    const std::size_t n = (q - 1) % cube.num_nets;
    const double r = rng.uniform(-1.0, 1.0);
    const auto cur = static_cast<long>(tau[n]);
    long idx = std::lround(static_cast<double>(cur) + r * scale);
    if (idx == cur) idx = cur + (r >= 0.0 ? 1 : -1);
    if (idx < 0) idx = 0;
    if (idx > t_max) idx = t_max;

    const std::size_t old = tau[n];
    tau[n] = static_cast<std::size_t>(idx);
    const double e_prop = sweep_energy(cube, kind, tau);
    tick(stats, cube.num_nets);
    const double delta = e_prop - e_cur;

    bool accept;
    if (delta < 0.0) {
      accept = true;
    } else {
      double prob;
      if (delta == 0.0)
        prob = 0.5;
      else if (e_start == 0.0)
        prob = 0.0;
      else
        prob = 1.0 / (1.0 + std::exp(2.0 * delta / (cooling * e_start)));
      accept = rng.uniform() < prob;
    }
    if (accept) {
      e_cur = e_prop;
      if (e_cur < e_best) {
        e_best = e_cur;
        best_tau = tau;
      }
    } else {
      tau[n] = old;
    }
  }
  return Selection::uniform(std::move(best_tau));
}

std::vector<std::size_t> identity_order(std::size_t count) {
  std::vector<std::size_t> order(count);
  for (std::size_t i = 0; i < count; ++i) order[i] = i;
  return order;
}

std::vector<std::size_t> shuffled_order(std::size_t count, std::uint64_t seed) {
  std::vector<std::size_t> order = identity_order(count);
  Rng rng(seed);
  for (std::size_t i = count; i > 1; --i)
    std::swap(order[i - 1], order[rng.index(i)]);
  return order;
}

}  // namespace ensnap
