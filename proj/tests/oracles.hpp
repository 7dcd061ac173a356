#ifndef ENSNAP_TESTS_ORACLES_HPP
#define ENSNAP_TESTS_ORACLES_HPP

/// Reference implementations the tests compare the library against. They
/// work directly on the raw cube buffer with the index arithmetic written
/// out, so layout bugs and selector bugs cannot cancel each other.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "ensnap/cube.hpp"
#include "ensnap/resample.hpp"
#include "ensnap/rng.hpp"

namespace oracle {

inline double at(const ensnap::PredictionCube& c, std::size_t n, std::size_t t,
                 std::size_t p) {
  return c.values[(n * c.num_snapshots + t) * c.num_points + p];
}

inline double weight(const ensnap::PredictionCube& c, std::size_t p,
                     std::size_t n) {
  return c.oob_weights[p * c.num_nets + n];
}

/// Validation error of one net at one snapshot: all points in external
/// mode, only the net's held-out points in oob mode.
inline double net_curve(const ensnap::PredictionCube& c, std::size_t n,
                        std::size_t t, bool oob) {
  double sse = 0.0;
  for (std::size_t p = 0; p < c.num_points; ++p) {
    if (oob && weight(c, p, n) == 0.0) continue;
    const double d = at(c, n, t, p) - c.point_targets[p];
    sse += d * d;
  }
  return sse;
}

/// Error functional of a full snapshot assignment: oob-weighted ensemble
/// with uncovered points skipped, or the plain simple average.
inline double energy(const ensnap::PredictionCube& c,
                     const std::vector<std::size_t>& tau, bool oob) {
  double sse = 0.0;
  for (std::size_t p = 0; p < c.num_points; ++p) {
    double pred = 0.0;
    if (oob) {
      double support = 0.0;
      for (std::size_t n = 0; n < c.num_nets; ++n) {
        const double w = weight(c, p, n);
        if (w == 0.0) continue;
        pred += w * at(c, n, tau[n], p);
        support += w;
      }
      if (support == 0.0) continue;
    } else {
      for (std::size_t n = 0; n < c.num_nets; ++n)
        pred += 1.0 / static_cast<double>(c.num_nets) * at(c, n, tau[n], p);
    }
    const double d = pred - c.point_targets[p];
    sse += d * d;
  }
  return sse;
}

inline std::vector<std::size_t> bagging(const ensnap::PredictionCube& c,
                                        bool oob) {
  std::vector<std::size_t> tau(c.num_nets, 0);
  for (std::size_t n = 0; n < c.num_nets; ++n) {
    std::vector<double> curve(c.num_snapshots);
    for (std::size_t t = 0; t < c.num_snapshots; ++t)
      curve[t] = net_curve(c, n, t, oob);
    std::size_t best = 0;
    for (std::size_t t = 1; t < c.num_snapshots; ++t)
      if (curve[t] < curve[best]) best = t;
    tau[n] = best;
  }
  return tau;
}

inline std::vector<std::size_t> epoch(const ensnap::PredictionCube& c,
                                      bool oob) {
  std::size_t best = 0;
  double best_e = 0.0;
  for (std::size_t t = 0; t < c.num_snapshots; ++t) {
    const double e = energy(c, std::vector<std::size_t>(c.num_nets, t), oob);
    if (t == 0 || e < best_e) {
      best_e = e;
      best = t;
    }
  }
  return std::vector<std::size_t>(c.num_nets, best);
}

/// Snapshot-major scan: the common-snapshot oob prediction of every pattern
/// is formed once per t, then each net reads off its own restriction.
inline std::vector<std::size_t> neuralbag(const ensnap::PredictionCube& c) {
  const std::size_t nets = c.num_nets, snaps = c.num_snapshots,
                    points = c.num_points;
  std::vector<std::size_t> tau(nets, 0);
  std::vector<double> best(nets, 0.0);
  std::vector<double> pred(points), support(points);
  for (std::size_t t = 0; t < snaps; ++t) {
    for (std::size_t p = 0; p < points; ++p) {
      double acc = 0.0, cover = 0.0;
      for (std::size_t m = 0; m < nets; ++m) {
        const double w = weight(c, p, m);
        if (w == 0.0) continue;
        acc += w * at(c, m, t, p);
        cover += w;
      }
      pred[p] = acc;
      support[p] = cover;
    }
    for (std::size_t n = 0; n < nets; ++n) {
      double sse = 0.0;
      for (std::size_t p = 0; p < points; ++p) {
        if (weight(c, p, n) == 0.0 || support[p] == 0.0) continue;
        const double d = pred[p] - c.point_targets[p];
        sse += d * d;
      }
      if (t == 0 || sse < best[n]) {
        best[n] = sse;
        tau[n] = t;
      }
    }
  }
  return tau;
}

/// Stagewise scan with the frozen members kept as a running per-pattern sum.
inline std::vector<std::size_t> seca(const ensnap::PredictionCube& c,
                                     const std::vector<std::size_t>& order,
                                     bool oob) {
  std::vector<std::size_t> tau(c.num_nets, 0);
  std::vector<double> frozen(c.num_points, 0.0);
  for (std::size_t stage = 1; stage <= c.num_nets; ++stage) {
    const std::size_t net = order[stage - 1];
    std::size_t pick = 0;
    double best = 0.0;
    for (std::size_t t = 0; t < c.num_snapshots; ++t) {
      double sse = 0.0;
      for (std::size_t p = 0; p < c.num_points; ++p) {
        if (oob && weight(c, p, net) == 0.0) continue;
        const double avg =
            (at(c, net, t, p) + frozen[p]) / static_cast<double>(stage);
        const double d = avg - c.point_targets[p];
        sse += d * d;
      }
      if (t == 0 || sse < best) {
        best = sse;
        pick = t;
      }
    }
    tau[net] = pick;
    for (std::size_t p = 0; p < c.num_points; ++p)
      frozen[p] += at(c, net, pick, p);
  }
  return tau;
}

struct EnumeratedMin {
  std::vector<std::size_t> tau;
  double e = 0.0;
};

/// Odometer walk over all T^M assignments; first minimum wins ties.
inline EnumeratedMin exhaustive_minimum(const ensnap::PredictionCube& c,
                                        bool oob) {
  std::vector<std::size_t> tau(c.num_nets, 0);
  EnumeratedMin out{tau, energy(c, tau, oob)};
  while (true) {
    std::size_t i = 0;
    while (i < c.num_nets && ++tau[i] == c.num_snapshots) {
      tau[i] = 0;
      ++i;
    }
    if (i == c.num_nets) break;
    const double e = energy(c, tau, oob);
    if (e < out.e) {
      out.tau = tau;
      out.e = e;
    }
  }
  return out;
}

/// Random cube with optional oob weights taken from a real bootstrap plan
/// over the point set.
inline ensnap::PredictionCube random_cube(std::size_t nets, std::size_t snaps,
                                          std::size_t points,
                                          std::uint64_t seed, bool with_oob) {
  ensnap::Rng rng(seed);
  ensnap::PredictionCube cube;
  cube.num_nets = nets;
  cube.num_snapshots = snaps;
  cube.num_points = points;
  cube.values.resize(nets * snaps * points);
  for (double& v : cube.values) v = rng.uniform(-2.0, 2.0);
  cube.point_targets.resize(points);
  for (double& t : cube.point_targets) t = rng.uniform(-2.0, 2.0);
  if (with_oob) {
    const auto plan = ensnap::make_bootstrap_plan(points, nets, seed + 1);
    cube.oob_weights = ensnap::oob_prediction_weights(plan).w;
  }
  return cube;
}

/// Exact two-sided binomial p-value at p = 1/2 from Pascal's triangle.
inline double binomial_two_sided(std::size_t wins, std::size_t n) {
  std::vector<long double> row(n + 1, 0.0L);
  row[0] = 1.0L;
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = i; j > 0; --j) row[j] += row[j - 1];
  const long double denom = std::pow(2.0L, static_cast<long double>(n));
  long double lower = 0.0L, upper = 0.0L;
  for (std::size_t k = 0; k <= n; ++k) {
    if (k <= wins) lower += row[k];
    if (k >= wins) upper += row[k];
  }
  long double p = 2.0L * std::min(lower, upper) / denom;
  if (p > 1.0L) p = 1.0L;
  return static_cast<double>(p);
}

/// Independent forward pass with extended-precision accumulation.
inline double forward_net(const ensnap::MLPParams& net,
                          const std::vector<double>& x) {
  long double out = net.output_bias;
  for (std::size_t j = 0; j < net.hidden_units; ++j) {
    long double z = net.hidden_biases[j];
    for (std::size_t i = 0; i < net.input_dim; ++i)
      z += static_cast<long double>(net.hidden_weights[j * net.input_dim + i]) *
           x[i];
    out += static_cast<long double>(net.output_weights[j]) *
           std::tanh(static_cast<double>(z));
  }
  return static_cast<double>(out);
}

/// Forward-Euler reference for the delay equation, meant to be run at a
/// finer dt than the library integrator.
inline std::vector<double> euler_mackey_glass(std::size_t n, double delay,
                                              double dt, std::size_t stride,
                                              double burn_in_time, double x0) {
  const auto delay_steps =
      static_cast<std::size_t>(std::llround(delay / dt));
  const auto burn_steps =
      static_cast<std::size_t>(std::llround(burn_in_time / dt));
  std::vector<double> hist;
  hist.reserve(burn_steps + n * stride + 2);
  hist.push_back(x0);
  std::vector<double> out;
  out.reserve(n);
  std::size_t step = 0;
  while (out.size() < n) {
    const double x = hist.back();
    const double xd = step >= delay_steps ? hist[step - delay_steps] : 0.0;
    const double next =
        x + dt * (0.2 * xd / (1.0 + std::pow(xd, 10)) - 0.1 * x);
    hist.push_back(next);
    ++step;
    if (step > burn_steps && (step - burn_steps) % stride == 0)
      out.push_back(next);
  }
  return out;
}

}  // namespace oracle

#endif
