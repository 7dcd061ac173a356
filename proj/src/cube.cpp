#include "ensnap/cube.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>

namespace ensnap {

void PredictionCube::validate() const {
  if (num_nets == 0 || num_snapshots == 0 || num_points == 0)
    throw std::invalid_argument("PredictionCube: empty dimension");
  if (values.size() != num_nets * num_snapshots * num_points)
    throw std::invalid_argument("PredictionCube: values size mismatch");
  if (point_targets.size() != num_points)
    throw std::invalid_argument("PredictionCube: targets size mismatch");
  for (double v : values)
    if (!std::isfinite(v))
      throw std::invalid_argument("PredictionCube: non-finite value");
  for (double t : point_targets)
    if (!std::isfinite(t))
      throw std::invalid_argument("PredictionCube: non-finite target");
  if (!oob_weights.empty()) {
    if (oob_weights.size() != num_points * num_nets)
      throw std::invalid_argument("PredictionCube: oob weights size mismatch");
    for (std::size_t p = 0; p < num_points; ++p) {
      double row = 0.0;
      for (std::size_t n = 0; n < num_nets; ++n) {
        const double w = oob_weight(p, n);
        if (w < 0.0 || !std::isfinite(w))
          throw std::invalid_argument("PredictionCube: bad oob weight");
        row += w;
      }
      if (row != 0.0 && std::abs(row - 1.0) > 1e-9)
        throw std::invalid_argument("PredictionCube: oob row not normalized");
    }
  }
}

std::uint64_t PredictionCube::content_hash() const {
  std::uint64_t h = 14695981039346656037ULL;
  auto mix = [&h](const void* data, std::size_t bytes) {
    const auto* b = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < bytes; ++i) {
      h ^= b[i];
      h *= 1099511628211ULL;
    }
  };
  const std::uint64_t dims[3] = {num_nets, num_snapshots, num_points};
  mix(dims, sizeof dims);
  mix(values.data(), values.size() * sizeof(double));
  mix(point_targets.data(), point_targets.size() * sizeof(double));
  mix(oob_weights.data(), oob_weights.size() * sizeof(double));
  return h;
}

Selection Selection::uniform(std::vector<std::size_t> tau) {
  Selection sel;
  const double w = 1.0 / static_cast<double>(tau.size());
  sel.weights.assign(tau.size(), w);
  sel.tau = std::move(tau);
  return sel;
}

void Selection::validate(std::size_t num_snapshots) const {
  if (tau.empty() || tau.size() != weights.size())
    throw std::invalid_argument("Selection: size mismatch");
  for (std::size_t t : tau)
    if (t >= num_snapshots)
      throw std::invalid_argument("Selection: snapshot index out of range");
  double sum = 0.0;
  for (double w : weights) {
    if (w < 0.0 || !std::isfinite(w))
      throw std::invalid_argument("Selection: bad weight");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw std::invalid_argument("Selection: weights do not sum to one");
}

double ensemble_predict(const PredictionCube& cube, const Selection& sel,
                        std::size_t point) {
  double out = 0.0;
  for (std::size_t n = 0; n < cube.num_nets; ++n)
    out += sel.weights[n] * cube.value(n, sel.tau[n], point);
  return out;
}

double ensemble_sse(const PredictionCube& cube, const Selection& sel) {
  double sse = 0.0;
  for (std::size_t p = 0; p < cube.num_points; ++p) {
    const double d = ensemble_predict(cube, sel, p) - cube.point_targets[p];
    sse += d * d;
  }
  return sse;
}

double oob_ensemble_sse(const PredictionCube& cube,
                        std::span<const std::size_t> tau) {
  if (!cube.has_oob_weights())
    throw std::invalid_argument("oob_ensemble_sse: cube has no oob weights");
  if (tau.size() != cube.num_nets)
    throw std::invalid_argument("oob_ensemble_sse: tau size mismatch");
  double sse = 0.0;
  for (std::size_t p = 0; p < cube.num_points; ++p) {
    double pred = 0.0;
    double support = 0.0;
    for (std::size_t n = 0; n < cube.num_nets; ++n) {
      const double w = cube.oob_weight(p, n);
      if (w == 0.0) continue;
      pred += w * cube.value(n, tau[n], p);
      support += w;
    }
    if (support == 0.0) continue;
    const double d = pred - cube.point_targets[p];
    sse += d * d;
  }
  return sse;
}

double per_net_val_sse(const PredictionCube& cube, std::size_t net,
                       std::size_t tau, ValidationKind kind) {
  if (net >= cube.num_nets)
    throw std::invalid_argument("per_net_val_sse: net out of range");
  if (tau >= cube.num_snapshots)
    throw std::invalid_argument("per_net_val_sse: tau out of range");
  if (kind == ValidationKind::out_of_bag && !cube.has_oob_weights())
    throw std::invalid_argument("per_net_val_sse: cube has no oob weights");
  double sse = 0.0;
  for (std::size_t p = 0; p < cube.num_points; ++p) {
    if (kind == ValidationKind::out_of_bag && cube.oob_weight(p, net) == 0.0)
      continue;
    const double d = cube.value(net, tau, p) - cube.point_targets[p];
    sse += d * d;
  }
  return sse;
}

PredictionCube predict_cube(const std::vector<SnapshotStore>& stores,
                            const std::vector<double>& inputs,
                            const std::vector<double>& targets,
                            std::size_t input_dim) {
  if (stores.empty()) throw std::invalid_argument("predict_cube: no stores");
  if (input_dim == 0 || inputs.size() % input_dim != 0)
    throw std::invalid_argument("predict_cube: bad input shape");
  const std::size_t points = inputs.size() / input_dim;
  if (targets.size() != points)
    throw std::invalid_argument("predict_cube: target count mismatch");
  const std::size_t snaps = stores.front().snapshots.size();
  for (const auto& st : stores) {
    if (st.input_dim != input_dim)
      throw std::invalid_argument("predict_cube: store input dim mismatch");
    if (st.snapshots.size() != snaps)
      throw std::invalid_argument("predict_cube: snapshot count mismatch");
  }

  PredictionCube cube;
  cube.num_nets = stores.size();
  cube.num_snapshots = snaps;
  cube.num_points = points;
  cube.point_targets = targets;
  cube.values.resize(cube.num_nets * snaps * points);
  for (std::size_t n = 0; n < stores.size(); ++n) {
    for (std::size_t t = 0; t < snaps; ++t) {
      const MLPParams& params = stores[n].snapshots[t];
      double* out = cube.values.data() + (n * snaps + t) * points;
      for (std::size_t p = 0; p < points; ++p)
        out[p] = forward(params,
                         std::span<const double>(inputs.data() + p * input_dim,
                                                 input_dim));
    }
  }
  return cube;
}

}  // namespace ensnap
