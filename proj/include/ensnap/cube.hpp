#ifndef ENSNAP_CUBE_HPP
#define ENSNAP_CUBE_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ensnap/mlp.hpp"

namespace ensnap {

/// Predictions of every net at every snapshot on a fixed point set,
/// laid out as values[(net * num_snapshots + tau) * num_points + point].
/// When oob_weights is non-empty (num_points x num_nets, rows summing to
/// one or to zero for uncovered points) the point set is the training set
/// and ensemble averages use only nets that held the point out of bag.
struct PredictionCube {
  std::size_t num_nets = 0;
  std::size_t num_snapshots = 0;
  std::size_t num_points = 0;
  std::vector<double> values;
  std::vector<double> point_targets;
  std::vector<double> oob_weights;

  bool has_oob_weights() const { return !oob_weights.empty(); }

  double value(std::size_t net, std::size_t tau, std::size_t point) const {
    return values[(net * num_snapshots + tau) * num_points + point];
  }

  double oob_weight(std::size_t point, std::size_t net) const {
    return oob_weights[point * num_nets + net];
  }

  void validate() const;
  std::uint64_t content_hash() const;
};

/// A choice of one snapshot per net plus combination weights.
struct Selection {
  std::vector<std::size_t> tau;
  std::vector<double> weights;

  static Selection uniform(std::vector<std::size_t> tau);
  void validate(std::size_t num_snapshots) const;
};

enum class ValidationKind { external, out_of_bag };

double ensemble_predict(const PredictionCube& cube, const Selection& sel,
                        std::size_t point);

/// Sum of squared errors of the weighted ensemble over all cube points.
double ensemble_sse(const PredictionCube& cube, const Selection& sel);

/// Out-of-bag ensemble error: each point is predicted by averaging only the
/// nets that held it out, at their currently assigned snapshots. Points no
/// net held out are skipped.
double oob_ensemble_sse(const PredictionCube& cube,
                        std::span<const std::size_t> tau);

/// Single-net validation error curve support: squared error of one net at
/// one snapshot over its validation points. With external validation every
/// cube point counts; with out_of_bag only points the net held out count.
double per_net_val_sse(const PredictionCube& cube, std::size_t net,
                       std::size_t tau, ValidationKind kind);

/// Evaluate every snapshot of every store on a point set.
PredictionCube predict_cube(const std::vector<SnapshotStore>& stores,
                            const std::vector<double>& inputs,
                            const std::vector<double>& targets,
                            std::size_t input_dim);

}  // namespace ensnap

#endif
