#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "doctest.h"
#include "ensnap/cube.hpp"
#include "ensnap/datagen.hpp"
#include "ensnap/mlp.hpp"
#include "ensnap/rng.hpp"
#include "oracles.hpp"

using namespace ensnap;

TEST_CASE("selection construction and validation") {
  auto sel = Selection::uniform({1, 0, 2});
  CHECK(sel.weights == std::vector<double>(3, 1.0 / 3.0));
  sel.validate(3);
  CHECK_THROWS_AS(sel.validate(2), std::invalid_argument);  // tau 2 too big

  Selection bad = sel;
  bad.weights = {0.5, 0.2, 0.2};  // sums to 0.9
  CHECK_THROWS_AS(bad.validate(3), std::invalid_argument);
  bad.weights = {0.5, 0.7, -0.2};
  CHECK_THROWS_AS(bad.validate(3), std::invalid_argument);
  bad.weights.clear();
  CHECK_THROWS_AS(bad.validate(3), std::invalid_argument);
}

TEST_CASE("ensemble prediction and error on a hand instance") {
  PredictionCube cube;
  cube.num_nets = 2;
  cube.num_snapshots = 2;
  cube.num_points = 2;
  // net 0: tau0 -> (1,2), tau1 -> (3,4); net 1: tau0 -> (5,6), tau1 -> (7,8)
  cube.values = {1, 2, 3, 4, 5, 6, 7, 8};
  cube.point_targets = {2.0, 5.0};
  cube.validate();

  Selection sel;
  sel.tau = {1, 0};
  sel.weights = {0.25, 0.75};
  CHECK(ensemble_predict(cube, sel, 0) == 0.25 * 3 + 0.75 * 5);
  CHECK(ensemble_predict(cube, sel, 1) == 0.25 * 4 + 0.75 * 6);
  const double e0 = 0.25 * 3 + 0.75 * 5 - 2.0;
  const double e1 = 0.25 * 4 + 0.75 * 6 - 5.0;
  CHECK(ensemble_sse(cube, sel) == doctest::Approx(e0 * e0 + e1 * e1).epsilon(1e-15));

  // Perfect single-net selection has zero error.
  cube.point_targets = {3.0, 4.0};
  PredictionCube solo = cube;
  solo.num_nets = 1;
  solo.values = {1, 2, 3, 4};
  CHECK(ensemble_sse(solo, Selection::uniform({1})) == 0.0);
}

TEST_CASE("per-net validation error handles both modes") {
  auto cube = oracle::random_cube(3, 4, 10, 51, true);
  for (std::size_t n = 0; n < 3; ++n)
    for (std::size_t t = 0; t < 4; ++t) {
      CHECK(per_net_val_sse(cube, n, t, ValidationKind::external) ==
            oracle::net_curve(cube, n, t, false));
      CHECK(per_net_val_sse(cube, n, t, ValidationKind::out_of_bag) ==
            oracle::net_curve(cube, n, t, true));
    }
  CHECK_THROWS_AS(per_net_val_sse(cube, 3, 0, ValidationKind::external),
                  std::invalid_argument);
  CHECK_THROWS_AS(per_net_val_sse(cube, 0, 4, ValidationKind::external),
                  std::invalid_argument);
  cube.oob_weights.clear();
  CHECK_THROWS_AS(per_net_val_sse(cube, 0, 0, ValidationKind::out_of_bag),
                  std::invalid_argument);
}

TEST_CASE("oob ensemble error with full coverage equals the plain average") {
  auto cube = oracle::random_cube(4, 3, 6, 52, false);
  // Every net holds every point out: rows are uniform 1/M.
  cube.oob_weights.assign(cube.num_points * cube.num_nets, 1.0 / 4.0);
  cube.validate();
  const std::vector<std::size_t> tau{2, 0, 1, 2};
  const double direct = ensemble_sse(cube, Selection::uniform(tau));
  CHECK(oob_ensemble_sse(cube, tau) ==
        doctest::Approx(direct).epsilon(1e-12));
}

TEST_CASE("uncovered points are skipped") {
  auto cube = oracle::random_cube(2, 2, 3, 53, false);
  // Point 1 has no coverage at all.
  cube.oob_weights = {0.5, 0.5, 0.0, 0.0, 1.0, 0.0};
  cube.validate();
  const std::vector<std::size_t> tau{0, 1};
  double manual = 0.0;
  {
    const double pred = 0.5 * cube.value(0, 0, 0) + 0.5 * cube.value(1, 1, 0);
    const double d = pred - cube.point_targets[0];
    manual += d * d;
  }
  {
    const double d = cube.value(0, 0, 2) - cube.point_targets[2];
    manual += d * d;
  }
  CHECK(oob_ensemble_sse(cube, tau) == doctest::Approx(manual).epsilon(1e-14));

  PredictionCube no_weights = cube;
  no_weights.oob_weights.clear();
  CHECK_THROWS_AS(oob_ensemble_sse(no_weights, tau), std::invalid_argument);
}

TEST_CASE("ensemble error is invariant under net permutation") {
  const auto cube = oracle::random_cube(3, 3, 8, 54, false);
  PredictionCube permuted = cube;
  // Swap nets 0 and 2 wholesale.
  const std::size_t block = cube.num_snapshots * cube.num_points;
  std::copy(cube.values.begin(), cube.values.begin() + block,
            permuted.values.begin() + 2 * block);
  std::copy(cube.values.begin() + 2 * block, cube.values.end(),
            permuted.values.begin());

  const Selection sel = Selection::uniform({1, 2, 0});
  const Selection swapped = Selection::uniform({0, 2, 1});
  CHECK(ensemble_sse(cube, sel) ==
        doctest::Approx(ensemble_sse(permuted, swapped)).epsilon(1e-12));
}

TEST_CASE("predict_cube matches direct forward calls") {
  std::vector<SnapshotStore> stores;
  const std::size_t d = 4;
  for (int n = 0; n < 3; ++n) {
    SnapshotStore store;
    store.input_dim = d;
    store.hidden_units = 3;
    for (int t = 0; t < 2; ++t) {
      store.snapshots.push_back(init_params(d, 3, 100 + 10 * n + t));
      store.epoch_of.push_back(t + 1);
      store.train_losses.push_back(0.0);
    }
    stores.push_back(std::move(store));
  }
  Rng rng(55);
  std::vector<double> inputs(7 * d);
  for (double& v : inputs) v = rng.uniform(-1.0, 1.0);
  std::vector<double> targets(7, 0.0);

  const auto cube = predict_cube(stores, inputs, targets, d);
  CHECK(cube.num_nets == 3);
  CHECK(cube.num_snapshots == 2);
  CHECK(cube.num_points == 7);
  for (int i = 0; i < 1000; ++i) {
    const std::size_t n = rng.index(3), t = rng.index(2), p = rng.index(7);
    const std::span<const double> x(inputs.data() + p * d, d);
    CHECK(cube.value(n, t, p) == forward(stores[n].snapshots[t], x));
  }

  CHECK_THROWS_AS(predict_cube(stores, inputs, targets, 3),
                  std::invalid_argument);
  CHECK_THROWS_AS(predict_cube({}, inputs, targets, d), std::invalid_argument);
}

TEST_CASE("content hash tracks every buffer") {
  const auto cube = oracle::random_cube(2, 3, 5, 56, true);
  PredictionCube copy = cube;
  CHECK(cube.content_hash() == copy.content_hash());

  copy.values[7] = std::nextafter(copy.values[7], 2.0);
  CHECK(cube.content_hash() != copy.content_hash());

  copy = cube;
  copy.point_targets[0] += 1e-9;
  CHECK(cube.content_hash() != copy.content_hash());

  copy = cube;
  copy.oob_weights.clear();
  CHECK(cube.content_hash() != copy.content_hash());
}

TEST_CASE("cube validation rejects malformed instances") {
  auto cube = oracle::random_cube(2, 2, 4, 57, true);
  cube.validate();

  PredictionCube bad = cube;
  bad.values[0] = std::nan("");
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = cube;
  bad.values.pop_back();
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = cube;
  bad.oob_weights[0] = 0.9;  // breaks the row sum
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = cube;
  bad.num_points = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}
