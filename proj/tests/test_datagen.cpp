#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "ensnap/datagen.hpp"
#include "ensnap/dataset.hpp"
#include "oracles.hpp"

using namespace ensnap;

namespace {

std::vector<double> pad10(std::vector<double> head) {
  head.resize(10, 0.0);
  return head;
}

// Empirical noise power / signal power, recomputing the clean signal per row.
template <typename Signal>
double measured_ratio(const RegressionDataset& data, Signal signal) {
  std::vector<double> clean(data.rows);
  double noise_power = 0.0;
  for (std::size_t r = 0; r < data.rows; ++r) {
    clean[r] = signal(data.row(r));
    const double d = data.targets[r] - clean[r];
    noise_power += d * d;
  }
  noise_power /= static_cast<double>(data.rows);
  return noise_power / variance_of(clean);
}

}  // namespace

TEST_CASE("friedman1 point values") {
  CHECK(friedman1_signal(pad10({0, 0, 0, 0, 0})) == 5.0);
  CHECK(friedman1_signal(pad10({1, 0, 0.5, 0, 0})) == 0.0);
  const auto x = pad10({1, 0.5, 0.5, 0, 0});
  CHECK(friedman1_signal(x, false) ==
        doctest::Approx(10.0 * std::sin(0.5)).epsilon(1e-14));
  CHECK(friedman1_signal(x, true) ==
        doctest::Approx(10.0 * std::sin(std::numbers::pi * 0.5))
            .epsilon(1e-14));
}

TEST_CASE("friedman1 generator shape, bounds, determinism") {
  const auto a = gen_friedman1(500, NoiseSpec::none(), 21);
  const auto b = gen_friedman1(500, NoiseSpec::none(), 21);
  CHECK(a.rows == 500);
  CHECK(a.cols == 10);
  CHECK(a.inputs == b.inputs);
  CHECK(a.targets == b.targets);
  for (double v : a.inputs) {
    CHECK(v >= 0.0);
    CHECK(v < 1.0);
  }
  const auto c = gen_friedman1(500, NoiseSpec::none(), 22);
  CHECK(a.targets != c.targets);
}

TEST_CASE("friedman1 noise-free targets regenerate from inputs") {
  const auto data = gen_friedman1(300, NoiseSpec::none(), 5);
  CHECK(data.noise_sigma == 0.0);
  for (std::size_t r = 0; r < data.rows; ++r) {
    const double t = friedman1_signal(data.row(r));
    CHECK(std::abs(data.targets[r] - t) <=
          1e-12 * std::max(1.0, std::abs(t)));
  }
}

TEST_CASE("friedman1 takes absolute sigma only") {
  CHECK_THROWS_AS(gen_friedman1(10, NoiseSpec::noise_to_signal(1.0 / 9.0), 1),
                  std::invalid_argument);
  const auto noisy = gen_friedman1(20000, NoiseSpec::gaussian_sigma(1.0), 8);
  CHECK(noisy.noise_sigma == 1.0);
  double acc = 0.0;
  for (std::size_t r = 0; r < noisy.rows; ++r) {
    const double d = noisy.targets[r] - friedman1_signal(noisy.row(r));
    acc += d * d;
  }
  CHECK(acc / static_cast<double>(noisy.rows) ==
        doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("friedman1 cached signal variance matches fresh monte carlo") {
  const auto sample = gen_friedman1(1000000, NoiseSpec::none(), 999);
  const double mc = variance_of(sample.targets);
  CHECK(friedman1_signal_variance() == doctest::Approx(mc).epsilon(0.01));
}

TEST_CASE("friedman2 printed-formula value and clipping") {
  const double pi = std::numbers::pi;
  const std::vector<double> x{0.0, 40.0 * pi, 1.0, 11.0};
  const double expected =
      std::sqrt(40.0 * pi - std::pow(40.0 * pi * 11.0, -2.0));
  CHECK(friedman2_signal(x) == doctest::Approx(expected).epsilon(1e-13));
  CHECK(expected == doctest::Approx(11.21).epsilon(1e-3));

  bool clipped = false;
  const std::vector<double> bad{0.0, 126.0, 1e-9, 1.0};
  CHECK(friedman2_signal(bad, &clipped) == 0.0);
  CHECK(clipped);
}

TEST_CASE("friedman2 noise calibration") {
  CHECK_THROWS_AS(gen_friedman2(10, NoiseSpec::gaussian_sigma(1.0), 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(NoiseSpec::noise_to_signal(-0.1), std::invalid_argument);
  CHECK(gen_friedman2(100, NoiseSpec::noise_to_signal(0.0), 2).noise_sigma ==
        0.0);

  const auto data = gen_friedman2(100000, NoiseSpec::noise_to_signal(1.0 / 9.0), 31);
  const double ratio = measured_ratio(
      data, [](std::span<const double> row) { return friedman2_signal(row); });
  CHECK(ratio >= 0.10);
  CHECK(ratio <= 0.125);

  const auto generic = gen_friedman2(100000, NoiseSpec::noise_to_signal(0.2), 32);
  const double generic_ratio = measured_ratio(
      generic,
      [](std::span<const double> row) { return friedman2_signal(row); });
  CHECK(generic_ratio == doctest::Approx(0.2).epsilon(0.15));
}

TEST_CASE("friedman3 arctan limits") {
  // 64 * 2^-18 equals 2^-12 = (64 * 1)^-2 exactly, so the numerator is zero.
  const std::vector<double> zero{2.0, 64.0, std::ldexp(1.0, -18), 1.0};
  CHECK(friedman3_signal(zero) == 0.0);

  const std::vector<double> steep{1e-300, 64.0, 0.5, 1.0};
  const double y = friedman3_signal(steep);
  CHECK(std::isfinite(y));
  CHECK(y == doctest::Approx(std::numbers::pi / 2.0).epsilon(1e-12));
}

TEST_CASE("friedman3 noise calibration") {
  const auto data = gen_friedman3(100000, NoiseSpec::noise_to_signal(1.0 / 3.0), 41);
  const double ratio = measured_ratio(
      data, [](std::span<const double> row) { return friedman3_signal(row); });
  CHECK(ratio >= 0.30);
  CHECK(ratio <= 0.37);
  for (double t : data.targets) CHECK(std::isfinite(t));
}

TEST_CASE("ikeda map iterates") {
  const std::complex<double> z1 = ikeda_step({0.0, 0.0});
  CHECK(z1.real() == 1.0);
  CHECK(z1.imag() == 0.0);

  const std::complex<double> z2 = ikeda_step(z1);
  const double angle = 0.4 - 6.0 / (1.0 + 1.0);
  CHECK(z2.real() == doctest::Approx(1.0 + 0.9 * std::cos(angle)).epsilon(1e-12));
  CHECK(z2.imag() == doctest::Approx(0.9 * std::sin(angle)).epsilon(1e-12));
  CHECK(z2.real() == doctest::Approx(0.229).epsilon(0.005));

  std::complex<double> z{0.1, 0.1};
  double top = 0.0;
  for (int i = 0; i < 100000; ++i) {
    z = ikeda_step(z);
    top = std::max(top, std::abs(z));
  }
  CHECK(top <= 11.0);
}

TEST_CASE("ikeda series generation") {
  const auto a = gen_ikeda(1000, 100, 17);
  const auto b = gen_ikeda(1000, 100, 17);
  const auto c = gen_ikeda(1000, 100, 18);
  CHECK(a.size() == 1000);
  CHECK(a == b);
  CHECK(a != c);
  for (double v : a) CHECK(std::abs(v) <= 11.0);
}

TEST_CASE("mackey-glass derivative anchors") {
  CHECK(mackey_glass_deriv(1.2, 0.0) == -(0.1 * 1.2));
  CHECK(mackey_glass_deriv(1.0, 1.0) == 0.0);
}

TEST_CASE("mackey-glass series statistics against a finer integrator") {
  MackeyGlassConfig cfg;
  const auto series = gen_mackey_glass(10000, cfg, 1);
  CHECK(series.size() == 10000);
  const double mean = mean_of(series);
  CHECK(mean >= 0.8);
  CHECK(mean <= 1.1);

  const auto reference = oracle::euler_mackey_glass(
      10000, cfg.delay, cfg.dt / 10.0, cfg.sample_stride * 10,
      cfg.burn_in_time, cfg.x0);
  const double ref_mean = mean_of(reference);
  CHECK(ref_mean >= 0.8);
  CHECK(ref_mean <= 1.1);
  CHECK(std::abs(mean - ref_mean) < 0.05);
}

TEST_CASE("mackey-glass config validation and jitter") {
  MackeyGlassConfig bad;
  bad.dt = 0.0;
  CHECK_THROWS_AS(gen_mackey_glass(10, bad, 1), std::invalid_argument);
  bad = MackeyGlassConfig{};
  bad.sample_stride = 0;
  CHECK_THROWS_AS(gen_mackey_glass(10, bad, 1), std::invalid_argument);

  MackeyGlassConfig jittered;
  jittered.x0_jitter = 0.2;
  jittered.burn_in_time = 50.0;
  const auto a = gen_mackey_glass(50, jittered, 5);
  const auto b = gen_mackey_glass(50, jittered, 5);
  const auto c = gen_mackey_glass(50, jittered, 6);
  CHECK(a == b);
  CHECK(a != c);
}

TEST_CASE("series embedding") {
  const std::vector<double> series{1, 2, 3, 4, 5};
  const auto data = embed_series(series, {2, 1, 1});
  REQUIRE(data.rows == 3);
  CHECK(data.cols == 2);
  CHECK(data.input(0, 0) == 1.0);
  CHECK(data.input(0, 1) == 2.0);
  CHECK(data.targets[0] == 3.0);
  CHECK(data.input(2, 0) == 3.0);
  CHECK(data.input(2, 1) == 4.0);
  CHECK(data.targets[2] == 5.0);

  const std::vector<double> three{1, 2, 3};
  CHECK(embed_series(three, {1, 1, 1}).rows == 2);
  CHECK_THROWS_AS(embed_series(three, {4, 1, 1}), std::invalid_argument);

  Rng rng(77);
  for (int i = 0; i < 20; ++i) {
    SeriesEmbedding spec{1 + rng.index(5), 1 + rng.index(4), 1 + rng.index(4)};
    const std::size_t len = spec.min_series_length() + rng.index(30);
    std::vector<double> s(len);
    for (double& v : s) v = rng.uniform();
    CHECK(embed_series(s, spec).rows ==
          len - (spec.dimension - 1) * spec.lag - spec.horizon);
    CHECK(spec.output_rows(len) ==
          len - (spec.dimension - 1) * spec.lag - spec.horizon);
  }
}

TEST_CASE("noise spec labels") {
  CHECK(NoiseSpec::none().label() == "none");
  CHECK(NoiseSpec::gaussian_sigma(1.0).label() == "sigma=1");
  CHECK(NoiseSpec::noise_to_signal(0.25).label() == "ratio=0.25");
  CHECK_THROWS_AS(NoiseSpec::gaussian_sigma(-1.0), std::invalid_argument);
}
