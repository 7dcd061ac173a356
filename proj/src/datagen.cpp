#include "ensnap/datagen.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "ensnap/rng.hpp"

namespace ensnap {

namespace {

constexpr std::uint64_t kCalibrationSeed = 0xCA11B7A7E5EEDULL;
constexpr std::size_t kCalibrationSamples = 1'000'000;

void draw_friedman1_inputs(Rng& rng, double* x) {
  for (std::size_t c = 0; c < 10; ++c) x[c] = rng.uniform();
}

void draw_friedman23_inputs(Rng& rng, double* x) {
  x[0] = rng.uniform(0.0, 100.0);
  x[1] = rng.uniform(20.0, 280.0) * 2.0 * std::numbers::pi;
  x[2] = rng.uniform(0.0, 1.0);
  x[3] = rng.uniform(1.0, 11.0);
}

template <typename DrawFn, typename SignalFn>
double monte_carlo_signal_variance(DrawFn&& draw, SignalFn&& signal,
                                   std::size_t input_dim) {
  Rng rng(kCalibrationSeed);
  std::vector<double> x(input_dim);
  double sum = 0.0, sumsq = 0.0;
  for (std::size_t i = 0; i < kCalibrationSamples; ++i) {
    draw(rng, x.data());
    const double t = signal(x);
    sum += t;
    sumsq += t * t;
  }
  const auto n = static_cast<double>(kCalibrationSamples);
  const double mean = sum / n;
  return sumsq / n - mean * mean;
}

}  // namespace

NoiseSpec NoiseSpec::gaussian_sigma(double sigma) {
  if (sigma < 0.0)
    throw std::invalid_argument("NoiseSpec: sigma must be >= 0");
  return {Kind::gaussian_sigma, sigma};
}

NoiseSpec NoiseSpec::noise_to_signal(double ratio) {
  if (ratio < 0.0)
    throw std::invalid_argument("NoiseSpec: ratio must be >= 0");
  return {Kind::noise_to_signal, ratio};
}

std::string NoiseSpec::label() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::none:
      return "none";
    case Kind::gaussian_sigma:
      os << "sigma=" << value;
      return os.str();
    case Kind::noise_to_signal:
      os << "ratio=" << value;
      return os.str();
  }
  return "?";
}

std::size_t SeriesEmbedding::min_series_length() const {
  return (dimension - 1) * lag + horizon + 1;
}

std::size_t SeriesEmbedding::output_rows(std::size_t series_length) const {
  if (dimension < 1 || lag < 1 || horizon < 1)
    throw std::invalid_argument("SeriesEmbedding: fields must be positive");
  if (series_length < min_series_length())
    throw std::invalid_argument("embed_series: series too short");
  return series_length - (dimension - 1) * lag - horizon;
}

double friedman1_signal(std::span<const double> x, bool pi_factor) {
  const double arg = pi_factor ? std::numbers::pi * x[0] * x[1] : x[0] * x[1];
  return 10.0 * std::sin(arg) + 20.0 * (x[2] - 0.5) * (x[2] - 0.5) +
         10.0 * x[3] + 5.0 * x[4];
}

double friedman2_signal(std::span<const double> x, bool* clipped) {
  const double inv = 1.0 / (x[1] * x[3]);
  double radicand = x[1] * x[2] - inv * inv;
  if (clipped) *clipped = radicand < 0.0;
  if (radicand < 0.0) radicand = 0.0;
  return x[0] * x[0] + std::sqrt(radicand);
}

double friedman3_signal(std::span<const double> x) {
  const double inv = 1.0 / (x[1] * x[3]);
  const double numerator = x[1] * x[2] - inv * inv;
  // atan2 keeps the x1 -> 0+ limit finite (pi/2 for a positive numerator).
  return std::atan2(numerator, x[0]);
}

double friedman1_signal_variance(bool pi_factor) {
  if (pi_factor) {
    static const double var = monte_carlo_signal_variance(
        draw_friedman1_inputs,
        [](const std::vector<double>& x) { return friedman1_signal(x, true); },
        10);
    return var;
  }
  static const double var = monte_carlo_signal_variance(
      draw_friedman1_inputs,
      [](const std::vector<double>& x) { return friedman1_signal(x, false); },
      10);
  return var;
}

double friedman2_signal_variance() {
  static const double var = monte_carlo_signal_variance(
      draw_friedman23_inputs,
      [](const std::vector<double>& x) { return friedman2_signal(x); }, 4);
  return var;
}

double friedman3_signal_variance() {
  static const double var = monte_carlo_signal_variance(
      draw_friedman23_inputs,
      [](const std::vector<double>& x) { return friedman3_signal(x); }, 4);
  return var;
}

RegressionDataset gen_friedman1(std::size_t n, const NoiseSpec& noise,
                                std::uint64_t seed,
                                const Friedman1Options& opts) {
  if (n < 1) throw std::invalid_argument("gen_friedman1: n must be >= 1");
  if (noise.kind == NoiseSpec::Kind::noise_to_signal)
    throw std::invalid_argument(
        "gen_friedman1: noise is given as an absolute sigma, not a ratio");
  RegressionDataset data;
  data.rows = n;
  data.cols = 10;
  data.name = "friedman1";
  data.noise_sigma =
      noise.kind == NoiseSpec::Kind::gaussian_sigma ? noise.value : 0.0;
  data.inputs.resize(n * 10);
  data.targets.resize(n);
  Rng rng(seed);
  for (std::size_t r = 0; r < n; ++r) {
    double* x = data.inputs.data() + r * 10;
    draw_friedman1_inputs(rng, x);
    double t = friedman1_signal({x, 10}, opts.pi_factor);
    if (data.noise_sigma > 0.0) t += data.noise_sigma * rng.normal();
    data.targets[r] = t;
  }
  return data;
}

namespace {

RegressionDataset gen_friedman23(std::size_t n, const NoiseSpec& noise,
                                 std::uint64_t seed, bool third) {
  if (n < 1) throw std::invalid_argument("gen_friedman: n must be >= 1");
  if (noise.kind == NoiseSpec::Kind::gaussian_sigma)
    throw std::invalid_argument(
        "gen_friedman2/3: noise is given as a noise-to-signal ratio");
  RegressionDataset data;
  data.rows = n;
  data.cols = 4;
  data.name = third ? "friedman3" : "friedman2";
  if (noise.kind == NoiseSpec::Kind::noise_to_signal && noise.value > 0.0) {
    const double signal_var =
        third ? friedman3_signal_variance() : friedman2_signal_variance();
    data.noise_sigma = std::sqrt(noise.value * signal_var);
  }
  data.inputs.resize(n * 4);
  data.targets.resize(n);
  Rng rng(seed);
  for (std::size_t r = 0; r < n; ++r) {
    double* x = data.inputs.data() + r * 4;
    draw_friedman23_inputs(rng, x);
    double t;
    if (third) {
      t = friedman3_signal({x, 4});
    } else {
      bool clipped = false;
      t = friedman2_signal({x, 4}, &clipped);
      if (clipped) ++data.clipped_rows;
    }
    if (data.noise_sigma > 0.0) t += data.noise_sigma * rng.normal();
    data.targets[r] = t;
  }
  return data;
}

}  // namespace

RegressionDataset gen_friedman2(std::size_t n, const NoiseSpec& noise,
                                std::uint64_t seed) {
  return gen_friedman23(n, noise, seed, false);
}

RegressionDataset gen_friedman3(std::size_t n, const NoiseSpec& noise,
                                std::uint64_t seed) {
  return gen_friedman23(n, noise, seed, true);
}

std::complex<double> ikeda_step(std::complex<double> z) {
  const std::complex<double> i(0.0, 1.0);
  return 1.0 + 0.9 * z * std::exp(0.4 * i - 6.0 * i / (1.0 + std::norm(z)));
}

std::vector<double> gen_ikeda(std::size_t n, std::size_t burn_in,
                              std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("gen_ikeda: n must be >= 1");
  Rng rng(seed);
  std::complex<double> z(rng.uniform(), rng.uniform());
  for (std::size_t k = 0; k < burn_in; ++k) z = ikeda_step(z);
  std::vector<double> series(n);
  for (std::size_t k = 0; k < n; ++k) {
    z = ikeda_step(z);
    series[k] = z.real();
  }
  return series;
}

double mackey_glass_deriv(double x, double x_delayed) {
  const double p10 = std::pow(x_delayed, 10.0);
  return 0.2 * x_delayed / (1.0 + p10) - 0.1 * x;
}

std::vector<double> gen_mackey_glass(std::size_t n,
                                     const MackeyGlassConfig& cfg,
                                     std::uint64_t seed) {
  if (cfg.dt <= 0.0) throw std::invalid_argument("gen_mackey_glass: dt <= 0");
  if (cfg.sample_stride < 1)
    throw std::invalid_argument("gen_mackey_glass: sample_stride < 1");
  if (cfg.delay < cfg.dt)
    throw std::invalid_argument("gen_mackey_glass: delay must be >= dt");

  Rng rng(seed);
  const double x0 =
      cfg.x0 + (cfg.x0_jitter > 0.0 ? rng.uniform(0.0, cfg.x0_jitter) : 0.0);

  // history[k] = x(k * dt); x(t) = 0 for t < 0.
  std::vector<double> history{x0};
  auto delayed_at = [&](double t) -> double {
    if (t < 0.0) return 0.0;
    const double pos = t / cfg.dt;
    const auto lo = static_cast<std::size_t>(pos);
    if (lo + 1 >= history.size()) return history.back();
    const double frac = pos - static_cast<double>(lo);
    return history[lo] * (1.0 - frac) + history[lo + 1] * frac;
  };

  const auto burn_steps =
      static_cast<std::size_t>(std::ceil(cfg.burn_in_time / cfg.dt));
  const std::size_t total_steps = burn_steps + n * cfg.sample_stride;
  std::vector<double> samples;
  samples.reserve(n);

  double x = x0;
  for (std::size_t k = 0; k < total_steps && samples.size() < n; ++k) {
    const double t = static_cast<double>(k) * cfg.dt;
    const double d1 = delayed_at(t - cfg.delay);
    const double d2 = delayed_at(t + 0.5 * cfg.dt - cfg.delay);
    const double d3 = delayed_at(t + cfg.dt - cfg.delay);
    const double k1 = mackey_glass_deriv(x, d1);
    const double k2 = mackey_glass_deriv(x + 0.5 * cfg.dt * k1, d2);
    const double k3 = mackey_glass_deriv(x + 0.5 * cfg.dt * k2, d2);
    const double k4 = mackey_glass_deriv(x + cfg.dt * k3, d3);
    x += cfg.dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    history.push_back(x);
    const std::size_t step = k + 1;
    if (step > burn_steps && (step - burn_steps) % cfg.sample_stride == 0)
      samples.push_back(x);
  }
  if (samples.size() < n)
    throw std::logic_error("gen_mackey_glass: sampling fell short");
  return samples;
}

RegressionDataset embed_series(std::span<const double> series,
                               const SeriesEmbedding& spec, std::string name) {
  const std::size_t n = spec.output_rows(series.size());
  RegressionDataset data;
  data.rows = n;
  data.cols = spec.dimension;
  data.name = std::move(name);
  data.inputs.resize(n * spec.dimension);
  data.targets.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < spec.dimension; ++j)
      data.inputs[i * spec.dimension + j] = series[i + j * spec.lag];
    data.targets[i] = series[i + (spec.dimension - 1) * spec.lag + spec.horizon];
  }
  return data;
}

}  // namespace ensnap
