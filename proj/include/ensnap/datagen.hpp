#ifndef ENSNAP_DATAGEN_HPP
#define ENSNAP_DATAGEN_HPP

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ensnap/dataset.hpp"

namespace ensnap {

/// Additive target-noise description. Gaussian noise is given either as an
/// absolute sigma or as a noise-to-signal power ratio; the ratio form is
/// calibrated per generator from a cached large noise-free sample.
struct NoiseSpec {
  enum class Kind { none, gaussian_sigma, noise_to_signal };
  Kind kind = Kind::none;
  double value = 0.0;  // sigma or ratio, depending on kind

  static NoiseSpec none() { return {Kind::none, 0.0}; }
  static NoiseSpec gaussian_sigma(double sigma);
  static NoiseSpec noise_to_signal(double ratio);

  std::string label() const;
};

struct SeriesEmbedding {
  std::size_t dimension = 1;
  std::size_t lag = 1;
  std::size_t horizon = 1;

  /// Rows produced from a series of the given length; throws if too short.
  std::size_t output_rows(std::size_t series_length) const;
  std::size_t min_series_length() const;
};

struct Friedman1Options {
  bool pi_factor = false;  // insert the conventional pi inside the sine
};

// Target formulas on a single input row, noise-free. Friedman #2 clips a
// negative radicand at zero and reports it through `clipped`.
double friedman1_signal(std::span<const double> x, bool pi_factor = false);
double friedman2_signal(std::span<const double> x, bool* clipped = nullptr);
double friedman3_signal(std::span<const double> x);

// Signal variances estimated once from 1e6 noise-free Monte-Carlo samples
// with a fixed internal seed; cached after the first call.
double friedman1_signal_variance(bool pi_factor = false);
double friedman2_signal_variance();
double friedman3_signal_variance();

RegressionDataset gen_friedman1(std::size_t n, const NoiseSpec& noise,
                                std::uint64_t seed,
                                const Friedman1Options& opts = {});
RegressionDataset gen_friedman2(std::size_t n, const NoiseSpec& noise,
                                std::uint64_t seed);
RegressionDataset gen_friedman3(std::size_t n, const NoiseSpec& noise,
                                std::uint64_t seed);

/// One iterate of the Ikeda laser map.
std::complex<double> ikeda_step(std::complex<double> z);

/// Real parts of Ikeda iterates after discarding `burn_in` of them. The
/// initial point is drawn uniformly from the unit square, per seed.
std::vector<double> gen_ikeda(std::size_t n, std::size_t burn_in,
                              std::uint64_t seed);

struct MackeyGlassConfig {
  double delay = 17.0;
  double dt = 0.1;
  std::size_t sample_stride = 10;  // one sample per time unit at dt = 0.1
  double burn_in_time = 1000.0;
  double x0 = 1.2;
  double x0_jitter = 0.0;  // uniform [0, jitter) added to x0, per seed
};

/// Right-hand side of the delay equation at current value x and delayed
/// value x(t - tau).
double mackey_glass_deriv(double x, double x_delayed);

/// RK4 integration with the delayed term linearly interpolated from the
/// stored history; x(t) = 0 for t < 0. Returns n samples taken every
/// sample_stride steps after the burn-in window.
std::vector<double> gen_mackey_glass(std::size_t n,
                                     const MackeyGlassConfig& cfg,
                                     std::uint64_t seed);

/// Delay embedding: row i has inputs (s_i, s_{i+lag}, ..., s_{i+(d-1)lag})
/// and target s_{i+(d-1)lag+horizon}.
RegressionDataset embed_series(std::span<const double> series,
                               const SeriesEmbedding& spec,
                               std::string name = "series");

}  // namespace ensnap

#endif
