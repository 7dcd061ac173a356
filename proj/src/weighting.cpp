#include "ensnap/weighting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ensnap {

namespace {

void check_errors(const MemberErrors& errors, double alpha) {
  if (errors.e.empty())
    throw std::invalid_argument("weighting: no members");
  if (!(alpha >= 0.0) || !std::isfinite(alpha))
    throw std::invalid_argument("weighting: alpha must be finite and >= 0");
  for (double e : errors.e)
    if (e < 0.0 || !std::isfinite(e))
      throw std::invalid_argument("weighting: member error must be finite and >= 0");
}

std::vector<double> normalized(std::vector<double> w) {
  double sum = 0.0;
  for (double v : w) sum += v;
  for (double& v : w) v /= sum;
  return w;
}

}  // namespace

std::vector<double> weights_power(const MemberErrors& errors, double alpha) {
  check_errors(errors, alpha);
  const std::size_t m = errors.e.size();
  if (alpha == 0.0) return std::vector<double>(m, 1.0 / static_cast<double>(m));

  std::size_t zeros = 0;
  for (double e : errors.e)
    if (e == 0.0) ++zeros;
  if (zeros > 0) {
    // e^(-alpha) diverges; the limit puts all weight on the zero-error members.
    std::vector<double> w(m, 0.0);
    for (std::size_t i = 0; i < m; ++i)
      if (errors.e[i] == 0.0) w[i] = 1.0 / static_cast<double>(zeros);
    return w;
  }

  std::vector<double> logits(m);
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < m; ++i) {
    logits[i] = -alpha * std::log(errors.e[i]);
    top = std::max(top, logits[i]);
  }
  std::vector<double> w(m);
  for (std::size_t i = 0; i < m; ++i) w[i] = std::exp(logits[i] - top);
  return normalized(std::move(w));
}

std::vector<double> weights_exp(const MemberErrors& errors, double alpha) {
  check_errors(errors, alpha);
  const std::size_t m = errors.e.size();
  if (alpha == 0.0) return std::vector<double>(m, 1.0 / static_cast<double>(m));
  const double floor = *std::min_element(errors.e.begin(), errors.e.end());
  std::vector<double> w(m);
  for (std::size_t i = 0; i < m; ++i)
    w[i] = std::exp(-alpha * (errors.e[i] - floor));
  return normalized(std::move(w));
}

double nmse(const std::vector<double>& predictions,
            const std::vector<double>& targets, double total_variance) {
  if (predictions.size() != targets.size() || predictions.empty())
    throw std::invalid_argument("nmse: size mismatch");
  if (!(total_variance > 0.0))
    throw std::invalid_argument("nmse: total variance must be positive");
  double sse = 0.0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const double d = predictions[i] - targets[i];
    sse += d * d;
  }
  return sse / static_cast<double>(predictions.size()) / total_variance;
}

Decomposition accuracy_diversity(const PredictionCube& cube,
                                 const Selection& sel) {
  cube.validate();
  sel.validate(cube.num_snapshots);
  const double uniform = 1.0 / static_cast<double>(cube.num_nets);
  for (double w : sel.weights)
    if (std::abs(w - uniform) > 1e-12)
      throw std::invalid_argument("accuracy_diversity: weights must be uniform");

  Decomposition out;
  for (std::size_t p = 0; p < cube.num_points; ++p) {
    double mean = 0.0;
    for (std::size_t n = 0; n < cube.num_nets; ++n)
      mean += cube.value(n, sel.tau[n], p);
    mean *= uniform;
    for (std::size_t n = 0; n < cube.num_nets; ++n) {
      const double f = cube.value(n, sel.tau[n], p);
      const double de = f - cube.point_targets[p];
      const double dv = f - mean;
      out.mean_error += de * de;
      out.variance += dv * dv;
    }
    const double dm = mean - cube.point_targets[p];
    out.ensemble_mse += dm * dm;
  }
  const double scale =
      uniform / static_cast<double>(cube.num_points);
  out.mean_error *= scale;
  out.variance *= scale;
  out.ensemble_mse /= static_cast<double>(cube.num_points);
  return out;
}

SignTestResult sign_test(std::size_t wins, std::size_t n_runs) {
  if (n_runs == 0) throw std::invalid_argument("sign_test: no runs");
  if (wins > n_runs) throw std::invalid_argument("sign_test: wins > runs");

  // Exact binomial tail probabilities at p = 1/2.
  const auto n = static_cast<double>(n_runs);
  auto log_pmf = [n](std::size_t k) {
    return std::lgamma(n + 1.0) - std::lgamma(static_cast<double>(k) + 1.0) -
           std::lgamma(n - static_cast<double>(k) + 1.0) -
           n * std::log(2.0);
  };
  double lower = 0.0;
  for (std::size_t k = 0; k <= wins; ++k) lower += std::exp(log_pmf(k));
  double upper = 0.0;
  for (std::size_t k = wins; k <= n_runs; ++k) upper += std::exp(log_pmf(k));

  SignTestResult out;
  out.fraction = static_cast<double>(wins) / n;
  out.p_value = std::min(1.0, 2.0 * std::min(lower, upper));
  out.significant_at_95 = out.p_value < 0.05;
  return out;
}

MemberErrors member_errors(const PredictionCube& cube, const Selection& sel) {
  cube.validate();
  sel.validate(cube.num_snapshots);
  MemberErrors out;
  out.e.resize(cube.num_nets);
  for (std::size_t n = 0; n < cube.num_nets; ++n) {
    double sse = 0.0;
    for (std::size_t p = 0; p < cube.num_points; ++p) {
      const double d = cube.value(n, sel.tau[n], p) - cube.point_targets[p];
      sse += d * d;
    }
    out.e[n] = sse / static_cast<double>(cube.num_points);
  }
  return out;
}

Selection weight_selection(const Selection& sel, const PredictionCube& cube,
                           WeightLaw law, double alpha, double error_scale) {
  if (!(error_scale > 0.0))
    throw std::invalid_argument("weight_selection: error_scale must be positive");
  if (alpha == 0.0) return sel;
  MemberErrors errors = member_errors(cube, sel);
  for (double& e : errors.e) e *= error_scale;
  Selection out;
  out.tau = sel.tau;
  out.weights = law == WeightLaw::power ? weights_power(errors, alpha)
                                        : weights_exp(errors, alpha);
  return out;
}

}  // namespace ensnap
