#ifndef ENSNAP_WEIGHTING_HPP
#define ENSNAP_WEIGHTING_HPP

#include <cstddef>
#include <vector>

#include "ensnap/cube.hpp"

namespace ensnap {

enum class WeightLaw { power, exp };

/// Per-member MSE at the member's selected snapshot, over all cube points.
struct MemberErrors {
  std::vector<double> e;
};

struct Decomposition {
  double mean_error = 0.0;
  double variance = 0.0;
  double ensemble_mse = 0.0;
};

struct SignTestResult {
  double fraction = 0.0;
  double p_value = 1.0;
  bool significant_at_95 = false;
};

/// w_i proportional to e_i^(-alpha). Members with zero error share the
/// whole weight uniformly when alpha > 0.
std::vector<double> weights_power(const MemberErrors& errors, double alpha);

/// w_i proportional to exp(-alpha * e_i), computed after subtracting min(e).
std::vector<double> weights_exp(const MemberErrors& errors, double alpha);

double nmse(const std::vector<double>& predictions,
            const std::vector<double>& targets, double total_variance);

/// Accuracy/diversity split of the simple-average ensemble over the cube's
/// points. mean_error - variance = ensemble_mse holds as an identity.
Decomposition accuracy_diversity(const PredictionCube& cube,
                                 const Selection& sel);

/// Exact two-sided binomial test of P(win) = 1/2.
SignTestResult sign_test(std::size_t wins, std::size_t n_runs);

MemberErrors member_errors(const PredictionCube& cube,
                           const Selection& sel);

/// Replace sel's uniform weights by the chosen law applied to member MSEs
/// over the cube (the whole dataset D). error_scale converts the cube's
/// error units back to raw target units before the law is applied, which
/// matters for the exponential law only.
Selection weight_selection(const Selection& sel, const PredictionCube& cube,
                           WeightLaw law, double alpha,
                           double error_scale = 1.0);

}  // namespace ensnap

#endif
