#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace commlens {

// One level-1 row: outcome for a group at one occasion. Predictor vectors
// must share one length across rows; the intercept is implicit.
struct MlmObservation {
  std::string group;
  double y = 0.0;
  std::vector<double> x;
};

struct MlmOptions {
  bool reml = false;                   // ML is the default likelihood
  std::optional<double> fixed_lambda;  // pin tau2/sigma2; 0 reduces to OLS
};

struct FixedEffect {
  std::string name;
  double estimate = 0.0;
  double se = 0.0;
  double z = 0.0;
  double p = 0.0;  // two-sided Wald
};

struct MlmFit {
  std::vector<FixedEffect> fixed;  // [0] is the intercept
  double tau2 = 0.0;               // level-2 (between-group) variance
  double sigma2 = 0.0;             // level-1 (residual) variance
  double icc = 0.0;                // tau2 / (tau2 + sigma2)
  double loglik = 0.0;
  bool converged = false;
  bool degenerate = false;  // zero outcome variance
  std::size_t n_obs = 0;
  std::size_t n_groups = 0;
};

// Random-intercept model y_it = b0 + b'x_it + u_i + e_it with
// u_i ~ N(0, tau2), e_it ~ N(0, sigma2), fitted by profiled likelihood
// over the variance ratio. Deterministic; unbalanced panels allowed;
// tau2 floored at zero. Throws on fewer than 2 groups or inconsistent
// predictor lengths.
MlmFit fit_random_intercept(std::span<const MlmObservation> rows,
                            std::span<const std::string> predictor_names,
                            const MlmOptions& opts = {});

double icc(double tau2, double sigma2);

// Percent change per level: 100 * (model - empty) / empty.
double percent_change(double v_empty, double v_model);
std::pair<double, double> variance_change(const MlmFit& empty, const MlmFit& model);

}  // namespace commlens
