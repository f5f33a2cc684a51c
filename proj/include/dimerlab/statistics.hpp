#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace dimerlab {

// Result of one exponent fit. For the corrected scaling fit the model is
//   f(x) = intercept + exponent*x + correction_amp * exp(-correction_rate*x)
// with x = ln L; linear fits leave the correction fields at zero. std_error
// on `exponent` comes from the weighted-least-squares covariance unless the
// operation documents a bootstrap.
struct FitResult {
  double exponent = 0.0;
  double std_error = 0.0;
  double intercept = 0.0;
  double correction_amp = 0.0;
  double correction_rate = 0.0;
  bool correction_active = false;
  double window_lo = 0.0;
  double window_hi = 0.0;
  double residual_rms = 0.0;
  int n_points = 0;
};

struct DerivedValue {
  double value = 0.0;
  double std_error = 0.0;
};

// Whatever a run could estimate; absent fields were not fitted. The derived
// fields and the consistency gaps (in combined-sigma units) are filled by
// derive_exponent_relations.
struct ExponentSet {
  std::optional<FitResult> alpha;     // <S> ~ L^alpha
  std::optional<FitResult> gamma;     // <R^2> ~ L^gamma
  std::optional<FitResult> zeta_fit;  // P[S > s] ~ s^-zeta
  std::optional<FitResult> kappa;     // <theta^2> = a + (kappa/4) ln L
  std::optional<FitResult> beta;      // d ~ eps^beta
  std::optional<FitResult> tau;       // dE/N ~ d^tau

  std::optional<DerivedValue> d_f;            // 2 - gamma + alpha
  std::optional<DerivedValue> zeta_derived;   // (2 - gamma) / d_f
  std::optional<DerivedValue> d_f_from_kappa; // min(1 + kappa/8, 2)
  std::optional<DerivedValue> tau_from_beta;  // (beta + 1) / beta
  std::optional<DerivedValue> zeta_gap;       // |zeta_fit - zeta_derived| / sigma
  std::optional<DerivedValue> tau_gap;        // |tau - tau_from_beta| / sigma
};

// Step-function CCDF on the sorted unique sample values: (s, P[S > s]),
// strictly decreasing P, ending at 0. InsufficientData below 100 samples.
std::vector<std::pair<double, double>> empirical_ccdf(
    std::span<const double> samples);

// Weighted fit of ln P vs ln s on the CCDF points with s in [s_lo, s_hi] and
// P > 0; exponent = -slope. Point weights use the binomial deviation of the
// empirical CCDF, sigma_lnP = sqrt((1-P)/(n P)). Takes the raw samples, one
// per instance, so the error bar can be a bootstrap over instances: the fit
// is repeated on `resamples` draws with replacement (seeded, deterministic)
// and std_error is the spread of the re-fitted exponents.
// InsufficientData when the window holds < 8 distinct points;
// DegenerateWindow when it holds only one distinct s.
FitResult fit_tail_exponent(std::span<const double> samples, double s_lo,
                            double s_hi, std::uint64_t seed,
                            int resamples = 200);

// ln(mean) vs ln L with an additive finite-size term, means > 0 and >= 5
// distinct L required. Tries the four-parameter corrected model from three
// starting rates; keeps it only when it converged and an F-test at 0.05 says
// the correction buys a real improvement over the plain line, otherwise
// falls back to the line. NonConvergence if even the line cannot be fit.
FitResult fit_scaling_with_correction(std::span<const double> L_values,
                                      std::span<const double> means,
                                      std::span<const double> std_errors);

// Weighted line through (ln L, <theta^2>); kappa = 4*slope, >= 4 distinct L.
FitResult fit_winding_kappa(std::span<const double> L_values,
                            std::span<const double> theta_sq_means,
                            std::span<const double> std_errors);

// One epsilon grid point, already aggregated over instances. energy_mean is
// delta E divided by the matching cardinality.
struct EpsilonPoint {
  double epsilon = 0.0;
  double distance_mean = 0.0;
  double distance_se = 0.0;
  double energy_mean = 0.0;
  double energy_se = 0.0;
};

// beta from ln(distance) vs ln(epsilon), tau from ln(energy) vs ln(distance),
// both restricted to epsilon <= eps_max (the small-coupling regime; pass
// infinity to disable the cut). Requires >= 8 input points and >= 4 surviving
// the cut with positive means; DegenerateWindow when the surviving epsilons
// are all equal.
std::pair<FitResult, FitResult> fit_epsilon_exponents(
    std::span<const EpsilonPoint> points, double eps_max = 0.3);

// Fills the derived fields from whichever fits are present, with first-order
// error propagation treating the input fits as independent.
ExponentSet derive_exponent_relations(ExponentSet set);

}  // namespace dimerlab
