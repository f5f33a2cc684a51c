#include "dimerlab/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>
#include <boost/math/distributions/fisher_f.hpp>

#include "dimerlab/errors.hpp"
#include "dimerlab/rng.hpp"

namespace dimerlab {

namespace {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double var_slope = 0.0;
  double rms = 0.0;
  int n = 0;
};

// Closed-form weighted least squares about the weighted mean of x, which
// keeps the normal equations well conditioned without a matrix solve.
LineFit weighted_line(std::span<const double> x, std::span<const double> y,
                      std::span<const double> sigma) {
  const size_t n = x.size();
  bool distinct = false;
  for (size_t i = 1; i < n; ++i) distinct |= x[i] != x[0];
  if (n < 2 || !distinct)
    throw DegenerateWindow("need at least two distinct abscissae");

  double sw = 0.0, sx = 0.0, sy = 0.0;
  std::vector<double> w(n);
  for (size_t i = 0; i < n; ++i) {
    w[i] = 1.0 / (sigma[i] * sigma[i]);
    sw += w[i];
    sx += w[i] * x[i];
    sy += w[i] * y[i];
  }
  const double xb = sx / sw, yb = sy / sw;
  double sxx = 0.0, sxy = 0.0;
  for (size_t i = 0; i < n; ++i) {
    sxx += w[i] * (x[i] - xb) * (x[i] - xb);
    sxy += w[i] * (x[i] - xb) * (y[i] - yb);
  }
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = yb - f.slope * xb;
  f.var_slope = 1.0 / sxx;
  f.n = static_cast<int>(n);
  double ss = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double r = y[i] - (f.intercept + f.slope * x[i]);
    ss += r * r;
  }
  f.rms = std::sqrt(ss / static_cast<double>(n));
  return f;
}

// Relative errors of the means; falls back to uniform weights when any
// provided error is unusable, since mixing real and fake weights would skew
// the fit toward the fake ones.
std::vector<double> log_sigmas(std::span<const double> means,
                               std::span<const double> ses) {
  std::vector<double> s(means.size(), 1.0);
  bool usable = true;
  for (size_t i = 0; i < means.size(); ++i)
    usable = usable && std::isfinite(ses[i]) && ses[i] > 0.0;
  if (usable)
    for (size_t i = 0; i < means.size(); ++i) s[i] = ses[i] / means[i];
  return s;
}

FitResult fit_tail_once(const std::vector<std::pair<double, double>>& ccdf,
                        double s_lo, double s_hi, size_t n_total) {
  std::vector<double> lx, ly, lsig;
  for (auto [s, p] : ccdf) {
    if (s < s_lo || s > s_hi || p <= 0.0) continue;
    lx.push_back(std::log(s));
    ly.push_back(std::log(p));
    lsig.push_back(std::sqrt((1.0 - p) / (static_cast<double>(n_total) * p)));
  }
  if (lx.empty()) throw InsufficientData("no CCDF points inside the window");
  bool all_equal = true;
  for (double v : lx) all_equal = all_equal && v == lx[0];
  if (all_equal) throw DegenerateWindow("window holds a single loop size");
  if (lx.size() < 8)
    throw InsufficientData("tail window holds " + std::to_string(lx.size()) +
                           " points, need 8");

  LineFit lf = weighted_line(lx, ly, lsig);
  FitResult r;
  r.exponent = -lf.slope;
  r.std_error = std::sqrt(lf.var_slope);
  r.intercept = lf.intercept;
  r.window_lo = s_lo;
  r.window_hi = s_hi;
  r.residual_rms = lf.rms;
  r.n_points = lf.n;
  return r;
}

struct LmOutcome {
  Eigen::Vector4d theta = Eigen::Vector4d::Zero();
  Eigen::Matrix4d cov = Eigen::Matrix4d::Zero();
  double ssr = 0.0;
  bool ok = false;
};

// Damped least squares for y = c + a*x + A*exp(-r*x) with weights 1/sigma.
// Steps are accepted only when the objective does not increase and the rate
// stays positive; stops on relative parameter change < 1e-8 or 500 rounds.
LmOutcome lm_corrected(const std::vector<double>& x,
                       const std::vector<double>& y,
                       const std::vector<double>& sigma,
                       Eigen::Vector4d theta) {
  const int n = static_cast<int>(x.size());
  auto ssr_of = [&](const Eigen::Vector4d& t) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
      const double f = t[0] + t[1] * x[i] + t[2] * std::exp(-t[3] * x[i]);
      const double r = (y[i] - f) / sigma[i];
      s += r * r;
    }
    return s;
  };

  LmOutcome out;
  double ssr = ssr_of(theta);
  double lambda = 1e-3;
  bool converged = false;
  for (int iter = 0; iter < 500 && !converged; ++iter) {
    Eigen::MatrixXd jac(n, 4);
    Eigen::VectorXd rho(n);
    for (int i = 0; i < n; ++i) {
      const double e = std::exp(-theta[3] * x[i]);
      const double f = theta[0] + theta[1] * x[i] + theta[2] * e;
      rho[i] = (y[i] - f) / sigma[i];
      jac(i, 0) = 1.0 / sigma[i];
      jac(i, 1) = x[i] / sigma[i];
      jac(i, 2) = e / sigma[i];
      jac(i, 3) = -theta[2] * x[i] * e / sigma[i];
    }
    const Eigen::Matrix4d jtj = jac.transpose() * jac;
    const Eigen::Vector4d grad = jac.transpose() * rho;

    bool accepted = false;
    while (!accepted) {
      Eigen::Matrix4d damped = jtj;
      for (int k = 0; k < 4; ++k)
        damped(k, k) += lambda * std::max(jtj(k, k), 1e-12);
      const Eigen::Vector4d delta = damped.ldlt().solve(grad);
      const Eigen::Vector4d cand = theta + delta;
      const double cand_ssr = cand[3] > 0.0 ? ssr_of(cand) : 2.0 * ssr + 1.0;
      if (cand[3] > 0.0 && cand_ssr <= ssr && std::isfinite(cand_ssr)) {
        const double rel = delta.norm() / (theta.norm() + 1e-12);
        theta = cand;
        ssr = cand_ssr;
        lambda = std::max(lambda / 3.0, 1e-12);
        accepted = true;
        converged = rel < 1e-8;
      } else {
        lambda *= 10.0;
        if (lambda > 1e12) return out;  // stuck; caller falls back
      }
    }
  }
  if (!converged) return out;

  Eigen::MatrixXd jac(n, 4);
  for (int i = 0; i < n; ++i) {
    const double e = std::exp(-theta[3] * x[i]);
    jac(i, 0) = 1.0 / sigma[i];
    jac(i, 1) = x[i] / sigma[i];
    jac(i, 2) = e / sigma[i];
    jac(i, 3) = -theta[2] * x[i] * e / sigma[i];
  }
  const Eigen::Matrix4d jtj = jac.transpose() * jac;
  Eigen::FullPivLU<Eigen::Matrix4d> lu(jtj);
  if (!lu.isInvertible()) return out;  // flat direction: correction is noise
  out.theta = theta;
  out.cov = lu.inverse();
  out.ssr = ssr;
  out.ok = true;
  return out;
}

}  // namespace

std::vector<std::pair<double, double>> empirical_ccdf(
    std::span<const double> samples) {
  if (samples.size() < 100)
    throw InsufficientData("CCDF needs at least 100 samples, got " +
                           std::to_string(samples.size()));
  std::vector<double> s(samples.begin(), samples.end());
  for (double v : s)
    if (!std::isfinite(v)) throw Error("non-finite sample value");
  std::sort(s.begin(), s.end());
  const double n = static_cast<double>(s.size());
  std::vector<std::pair<double, double>> out;
  size_t i = 0;
  while (i < s.size()) {
    size_t j = i;
    while (j < s.size() && s[j] == s[i]) ++j;
    out.emplace_back(s[i], static_cast<double>(s.size() - j) / n);
    i = j;
  }
  return out;
}

FitResult fit_tail_exponent(std::span<const double> samples, double s_lo,
                            double s_hi, std::uint64_t seed, int resamples) {
  FitResult fit = fit_tail_once(empirical_ccdf(samples), s_lo, s_hi,
                                samples.size());
  if (resamples < 2) return fit;  // keep the covariance error bar
  const size_t n = samples.size();
  std::vector<double> draws;
  std::vector<double> re(n);
  for (int r = 0; r < resamples; ++r) {
    rng::CounterRng gen(rng::derive(seed, static_cast<std::uint64_t>(r)));
    for (size_t i = 0; i < n; ++i) re[i] = samples[gen.next_below(n)];
    try {
      draws.push_back(
          fit_tail_once(empirical_ccdf(re), s_lo, s_hi, n).exponent);
    } catch (const Error&) {
      // a resample can lose the window; skip it
    }
  }
  if (draws.size() * 2 < static_cast<size_t>(resamples))
    throw InsufficientData("tail window too fragile: most bootstrap "
                           "resamples could not be fit");
  double mean = 0.0;
  for (double d : draws) mean += d;
  mean /= static_cast<double>(draws.size());
  double var = 0.0;
  for (double d : draws) var += (d - mean) * (d - mean);
  var /= static_cast<double>(draws.size() - 1);
  fit.std_error = std::sqrt(var);
  return fit;
}

FitResult fit_scaling_with_correction(std::span<const double> L_values,
                                      std::span<const double> means,
                                      std::span<const double> std_errors) {
  const size_t n = L_values.size();
  if (means.size() != n || std_errors.size() != n)
    throw Error("scaling fit: mismatched input lengths");
  std::vector<double> sorted_l(L_values.begin(), L_values.end());
  std::sort(sorted_l.begin(), sorted_l.end());
  if (std::unique(sorted_l.begin(), sorted_l.end()) - sorted_l.begin() < 4)
    throw InsufficientData("scaling fit needs 4 distinct system sizes");
  for (size_t i = 0; i < n; ++i) {
    if (!(L_values[i] > 0.0) || !(means[i] > 0.0))
      throw Error("scaling fit: sizes and means must be positive");
  }

  std::vector<double> x(n), y(n);
  for (size_t i = 0; i < n; ++i) {
    x[i] = std::log(L_values[i]);
    y[i] = std::log(means[i]);
  }
  const std::vector<double> sig = log_sigmas(means, std_errors);

  const LineFit line = weighted_line(x, y, sig);
  double line_ssr = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double r = (y[i] - line.intercept - line.slope * x[i]) / sig[i];
    line_ssr += r * r;
  }

  FitResult out;
  out.window_lo = sorted_l.front();
  out.window_hi = sorted_l.back();
  out.n_points = static_cast<int>(n);

  LmOutcome best;
  if (n > 4) {
    for (double r0 : {0.5, 1.0, 2.0}) {
      // For a fixed rate the model is linear in the remaining three
      // parameters, so seed each start from that exact sub-solve.
      Eigen::MatrixXd d(n, 3);
      Eigen::VectorXd rhs(n);
      for (size_t i = 0; i < n; ++i) {
        d(i, 0) = 1.0 / sig[i];
        d(i, 1) = x[i] / sig[i];
        d(i, 2) = std::exp(-r0 * x[i]) / sig[i];
        rhs[i] = y[i] / sig[i];
      }
      const Eigen::Vector3d lin =
          d.colPivHouseholderQr().solve(rhs);
      Eigen::Vector4d theta(lin[0], lin[1], lin[2], r0);
      LmOutcome o = lm_corrected(x, y, sig, theta);
      if (o.ok && (!best.ok || o.ssr < best.ssr)) best = o;
    }
  }

  bool keep_correction = false;
  if (best.ok && best.ssr <= line_ssr) {
    const double dof = static_cast<double>(n) - 4.0;
    if (best.ssr == 0.0) {
      keep_correction = line_ssr > 0.0;
    } else {
      const double f = ((line_ssr - best.ssr) / 2.0) / (best.ssr / dof);
      const boost::math::fisher_f dist(2.0, dof);
      keep_correction = boost::math::cdf(boost::math::complement(dist, f)) <
                        0.05;
    }
  }

  if (keep_correction) {
    out.exponent = best.theta[1];
    out.std_error = std::sqrt(best.cov(1, 1));
    out.intercept = best.theta[0];
    out.correction_amp = best.theta[2];
    out.correction_rate = best.theta[3];
    out.correction_active = true;
    double ss = 0.0;
    for (size_t i = 0; i < n; ++i) {
      const double f = best.theta[0] + best.theta[1] * x[i] +
                       best.theta[2] * std::exp(-best.theta[3] * x[i]);
      ss += (y[i] - f) * (y[i] - f);
    }
    out.residual_rms = std::sqrt(ss / static_cast<double>(n));
  } else {
    out.exponent = line.slope;
    out.std_error = std::sqrt(line.var_slope);
    out.intercept = line.intercept;
    out.residual_rms = line.rms;
  }
  if (!std::isfinite(out.exponent) || !std::isfinite(out.std_error))
    throw NonConvergence("scaling fit produced non-finite parameters");
  return out;
}

FitResult fit_winding_kappa(std::span<const double> L_values,
                            std::span<const double> theta_sq_means,
                            std::span<const double> std_errors) {
  const size_t n = L_values.size();
  if (theta_sq_means.size() != n || std_errors.size() != n)
    throw Error("winding fit: mismatched input lengths");
  std::vector<double> sorted_l(L_values.begin(), L_values.end());
  std::sort(sorted_l.begin(), sorted_l.end());
  if (std::unique(sorted_l.begin(), sorted_l.end()) - sorted_l.begin() < 4)
    throw InsufficientData("winding fit needs 4 distinct system sizes");

  std::vector<double> x(n), sig(n, 1.0);
  for (size_t i = 0; i < n; ++i) x[i] = std::log(L_values[i]);
  bool usable = true;
  for (size_t i = 0; i < n; ++i)
    usable = usable && std::isfinite(std_errors[i]) && std_errors[i] > 0.0;
  if (usable)
    for (size_t i = 0; i < n; ++i) sig[i] = std_errors[i];

  const LineFit lf = weighted_line(x, theta_sq_means, sig);
  FitResult r;
  r.exponent = 4.0 * lf.slope;
  r.std_error = 4.0 * std::sqrt(lf.var_slope);
  r.intercept = lf.intercept;
  r.window_lo = sorted_l.front();
  r.window_hi = sorted_l.back();
  r.residual_rms = lf.rms;
  r.n_points = lf.n;
  return r;
}

std::pair<FitResult, FitResult> fit_epsilon_exponents(
    std::span<const EpsilonPoint> points, double eps_max) {
  if (points.size() < 8)
    throw InsufficientData("epsilon fit needs at least 8 grid points, got " +
                           std::to_string(points.size()));
  // The eps = 0 identity row and any stratum whose mean distance is still
  // exactly zero carry no scaling information; they are excluded rather than
  // rejected so sparse small-eps grids remain fittable.
  std::vector<const EpsilonPoint*> kept;
  for (const EpsilonPoint& p : points)
    if (p.epsilon > 0.0 && p.epsilon <= eps_max && p.distance_mean > 0.0 &&
        p.energy_mean > 0.0)
      kept.push_back(&p);
  if (kept.size() < 4)
    throw InsufficientData("epsilon fit: only " +
                           std::to_string(kept.size()) +
                           " usable points below the regime cut");

  const size_t m = kept.size();
  std::vector<double> le(m), ld(m), len(m), dmeans(m), dses(m), emeans(m),
      eses(m);
  for (size_t i = 0; i < m; ++i) {
    le[i] = std::log(kept[i]->epsilon);
    ld[i] = std::log(kept[i]->distance_mean);
    len[i] = std::log(kept[i]->energy_mean);
    dmeans[i] = kept[i]->distance_mean;
    dses[i] = kept[i]->distance_se;
    emeans[i] = kept[i]->energy_mean;
    eses[i] = kept[i]->energy_se;
  }

  const std::vector<double> dsig = log_sigmas(dmeans, dses);
  const LineFit bf = weighted_line(le, ld, dsig);
  FitResult beta;
  beta.exponent = bf.slope;
  beta.std_error = std::sqrt(bf.var_slope);
  beta.intercept = bf.intercept;
  beta.window_lo = kept.front()->epsilon;
  beta.window_hi = kept.front()->epsilon;
  for (const EpsilonPoint* p : kept) {
    beta.window_lo = std::min(beta.window_lo, p->epsilon);
    beta.window_hi = std::max(beta.window_hi, p->epsilon);
  }
  beta.residual_rms = bf.rms;
  beta.n_points = bf.n;

  const std::vector<double> esig = log_sigmas(emeans, eses);
  const LineFit tf = weighted_line(ld, len, esig);
  FitResult tau;
  tau.exponent = tf.slope;
  tau.std_error = std::sqrt(tf.var_slope);
  tau.intercept = tf.intercept;
  tau.window_lo = *std::min_element(dmeans.begin(), dmeans.end());
  tau.window_hi = *std::max_element(dmeans.begin(), dmeans.end());
  tau.residual_rms = tf.rms;
  tau.n_points = tf.n;
  return {beta, tau};
}

ExponentSet derive_exponent_relations(ExponentSet set) {
  if (set.alpha && set.gamma) {
    const double a = set.alpha->exponent, g = set.gamma->exponent;
    const double sa = set.alpha->std_error, sg = set.gamma->std_error;
    DerivedValue df;
    df.value = 2.0 - g + a;
    df.std_error = std::sqrt(sa * sa + sg * sg);
    set.d_f = df;

    DerivedValue zd;
    zd.value = (2.0 - g) / df.value;
    const double dzda = -(2.0 - g) / (df.value * df.value);
    const double dzdg = -a / (df.value * df.value);
    zd.std_error = std::sqrt(dzda * dzda * sa * sa + dzdg * dzdg * sg * sg);
    set.zeta_derived = zd;
  }
  if (set.kappa) {
    DerivedValue dk;
    const double k = set.kappa->exponent;
    dk.value = std::min(1.0 + k / 8.0, 2.0);
    dk.std_error = 1.0 + k / 8.0 < 2.0 ? set.kappa->std_error / 8.0 : 0.0;
    set.d_f_from_kappa = dk;
  }
  if (set.beta) {
    const double b = set.beta->exponent, sb = set.beta->std_error;
    DerivedValue tb;
    tb.value = (b + 1.0) / b;
    tb.std_error = sb / (b * b);
    set.tau_from_beta = tb;
  }
  if (set.zeta_fit && set.zeta_derived) {
    DerivedValue gap;
    const double s = std::hypot(set.zeta_fit->std_error,
                                set.zeta_derived->std_error);
    gap.value = std::abs(set.zeta_fit->exponent - set.zeta_derived->value);
    gap.std_error = s;
    if (s > 0.0) gap.value /= s;
    set.zeta_gap = gap;
  }
  if (set.tau && set.tau_from_beta) {
    DerivedValue gap;
    const double s =
        std::hypot(set.tau->std_error, set.tau_from_beta->std_error);
    gap.value = std::abs(set.tau->exponent - set.tau_from_beta->value);
    gap.std_error = s;
    if (s > 0.0) gap.value /= s;
    set.tau_gap = gap;
  }
  return set;
}

}  // namespace dimerlab
