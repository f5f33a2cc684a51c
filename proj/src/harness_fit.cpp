#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "dimerlab/errors.hpp"
#include "dimerlab/harness.hpp"
#include "dimerlab/rng.hpp"

namespace dimerlab {

namespace {

// Reference estimates for this model from large-scale simulations; the
// report prints them beside our fits for orientation. de_* are the expected
// large-L excitation costs, ground_per_dimer the ground-state cost per
// matched pair.
struct RefValues {
  double alpha, gamma, zeta, kappa, beta, tau;
  double de_max, de_random, ground_per_dimer;
};
const std::map<char, RefValues> kRef = {
    {'H', {0.576, 1.290, 0.579, 2.093, 0.528, 3.001, 1.283, 1.115, 0.703}},
    {'Q', {0.591, 1.208, 0.602, 2.035, 0.535, 2.721, 0.759, 0.655, 0.355}},
    {'T', {0.867, 1.507, 0.341, 2.168, 0.445, 3.119, 0.454, 0.380, 0.529}},
};

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
  int n = 0;
};

MeanSe mean_se(const std::vector<double>& v) {
  MeanSe r;
  r.n = static_cast<int>(v.size());
  if (v.empty()) return r;
  double sum = 0.0;
  for (double x : v) sum += x;
  r.mean = sum / static_cast<double>(v.size());
  if (v.size() < 2) return r;
  double ss = 0.0;
  for (double x : v) ss += (x - r.mean) * (x - r.mean);
  r.se = std::sqrt(ss / (static_cast<double>(v.size() - 1) *
                         static_cast<double>(v.size())));
  return r;
}

double spread(const std::vector<double>& draws) {
  double m = 0.0;
  for (double d : draws) m += d;
  m /= static_cast<double>(draws.size());
  double ss = 0.0;
  for (double d : draws) ss += (d - m) * (d - m);
  return std::sqrt(ss / static_cast<double>(draws.size() - 1));
}

// Per-instance summaries of one (kind, L) stratum of a link-mode run.
struct LinkStratum {
  std::vector<double> S;       // total symmetric-difference size
  std::vector<double> dE;
  std::vector<double> ground;  // ground cost per dimer
  std::vector<double> R2;      // mean over the instance's loops
  std::vector<double> Th;      // mean gauged theta^2, winding filter applied
};

std::map<std::pair<char, int>, LinkStratum> collect_link(
    std::span<const ObservationRecord> records, bool winding_only) {
  struct PerInstance {
    double S = 0.0, dE = 0.0, ground = 0.0;
    bool seen = false;
    std::vector<double> r2s, th2s;
  };
  std::map<std::pair<char, int>, std::map<std::int64_t, PerInstance>> tmp;
  for (const ObservationRecord& r : records) {
    PerInstance& pi = tmp[{r.kind, r.L}][r.instance];
    if (r.is_instance_row()) {
      pi.seen = true;
      pi.S = static_cast<double>(r.S);
      pi.dE = r.delta_e;
      pi.ground = r.ground_cost / (0.5 * r.L * r.L);
    } else {
      if (r.R2) pi.r2s.push_back(*r.R2);
      const bool winds = r.wx.value_or(0) != 0 || r.wy.value_or(0) != 0;
      if (r.theta2_gauged && (!winding_only || winds))
        pi.th2s.push_back(*r.theta2_gauged);
    }
  }
  std::map<std::pair<char, int>, LinkStratum> out;
  for (auto& [key, by_instance] : tmp) {
    LinkStratum& s = out[key];
    for (auto& [idx, pi] : by_instance) {
      if (!pi.seen) continue;
      s.S.push_back(pi.S);
      s.dE.push_back(pi.dE);
      s.ground.push_back(pi.ground);
      if (!pi.r2s.empty()) {
        double m = 0.0;
        for (double x : pi.r2s) m += x;
        s.R2.push_back(m / static_cast<double>(pi.r2s.size()));
      }
      if (!pi.th2s.empty()) {
        double m = 0.0;
        for (double x : pi.th2s) m += x;
        s.Th.push_back(m / static_cast<double>(pi.th2s.size()));
      }
    }
  }
  return out;
}

// One (kind, L) stratum of an epsilon run: aligned per-instance curves.
struct EpsStratum {
  std::vector<double> grid;             // ascending
  std::vector<std::vector<double>> d;   // [instance][grid index]
  std::vector<std::vector<double>> e;   // delta_e per dimer
};

std::map<std::pair<char, int>, EpsStratum> collect_eps(
    std::span<const ObservationRecord> records) {
  std::map<std::pair<char, int>,
           std::map<std::int64_t, std::map<double, std::pair<double, double>>>>
      tmp;
  for (const ObservationRecord& r : records) {
    if (!r.is_instance_row() || !r.epsilon) continue;
    const double per_dimer = r.delta_e / (0.5 * r.L * r.L);
    tmp[{r.kind, r.L}][r.instance][*r.epsilon] = {r.distance.value_or(0.0),
                                                  per_dimer};
  }
  std::map<std::pair<char, int>, EpsStratum> out;
  for (auto& [key, by_instance] : tmp) {
    std::set<double> grid_set;
    for (auto& [idx, curve] : by_instance)
      for (auto& [eps, de] : curve) grid_set.insert(eps);
    EpsStratum& s = out[key];
    s.grid.assign(grid_set.begin(), grid_set.end());
    for (auto& [idx, curve] : by_instance) {
      if (curve.size() != s.grid.size()) continue;  // incomplete instance
      std::vector<double> dr, er;
      dr.reserve(s.grid.size());
      er.reserve(s.grid.size());
      for (double eps : s.grid) {
        dr.push_back(curve.at(eps).first);
        er.push_back(curve.at(eps).second);
      }
      s.d.push_back(std::move(dr));
      s.e.push_back(std::move(er));
    }
  }
  return out;
}

// Replace a fit's covariance error bar with the spread of refits over
// seeded instance resamples, one independent stream per (stratum, draw).
// Keeps the covariance bar when most resamples fail to fit.
template <typename Refit>
void bootstrap_se(FitResult& fit,
                  const std::vector<std::vector<double>>& samples,
                  const std::vector<double>& xs,
                  const std::vector<std::uint64_t>& seeds, int resamples,
                  Refit refit) {
  if (resamples < 2) return;
  std::vector<double> means(xs.size()), ses(xs.size());
  std::vector<double> scratch;
  std::vector<double> draws;
  for (int r = 0; r < resamples; ++r) {
    for (size_t j = 0; j < xs.size(); ++j) {
      const std::vector<double>& v = samples[j];
      rng::CounterRng gen(
          rng::derive(seeds[j], static_cast<std::uint64_t>(r)));
      scratch.resize(v.size());
      for (size_t t = 0; t < v.size(); ++t)
        scratch[t] = v[gen.next_below(v.size())];
      const MeanSe ms = mean_se(scratch);
      means[j] = ms.mean;
      ses[j] = ms.se;
    }
    try {
      draws.push_back(refit(xs, means, ses));
    } catch (const Error&) {
      // resample landed outside the fit's preconditions; skip it
    }
  }
  if (draws.size() * 2 >= static_cast<size_t>(resamples) && draws.size() > 1)
    fit.std_error = spread(draws);
}

std::string fit_label(char kind, int L, const char* name) {
  std::string s(1, kind);
  if (L > 0) s += ".L" + std::to_string(L);
  s += ".";
  s += name;
  return s;
}

void push_fit_values(std::vector<std::pair<std::string, double>>& kv,
                     const std::string& prefix, const FitResult& f) {
  kv.emplace_back(prefix + ".exponent", f.exponent);
  kv.emplace_back(prefix + ".std_error", f.std_error);
  kv.emplace_back(prefix + ".window_lo", f.window_lo);
  kv.emplace_back(prefix + ".window_hi", f.window_hi);
  kv.emplace_back(prefix + ".n_points", static_cast<double>(f.n_points));
  kv.emplace_back(prefix + ".residual_rms", f.residual_rms);
}

void append_fit_line(std::string& text, const char* label, const FitResult& f,
                     double ref) {
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "  %-12s %8.4f +- %6.4f   ref %6.3f   [%g..%g, n=%d, "
                "rms=%.2e%s]\n",
                label, f.exponent, f.std_error, ref, f.window_lo, f.window_hi,
                f.n_points, f.residual_rms,
                f.correction_active ? ", corrected" : "");
  text += buf;
}

void append_derived_line(std::string& text, const char* label,
                         const DerivedValue& d, double ref) {
  char buf[120];
  std::snprintf(buf, sizeof buf, "  %-12s %8.4f +- %6.4f   ref %6.3f\n",
                label, d.value, d.std_error, ref);
  text += buf;
}

void append_skip_line(std::string& text, const char* label,
                      const std::string& why) {
  text += "  ";
  text += label;
  text += ": skipped (" + why + ")\n";
}

void write_xy(const std::string& path,
              const std::vector<std::pair<double, double>>& xy) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error("cannot open " + path);
  char buf[80];
  for (auto [x, y] : xy) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g\n", x, y);
    out << buf;
  }
}

}  // namespace

FitReport fit_report(std::span<const ObservationRecord> records,
                     const FitOptions& opt) {
  if (records.empty()) throw InsufficientData("no records to fit");
  const std::string tag = records[0].excitation;
  for (const ObservationRecord& r : records)
    if (r.excitation != tag)
      throw Error("records mix excitation modes ('" + tag + "' vs '" +
                  r.excitation + "'); fit one mode at a time");
  const ExcitationMode mode = mode_from_tag(tag);

  FitReport report;
  std::string& text = report.text;
  text += "fit report: mode " + tag + ", " + std::to_string(records.size()) +
          " rows\n";

  if (mode == ExcitationMode::Epsilon) {
    const auto strata = collect_eps(records);
    if (strata.empty()) throw InsufficientData("no epsilon instance rows");
    for (const auto& [key, s] : strata) {
      const auto [kind, L] = key;
      StratumReport sr;
      sr.kind = kind;
      sr.L = L;
      const size_t npts = s.grid.size();
      const size_t ninst = s.d.size();
      text += "\n== kind " + std::string(1, kind) + " L=" +
              std::to_string(L) + " (" + std::to_string(ninst) +
              " instances, " + std::to_string(npts) + " eps points) ==\n";
      if (ninst == 0)
        throw InsufficientData("kind " + std::string(1, kind) + " L=" +
                               std::to_string(L) +
                               ": no complete epsilon instances");

      std::vector<EpsilonPoint> points(npts);
      std::vector<double> col(ninst);
      for (size_t k = 0; k < npts; ++k) {
        points[k].epsilon = s.grid[k];
        for (size_t i = 0; i < ninst; ++i) col[i] = s.d[i][k];
        MeanSe ms = mean_se(col);
        points[k].distance_mean = ms.mean;
        points[k].distance_se = ms.se;
        for (size_t i = 0; i < ninst; ++i) col[i] = s.e[i][k];
        ms = mean_se(col);
        points[k].energy_mean = ms.mean;
        points[k].energy_se = ms.se;
      }

      auto [beta, tau] = fit_epsilon_exponents(points, opt.eps_fit_max);

      // Paired bootstrap: resample instances, carry the whole eps curve.
      const std::uint64_t sseed = rng::derive(
          rng::derive(rng::derive(opt.seed, static_cast<std::uint64_t>(kind)),
                      static_cast<std::uint64_t>(L)),
          4);
      std::vector<double> bdraws, tdraws;
      for (int r = 0; r < opt.bootstrap_resamples; ++r) {
        rng::CounterRng gen(
            rng::derive(sseed, static_cast<std::uint64_t>(r)));
        std::vector<size_t> pick(ninst);
        for (size_t i = 0; i < ninst; ++i) pick[i] = gen.next_below(ninst);
        std::vector<EpsilonPoint> rp(npts);
        for (size_t k = 0; k < npts; ++k) {
          rp[k].epsilon = s.grid[k];
          for (size_t i = 0; i < ninst; ++i) col[i] = s.d[pick[i]][k];
          MeanSe ms = mean_se(col);
          rp[k].distance_mean = ms.mean;
          rp[k].distance_se = ms.se;
          for (size_t i = 0; i < ninst; ++i) col[i] = s.e[pick[i]][k];
          ms = mean_se(col);
          rp[k].energy_mean = ms.mean;
          rp[k].energy_se = ms.se;
        }
        try {
          auto [b, t] = fit_epsilon_exponents(rp, opt.eps_fit_max);
          bdraws.push_back(b.exponent);
          tdraws.push_back(t.exponent);
        } catch (const Error&) {
        }
      }
      if (bdraws.size() > 1 &&
          bdraws.size() * 2 >=
              static_cast<size_t>(opt.bootstrap_resamples)) {
        beta.std_error = spread(bdraws);
        tau.std_error = spread(tdraws);
      }

      sr.set.beta = beta;
      sr.set.tau = tau;
      sr.set = derive_exponent_relations(std::move(sr.set));

      const RefValues& ref = kRef.at(kind);
      append_fit_line(text, "beta", beta, ref.beta);
      append_fit_line(text, "tau", tau, ref.tau);
      if (sr.set.tau_from_beta)
        append_derived_line(text, "tau(beta)", *sr.set.tau_from_beta,
                            (ref.beta + 1.0) / ref.beta);
      if (sr.set.tau_gap) {
        char buf[80];
        std::snprintf(buf, sizeof buf,
                      "  consistency |tau - (1+beta)/beta| = %.2f sigma\n",
                      sr.set.tau_gap->value);
        text += buf;
      }
      // Companion fit over the whole grid shows what the regime cut buys.
      try {
        auto [bfull, tfull] = fit_epsilon_exponents(
            points, std::numeric_limits<double>::infinity());
        append_fit_line(text, "beta(uncut)", bfull, ref.beta);
        append_fit_line(text, "tau(uncut)", tfull, ref.tau);
      } catch (const Error&) {
      }
      push_fit_values(report.values, fit_label(kind, L, "beta"), beta);
      push_fit_values(report.values, fit_label(kind, L, "tau"), tau);
      if (sr.set.tau_from_beta) {
        report.values.emplace_back(fit_label(kind, L, "tau_from_beta.value"),
                                   sr.set.tau_from_beta->value);
        report.values.emplace_back(
            fit_label(kind, L, "tau_from_beta.std_error"),
            sr.set.tau_from_beta->std_error);
      }
      report.strata.push_back(std::move(sr));
    }
  } else {
    const auto by_stratum = collect_link(records, opt.winding_only);
    std::map<char, std::vector<std::pair<int, const LinkStratum*>>> by_kind;
    for (const auto& [key, s] : by_stratum)
      by_kind[key.first].emplace_back(key.second, &s);

    for (const auto& [kind, sizes] : by_kind) {
      if (sizes.size() < 4)
        throw InsufficientData(
            "kind " + std::string(1, kind) + " has records for " +
            std::to_string(sizes.size()) + " system sizes; need at least 4");
      StratumReport sr;
      sr.kind = kind;
      sr.L = 0;

      // Sizes below the transient bend the scaling fits away from the
      // large-L law, so the exponent fits keep only sizes L >= L_max/3,
      // padded back up to four sizes when the cut leaves fewer. The
      // delta-E table and the plots still cover every size.
      size_t first_kept = 0;
      while (first_kept + 4 < sizes.size() &&
             3 * sizes[first_kept].first < sizes.back().first)
        ++first_kept;

      std::vector<double> Ls, Smean, Sse, Rmean, Rse;
      std::vector<double> ThL, Thmean, Thse;
      std::vector<std::vector<double>> Ssamp, Rsamp, Thsamp;
      std::vector<std::uint64_t> aseed, gseed, kseed;
      const std::uint64_t kindseed =
          rng::derive(opt.seed, static_cast<std::uint64_t>(kind));
      for (size_t si = 0; si < sizes.size(); ++si) {
        const auto& [L, s] = sizes[si];
        const MeanSe dm = mean_se(s->dE);
        sr.delta_e_by_l.emplace_back(L, dm.mean, dm.se);
        if (si < first_kept) continue;
        const std::uint64_t lseed =
            rng::derive(kindseed, static_cast<std::uint64_t>(L));
        const MeanSe sm = mean_se(s->S);
        const MeanSe rm = mean_se(s->R2);
        Ls.push_back(L);
        Smean.push_back(sm.mean);
        Sse.push_back(sm.se);
        Rmean.push_back(rm.mean);
        Rse.push_back(rm.se);
        Ssamp.push_back(s->S);
        Rsamp.push_back(s->R2);
        aseed.push_back(rng::derive(lseed, 1));
        gseed.push_back(rng::derive(lseed, 2));
        if (!s->Th.empty()) {
          const MeanSe tm = mean_se(s->Th);
          ThL.push_back(L);
          Thmean.push_back(tm.mean);
          Thse.push_back(tm.se);
          Thsamp.push_back(s->Th);
          kseed.push_back(rng::derive(lseed, 3));
        }
      }

      const RefValues& ref = kRef.at(kind);
      text += "\n== kind " + std::string(1, kind) + " (" +
              std::to_string(sizes.size()) + " system sizes) ==\n";

      auto refit_scaling = [](const std::vector<double>& xs,
                              const std::vector<double>& means,
                              const std::vector<double>& ses) {
        return fit_scaling_with_correction(xs, means, ses).exponent;
      };
      try {
        FitResult alpha = fit_scaling_with_correction(Ls, Smean, Sse);
        bootstrap_se(alpha, Ssamp, Ls, aseed, opt.bootstrap_resamples,
                     refit_scaling);
        append_fit_line(text, "alpha", alpha, ref.alpha);
        push_fit_values(report.values, fit_label(kind, 0, "alpha"), alpha);
        sr.set.alpha = alpha;
      } catch (const Error& e) {
        append_skip_line(text, "alpha", e.what());
      }
      try {
        FitResult gamma = fit_scaling_with_correction(Ls, Rmean, Rse);
        bootstrap_se(gamma, Rsamp, Ls, gseed, opt.bootstrap_resamples,
                     refit_scaling);
        append_fit_line(text, "gamma", gamma, ref.gamma);
        push_fit_values(report.values, fit_label(kind, 0, "gamma"), gamma);
        sr.set.gamma = gamma;
      } catch (const Error& e) {
        append_skip_line(text, "gamma", e.what());
      }
      try {
        FitResult kap = fit_winding_kappa(ThL, Thmean, Thse);
        bootstrap_se(kap, Thsamp, ThL, kseed, opt.bootstrap_resamples,
                     [](const std::vector<double>& xs,
                        const std::vector<double>& means,
                        const std::vector<double>& ses) {
                       return fit_winding_kappa(xs, means, ses).exponent;
                     });
        append_fit_line(text, "kappa", kap, ref.kappa);
        push_fit_values(report.values, fit_label(kind, 0, "kappa"), kap);
        sr.set.kappa = kap;
      } catch (const Error& e) {
        append_skip_line(text, "kappa", e.what());
      }

      // Tail exponent from the largest size with enough instances.
      {
        const LinkStratum* tail = nullptr;
        int tail_l = 0;
        for (const auto& [L, s] : sizes)
          if (s->S.size() >= 100 && L > tail_l) {
            tail = s;
            tail_l = L;
          }
        if (tail == nullptr) {
          append_skip_line(text, "zeta",
                           "no system size has 100+ instances");
        } else {
          // The tail is a clean power law between the microscale and the
          // onset of the finite-size cutoff at S* ~ L^{D_f}; with D_f > 1,
          // capping the window at S = L keeps it clear of the cutoff.
          const double lo =
              opt.zeta_window_lo.value_or(std::max(8.0, tail_l / 8.0));
          const double hi = opt.zeta_window_hi.value_or(tail_l);
          try {
            FitResult zeta =
                fit_tail_exponent(tail->S, lo, hi, rng::derive(kindseed, 5),
                                  opt.bootstrap_resamples);
            append_fit_line(text, "zeta", zeta, ref.zeta);
            push_fit_values(report.values, fit_label(kind, 0, "zeta"), zeta);
            sr.set.zeta_fit = zeta;
          } catch (const Error& e) {
            append_skip_line(text, "zeta", e.what());
          }
        }
      }

      sr.set = derive_exponent_relations(std::move(sr.set));
      if (sr.set.d_f) {
        append_derived_line(text, "D_f", *sr.set.d_f,
                            2.0 - ref.gamma + ref.alpha);
        report.values.emplace_back(fit_label(kind, 0, "d_f.value"),
                                   sr.set.d_f->value);
        report.values.emplace_back(fit_label(kind, 0, "d_f.std_error"),
                                   sr.set.d_f->std_error);
      }
      if (sr.set.zeta_derived)
        append_derived_line(text, "zeta(D_f)", *sr.set.zeta_derived,
                            (2.0 - ref.gamma) / (2.0 - ref.gamma + ref.alpha));
      if (sr.set.d_f_from_kappa)
        append_derived_line(text, "D_f(kappa)", *sr.set.d_f_from_kappa,
                            1.0 + ref.kappa / 8.0);
      if (sr.set.zeta_gap) {
        char buf[80];
        std::snprintf(buf, sizeof buf,
                      "  consistency |zeta_fit - zeta_derived| = %.2f sigma\n",
                      sr.set.zeta_gap->value);
        text += buf;
      }

      text += "  mean excitation cost by L (ref large-L ";
      {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.3f",
                      mode == ExcitationMode::Max ? ref.de_max
                                                  : ref.de_random);
        text += buf;
        text += "):\n";
      }
      for (const auto& [L, m, se] : sr.delta_e_by_l) {
        char buf[80];
        std::snprintf(buf, sizeof buf, "    L=%-4d <dE> = %.4f +- %.4f\n", L,
                      m, se);
        text += buf;
      }
      {
        const auto& [L, s] = sizes.back();
        const MeanSe gm = mean_se(s->ground);
        char buf[100];
        std::snprintf(buf, sizeof buf,
                      "  ground cost per dimer at L=%d: %.4f +- %.4f (ref "
                      "%.3f)\n",
                      L, gm.mean, gm.se, ref.ground_per_dimer);
        text += buf;
      }
      report.strata.push_back(std::move(sr));
    }
  }

  if (!opt.plot_dir.empty()) write_plot_data(records, opt.plot_dir);
  return report;
}

void write_plot_data(std::span<const ObservationRecord> records,
                     const std::string& dir) {
  std::filesystem::create_directories(dir);
  if (records.empty()) return;
  const ExcitationMode mode = mode_from_tag(records[0].excitation);

  if (mode == ExcitationMode::Epsilon) {
    for (const auto& [key, s] : collect_eps(records)) {
      const auto [kind, L] = key;
      const std::string base =
          dir + "/" + std::string(1, kind) + "_L" + std::to_string(L);
      std::vector<std::pair<double, double>> dve, evd;
      std::vector<double> col(s.d.size());
      for (size_t k = 0; k < s.grid.size(); ++k) {
        for (size_t i = 0; i < s.d.size(); ++i) col[i] = s.d[i][k];
        const double dm = mean_se(col).mean;
        for (size_t i = 0; i < s.e.size(); ++i) col[i] = s.e[i][k];
        const double em = mean_se(col).mean;
        dve.emplace_back(s.grid[k], dm);
        if (dm > 0.0 && em > 0.0) evd.emplace_back(dm, em);
      }
      write_xy(base + "_distance_vs_epsilon.dat", dve);
      write_xy(base + "_energy_vs_distance.dat", evd);
    }
    return;
  }

  const auto strata = collect_link(records, false);
  const auto strata_winding = collect_link(records, true);
  std::map<char, std::vector<std::pair<double, double>>> mean_s, mean_r2,
      theta2, theta2_winding;
  for (const auto& [key, s] : strata) {
    const auto [kind, L] = key;
    // CCDF of the per-instance loop size
    if (!s.S.empty()) {
      std::vector<double> sorted(s.S);
      std::sort(sorted.begin(), sorted.end());
      std::vector<std::pair<double, double>> ccdf;
      const double n = static_cast<double>(sorted.size());
      size_t i = 0;
      while (i < sorted.size()) {
        size_t j = i;
        while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
        ccdf.emplace_back(sorted[i],
                          static_cast<double>(sorted.size() - j) / n);
        i = j;
      }
      write_xy(dir + "/ccdf_" + std::string(1, kind) + "_L" +
                   std::to_string(L) + ".dat",
               ccdf);
    }
    mean_s[kind].emplace_back(L, mean_se(s.S).mean);
    mean_r2[kind].emplace_back(L, mean_se(s.R2).mean);
    if (!s.Th.empty())
      theta2[kind].emplace_back(std::log(L), mean_se(s.Th).mean);
    auto itw = strata_winding.find(key);
    if (itw != strata_winding.end() && !itw->second.Th.empty())
      theta2_winding[kind].emplace_back(std::log(L),
                                        mean_se(itw->second.Th).mean);
  }
  for (const auto& [kind, xy] : mean_s)
    write_xy(dir + "/mean_S_" + std::string(1, kind) + ".dat", xy);
  for (const auto& [kind, xy] : mean_r2)
    write_xy(dir + "/mean_R2_" + std::string(1, kind) + ".dat", xy);
  for (const auto& [kind, xy] : theta2)
    write_xy(dir + "/theta2_" + std::string(1, kind) + ".dat", xy);
  for (const auto& [kind, xy] : theta2_winding)
    write_xy(dir + "/theta2_winding_" + std::string(1, kind) + ".dat", xy);
}

}  // namespace dimerlab
