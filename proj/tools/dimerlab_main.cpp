#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"

#include "dimerlab/excitation.hpp"
#include "dimerlab/harness.hpp"
#include "dimerlab/instance.hpp"
#include "dimerlab/kasteleyn.hpp"
#include "dimerlab/lattice.hpp"
#include "dimerlab/matching.hpp"
#include "dimerlab/observables.hpp"
#include "dimerlab/records.hpp"
#include "dimerlab/rng.hpp"

namespace {

int cmd_count(int m, int n) {
  const mpz_class exact = dimerlab::count_tilings_dp(m, n);
  std::cout << exact.get_str() << "\n";
  const double approx = dimerlab::count_tilings_product(m, n);
  std::printf("%.0f\n", approx);
  if (m >= 2 && n >= 2) {
    std::printf("log density %.6f (large-square limit 0.291561)\n",
                dimerlab::catalan_density_check(m, n));
  }
  return 0;
}

int cmd_run(const std::string& config_path,
            const std::vector<std::pair<std::string, std::string>>& overrides) {
  dimerlab::ExperimentConfig cfg;
  if (!config_path.empty()) cfg = dimerlab::parse_config_file(config_path);
  for (const auto& [key, value] : overrides)
    dimerlab::apply_config_entry(cfg, key, value);
  const dimerlab::RunManifest manifest = dimerlab::run_experiment(cfg);
  dimerlab::write_manifest(manifest, std::cout);
  std::cout << "records: " << dimerlab::records_path(cfg) << "\n";
  return manifest.failures.empty() ? 0 : 1;
}

int cmd_fit(const std::string& records_file, const dimerlab::FitOptions& opt,
            const std::string& kv_path) {
  const std::vector<dimerlab::ObservationRecord> records =
      dimerlab::read_records_csv(records_file);
  const dimerlab::FitReport report = dimerlab::fit_report(records, opt);
  std::cout << report.text;
  if (!kv_path.empty()) {
    std::ofstream out(kv_path, std::ios::trunc);
    if (!out) throw dimerlab::Error("cannot open " + kv_path);
    char buf[64];
    for (const auto& [key, value] : report.values) {
      std::snprintf(buf, sizeof buf, "%.17g", value);
      out << key << "=" << buf << "\n";
    }
    std::cout << "wrote " << kv_path << "\n";
  }
  return 0;
}

int cmd_plot_data(const std::string& records_file, const std::string& dir) {
  dimerlab::write_plot_data(dimerlab::read_records_csv(records_file), dir);
  std::cout << "wrote plot data to " << dir << "\n";
  return 0;
}

// Self-check suite: structural lattice invariants, the counting oracle
// against known values, both solvers against brute force on random small
// graphs, and excitation invariants on a few seeded instances.
int cmd_validate() {
  int failures = 0;
  auto section = [&](const std::string& name, bool ok,
                     const std::string& detail) {
    std::cout << (ok ? "ok   " : "FAIL ") << name;
    if (!ok && !detail.empty()) std::cout << ": " << detail;
    std::cout << "\n";
    if (!ok) ++failures;
  };

  {
    std::string detail;
    bool ok = true;
    for (dimerlab::LatticeKind kind :
         {dimerlab::LatticeKind::H, dimerlab::LatticeKind::Q,
          dimerlab::LatticeKind::T}) {
      for (int L : {2, 4, 6, 8, 10}) {
        const dimerlab::LatticeGraph g = dimerlab::build_lattice(kind, L);
        const std::vector<std::string> issues = dimerlab::validate_lattice(g);
        if (!issues.empty()) {
          ok = false;
          detail = std::string(1, dimerlab::kind_char(kind)) + " L=" +
                   std::to_string(L) + ": " + issues.front();
        }
      }
    }
    section("lattice invariants (H/Q/T, L=2..10)", ok, detail);
  }

  {
    struct Known {
      int m, n;
      long value;
    };
    const Known known[] = {{1, 2, 1},  {2, 2, 2},    {2, 3, 3},
                           {3, 4, 11}, {4, 4, 36},   {2, 10, 89},
                           {6, 6, 6728}, {8, 8, 12988816}};
    std::string detail;
    bool ok = true;
    for (const Known& k : known) {
      if (dimerlab::count_tilings_dp(k.m, k.n) != k.value) {
        ok = false;
        detail = std::to_string(k.m) + "x" + std::to_string(k.n);
        break;
      }
    }
    for (int m = 1; m <= 8 && ok; ++m) {
      for (int n = 1; n <= 8 && ok; ++n) {
        const mpz_class exact = dimerlab::count_tilings_dp(m, n);
        const double approx = dimerlab::count_tilings_product(m, n);
        const double rel = std::abs(approx - exact.get_d()) /
                           std::max(1.0, exact.get_d());
        if (rel > 1e-6) {
          ok = false;
          detail = "product formula off at " + std::to_string(m) + "x" +
                   std::to_string(n);
        }
      }
    }
    section("tiling counts vs known values and product formula", ok, detail);
  }

  {
    std::string detail;
    bool ok = true;
    dimerlab::rng::CounterRng gen(0x76616C6964617465ull);
    for (int trial = 0; trial < 60 && ok; ++trial) {
      const int n = 4 + 2 * static_cast<int>(gen.next_below(4));
      std::vector<std::pair<std::int32_t, std::int32_t>> ends;
      std::vector<double> weights;
      for (int u = 0; u < n; ++u) {
        for (int v = u + 1; v < n; ++v) {
          if (gen.next_unit() < 0.7) {
            ends.emplace_back(u, v);
            weights.push_back(gen.next_unit());
          }
        }
      }
      try {
        const dimerlab::BruteForceResult oracle =
            dimerlab::brute_force_matching(n, ends, weights);
        const dimerlab::Matching got =
            dimerlab::min_weight_perfect_matching(n, ends, weights);
        if (got.edge_ids != oracle.best.edge_ids) {
          ok = false;
          detail = "blossom disagrees with brute force on trial " +
                   std::to_string(trial);
        }
      } catch (const dimerlab::NoPerfectMatching&) {
        try {
          dimerlab::min_weight_perfect_matching(n, ends, weights);
          ok = false;
          detail = "blossom found a matching the oracle says cannot exist";
        } catch (const dimerlab::NoPerfectMatching&) {
        }
      }
    }
    for (int trial = 0; trial < 40 && ok; ++trial) {
      const int half = 2 + static_cast<int>(gen.next_below(4));
      std::vector<std::pair<std::int32_t, std::int32_t>> ends;
      std::vector<double> weights;
      for (int u = 0; u < half; ++u) {
        for (int v = 0; v < half; ++v) {
          if (gen.next_unit() < 0.8) {
            ends.emplace_back(u, half + v);
            weights.push_back(gen.next_unit());
          }
        }
      }
      try {
        const dimerlab::Matching general =
            dimerlab::min_weight_perfect_matching(2 * half, ends, weights);
        const dimerlab::Matching bip =
            dimerlab::min_weight_perfect_matching_bipartite(2 * half, ends,
                                                            weights);
        if (general.edge_ids != bip.edge_ids) {
          ok = false;
          detail = "Hungarian disagrees with blossom on trial " +
                   std::to_string(trial);
        }
      } catch (const dimerlab::NoPerfectMatching&) {
        try {
          dimerlab::min_weight_perfect_matching_bipartite(2 * half, ends,
                                                          weights);
          ok = false;
          detail = "solvers disagree about matchability";
        } catch (const dimerlab::NoPerfectMatching&) {
        }
      }
    }
    section("solver cross-checks on random graphs", ok, detail);
  }

  {
    std::string detail;
    bool ok = true;
    const dimerlab::LatticeGraph g =
        dimerlab::build_lattice(dimerlab::LatticeKind::Q, 8);
    for (std::int64_t i = 0; i < 5 && ok; ++i) {
      const dimerlab::WeightedInstance inst =
          dimerlab::sample_weights(g, 0xABCDEF, i);
      const dimerlab::Matching ground =
          dimerlab::min_weight_perfect_matching(inst);
      const dimerlab::LinkExcitationResult ex =
          dimerlab::max_weight_excite(inst, ground);
      const std::vector<dimerlab::Loop> loops =
          dimerlab::symmetric_difference(ground, ex.excited, g);
      if (ex.delta_e <= 0.0 || loops.size() != 1) {
        ok = false;
        detail = "excitation did not produce a single positive-cost loop";
        break;
      }
      const dimerlab::WindingAngleStats st =
          dimerlab::winding_angle_stats(loops[0]);
      const auto [wx, wy] = dimerlab::winding_numbers(loops[0]);
      const double want = (wx == 0 && wy == 0) ? 2.0 * M_PI : 0.0;
      if (std::abs(std::abs(st.theta_sum) - want) > 1e-9) {
        ok = false;
        detail = "turning angles do not close up";
        break;
      }
      double last_overlap = 1.0;
      for (double eps : {0.0, 0.05, 0.2, 0.6}) {
        const dimerlab::EpsilonExcitationResult res =
            dimerlab::epsilon_excite(inst, ground, eps);
        if (eps == 0.0 && res.excited.edge_ids != ground.edge_ids) {
          ok = false;
          detail = "eps=0 is not the identity";
          break;
        }
        if (res.overlap > last_overlap) {
          ok = false;
          detail = "overlap increased with eps";
          break;
        }
        last_overlap = res.overlap;
      }
    }
    section("excitation invariants on Q L=8", ok, detail);
  }

  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"random-dimer matching laboratory"};
  app.require_subcommand(1);

  CLI::App* run = app.add_subcommand("run", "run a seeded experiment");
  std::string config_path;
  run->add_option("--config", config_path, "key=value config file");
  // Every config key is also a flag; CLI values win over the file.
  std::vector<std::pair<std::string, std::string>> overrides;
  std::map<std::string, std::string> flag_values;
  const std::pair<const char*, const char*> keys[] = {
      {"kinds", "lattice kinds, comma separated (H,Q,T)"},
      {"L", "even system sizes, comma separated"},
      {"instances", "disorder realizations per stratum"},
      {"mode", "max | random | epsilon"},
      {"epsilon_grid", "coupling values, or 'default'"},
      {"seed", "master seed"},
      {"workers", "solver threads (does not change output)"},
      {"out", "output directory (default $DIMERLAB_OUT or .)"},
      {"zeta_window_lo", "tail-fit window lower edge"},
      {"zeta_window_hi", "tail-fit window upper edge"},
      {"eps_fit_max", "epsilon regime cut for beta/tau"},
      {"winding_only", "restrict kappa fit to winding loops (default true)"}};
  for (const auto& [key, help] : keys)
    run->add_option("--" + std::string(key), flag_values[key], help);

  CLI::App* fit = app.add_subcommand("fit", "estimate exponents from records");
  std::string records_file, kv_path, plots_dir;
  dimerlab::FitOptions fopt;
  fit->add_option("records", records_file, "records CSV from a run")
      ->required();
  fit->add_option("--seed", fopt.seed, "bootstrap seed");
  fit->add_option("--resamples", fopt.bootstrap_resamples,
                  "bootstrap resamples");
  fit->add_flag("--winding-only,!--all-loops", fopt.winding_only,
                "restrict kappa fit to winding loops (default on)");
  double zlo = 0.0, zhi = 0.0;
  CLI::Option* zlo_opt =
      fit->add_option("--zeta-lo", zlo, "tail window lower edge");
  CLI::Option* zhi_opt =
      fit->add_option("--zeta-hi", zhi, "tail window upper edge");
  fit->add_option("--eps-max", fopt.eps_fit_max,
                  "epsilon regime cut for beta/tau");
  fit->add_option("--kv", kv_path, "write machine-readable values here");
  fit->add_option("--plots", plots_dir, "write plot data files here");

  CLI::App* count = app.add_subcommand("count", "domino tilings of m x n");
  int count_m = 0, count_n = 0;
  count->add_option("m", count_m, "rows")->required();
  count->add_option("n", count_n, "columns")->required();

  CLI::App* validate =
      app.add_subcommand("validate", "run the built-in oracle suite");

  CLI::App* plot =
      app.add_subcommand("plot-data", "emit plot data from records");
  std::string plot_records, plot_dir = "plots";
  plot->add_option("records", plot_records, "records CSV")->required();
  plot->add_option("--out", plot_dir, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (run->parsed()) {
      for (const auto& [key, help] : keys)
        if (run->count("--" + std::string(key)))
          overrides.emplace_back(key, flag_values[key]);
      return cmd_run(config_path, overrides);
    }
    if (fit->parsed()) {
      if (zlo_opt->count()) fopt.zeta_window_lo = zlo;
      if (zhi_opt->count()) fopt.zeta_window_hi = zhi;
      fopt.plot_dir = plots_dir;
      return cmd_fit(records_file, fopt, kv_path);
    }
    if (count->parsed()) return cmd_count(count_m, count_n);
    if (validate->parsed()) return cmd_validate();
    if (plot->parsed()) return cmd_plot_data(plot_records, plot_dir);
  } catch (const dimerlab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
