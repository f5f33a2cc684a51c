#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "dimerlab/lattice.hpp"
#include "dimerlab/records.hpp"
#include "dimerlab/statistics.hpp"

namespace dimerlab {

enum class ExcitationMode { Max, Random, Epsilon };

const char* mode_tag(ExcitationMode m);  // "max" | "random" | "epsilon"
ExcitationMode mode_from_tag(const std::string& tag);

// Everything a run needs. Config files are flat `key = value` lines (blank
// lines and # comments ignored); every key can also be set from the command
// line. Keys: kinds, L, instances, mode, epsilon_grid, seed, workers, out,
// zeta_window_lo, zeta_window_hi, eps_fit_max, winding_only.
struct ExperimentConfig {
  std::vector<LatticeKind> kinds = {LatticeKind::Q};
  std::vector<int> L_list = {8, 16, 24, 32, 48, 64};
  int instances = 2000;
  ExcitationMode mode = ExcitationMode::Max;
  std::vector<double> epsilon_grid;  // epsilon mode; empty = built-in grid
  std::uint64_t master_seed = 1;
  int workers = 1;
  std::string out_dir;  // empty: $DIMERLAB_OUT, else "."

  // Fit-stage knobs, carried in the config so a run and its analysis share
  // one file.
  std::optional<double> zeta_window_lo;
  std::optional<double> zeta_window_hi;
  double eps_fit_max = 0.3;
  bool winding_only = true;
};

ExperimentConfig parse_config_file(const std::string& path);
// `key=value` as it would appear in the file; ConfigError on unknown keys.
void apply_config_entry(ExperimentConfig& cfg, const std::string& key,
                        const std::string& value);
// ConfigError unless: L even and >= 2, instances >= 1, workers >= 1,
// epsilon grid strictly increasing and >= 0, kinds non-empty and distinct.
void validate_config(const ExperimentConfig& cfg);
std::string canonical_config_string(const ExperimentConfig& cfg);
std::string resolved_out_dir(const ExperimentConfig& cfg);
// Records file for the run, named by mode so different modes can share a
// directory: <out>/records_<mode>.csv.
std::string records_path(const ExperimentConfig& cfg);

struct InstanceFailure {
  char kind = '?';
  int L = 0;
  std::int64_t instance = 0;
  std::string message;
};

struct RunManifest {
  std::uint64_t config_hash = 0;
  std::string version;
  double wall_seconds = 0.0;
  // (kind, L, completed, configured)
  std::vector<std::tuple<char, int, std::int64_t, std::int64_t>> strata;
  std::vector<InstanceFailure> failures;
};

// Runs every configured (kind, L, instance) stratum that is not already in
// the output, in a worker pool; a single writer thread journals each
// finished instance to <records>.partial, and on completion the journal is
// folded into a sorted records CSV whose bytes depend only on (config,
// seed), not on worker count. A failing instance is logged into the manifest
// and skipped; everything else still completes. The manifest is also written
// next to the records as manifest_<mode>.txt.
RunManifest run_experiment(const ExperimentConfig& cfg);

struct FitOptions {
  std::uint64_t seed = 20260815;
  int bootstrap_resamples = 200;
  // Contractible loops carry a deterministic 2*pi of gauged heading, so
  // their theta^2 saturates instead of growing with ln L; the kappa law
  // only shows in the winding classes.
  bool winding_only = true;
  std::optional<double> zeta_window_lo;
  std::optional<double> zeta_window_hi;
  double eps_fit_max = 0.3;
  std::string plot_dir;  // non-empty: also emit plot data files there
};

// One fitted stratum: link modes pool all L per kind (L = 0); epsilon mode
// fits each (kind, L) separately.
struct StratumReport {
  char kind = '?';
  int L = 0;
  ExponentSet set;
  // (L, mean delta_e, std error) per system size, for the report table.
  std::vector<std::tuple<int, double, double>> delta_e_by_l;
};

struct FitReport {
  std::vector<StratumReport> strata;
  std::string text;                                    // human-readable
  std::vector<std::pair<std::string, double>> values;  // machine-readable
};

// Statistics pipeline over a records file's rows. Exponent error bars are
// bootstrapped over instances (seeded, deterministic); the point estimates
// come from the full sample. InsufficientData names the missing stratum.
FitReport fit_report(std::span<const ObservationRecord> records,
                     const FitOptions& opt);

// Two-column gnuplot-ready files into `dir`: CCDF per (kind, L), mean S and
// mean R^2 vs L, mean theta^2 vs ln L, and for epsilon runs distance vs
// epsilon and energy vs distance.
void write_plot_data(std::span<const ObservationRecord> records,
                     const std::string& dir);

void write_manifest(const RunManifest& m, std::ostream& out);

}  // namespace dimerlab
