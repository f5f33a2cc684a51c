#include "dimerlab/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <condition_variable>
#include <cstdio>
#include <cstdlib>
#include <deque>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "dimerlab/excitation.hpp"
#include "dimerlab/instance.hpp"
#include "dimerlab/matching.hpp"
#include "dimerlab/observables.hpp"
#include "dimerlab/rng.hpp"

namespace dimerlab {

namespace {

constexpr const char* kVersion = "1.0.0";

std::string trim(std::string_view s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

long long to_int(const std::string& v, const std::string& key) {
  try {
    size_t pos = 0;
    const long long x = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': '" + v +
                      "' is not an integer");
  }
}

double to_double(const std::string& v, const std::string& key) {
  try {
    size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': '" + v +
                      "' is not a number");
  }
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

using StratumKey = std::tuple<char, int, std::int64_t>;

StratumKey key_of(const ObservationRecord& r) {
  return {r.kind, r.L, r.instance};
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

const char* mode_tag(ExcitationMode m) {
  switch (m) {
    case ExcitationMode::Max: return "max";
    case ExcitationMode::Random: return "random";
    case ExcitationMode::Epsilon: return "epsilon";
  }
  return "max";
}

ExcitationMode mode_from_tag(const std::string& tag) {
  if (tag == "max") return ExcitationMode::Max;
  if (tag == "random") return ExcitationMode::Random;
  if (tag == "epsilon") return ExcitationMode::Epsilon;
  throw ConfigError("unknown excitation mode '" + tag +
                    "' (want max, random or epsilon)");
}

void apply_config_entry(ExperimentConfig& cfg, const std::string& key,
                        const std::string& value) {
  if (key == "kinds") {
    cfg.kinds.clear();
    for (const std::string& item : split_list(value)) {
      if (item.size() != 1)
        throw ConfigError("config key 'kinds': bad lattice kind '" + item +
                          "'");
      try {
        cfg.kinds.push_back(kind_from_char(item[0]));
      } catch (const Error& e) {
        throw ConfigError(std::string("config key 'kinds': ") + e.what());
      }
    }
  } else if (key == "L") {
    cfg.L_list.clear();
    for (const std::string& item : split_list(value))
      cfg.L_list.push_back(static_cast<int>(to_int(item, key)));
  } else if (key == "instances") {
    cfg.instances = static_cast<int>(to_int(value, key));
  } else if (key == "mode") {
    cfg.mode = mode_from_tag(value);
  } else if (key == "epsilon_grid") {
    cfg.epsilon_grid.clear();
    if (value != "default")
      for (const std::string& item : split_list(value))
        cfg.epsilon_grid.push_back(to_double(item, key));
  } else if (key == "seed") {
    try {
      size_t pos = 0;
      cfg.master_seed = std::stoull(value, &pos);
      if (pos != value.size()) throw std::invalid_argument(value);
    } catch (const std::exception&) {
      throw ConfigError("config key 'seed': '" + value +
                        "' is not an unsigned integer");
    }
  } else if (key == "workers") {
    cfg.workers = static_cast<int>(to_int(value, key));
  } else if (key == "out") {
    cfg.out_dir = value;
  } else if (key == "zeta_window_lo") {
    cfg.zeta_window_lo = to_double(value, key);
  } else if (key == "zeta_window_hi") {
    cfg.zeta_window_hi = to_double(value, key);
  } else if (key == "eps_fit_max") {
    cfg.eps_fit_max = to_double(value, key);
  } else if (key == "winding_only") {
    if (value == "1" || value == "true")
      cfg.winding_only = true;
    else if (value == "0" || value == "false")
      cfg.winding_only = false;
    else
      throw ConfigError("config key 'winding_only': want 0/1/true/false");
  } else {
    throw ConfigError("unknown config key '" + key + "'");
  }
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  ExperimentConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string text = trim(line);
    if (text.empty()) continue;
    const size_t eq = text.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(lineno) +
                        ": expected key = value");
    apply_config_entry(cfg, trim(text.substr(0, eq)),
                       trim(text.substr(eq + 1)));
  }
  return cfg;
}

void validate_config(const ExperimentConfig& cfg) {
  if (cfg.kinds.empty()) throw ConfigError("no lattice kinds configured");
  for (size_t i = 0; i < cfg.kinds.size(); ++i)
    for (size_t j = i + 1; j < cfg.kinds.size(); ++j)
      if (cfg.kinds[i] == cfg.kinds[j])
        throw ConfigError("duplicate lattice kind");
  if (cfg.L_list.empty()) throw ConfigError("no system sizes configured");
  for (int L : cfg.L_list)
    if (L < 2 || L % 2 != 0)
      throw ConfigError("system size " + std::to_string(L) +
                        " must be even and >= 2");
  for (size_t i = 1; i < cfg.L_list.size(); ++i)
    if (cfg.L_list[i] <= cfg.L_list[i - 1])
      throw ConfigError("system sizes must be strictly increasing");
  if (cfg.instances < 1) throw ConfigError("instances must be >= 1");
  if (cfg.workers < 1) throw ConfigError("workers must be >= 1");
  const std::vector<double>& grid = cfg.epsilon_grid;
  for (size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] >= 0.0) || !std::isfinite(grid[i]))
      throw ConfigError("epsilon grid values must be finite and >= 0");
    if (i > 0 && grid[i] <= grid[i - 1])
      throw ConfigError("epsilon grid must be strictly increasing");
  }
  if (!(cfg.eps_fit_max > 0.0))
    throw ConfigError("eps_fit_max must be positive");
  if (cfg.zeta_window_lo && cfg.zeta_window_hi &&
      !(*cfg.zeta_window_lo < *cfg.zeta_window_hi))
    throw ConfigError("zeta window must have lo < hi");
}

std::string canonical_config_string(const ExperimentConfig& cfg) {
  std::ostringstream out;
  out << "kinds=";
  for (size_t i = 0; i < cfg.kinds.size(); ++i)
    out << (i ? "," : "") << kind_char(cfg.kinds[i]);
  out << "\nL=";
  for (size_t i = 0; i < cfg.L_list.size(); ++i)
    out << (i ? "," : "") << cfg.L_list[i];
  out << "\ninstances=" << cfg.instances;
  out << "\nmode=" << mode_tag(cfg.mode);
  out << "\nepsilon_grid=";
  for (size_t i = 0; i < cfg.epsilon_grid.size(); ++i)
    out << (i ? "," : "") << fmt_double(cfg.epsilon_grid[i]);
  out << "\nseed=" << cfg.master_seed;
  return out.str();
}

std::string resolved_out_dir(const ExperimentConfig& cfg) {
  if (!cfg.out_dir.empty()) return cfg.out_dir;
  const char* env = std::getenv("DIMERLAB_OUT");
  if (env != nullptr && env[0] != '\0') return env;
  return ".";
}

std::string records_path(const ExperimentConfig& cfg) {
  return resolved_out_dir(cfg) + "/records_" + mode_tag(cfg.mode) + ".csv";
}

namespace {

// Instance blocks finished by the workers, drained by the writer thread.
struct Block {
  std::string bytes;
  char kind = '?';
  int L = 0;
};

class BlockQueue {
 public:
  void push(Block b) {
    {
      std::lock_guard<std::mutex> lk(mu_);
      q_.push_back(std::move(b));
    }
    cv_.notify_one();
  }
  void close() {
    {
      std::lock_guard<std::mutex> lk(mu_);
      closed_ = true;
    }
    cv_.notify_all();
  }
  bool pop(Block& out) {
    std::unique_lock<std::mutex> lk(mu_);
    cv_.wait(lk, [&] { return closed_ || !q_.empty(); });
    if (q_.empty()) return false;
    out = std::move(q_.front());
    q_.pop_front();
    return true;
  }

 private:
  std::mutex mu_;
  std::condition_variable cv_;
  std::deque<Block> q_;
  bool closed_ = false;
};

// The epsilon set recorded for an instance must match the configured grid
// exactly, value for value, or the instance is recomputed. CSV floats round
// trip at 17 significant digits, so exact double comparison is sound.
bool epsilon_set_matches(const std::vector<const ObservationRecord*>& rows,
                         const std::vector<double>& grid) {
  std::vector<double> have;
  for (const ObservationRecord* r : rows)
    if (r->is_instance_row() && r->epsilon) have.push_back(*r->epsilon);
  std::sort(have.begin(), have.end());
  return have == grid;
}

struct LoadedState {
  std::vector<ObservationRecord> rows;
  std::set<StratumKey> done;
};

// Accept an instance's rows into the resume state if it belongs to the
// configured strata and, for epsilon runs, covers the configured grid.
void accept_instance(LoadedState& state, const ExperimentConfig& cfg,
                     const std::set<StratumKey>& wanted,
                     const std::vector<double>& grid, StratumKey key,
                     std::vector<ObservationRecord>&& rows) {
  if (state.done.count(key) || !wanted.count(key)) return;
  bool has_instance_row = false;
  for (const ObservationRecord& r : rows) {
    if (r.excitation != mode_tag(cfg.mode)) return;
    has_instance_row |= r.is_instance_row();
  }
  if (!has_instance_row) return;
  if (cfg.mode == ExcitationMode::Epsilon) {
    std::vector<const ObservationRecord*> ptrs;
    ptrs.reserve(rows.size());
    for (const ObservationRecord& r : rows) ptrs.push_back(&r);
    if (!epsilon_set_matches(ptrs, grid)) return;
  }
  state.done.insert(key);
  for (ObservationRecord& r : rows) state.rows.push_back(std::move(r));
}

LoadedState load_existing(const std::string& final_path,
                          const std::string& partial_path,
                          const ExperimentConfig& cfg,
                          const std::set<StratumKey>& wanted,
                          const std::vector<double>& grid) {
  LoadedState state;

  if (std::filesystem::exists(final_path)) {
    try {
      std::map<StratumKey, std::vector<ObservationRecord>> by_key;
      for (ObservationRecord& r : read_records_csv(final_path))
        by_key[key_of(r)].push_back(std::move(r));
      for (auto& [key, rows] : by_key)
        accept_instance(state, cfg, wanted, grid, key, std::move(rows));
    } catch (const Error& e) {
      std::cerr << "[dimerlab] ignoring unreadable " << final_path << ": "
                << e.what() << "\n";
    }
  }

  if (std::filesystem::exists(partial_path)) {
    std::ifstream in(partial_path);
    std::string line;
    if (in && std::getline(in, line) && line == kRecordsCsvHeader) {
      std::map<StratumKey, std::vector<ObservationRecord>> buffer;
      while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line.rfind("#done ", 0) == 0) {
          char kind = '?';
          int L = 0;
          long long idx = -1;
          if (std::sscanf(line.c_str(), "#done %c %d %lld", &kind, &L,
                          &idx) == 3) {
            const StratumKey key{kind, L, idx};
            auto it = buffer.find(key);
            if (it != buffer.end()) {
              accept_instance(state, cfg, wanted, grid, key,
                              std::move(it->second));
              buffer.erase(it);
            }
          }
          continue;
        }
        if (line[0] == '#') continue;
        try {
          ObservationRecord r = parse_csv_row(line);
          buffer[key_of(r)].push_back(std::move(r));
        } catch (const Error&) {
          break;  // torn tail from an interrupted append; nothing follows
        }
      }
    }
  }
  return state;
}

std::vector<ObservationRecord> run_instance(const LatticeGraph& g,
                                            const ExperimentConfig& cfg,
                                            const std::vector<double>& grid,
                                            std::uint64_t stratum_seed,
                                            std::int64_t index) {
  const WeightedInstance inst = sample_weights(g, stratum_seed, index);
  const Matching ground = min_weight_perfect_matching(inst);
  const char kc = kind_char(g.kind());

  auto instance_row = [&](double delta_e, std::int64_t total_s) {
    ObservationRecord r;
    r.kind = kc;
    r.L = g.extent();
    r.instance = index;
    r.excitation = mode_tag(cfg.mode);
    r.ground_cost = ground.cost;
    r.delta_e = delta_e;
    r.S = total_s;
    return r;
  };
  auto loop_rows = [&](std::vector<ObservationRecord>& rows,
                       const std::vector<Loop>& loops, double delta_e,
                       std::optional<double> eps) {
    for (size_t i = 0; i < loops.size(); ++i) {
      ObservationRecord r = instance_row(delta_e, loops[i].length());
      r.epsilon = eps;
      r.loop_index = static_cast<int>(i);
      r.R2 = gyration_radius(loops[i]);
      const WindingAngleStats st = winding_angle_stats(loops[i]);
      r.theta2_gauged = st.theta_sq_gauged;
      r.theta2_raw = st.theta_sq_raw;
      r.wx = loops[i].wx;
      r.wy = loops[i].wy;
      rows.push_back(std::move(r));
    }
  };

  std::vector<ObservationRecord> rows;
  if (cfg.mode == ExcitationMode::Epsilon) {
    for (double eps : grid) {
      const EpsilonExcitationResult res = epsilon_excite(inst, ground, eps);
      const std::vector<Loop> loops =
          symmetric_difference(ground, res.excited, g);
      std::int64_t total = 0;
      for (const Loop& lp : loops) total += lp.length();
      ObservationRecord r = instance_row(res.delta_e, total);
      r.epsilon = eps;
      r.overlap = res.overlap;
      r.distance = res.distance;
      rows.push_back(std::move(r));
      loop_rows(rows, loops, res.delta_e, eps);
    }
  } else {
    LinkExcitationResult res;
    if (cfg.mode == ExcitationMode::Max) {
      res = max_weight_excite(inst, ground);
    } else {
      // A stream distinct from the weight stream for the same instance.
      rng::CounterRng pick(rng::derive(rng::derive(stratum_seed, index), 1));
      res = random_link_excite(inst, ground, pick);
    }
    const std::vector<Loop> loops =
        symmetric_difference(ground, res.excited, g);
    std::int64_t total = 0;
    for (const Loop& lp : loops) total += lp.length();
    rows.push_back(instance_row(res.delta_e, total));
    loop_rows(rows, loops, res.delta_e, std::nullopt);
  }
  return rows;
}

}  // namespace

RunManifest run_experiment(const ExperimentConfig& cfg) {
  validate_config(cfg);
  const auto t0 = std::chrono::steady_clock::now();

  const std::string out = resolved_out_dir(cfg);
  std::filesystem::create_directories(out);
  const std::string final_path = records_path(cfg);
  const std::string partial_path = final_path + ".partial";

  std::vector<double> grid;
  if (cfg.mode == ExcitationMode::Epsilon) {
    grid = cfg.epsilon_grid.empty() ? default_epsilon_grid()
                                    : cfg.epsilon_grid;
  }

  std::map<std::pair<char, int>, LatticeGraph> lattices;
  for (LatticeKind kind : cfg.kinds)
    for (int L : cfg.L_list)
      lattices.emplace(std::make_pair(kind_char(kind), L),
                       build_lattice(kind, L));

  std::set<StratumKey> wanted;
  for (LatticeKind kind : cfg.kinds)
    for (int L : cfg.L_list)
      for (std::int64_t i = 0; i < cfg.instances; ++i)
        wanted.insert({kind_char(kind), L, i});

  LoadedState loaded =
      load_existing(final_path, partial_path, cfg, wanted, grid);

  struct Task {
    LatticeKind kind;
    int L;
    std::int64_t index;
  };
  std::vector<Task> tasks;
  for (LatticeKind kind : cfg.kinds)
    for (int L : cfg.L_list)
      for (std::int64_t i = 0; i < cfg.instances; ++i)
        if (!loaded.done.count({kind_char(kind), L, i}))
          tasks.push_back({kind, L, i});

  RunManifest manifest;
  manifest.version = kVersion;
  manifest.config_hash = fnv1a(canonical_config_string(cfg));

  std::vector<ObservationRecord> new_rows;
  std::set<StratumKey> succeeded;
  std::mutex result_mu;

  if (!tasks.empty()) {
    std::ofstream partial(partial_path, std::ios::app);
    if (!partial) throw Error("cannot open " + partial_path);
    if (std::filesystem::file_size(partial_path) == 0)
      partial << kRecordsCsvHeader << '\n';

    BlockQueue queue;
    std::map<std::pair<char, int>, std::int64_t> remaining;
    for (const Task& t : tasks) ++remaining[{kind_char(t.kind), t.L}];

    std::thread writer([&] {
      Block b;
      std::int64_t written = 0;
      while (queue.pop(b)) {
        partial << b.bytes;
        partial.flush();
        ++written;
        auto it = remaining.find({b.kind, b.L});
        if (it != remaining.end() && --it->second == 0)
          std::cerr << "[dimerlab] " << b.kind << " L=" << b.L
                    << " complete (" << written << "/" << tasks.size()
                    << " tasks)\n";
      }
    });

    std::atomic<size_t> cursor{0};
    auto work = [&] {
      for (;;) {
        const size_t i = cursor.fetch_add(1);
        if (i >= tasks.size()) return;
        const Task& t = tasks[i];
        const char kc = kind_char(t.kind);
        const std::uint64_t stratum_seed = rng::derive(
            rng::derive(cfg.master_seed, static_cast<std::uint64_t>(kc)),
            static_cast<std::uint64_t>(t.L));
        try {
          const LatticeGraph& g = lattices.at({kc, t.L});
          std::vector<ObservationRecord> rows =
              run_instance(g, cfg, grid, stratum_seed, t.index);
          Block b;
          b.kind = kc;
          b.L = t.L;
          for (const ObservationRecord& r : rows) {
            b.bytes += to_csv(r);
            b.bytes += '\n';
          }
          b.bytes += "#done ";
          b.bytes += kc;
          b.bytes += ' ' + std::to_string(t.L) + ' ' +
                     std::to_string(t.index) + '\n';
          {
            std::lock_guard<std::mutex> lk(result_mu);
            for (ObservationRecord& r : rows)
              new_rows.push_back(std::move(r));
            succeeded.insert({kc, t.L, t.index});
          }
          queue.push(std::move(b));
        } catch (const std::exception& e) {
          std::lock_guard<std::mutex> lk(result_mu);
          manifest.failures.push_back({kc, t.L, t.index, e.what()});
          std::cerr << "[dimerlab] instance failed: " << kc << " L=" << t.L
                    << " i=" << t.index << ": " << e.what() << "\n";
        }
      }
    };

    const int nworkers =
        static_cast<int>(std::min<size_t>(cfg.workers, tasks.size()));
    std::vector<std::thread> pool;
    for (int w = 0; w < nworkers; ++w) pool.emplace_back(work);
    for (std::thread& th : pool) th.join();
    queue.close();
    writer.join();
  }

  std::vector<ObservationRecord> all_rows = std::move(loaded.rows);
  for (ObservationRecord& r : new_rows) all_rows.push_back(std::move(r));
  write_records_csv(final_path, all_rows);
  std::error_code ec;
  std::filesystem::remove(partial_path, ec);

  for (LatticeKind kind : cfg.kinds) {
    for (int L : cfg.L_list) {
      const char kc = kind_char(kind);
      std::int64_t completed = 0;
      for (std::int64_t i = 0; i < cfg.instances; ++i)
        if (loaded.done.count({kc, L, i}) || succeeded.count({kc, L, i}))
          ++completed;
      manifest.strata.emplace_back(kc, L, completed, cfg.instances);
    }
  }
  manifest.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();

  const std::string manifest_path =
      out + "/manifest_" + mode_tag(cfg.mode) + ".txt";
  std::ofstream mf(manifest_path, std::ios::trunc);
  if (mf) write_manifest(manifest, mf);

  return manifest;
}

void write_manifest(const RunManifest& m, std::ostream& out) {
  out << "version " << m.version << "\n";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(m.config_hash));
  out << "config_hash " << buf << "\n";
  out << "wall_seconds " << m.wall_seconds << "\n";
  for (const auto& [kind, L, completed, configured] : m.strata)
    out << "stratum " << kind << " " << L << " " << completed << "/"
        << configured << "\n";
  for (const InstanceFailure& f : m.failures)
    out << "failure " << f.kind << " " << f.L << " " << f.instance << " "
        << f.message << "\n";
}

}  // namespace dimerlab
