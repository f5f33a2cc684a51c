#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dimerlab {

// One CSV row. Each solved instance emits a summary row (loop_index empty,
// S = total symmetric-difference size, overlap/distance filled on epsilon
// runs) followed by one row per loop (loop geometry filled, instance-level
// fields repeated or left empty as marked below).
struct ObservationRecord {
  char kind = 'Q';
  int L = 0;
  std::int64_t instance = 0;
  std::string excitation;  // "max" | "random" | "epsilon"
  std::optional<double> epsilon;
  double ground_cost = 0.0;
  double delta_e = 0.0;
  std::optional<int> loop_index;
  std::int64_t S = 0;
  std::optional<double> R2;
  std::optional<double> theta2_gauged;
  std::optional<double> theta2_raw;
  std::optional<int> wx;
  std::optional<int> wy;
  std::optional<double> overlap;   // instance rows of epsilon runs only
  std::optional<double> distance;  // 1 - overlap

  bool is_instance_row() const { return !loop_index.has_value(); }
};

inline constexpr std::string_view kRecordsCsvHeader =
    "kind,L,instance,excitation,epsilon,ground_cost,delta_e,loop_index,S,R2,"
    "theta2_gauged,theta2_raw,wx,wy,overlap,distance";

// Floats at 17 significant digits, empty string for absent fields, no
// trailing newline.
std::string to_csv(const ObservationRecord& r);

// Inverse of to_csv; Error on wrong field count or an unparsable field.
ObservationRecord parse_csv_row(std::string_view line);

// Canonical file order: (kind, L, instance, epsilon, loop_index) with absent
// epsilon/loop_index sorting first, so each instance block reads summary row
// then loops. Final outputs are sorted with this regardless of completion
// order, which is what makes runs byte-identical across worker counts.
bool record_order_less(const ObservationRecord& a, const ObservationRecord& b);

// Header plus sorted rows; writes a temp file in the same directory and
// renames it over `path`.
void write_records_csv(const std::string& path,
                       std::span<const ObservationRecord> records);

// Verifies the header, skips blank and '#'-prefixed lines.
std::vector<ObservationRecord> read_records_csv(const std::string& path);

}  // namespace dimerlab
