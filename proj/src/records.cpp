#include "dimerlab/records.hpp"

#include <algorithm>
#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <tuple>

#include "dimerlab/errors.hpp"

namespace dimerlab {

namespace {

void append_double(std::string& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

void append_opt(std::string& out, const std::optional<double>& v) {
  if (v) append_double(out, *v);
}

void append_opt(std::string& out, const std::optional<int>& v) {
  if (v) out += std::to_string(*v);
}

double parse_double(std::string_view f, const char* what) {
  char* end = nullptr;
  errno = 0;
  std::string tmp(f);
  const double v = std::strtod(tmp.c_str(), &end);
  if (errno != 0 || end != tmp.c_str() + tmp.size() || tmp.empty())
    throw Error(std::string("bad CSV field '") + tmp + "' for " + what);
  return v;
}

std::int64_t parse_int(std::string_view f, const char* what) {
  char* end = nullptr;
  errno = 0;
  std::string tmp(f);
  const long long v = std::strtoll(tmp.c_str(), &end, 10);
  if (errno != 0 || end != tmp.c_str() + tmp.size() || tmp.empty())
    throw Error(std::string("bad CSV field '") + tmp + "' for " + what);
  return v;
}

}  // namespace

std::string to_csv(const ObservationRecord& r) {
  std::string out;
  out.reserve(200);
  out += r.kind;
  out += ',';
  out += std::to_string(r.L);
  out += ',';
  out += std::to_string(r.instance);
  out += ',';
  out += r.excitation;
  out += ',';
  append_opt(out, r.epsilon);
  out += ',';
  append_double(out, r.ground_cost);
  out += ',';
  append_double(out, r.delta_e);
  out += ',';
  append_opt(out, r.loop_index);
  out += ',';
  out += std::to_string(r.S);
  out += ',';
  append_opt(out, r.R2);
  out += ',';
  append_opt(out, r.theta2_gauged);
  out += ',';
  append_opt(out, r.theta2_raw);
  out += ',';
  append_opt(out, r.wx);
  out += ',';
  append_opt(out, r.wy);
  out += ',';
  append_opt(out, r.overlap);
  out += ',';
  append_opt(out, r.distance);
  return out;
}

ObservationRecord parse_csv_row(std::string_view line) {
  std::vector<std::string_view> f;
  size_t pos = 0;
  while (true) {
    const size_t comma = line.find(',', pos);
    if (comma == std::string_view::npos) {
      f.push_back(line.substr(pos));
      break;
    }
    f.push_back(line.substr(pos, comma - pos));
    pos = comma + 1;
  }
  if (f.size() != 16)
    throw Error("CSV row has " + std::to_string(f.size()) +
                " fields, expected 16");

  ObservationRecord r;
  if (f[0].size() != 1) throw Error("bad CSV field for kind");
  r.kind = f[0][0];
  r.L = static_cast<int>(parse_int(f[1], "L"));
  r.instance = parse_int(f[2], "instance");
  r.excitation = std::string(f[3]);
  if (!f[4].empty()) r.epsilon = parse_double(f[4], "epsilon");
  r.ground_cost = parse_double(f[5], "ground_cost");
  r.delta_e = parse_double(f[6], "delta_e");
  if (!f[7].empty())
    r.loop_index = static_cast<int>(parse_int(f[7], "loop_index"));
  r.S = parse_int(f[8], "S");
  if (!f[9].empty()) r.R2 = parse_double(f[9], "R2");
  if (!f[10].empty()) r.theta2_gauged = parse_double(f[10], "theta2_gauged");
  if (!f[11].empty()) r.theta2_raw = parse_double(f[11], "theta2_raw");
  if (!f[12].empty()) r.wx = static_cast<int>(parse_int(f[12], "wx"));
  if (!f[13].empty()) r.wy = static_cast<int>(parse_int(f[13], "wy"));
  if (!f[14].empty()) r.overlap = parse_double(f[14], "overlap");
  if (!f[15].empty()) r.distance = parse_double(f[15], "distance");
  return r;
}

bool record_order_less(const ObservationRecord& a,
                       const ObservationRecord& b) {
  auto key = [](const ObservationRecord& r) {
    return std::make_tuple(
        r.kind, r.L, r.instance, r.epsilon.has_value(),
        r.epsilon.value_or(0.0), r.loop_index.has_value(),
        r.loop_index.value_or(0));
  };
  return key(a) < key(b);
}

void write_records_csv(const std::string& path,
                       std::span<const ObservationRecord> records) {
  std::vector<const ObservationRecord*> order(records.size());
  for (size_t i = 0; i < records.size(); ++i) order[i] = &records[i];
  std::stable_sort(order.begin(), order.end(),
                   [](const ObservationRecord* a, const ObservationRecord* b) {
                     return record_order_less(*a, *b);
                   });

  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw Error("cannot open " + tmp + " for writing");
    out << kRecordsCsvHeader << '\n';
    for (const ObservationRecord* r : order) out << to_csv(*r) << '\n';
    out.flush();
    if (!out) throw Error("write failed for " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw Error("cannot rename " + tmp + " to " + path + ": " +
                std::strerror(errno));
}

std::vector<ObservationRecord> read_records_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw Error(path + " is empty");
  if (line != kRecordsCsvHeader)
    throw Error(path + " has an unexpected header");
  std::vector<ObservationRecord> out;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    out.push_back(parse_csv_row(line));
  }
  return out;
}

}  // namespace dimerlab
