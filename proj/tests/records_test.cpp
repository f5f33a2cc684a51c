#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "doctest.h"
#include "dimerlab/errors.hpp"
#include "dimerlab/records.hpp"

using namespace dimerlab;

namespace {

ObservationRecord sample_instance_row() {
  ObservationRecord r;
  r.kind = 'H';
  r.L = 16;
  r.instance = 42;
  r.excitation = "epsilon";
  r.epsilon = 0.12345678901234567;
  r.ground_cost = 17.5;
  r.delta_e = 0.25;
  r.S = 36;
  r.overlap = 0.875;
  r.distance = 0.125;
  return r;
}

ObservationRecord sample_loop_row() {
  ObservationRecord r;
  r.kind = 'H';
  r.L = 16;
  r.instance = 42;
  r.excitation = "max";
  r.ground_cost = 17.5;
  r.delta_e = 0.25;
  r.loop_index = 0;
  r.S = 36;
  r.R2 = 3.0625;
  r.theta2_gauged = 1.25;
  r.theta2_raw = 2.5;
  r.wx = -1;
  r.wy = 2;
  return r;
}

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name) {
    path = (std::filesystem::temp_directory_path() / name).string();
  }
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("csv header names every field in order") {
  CHECK(kRecordsCsvHeader ==
        "kind,L,instance,excitation,epsilon,ground_cost,delta_e,loop_index,S,"
        "R2,theta2_gauged,theta2_raw,wx,wy,overlap,distance");
}

TEST_CASE("rows round-trip through text exactly") {
  for (const ObservationRecord& r :
       {sample_instance_row(), sample_loop_row()}) {
    const std::string line = to_csv(r);
    const ObservationRecord back = parse_csv_row(line);
    CHECK(back.kind == r.kind);
    CHECK(back.L == r.L);
    CHECK(back.instance == r.instance);
    CHECK(back.excitation == r.excitation);
    CHECK(back.epsilon == r.epsilon);
    CHECK(back.ground_cost == r.ground_cost);
    CHECK(back.delta_e == r.delta_e);
    CHECK(back.loop_index == r.loop_index);
    CHECK(back.S == r.S);
    CHECK(back.R2 == r.R2);
    CHECK(back.theta2_gauged == r.theta2_gauged);
    CHECK(back.theta2_raw == r.theta2_raw);
    CHECK(back.wx == r.wx);
    CHECK(back.wy == r.wy);
    CHECK(back.overlap == r.overlap);
    CHECK(back.distance == r.distance);
    CHECK(to_csv(back) == line);  // text is a fixed point
  }
}

TEST_CASE("absent fields serialize as empty columns") {
  const std::string line = to_csv(sample_loop_row());
  // epsilon, overlap and distance are absent on a max-mode loop row
  CHECK(line.find("max,,") != std::string::npos);
  const std::string tail = line.substr(line.size() - 2);
  CHECK(tail == ",,");

  ObservationRecord r = parse_csv_row(line);
  CHECK_FALSE(r.epsilon.has_value());
  CHECK_FALSE(r.overlap.has_value());
  CHECK_FALSE(r.distance.has_value());
  CHECK(r.is_instance_row() == false);
  CHECK(sample_instance_row().is_instance_row());
}

TEST_CASE("malformed rows are rejected") {
  const std::string good = to_csv(sample_instance_row());
  CHECK_THROWS_AS(parse_csv_row(good + ",extra"), Error);
  CHECK_THROWS_AS(parse_csv_row(good.substr(0, good.rfind(','))), Error);
  std::string bad = good;
  bad.replace(bad.find("17.5"), 4, "12x5");
  CHECK_THROWS_AS(parse_csv_row(bad), Error);
  CHECK_THROWS_AS(parse_csv_row(""), Error);
}

TEST_CASE("seventeen digits round-trip awkward doubles") {
  ObservationRecord r = sample_instance_row();
  r.ground_cost = 0.1 + 0.2;             // 0.30000000000000004
  r.delta_e = 1.0 / 3.0;
  r.epsilon = 6.02214076e23;
  const ObservationRecord back = parse_csv_row(to_csv(r));
  CHECK(back.ground_cost == r.ground_cost);
  CHECK(back.delta_e == r.delta_e);
  CHECK(back.epsilon == r.epsilon);
}

TEST_CASE("canonical order groups instances and sorts their loops") {
  ObservationRecord a = sample_instance_row();  // H 16 42 eps=0.123...
  ObservationRecord b = sample_loop_row();      // H 16 42 loop 0

  // instance summary row precedes its loop rows
  ObservationRecord a0 = a;
  a0.epsilon.reset();
  CHECK(record_order_less(a0, b));

  // loops sort by index
  ObservationRecord b2 = b;
  b2.loop_index = 1;
  CHECK(record_order_less(b, b2));
  CHECK_FALSE(record_order_less(b2, b));

  // epsilon rows sort by coupling, absent first
  ObservationRecord eps_hi = a;
  eps_hi.epsilon = 0.5;
  CHECK(record_order_less(a, eps_hi));
  CHECK(record_order_less(a0, a));

  // kind, then L, then instance dominate
  ObservationRecord q = a;
  q.kind = 'Q';
  CHECK(record_order_less(a, q));
  ObservationRecord bigger = a;
  bigger.L = 32;
  CHECK(record_order_less(a, bigger));
  ObservationRecord later = a;
  later.instance = 43;
  CHECK(record_order_less(a, later));
}

TEST_CASE("files write sorted and read back verbatim") {
  TempFile tmp("dimerlab_records_test.csv");

  std::vector<ObservationRecord> rows;
  ObservationRecord loop = sample_loop_row();
  loop.excitation = "max";
  ObservationRecord inst = loop;
  inst.loop_index.reset();
  ObservationRecord later = inst;
  later.instance = 50;
  // deliberately unsorted
  rows.push_back(later);
  rows.push_back(loop);
  rows.push_back(inst);

  write_records_csv(tmp.path, rows);
  const std::vector<ObservationRecord> back = read_records_csv(tmp.path);
  REQUIRE(back.size() == 3);
  CHECK(back[0].instance == 42);
  CHECK_FALSE(back[0].loop_index.has_value());
  CHECK(back[1].instance == 42);
  CHECK(back[1].loop_index == 0);
  CHECK(back[2].instance == 50);
  for (std::size_t i = 0; i + 1 < back.size(); ++i)
    CHECK(record_order_less(back[i], back[i + 1]));
}

TEST_CASE("reading rejects a wrong header and skips comments") {
  TempFile tmp("dimerlab_records_header.csv");
  {
    FILE* f = std::fopen(tmp.path.c_str(), "w");
    REQUIRE(f != nullptr);
    std::fputs("not,the,header\n", f);
    std::fclose(f);
  }
  CHECK_THROWS_AS(read_records_csv(tmp.path), Error);

  {
    FILE* f = std::fopen(tmp.path.c_str(), "w");
    REQUIRE(f != nullptr);
    std::fputs(std::string(kRecordsCsvHeader).c_str(), f);
    std::fputs("\n# a comment\n\n", f);
    std::fputs((to_csv(sample_instance_row()) + "\n").c_str(), f);
    std::fclose(f);
  }
  const auto rows = read_records_csv(tmp.path);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].instance == 42);
  CHECK_THROWS_AS(read_records_csv("/nonexistent/dimerlab.csv"), Error);
}
