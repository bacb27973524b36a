#include <doctest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "symos/workload.hpp"
#include "test_support.hpp"

using namespace symos;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string emitted(const RunReport& r, EmitOptions o) {
  std::ostringstream out;
  emit(r, o, out);
  return out.str();
}

std::size_t count_prefix(const std::string& text, const std::string& prefix) {
  std::size_t n = 0;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) n += line.rfind(prefix, 0) == 0;
  return n;
}

const char* kHeader = "mem 32\nvmem 64\npage 4\n";

}  // namespace

TEST_CASE("parse_workload") {
  SUBCASE("reference workload") {
    const WorkloadSpec s = parse_workload(read_file(SYMOS_GOLDEN_DIR "/w1.workload"));
    CHECK(s.mem_capacity == 32);
    CHECK(s.vmem_capacity == 64);
    CHECK(s.page_size == 4);
    CHECK(s.sched_policy == SchedulePolicy{sched::RoundRobin{1}});
    REQUIRE(s.procedures.size() == 2);
    CHECK(s.procedures[1].seg_boundaries() == std::vector<std::uint64_t>{0, 3, 7});
  }
  SUBCASE("unknown directive names its line") {
    try {
      parse_workload("mem 32\nvmem 64\npagee 4\n");
      FAIL("expected ParseError");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::ParseError);
      CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
  }
  SUBCASE("boundaries must end at the size") {
    CHECK(code_of([] { parse_workload(std::string(kHeader) + "proc p size=5 segs=0,4\n"); }) ==
          Errc::ValidationError);
  }
  SUBCASE("malformed values") {
    CHECK(code_of([] { parse_workload(std::string(kHeader) + "proc p size=x time=1 segs=0,1\n"); }) ==
          Errc::ParseError);
    CHECK(code_of([] { parse_workload(std::string(kHeader) + "proc p size=1 time=1 segs=0,1 z=1\n"); }) ==
          Errc::ParseError);
    CHECK(code_of([] { parse_workload("mem 32\nmem 32\n"); }) == Errc::ParseError);
    CHECK(code_of([] { parse_workload(std::string(kHeader) + "policy rr:q\n"); }) == Errc::ParseError);
  }
  SUBCASE("cross-directive rules") {
    CHECK(code_of([] { parse_workload(kHeader); }) == Errc::ValidationError);
    CHECK(code_of([] { parse_workload("mem 30\nvmem 64\npage 4\nproc p size=1 time=1 segs=0,1\n"); }) ==
          Errc::ValidationError);
    CHECK(code_of([] {
            parse_workload(std::string(kHeader) + "policy prio\nproc p size=1 time=1 segs=0,1\n");
          }) == Errc::ValidationError);
    CHECK(code_of([] {
            parse_workload(std::string(kHeader) + "policy rr:0\nproc p size=1 time=1 segs=0,1\n");
          }) == Errc::ValidationError);
    CHECK(code_of([] {
            parse_workload(std::string(kHeader) +
                           "proc p size=1 time=1 segs=0,1\nproc p size=1 time=1 segs=0,1\n");
          }) == Errc::ValidationError);
    CHECK(code_of([] {
            parse_workload(std::string(kHeader) + "alloc fixed:4\nproc p size=5 time=1 segs=0,5\n");
          }) == Errc::ValidationError);
  }
  SUBCASE("growth and comments") {
    const WorkloadSpec s = parse_workload(std::string(kHeader) +
                                          "  # nothing here\nproc p size=4 time=5 segs=0,4 "
                                          "grow=1:+2,3:-1 # trailing\n");
    CHECK(s.procedures[0].growth_schedule() == std::vector<GrowthEvent>{{1, 2}, {3, -1}});
  }
}

TEST_CASE("to_text round-trips random specs") {
  std::mt19937 rng(17);
  const std::vector<AllocationPolicy> allocs{
      {org::Identity{}, partition::Variable{}},
      {org::SortAscendingBySize{}, partition::Variable{}},
      {org::ByExternalKey{"priority"}, partition::Variable{}},
      {org::Identity{}, partition::Fixed{64}}};
  const std::vector<SchedulePolicy> policies{sched::Fcfs{}, sched::ShortestJobFirst{},
                                             sched::Priority{}, sched::RoundRobin{3}};
  for (int trial = 0; trial < 100; ++trial) {
    WorkloadSpec s;
    s.page_size = 1 + rng() % 8;
    s.mem_capacity = s.page_size * (1 + rng() % 16);
    s.vmem_capacity = 1 + rng() % 100;
    s.alloc_policy = allocs[rng() % allocs.size()];
    s.sched_policy = policies[rng() % policies.size()];
    const int n = 1 + static_cast<int>(rng() % 4);
    for (int i = 0; i < n; ++i) {
      const std::uint64_t size = 2 + rng() % 30, time = 2 + rng() % 6;
      std::vector<GrowthEvent> grow;
      if (rng() % 2) grow.push_back({1, static_cast<std::int64_t>(rng() % 3) - 1});
      s.procedures.emplace_back("p" + std::to_string(i + 1), size, time,
                                std::vector<std::uint64_t>{0, size / 2, size}, rng() % 5, grow);
    }
    CHECK(parse_workload(to_text(s)) == s);
  }
}

TEST_CASE("run on the reference workload") {
  const WorkloadSpec s = parse_workload(read_file(SYMOS_GOLDEN_DIR "/w1.workload"));
  const RunReport r = run(s);
  REQUIRE_FALSE(r.failure.has_value());
  CHECK(serialize_tables(r.tables) == read_file(SYMOS_GOLDEN_DIR "/w1_tables.tsv"));
  CHECK(r.audits_ok());
  CHECK(r.total_ticks == 5);
  // rr:1 over times 3,2: p1 p2 p1 p2 p1, each a switch, plus the final return to p0.
  CHECK(r.switch_count == 6);
  CHECK(r.schedule.plan.size() == 5);

  const std::string machine = emitted(r, {EmitWhat::All, Format::Machine, true});
  CHECK(count_prefix(machine, "SEG\t") == 3);
  CHECK(count_prefix(machine, "PAGE\t") == 4);
  CHECK(count_prefix(machine, "ALLOC\t") == 2);
  CHECK(count_prefix(machine, "SUMMARY\t") == 3);
  CHECK(machine.find("AUDIT\ttime\tschedule\tPASS") != std::string::npos);
  CHECK(machine.find("FAIL") == std::string::npos);

  const std::string trace_only = emitted(r, {EmitWhat::Trace, Format::Machine, false});
  CHECK(trace_only == serialize(r.schedule.trace));

  const std::string human = emitted(r, {EmitWhat::All, Format::Human, false});
  CHECK(human.find("p1") != std::string::npos);
  CHECK(human.find("p2") != std::string::npos);
  CHECK(human.find("Segment tables") != std::string::npos);
}

TEST_CASE("run stops at the failing phase with clean pools") {
  const WorkloadSpec s = parse_workload(
      "mem 8\nvmem 64\npage 4\nproc a size=5 time=1 segs=0,5\nproc b size=5 time=1 segs=0,5\n");
  const RunReport r = run(s);
  REQUIRE(r.failure.has_value());
  CHECK(r.failure->phase == "paging");
  CHECK(r.failure->code == Errc::Exhausted);
  CHECK(r.audits_ok());
  CHECK(r.failure->message.find("'b'") != std::string::npos);
  CHECK(exit_code_for(r.failure->code) == 4);
}

TEST_CASE("growth is applied in the alloc phase") {
  const WorkloadSpec s = parse_workload(std::string(kHeader) +
                                        "proc a size=4 time=3 segs=0,4 grow=1:+3,2:-2\n"
                                        "proc b size=2 time=1 segs=0,2\n");
  const RunReport r = run(s);
  REQUIRE_FALSE(r.failure.has_value());
  CHECK(bound_size(r.allocation, "a") == 5);
  CHECK(bound_size(r.allocation, "b") == 2);
  CHECK(r.audits_ok());
}

TEST_CASE("runs are deterministic and hoisting is invisible") {
  const WorkloadSpec s = parse_workload(read_file(SYMOS_GOLDEN_DIR "/w1.workload"));
  const EmitOptions o{EmitWhat::All, Format::Machine, true};
  const std::string a = emitted(run(s), o);
  CHECK(emitted(run(s), o) == a);
  CHECK(emitted(run(s, {true, SwitchMode::Preemptive}), o) == a);
  CHECK(emitted(run(s, {false, SwitchMode::Cooperative}), o) != a);
}

TEST_CASE("exit codes") {
  CHECK(exit_code_for(Errc::ParseError) == 2);
  CHECK(exit_code_for(Errc::ValidationError) == 3);
  CHECK(exit_code_for(Errc::NoContiguousRun) == 4);
  CHECK(exit_code_for(Errc::NotFound) == 1);
}
