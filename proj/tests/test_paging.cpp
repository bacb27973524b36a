#include <doctest.h>

#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "oracles.hpp"
#include "symos/paging.hpp"
#include "test_support.hpp"

using namespace symos;

namespace {

Region vm(std::uint64_t lo, std::uint64_t hi) { return Region{ResourceKind::VirtualMemory, lo, hi}; }
Region ph(std::uint64_t lo, std::uint64_t hi) { return Region{ResourceKind::Memory, lo, hi}; }
Region off(std::uint64_t lo, std::uint64_t hi) { return Region{ResourceKind::Procedure, lo, hi}; }

std::vector<Procedure> w1_procs() {
  return {Procedure("p1", 5, 3, {0, 5}), Procedure("p2", 7, 2, {0, 3, 7})};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("segment data and slices") {
  const Procedure p("p", 12, 1, {0, 3, 7, 12});
  const SegData d = get_segs_data(p);
  CHECK(d.k == 3);
  CHECK(proc_segs(p, d) == std::vector<Region>{off(0, 2), off(3, 6), off(7, 11)});
}

TEST_CASE("make_segs") {
  const Procedure p("p", 12, 1, {0, 3, 7, 12});
  SUBCASE("first fit per segment") {
    ResourcePool pool = finite_pool(ResourceKind::VirtualMemory, 64);
    CHECK(make_segs(pool, get_segs_data(p)) == std::vector<Region>{vm(0, 2), vm(3, 6), vm(7, 11)});
  }
  SUBCASE("all or nothing") {
    ResourcePool pool = finite_pool(ResourceKind::VirtualMemory, 10);
    const ResourcePool before = pool;
    try {
      make_segs(pool, get_segs_data(p));
      FAIL("expected Exhausted");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::Exhausted);
      CHECK(std::string(e.what()).find("segment 3") != std::string::npos);
    }
    CHECK(pool == before);
  }
}

TEST_CASE("seg_tab binds segments to vm regions") {
  ResourcePool pool = finite_pool(ResourceKind::VirtualMemory, 64);
  const Procedure p("p2", 7, 1, {0, 3, 7});
  const SegmentTable t = seg_tab(pool, p, get_segs_data(p));
  CHECK(t.owner == "p2");
  CHECK(t.rows == std::vector<SegmentRow>{{1, off(0, 2), vm(0, 2)}, {2, off(3, 6), vm(3, 6)}});
}

TEST_CASE("make_page") {
  CHECK(make_page(vm(0, 9), 4) == std::vector<Region>{vm(0, 3), vm(4, 7), vm(8, 9)});
  CHECK(make_page(vm(5, 7), 4) == std::vector<Region>{vm(5, 7)});
  CHECK(make_page(vm(0, 7), 4).size() == 2);
  CHECK(make_page(vm(0, 0), 1).size() == 1);
  std::mt19937 rng(8);
  for (int i = 0; i < 200; ++i) {
    const std::uint64_t lo = rng() % 50, size = 1 + rng() % 40, g = 1 + rng() % 9;
    const auto pages = make_page(vm(lo, lo + size - 1), g);
    CHECK(pages.size() == (size + g - 1) / g);
    std::uint64_t next = lo;
    for (std::size_t k = 0; k < pages.size(); ++k) {
      CHECK(pages[k].u_min == next);
      if (k + 1 < pages.size()) CHECK(pages[k].size() == g);
      next = pages[k].u_max + 1;
    }
    CHECK(next == lo + size);
  }
}

TEST_CASE("make_frame") {
  ResourcePool phys = finite_pool(ResourceKind::Memory, 16);
  CHECK(make_frame(phys, 4, 2) == std::vector<Region>{ph(0, 3), ph(4, 7)});
  const ResourcePool before = phys;
  try {
    make_frame(phys, 4, 3);
    FAIL("expected Exhausted");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::Exhausted);
    CHECK(std::string(e.what()).find("after 2 of 3") != std::string::npos);
  }
  CHECK(phys == before);
}

TEST_CASE("page_tab") {
  SUBCASE("frames carved on demand") {
    ResourcePool phys = finite_pool(ResourceKind::Memory, 32);
    const PageTable t = page_tab(phys, "p1", 1, vm(0, 4), 4);
    CHECK(t.rows == std::vector<PageRow>{{1, vm(0, 3), ph(0, 3)}, {2, vm(4, 4), ph(4, 7)}});
  }
  SUBCASE("frames taken from a pre-framed list") {
    ResourcePool phys = finite_pool(ResourceKind::Memory, 32);
    std::vector<Region> framed = make_frame(phys, 4, 3);
    const PageTable t = page_tab(phys, "p1", 1, vm(0, 4), 4, &framed);
    CHECK(t.rows[1].frame == ph(4, 7));
    CHECK(framed == std::vector<Region>{ph(8, 11)});
  }
  SUBCASE("too few pre-framed frames") {
    ResourcePool phys = finite_pool(ResourceKind::Memory, 32);
    std::vector<Region> framed = make_frame(phys, 4, 2);
    CHECK(code_of([&] { page_tab(phys, "p", 1, vm(0, 8), 4, &framed); }) == Errc::Exhausted);
  }
}

TEST_CASE("do_page_seg on the reference workload") {
  const std::string golden = read_file(SYMOS_GOLDEN_DIR "/w1_tables.tsv");
  for (bool hoist : {false, true}) {
    ResourcePool v = finite_pool(ResourceKind::VirtualMemory, 64);
    ResourcePool p = finite_pool(ResourceKind::Memory, 32);
    const PageSegResult r = do_page_seg(w1_procs(), v, p, {4, 64, 32, hoist});
    CHECK(serialize_tables(r) == golden);
    CHECK(translate("p2", 5, r.segment_tables, r.page_tables) == 14);
    CHECK(translate("p1", 4, r.segment_tables, r.page_tables) == 4);
    CHECK(code_of([&] { translate("p1", 5, r.segment_tables, r.page_tables); }) ==
          Errc::AddressOutOfRange);
    CHECK(code_of([&] { translate("p9", 0, r.segment_tables, r.page_tables); }) ==
          Errc::TableIncomplete);
    CHECK(code_of([&] { translate("p2", 0, r.segment_tables, {}); }) == Errc::TableIncomplete);
  }
  const auto ref = oracle::reference_tables({{"p1", {0, 5}}, {"p2", {0, 3, 7}}}, 64, 32, 4);
  REQUIRE(ref.has_value());
  CHECK(*ref == golden);
}

TEST_CASE("pools stay partitioned after every step") {
  ResourcePool v = finite_pool(ResourceKind::VirtualMemory, 64);
  ResourcePool p = finite_pool(ResourceKind::Memory, 32);
  std::vector<std::string> steps;
  do_page_seg(w1_procs(), v, p, {4, 64, 32, false}, org::Identity{}, [&](std::string_view s) {
    steps.emplace_back(s);
    CHECK(audit_partition(v).ok());
    CHECK(audit_partition(p).ok());
  });
  CHECK(steps.front() == "proc_segs");
  CHECK(std::count(steps.begin(), steps.end(), "page_tab") == 3);
}

TEST_CASE("failure rolls back the failing procedure only") {
  const std::vector<Procedure> procs{Procedure("a", 4, 1, {0, 4}), Procedure("b", 8, 1, {0, 8})};
  for (bool hoist : {false, true}) {
    ResourcePool v = finite_pool(ResourceKind::VirtualMemory, 10);
    ResourcePool p = finite_pool(ResourceKind::Memory, 32);
    bool rolled_back = false;
    try {
      do_page_seg(procs, v, p, {4, 10, 32, hoist}, org::Identity{},
                  [&](std::string_view s) { rolled_back |= s == "rollback"; });
      FAIL("expected failure");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::Exhausted);
      CHECK(std::string(e.what()).find("'b'") != std::string::npos);
    }
    CHECK(rolled_back);
    CHECK(v.occupied_total() == 4);
    CHECK(p.occupied_total() == 4);
    CHECK(audit_partition(v).ok());
    CHECK(audit_partition(p).ok());
  }
}

TEST_CASE("config validation") {
  CHECK(code_of([] { PagingConfig{4, 64, 30, false}.validate(); }) == Errc::ValidationError);
  CHECK(code_of([] { PagingConfig{0, 64, 32, false}.validate(); }) == Errc::ValidationError);
  PagingConfig{4, 64, 32, false}.validate();
}

TEST_CASE("random batches: tiling, injective translation, hoisting is invisible") {
  std::mt19937 rng(21);
  for (int trial = 0; trial < 150; ++trial) {
    const std::uint64_t g = std::uint64_t{1} << (rng() % 4);
    std::vector<Procedure> procs;
    std::vector<oracle::PagedProc> refs;
    const int n = 1 + static_cast<int>(rng() % 4);
    for (int i = 0; i < n; ++i) {
      const std::uint64_t size = 1 + rng() % 20;
      std::set<std::uint64_t> cuts{0, size};
      const int extra = static_cast<int>(rng() % 3);
      for (int c = 0; c < extra && size > 1; ++c) cuts.insert(1 + rng() % (size - 1));
      std::vector<std::uint64_t> b(cuts.begin(), cuts.end());
      procs.emplace_back("p" + std::to_string(i + 1), size, 1, b);
      refs.push_back({procs.back().name(), b});
    }
    const std::uint64_t vcap = 1 + rng() % 80, pcap = g * (1 + rng() % (96 / g));
    ResourcePool v1 = finite_pool(ResourceKind::VirtualMemory, vcap), v2 = v1;
    ResourcePool p1 = finite_pool(ResourceKind::Memory, pcap), p2 = p1;
    std::optional<std::string> plain, hoisted;
    try {
      plain = serialize_tables(do_page_seg(procs, v1, p1, {g, vcap, pcap, false}));
    } catch (const Error&) {
    }
    try {
      hoisted = serialize_tables(do_page_seg(procs, v2, p2, {g, vcap, pcap, true}));
    } catch (const Error&) {
    }
    CHECK(plain == hoisted);
    CHECK(plain == oracle::reference_tables(refs, vcap, pcap, g));
    CHECK(audit_partition(v1).ok());
    CHECK(audit_partition(p1).ok());
    CHECK(audit_partition(p2).ok());
  }
}
