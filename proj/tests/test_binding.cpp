#include <doctest.h>

#include <algorithm>
#include <random>

#include "symos/binding.hpp"

#include "test_support.hpp"

using namespace symos;

namespace {

const Region kR04{ResourceKind::Memory, 0, 4};

}  // namespace

TEST_CASE("bind builds admissible pairs only") {
  const Binding b = bind(ProcRef{"p1"}, kR04);
  CHECK(std::get<Region>(unbind_snd(b)) == kR04);

  const Binding n = bind(ProcRef{"p1"}, Name{std::uint64_t{7}});
  CHECK(std::get<ProcRef>(unbind_fst(n)).name == "p1");

  CHECK(code_of([] { bind(kR04, kR04); }) == Errc::InadmissiblePair);
  CHECK(code_of([] { bind(ProcRef{"p"}, Frame{kR04}); }) == Errc::InadmissiblePair);
  CHECK(code_of([] {
          bind(ProcSegment{"p", 1, {ResourceKind::Procedure, 0, 4}}, kR04);
        }) == Errc::InadmissiblePair);
  bind(ProcSegment{"p", 1, {ResourceKind::Procedure, 0, 4}},
       Region{ResourceKind::VirtualMemory, 0, 4});
  bind(VmPage{"p", 1, 1, {ResourceKind::VirtualMemory, 0, 3}}, Frame{{ResourceKind::Memory, 0, 3}});
  bind(ProcRef{"p"}, Region{ResourceKind::Time, 3, 5});
}

TEST_CASE("projection laws hold for random admissible pairs") {
  std::mt19937 rng(42);
  for (int i = 0; i < 100; ++i) {
    const std::uint64_t lo = rng() % 100, hi = lo + rng() % 10;
    TaggedValue left, right;
    switch (rng() % 4) {
      case 0:
        left = ProcRef{"p" + std::to_string(i)};
        right = Region{ResourceKind::Memory, lo, hi};
        break;
      case 1:
        left = ProcRef{"p" + std::to_string(i)};
        right = Name{"file" + std::to_string(lo)};
        break;
      case 2:
        left = ProcSegment{"p", 1, {ResourceKind::Procedure, 0, hi - lo}};
        right = Region{ResourceKind::VirtualMemory, lo, hi};
        break;
      default:
        left = VmPage{"p", 1, 1, {ResourceKind::VirtualMemory, lo, hi}};
        right = Frame{{ResourceKind::Memory, lo, hi}};
    }
    const Binding b = bind(left, right);
    CHECK(unbind_fst(b) == left);
    CHECK(unbind_snd(b) == right);
  }
}

TEST_CASE("append and remove") {
  const Binding a = bind(ProcRef{"p1"}, Name{std::uint64_t{7}});
  const Binding b = bind(ProcRef{"p2"}, Name{std::uint64_t{7}});
  const Binding c = bind(ProcRef{"p2"}, Name{std::uint64_t{8}});

  BindingTable t = append(BindingTable{}, a);
  CHECK(t.entries == std::vector<Binding>{a});
  CHECK(code_of([&] { append(t, a); }) == Errc::DuplicateEntry);
  CHECK(code_of([&] { append(t, b); }) == Errc::RightSideTaken);
  CHECK(code_of([&] { remove(t, c); }) == Errc::NotFound);

  BindingTable many{{}, Uniqueness::ManyToOne};
  many = append(append(many, a), b);
  CHECK(many.size() == 2);

  t = append(t, c);
  const BindingTable round = append(remove(t, a), a);
  CHECK(round.entries == std::vector<Binding>{c, a});
  auto sorted_names = [](BindingTable x) {
    std::vector<std::string> out;
    for (const Binding& e : x.entries) out.push_back(to_string(e.left) + to_string(e.right));
    std::sort(out.begin(), out.end());
    return out;
  };
  CHECK(sorted_names(round) == sorted_names(t));
}

TEST_CASE("assign_names") {
  const std::vector<Procedure> two{Procedure::whole("pa", 1), Procedure::whole("pb", 1)};
  const std::vector<Procedure> three{Procedure::whole("pa", 1), Procedure::whole("pb", 1),
                                     Procedure::whole("pc", 1)};

  SUBCASE("unique takes lowest names first") {
    NamePool names = NamePool::process_ids(1, 3);
    const BindingTable t = assign_names(two, names, true);
    REQUIRE(t.size() == 2);
    CHECK(t.entries[0] == bind(ProcRef{"pa"}, Name{std::uint64_t{1}}));
    CHECK(t.entries[1] == bind(ProcRef{"pb"}, Name{std::uint64_t{2}}));
    CHECK(names.available == std::vector<Name>{Name{std::uint64_t{3}}});
    for (const Name& n : names.issued) {
      CHECK(std::find(names.available.begin(), names.available.end(), n) ==
            names.available.end());
    }
  }
  SUBCASE("unique runs out") {
    NamePool names = NamePool::process_ids(1, 2);
    const NamePool before = names;
    CHECK(code_of([&] { assign_names(three, names, true); }) == Errc::NamesExhausted);
    CHECK(names.available == before.available);
  }
  SUBCASE("many-to-one reuses a name") {
    NamePool names = NamePool::file_names({"f9"});
    const BindingTable t = assign_names(three, names, false);
    REQUIRE(t.size() == 3);
    for (const Binding& b : t.entries) CHECK(std::get<Name>(b.right) == Name{"f9"});
  }
}
