#include "symos/binding.hpp"

#include <algorithm>

namespace symos {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

bool admissible(const TaggedValue& left, const TaggedValue& right) {
  if (std::holds_alternative<ProcRef>(left)) {
    if (std::holds_alternative<Name>(right)) return true;
    if (const auto* r = std::get_if<Region>(&right)) {
      return r->kind == ResourceKind::Memory || r->kind == ResourceKind::Time;
    }
    return false;
  }
  if (std::holds_alternative<ProcSegment>(left)) {
    const auto* r = std::get_if<Region>(&right);
    return r && r->kind == ResourceKind::VirtualMemory;
  }
  if (std::holds_alternative<VmPage>(left)) return std::holds_alternative<Frame>(right);
  return false;
}

}  // namespace

std::string to_string(const TaggedValue& value) {
  return std::visit(
      overloaded{
          [](const ProcRef& p) { return p.name; },
          [](const ProcSegment& s) {
            return s.proc + "#seg" + std::to_string(s.seg_index) + to_string(s.span);
          },
          [](const VmPage& p) {
            return p.proc + "#seg" + std::to_string(p.seg_index) + "#page" +
                   std::to_string(p.page_index) + to_string(p.span);
          },
          [](const Region& r) { return std::string(to_string(r.kind)) + to_string(r); },
          [](const Name& n) {
            return std::visit(overloaded{[](std::uint64_t id) { return std::to_string(id); },
                                         [](const std::string& s) { return s; }},
                              n.value);
          },
          [](const Frame& f) { return "frame" + to_string(f.span); },
      },
      value);
}

Binding bind(TaggedValue o1, TaggedValue o2) {
  if (!admissible(o1, o2)) {
    throw Error(Errc::InadmissiblePair, to_string(o1) + " -> " + to_string(o2));
  }
  return Binding{std::move(o1), std::move(o2)};
}

const TaggedValue& unbind_fst(const Binding& b) noexcept { return b.left; }
const TaggedValue& unbind_snd(const Binding& b) noexcept { return b.right; }

bool BindingTable::contains(const Binding& b) const {
  return std::find(entries.begin(), entries.end(), b) != entries.end();
}

BindingTable append(BindingTable table, Binding b) {
  if (table.contains(b)) {
    throw Error(Errc::DuplicateEntry, to_string(b.left) + " -> " + to_string(b.right));
  }
  if (table.mode == Uniqueness::OneToOne) {
    const bool taken = std::any_of(table.entries.begin(), table.entries.end(),
                                   [&](const Binding& e) { return e.right == b.right; });
    if (taken) throw Error(Errc::RightSideTaken, to_string(b.right));
  }
  table.entries.push_back(std::move(b));
  return table;
}

BindingTable remove(BindingTable table, const Binding& b) {
  auto it = std::find(table.entries.begin(), table.entries.end(), b);
  if (it == table.entries.end()) {
    throw Error(Errc::NotFound, to_string(b.left) + " -> " + to_string(b.right));
  }
  table.entries.erase(it);
  return table;
}

std::vector<TaggedValue> bound_to(const BindingTable& table, const std::string& name) {
  std::vector<TaggedValue> out;
  for (const Binding& b : table.entries) {
    if (const auto* p = std::get_if<ProcRef>(&b.left); p && p->name == name) {
      out.push_back(b.right);
    }
  }
  return out;
}

NamePool NamePool::process_ids(std::uint64_t first, std::uint64_t count) {
  NamePool pool;
  pool.kind = Kind::ProcessIds;
  for (std::uint64_t i = 0; i < count; ++i) pool.available.push_back(Name{first + i});
  return pool;
}

NamePool NamePool::file_names(std::vector<std::string> names) {
  NamePool pool;
  pool.kind = Kind::FileNames;
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());
  for (auto& n : names) pool.available.push_back(Name{std::move(n)});
  return pool;
}

BindingTable assign_names(std::span<const Procedure> procs, NamePool& names, bool unique) {
  BindingTable table;
  table.mode = unique ? Uniqueness::OneToOne : Uniqueness::ManyToOne;
  NamePool work = names;
  for (const Procedure& p : procs) {
    if (work.available.empty()) {
      throw Error(Errc::NamesExhausted, "no name left for " + p.name());
    }
    Name chosen = work.available.front();
    if (unique) {
      work.available.erase(work.available.begin());
      work.issued.push_back(chosen);
    }
    table = append(std::move(table), bind(ProcRef{p.name()}, std::move(chosen)));
  }
  names = std::move(work);
  return table;
}

}  // namespace symos
