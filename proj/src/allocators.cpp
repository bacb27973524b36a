#include "symos/allocators.hpp"

#include <algorithm>

namespace symos {

namespace {

Error with_procedure(const Error& e, const std::string& name) {
  return Error(e.code(), "procedure '" + name + "': " + e.detail());
}

std::vector<Region> regions_of(const BindingTable& table, const std::string& name) {
  std::vector<Region> out;
  for (const TaggedValue& v : bound_to(table, name)) {
    if (const auto* r = std::get_if<Region>(&v)) out.push_back(*r);
  }
  return out;
}

}  // namespace

std::vector<Procedure> organize_procedures(std::span<const Procedure> procs, const OrgSpec& order,
                                           SizeMeasure measure) {
  std::vector<OrgItem> items;
  KeyMap keys;
  items.reserve(procs.size());
  for (const Procedure& p : procs) {
    items.push_back({p.name(), measure == SizeMeasure::Space ? p.payload_size()
                                                             : p.declared_time()});
    if (p.priority()) keys.emplace(p.name(), *p.priority());
  }
  return apply_order(procs, organize(items, order, &keys));
}

BindingTable allocate_all(std::span<const Procedure> procs, ResourcePool& memory,
                          const AllocationPolicy& policy) {
  const auto* fixed = std::get_if<partition::Fixed>(&policy.partitioning);
  if (fixed) {
    for (const Procedure& p : procs) {
      if (p.payload_size() > fixed->size) {
        throw Error(Errc::ValidationError, "partition size " + std::to_string(fixed->size) +
                                               " smaller than procedure '" + p.name() + "'");
      }
    }
  }

  const std::vector<Procedure> ordered =
      organize_procedures(procs, policy.order, SizeMeasure::Space);
  const ResourcePool snapshot = memory;
  BindingTable table;
  for (std::size_t i = 1; i <= ordered.size(); ++i) {
    const Procedure& p = select(ordered, i);
    const std::uint64_t r = fixed ? fixed->size : p.payload_size();
    try {
      if (memory.free_total() < r) {
        throw Error(Errc::Exhausted, std::string(to_string(memory.kind)) + ": need " +
                                         std::to_string(r) + ", " +
                                         std::to_string(memory.free_total()) + " free");
      }
      const Region region = make_set(memory, r);
      table = append(std::move(table), bind(ProcRef{p.name()}, region));
    } catch (const Error& e) {
      memory = snapshot;
      throw with_procedure(e, p.name());
    }
  }
  return table;
}

std::uint64_t internal_waste(std::span<const Procedure> procs, const AllocationPolicy& policy) {
  const auto* fixed = std::get_if<partition::Fixed>(&policy.partitioning);
  if (!fixed) return 0;
  std::uint64_t waste = 0;
  for (const Procedure& p : procs) {
    if (fixed->size > p.payload_size()) waste += fixed->size - p.payload_size();
  }
  return waste;
}

std::uint64_t bound_size(const BindingTable& table, const std::string& name) {
  std::uint64_t total = 0;
  for (const Region& r : regions_of(table, name)) total += r.size();
  return total;
}

BindingTable apply_growth(const Procedure& p, GrowthEvent event, ResourcePool& memory,
                          BindingTable table) {
  std::vector<Region> held = regions_of(table, p.name());
  if (held.empty()) throw Error(Errc::NotBound, p.name());
  if (event.delta == 0) return table;

  const ResourcePool snapshot = memory;
  try {
    if (event.delta > 0) {
      const Region extra = make_set(memory, static_cast<std::uint64_t>(event.delta));
      return append(std::move(table), bind(ProcRef{p.name()}, extra));
    }

    std::uint64_t to_release = static_cast<std::uint64_t>(-event.delta);
    std::uint64_t total = 0;
    for (const Region& r : held) total += r.size();
    if (to_release > total) {
      throw Error(Errc::ShrinkBelowZero, p.name() + " holds " + std::to_string(total) +
                                             ", asked to release " + std::to_string(to_release));
    }
    for (auto it = held.rbegin(); it != held.rend() && to_release > 0; ++it) {
      const Binding b = bind(ProcRef{p.name()}, *it);
      release_set(memory, b, table);
      if (it->size() > to_release) {
        // Keep the low part; only the tail goes back.
        const Region kept = make_spec_set(memory, it->u_min, it->u_max - to_release);
        table = append(std::move(table), bind(ProcRef{p.name()}, kept));
        to_release = 0;
      } else {
        to_release -= it->size();
      }
    }
    return table;
  } catch (const Error& e) {
    memory = snapshot;
    throw with_procedure(e, p.name());
  }
}

BindingTable free_procedure(const Procedure& p, ResourcePool& memory, BindingTable table) {
  const std::vector<Region> held = regions_of(table, p.name());
  if (held.empty()) throw Error(Errc::NotBound, p.name());
  const ResourcePool snapshot = memory;
  try {
    for (const Region& r : held) release_set(memory, bind(ProcRef{p.name()}, r), table);
  } catch (...) {
    memory = snapshot;
    throw;
  }
  return table;
}

}  // namespace symos
