#include "symos/resource.hpp"

#include <algorithm>
#include <numeric>

#include "symos/binding.hpp"

namespace symos {

std::string_view to_string(ResourceKind kind) noexcept {
  switch (kind) {
    case ResourceKind::Memory: return "mem";
    case ResourceKind::VirtualMemory: return "vmem";
    case ResourceKind::Time: return "time";
    case ResourceKind::Names: return "names";
    case ResourceKind::Procedure: return "proc";
  }
  return "?";
}

Region make_region(ResourceKind kind, std::uint64_t u_min, std::uint64_t u_max) {
  if (u_min > u_max) {
    throw Error(Errc::InvalidArgument,
                "region bounds " + std::to_string(u_min) + ".." + std::to_string(u_max));
  }
  return Region{kind, u_min, u_max};
}

std::string to_string(const Region& region) {
  return "[" + std::to_string(region.u_min) + ".." + std::to_string(region.u_max) + "]";
}

std::uint64_t ResourcePool::free_total() const noexcept {
  std::uint64_t total = 0;
  for (const Region& r : free_ledger) total += r.size();
  return total;
}

std::uint64_t ResourcePool::occupied_total() const noexcept {
  std::uint64_t total = 0;
  for (const Region& r : occupied_ledger) total += r.size();
  return total;
}

ResourcePool enumerate(ResourcePool pool, Universe names) {
  if (pool.enumerated) return pool;
  if (pool.finite) {
    const std::uint64_t cap = pool.capacity.value_or(0);
    if (names.size && *names.size < cap) {
      throw Error(Errc::UniverseTooSmall, "universe of " + std::to_string(*names.size) +
                                              " names for capacity " + std::to_string(cap));
    }
    pool.free_ledger.clear();
    pool.occupied_ledger.clear();
    if (cap > 0) pool.free_ledger.push_back(Region{pool.kind, 0, cap - 1});
  } else if (names.size) {
    throw Error(Errc::UniverseTooSmall, "infinite pool needs the naturals as universe");
  }
  pool.enumerated = true;
  return pool;
}

ResourcePool finite_pool(ResourceKind kind, std::uint64_t capacity) {
  if (kind == ResourceKind::Time || kind == ResourceKind::Procedure) {
    throw Error(Errc::InvalidArgument, "finite pools hold memory or virtual memory");
  }
  ResourcePool pool;
  pool.kind = kind;
  pool.capacity = capacity;
  pool.reusable = true;
  pool.finite = true;
  return enumerate(std::move(pool), Universe::first(capacity));
}

ResourcePool time_pool() {
  ResourcePool pool;
  pool.kind = ResourceKind::Time;
  pool.reusable = false;
  pool.finite = false;
  return enumerate(std::move(pool), Universe::naturals());
}

ResourcePool name_space_pool() {
  ResourcePool pool;
  pool.kind = ResourceKind::Names;
  pool.reusable = true;
  pool.finite = false;
  return enumerate(std::move(pool), Universe::naturals());
}

// ---------------------------------------------------------------------------

Organization organize(std::span<const OrgItem> items, const OrgSpec& spec, const KeyMap* keys) {
  Organization out;
  out.order.resize(items.size());
  std::iota(out.order.begin(), out.order.end(), std::size_t{0});

  if (const auto* chunk = std::get_if<org::ConstantChunk>(&spec)) {
    if (chunk->chunk_size < 1) throw Error(Errc::InvalidArgument, "chunk size must be >= 1");
    for (std::size_t end = chunk->chunk_size; end < items.size(); end += chunk->chunk_size) {
      out.chunk_boundaries.push_back(end - 1);
    }
  } else if (std::holds_alternative<org::SortAscendingBySize>(spec)) {
    std::stable_sort(out.order.begin(), out.order.end(),
                     [&](std::size_t a, std::size_t b) { return items[a].size < items[b].size; });
  } else if (std::holds_alternative<org::SortDescendingBySize>(spec)) {
    std::stable_sort(out.order.begin(), out.order.end(),
                     [&](std::size_t a, std::size_t b) { return items[a].size > items[b].size; });
  } else if (const auto* by_key = std::get_if<org::ByExternalKey>(&spec)) {
    std::vector<std::uint64_t> key_of(items.size());
    for (std::size_t i = 0; i < items.size(); ++i) {
      auto it = keys ? keys->find(items[i].id) : KeyMap::const_iterator{};
      if (!keys || it == keys->end()) {
        throw Error(Errc::MissingKey, "no '" + by_key->key_name + "' key for " + items[i].id);
      }
      key_of[i] = it->second;
    }
    std::stable_sort(out.order.begin(), out.order.end(),
                     [&](std::size_t a, std::size_t b) { return key_of[a] < key_of[b]; });
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

void insert_sorted(std::vector<Region>& ledger, const Region& region) {
  auto pos = std::lower_bound(ledger.begin(), ledger.end(), region,
                              [](const Region& a, const Region& b) { return a.u_min < b.u_min; });
  ledger.insert(pos, region);
}

void insert_coalesced(std::vector<Region>& ledger, const Region& region) {
  auto pos = std::lower_bound(ledger.begin(), ledger.end(), region,
                              [](const Region& a, const Region& b) { return a.u_min < b.u_min; });
  pos = ledger.insert(pos, region);
  if (auto next = pos + 1; next != ledger.end() && pos->u_max + 1 == next->u_min) {
    pos->u_max = next->u_max;
    ledger.erase(next);
  }
  if (pos != ledger.begin()) {
    auto prev = pos - 1;
    if (prev->u_max + 1 == pos->u_min) {
      prev->u_max = pos->u_max;
      ledger.erase(pos);
    }
  }
}

// Removes `span` from the free region at `it`, leaving up to two remainders.
void carve_from(std::vector<Region>& free_ledger, std::vector<Region>::iterator it,
                const Region& span) {
  const Region whole = *it;
  it = free_ledger.erase(it);
  if (span.u_max < whole.u_max) {
    it = free_ledger.insert(it, Region{whole.kind, span.u_max + 1, whole.u_max});
  }
  if (whole.u_min < span.u_min) {
    free_ledger.insert(it, Region{whole.kind, whole.u_min, span.u_min - 1});
  }
}

}  // namespace

Region make_set(ResourcePool& pool, std::uint64_t r) {
  if (r < 1) throw Error(Errc::InvalidArgument, "make_set size must be >= 1");

  auto fit = std::find_if(pool.free_ledger.begin(), pool.free_ledger.end(),
                          [r](const Region& f) { return f.size() >= r; });
  if (fit != pool.free_ledger.end()) {
    const Region carved{pool.kind, fit->u_min, fit->u_min + r - 1};
    carve_from(pool.free_ledger, fit, carved);
    insert_sorted(pool.occupied_ledger, carved);
    return carved;
  }
  if (!pool.finite) {
    const Region minted{pool.kind, pool.next_fresh, pool.next_fresh + r - 1};
    pool.next_fresh += r;
    insert_sorted(pool.occupied_ledger, minted);
    return minted;
  }
  const std::uint64_t free = pool.free_total();
  if (free >= r) {
    throw Error(Errc::NoContiguousRun, std::string(to_string(pool.kind)) + ": " +
                                           std::to_string(free) + " free but no run of " +
                                           std::to_string(r));
  }
  throw Error(Errc::Exhausted, std::string(to_string(pool.kind)) + ": need " + std::to_string(r) +
                                   ", " + std::to_string(free) + " free");
}

Region make_spec_set(ResourcePool& pool, std::uint64_t u_min, std::uint64_t u_max) {
  if (u_min > u_max) throw Error(Errc::InvalidArgument, "span bounds reversed");
  const Region span{pool.kind, u_min, u_max};
  if (pool.finite && u_max >= pool.capacity.value_or(0)) {
    throw Error(Errc::SpanOutOfBounds, to_string(span) + " beyond capacity " +
                                           std::to_string(pool.capacity.value_or(0)));
  }
  if (!pool.finite && u_min >= pool.next_fresh) {
    if (u_min > pool.next_fresh) {
      if (!pool.reusable) throw Error(Errc::SpanNotFree, to_string(span) + " skips unissued time");
      insert_coalesced(pool.free_ledger, Region{pool.kind, pool.next_fresh, u_min - 1});
    }
    pool.next_fresh = u_max + 1;
    insert_sorted(pool.occupied_ledger, span);
    return span;
  }
  auto holder = std::find_if(pool.free_ledger.begin(), pool.free_ledger.end(),
                             [&](const Region& f) { return f.u_min <= u_min && u_max <= f.u_max; });
  if (holder == pool.free_ledger.end()) throw Error(Errc::SpanNotFree, to_string(span));
  carve_from(pool.free_ledger, holder, span);
  insert_sorted(pool.occupied_ledger, span);
  return span;
}

Region make_spec_set(const Region& set, std::uint64_t first, std::uint64_t last) {
  if (first > last) throw Error(Errc::InvalidArgument, "span bounds reversed");
  if (last >= set.size()) {
    throw Error(Errc::SpanOutOfBounds, "offsets " + std::to_string(first) + ".." +
                                           std::to_string(last) + " of a set of size " +
                                           std::to_string(set.size()));
  }
  return Region{set.kind, set.u_min + first, set.u_min + last};
}

void release_region(ResourcePool& pool, const Region& region) {
  if (!pool.reusable) {
    throw Error(Errc::ConsumableResource,
                std::string(to_string(pool.kind)) + " cannot be released");
  }
  auto it = std::find(pool.occupied_ledger.begin(), pool.occupied_ledger.end(), region);
  if (it == pool.occupied_ledger.end()) {
    throw Error(Errc::RegionNotOccupied, to_string(region));
  }
  pool.occupied_ledger.erase(it);
  insert_coalesced(pool.free_ledger, region);
}

void release_set(ResourcePool& pool, const Binding& binding, BindingTable& table) {
  if (!pool.reusable) {
    throw Error(Errc::ConsumableResource,
                std::string(to_string(pool.kind)) + " cannot be released");
  }
  if (!table.contains(binding)) throw Error(Errc::UnknownBinding, to_string(binding.left));
  const TaggedValue& right = unbind_snd(binding);
  Region region;
  if (const auto* r = std::get_if<Region>(&right)) {
    region = *r;
  } else if (const auto* f = std::get_if<Frame>(&right)) {
    region = f->span;
  } else {
    throw Error(Errc::UnknownBinding, "binding does not hold a region");
  }
  release_region(pool, region);
  table = remove(std::move(table), binding);
}

// ---------------------------------------------------------------------------

namespace {

// Union of regions as sorted, non-adjacent-merged spans.
std::vector<Region> merged(std::vector<Region> regions) {
  std::sort(regions.begin(), regions.end(),
            [](const Region& a, const Region& b) { return a.u_min < b.u_min; });
  std::vector<Region> out;
  for (const Region& r : regions) {
    if (!out.empty() && r.u_min <= out.back().u_max + 1) {
      out.back().u_max = std::max(out.back().u_max, r.u_max);
    } else {
      out.push_back(r);
    }
  }
  return out;
}

}  // namespace

AuditReport audit_partition(const ResourcePool& pool) {
  AuditReport report;
  report.checked_pool = pool.kind;
  auto flag = [&](Check check, bool& ok, std::string message) {
    ok = false;
    report.violations.push_back({check, std::move(message)});
  };

  std::vector<Region> all = pool.free_ledger;
  all.insert(all.end(), pool.occupied_ledger.begin(), pool.occupied_ledger.end());

  if (pool.finite) {
    std::uint64_t sum = pool.free_total() + pool.occupied_total();
    if (sum != pool.capacity.value_or(0)) {
      flag(Check::Total, report.total_ok,
           "sizes sum to " + std::to_string(sum) + ", capacity " +
               std::to_string(pool.capacity.value_or(0)));
    }
  }

  {
    const auto free_u = merged(pool.free_ledger);
    const auto occ_u = merged(pool.occupied_ledger);
    std::size_t i = 0, j = 0;
    while (i < free_u.size() && j < occ_u.size()) {
      const std::uint64_t lo = std::max(free_u[i].u_min, occ_u[j].u_min);
      const std::uint64_t hi = std::min(free_u[i].u_max, occ_u[j].u_max);
      if (lo <= hi) {
        flag(Check::Exclusivity, report.exclusivity_ok,
             "addresses " + to_string(Region{pool.kind, lo, hi}) + " both free and occupied");
      }
      if (free_u[i].u_max < occ_u[j].u_max) ++i; else ++j;
    }
  }

  {
    const std::uint64_t issued = pool.finite ? pool.capacity.value_or(0) : pool.next_fresh;
    const auto u = merged(all);
    std::uint64_t expect = 0;
    for (const Region& r : u) {
      if (r.u_min > expect && expect < issued) {
        flag(Check::Union, report.union_ok,
             "addresses " + to_string(Region{pool.kind, expect, std::min(r.u_min, issued) - 1}) +
                 " in no ledger");
      }
      if (r.u_max >= issued) {
        flag(Check::Union, report.union_ok,
             "addresses " +
                 to_string(Region{pool.kind, std::max(r.u_min, issued), r.u_max}) +
                 " outside the issued range");
      }
      expect = std::max(expect, r.u_max + 1);
    }
    if (expect < issued) {
      flag(Check::Union, report.union_ok,
           "addresses " + to_string(Region{pool.kind, expect, issued - 1}) + " in no ledger");
    }
  }

  {
    std::sort(all.begin(), all.end(),
              [](const Region& a, const Region& b) { return a.u_min < b.u_min; });
    std::size_t reach = 0;  // region with the largest u_max seen so far
    for (std::size_t i = 1; i < all.size(); ++i) {
      if (all[i].u_min <= all[reach].u_max) {
        flag(Check::Disjoint, report.disjoint_ok,
             "regions " + to_string(all[reach]) + " and " + to_string(all[i]) + " overlap");
      }
      if (all[i].u_max > all[reach].u_max) reach = i;
    }
  }
  return report;
}

}  // namespace symos
