#pragma once

// Enumerated resource pools and their equivalence-class partitioning.
//
// A pool is a set of elements addressed by naturals. Every issued address
// belongs to exactly one region, and every region sits in exactly one of two
// ledgers: free or occupied. Finite pools (memory, virtual memory) carry a
// fixed capacity and admit release. The CPU-time pool is infinite and
// consumable: intervals are minted from a high-water mark and never return.
//
// Invariants checked by audit_partition():
// - total:       sum of region sizes over both ledgers == capacity (finite pools)
// - exclusivity: no address is both free and occupied
// - union:       the ledgers together cover exactly the issued addresses
// - disjoint:    no two regions overlap

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "symos/error.hpp"

namespace symos {

enum class ResourceKind {
  Memory,
  VirtualMemory,
  Time,
  Names,
  // Not a pool: the offset space [0, #p) of a single procedure.
  Procedure,
};

std::string_view to_string(ResourceKind kind) noexcept;

// Contiguous span [u_min, u_max] of one address space. Called an interval
// when the space is CPU time.
struct Region {
  ResourceKind kind = ResourceKind::Memory;
  std::uint64_t u_min = 0;
  std::uint64_t u_max = 0;

  std::uint64_t size() const noexcept { return u_max - u_min + 1; }
  bool contains(std::uint64_t addr) const noexcept { return u_min <= addr && addr <= u_max; }
  bool overlaps(const Region& other) const noexcept {
    return u_min <= other.u_max && other.u_min <= u_max;
  }

  friend bool operator==(const Region&, const Region&) = default;
  friend auto operator<=>(const Region&, const Region&) = default;
};

// Throws InvalidArgument when u_min > u_max.
Region make_region(ResourceKind kind, std::uint64_t u_min, std::uint64_t u_max);

std::string to_string(const Region& region);

struct ResourcePool {
  ResourceKind kind = ResourceKind::Memory;
  std::optional<std::uint64_t> capacity;  // empty for infinite pools
  std::vector<Region> free_ledger;        // ascending by u_min, coalesced
  std::vector<Region> occupied_ledger;    // ascending by u_min
  bool reusable = true;
  bool finite = true;
  std::uint64_t next_fresh = 0;  // infinite pools: lowest never-issued address
  bool enumerated = false;

  std::uint64_t free_total() const noexcept;
  std::uint64_t occupied_total() const noexcept;

  friend bool operator==(const ResourcePool&, const ResourcePool&) = default;
};

// The address universe handed to enumerate(). Empty size means all naturals.
struct Universe {
  std::optional<std::uint64_t> size;

  static Universe naturals() { return {}; }
  static Universe first(std::uint64_t n) { return {n}; }
};

// Assigns addresses to the pool's elements. Finite pools get 0..capacity-1 as
// one free region; infinite pools issue addresses on demand. Idempotent.
ResourcePool enumerate(ResourcePool pool, Universe names);

// Fresh, enumerated pools.
ResourcePool finite_pool(ResourceKind kind, std::uint64_t capacity);
ResourcePool time_pool();
ResourcePool name_space_pool();

// ---------------------------------------------------------------------------
// Org / Sel

namespace org {
struct Identity {
  friend bool operator==(const Identity&, const Identity&) = default;
};
struct ConstantChunk {
  std::size_t chunk_size = 1;
  friend bool operator==(const ConstantChunk&, const ConstantChunk&) = default;
};
struct SortAscendingBySize {
  friend bool operator==(const SortAscendingBySize&, const SortAscendingBySize&) = default;
};
struct SortDescendingBySize {
  friend bool operator==(const SortDescendingBySize&, const SortDescendingBySize&) = default;
};
struct ByExternalKey {
  std::string key_name;
  friend bool operator==(const ByExternalKey&, const ByExternalKey&) = default;
};
}  // namespace org

using OrgSpec = std::variant<org::Identity, org::ConstantChunk, org::SortAscendingBySize,
                             org::SortDescendingBySize, org::ByExternalKey>;

using KeyMap = std::map<std::string, std::uint64_t>;

// What organize() needs to know about an element.
struct OrgItem {
  std::string id;
  std::uint64_t size = 0;
};

// `order` is a permutation of input positions. `chunk_boundaries` lists the
// output positions after which a chunk ends (ConstantChunk only; the final
// chunk end is implicit).
struct Organization {
  std::vector<std::size_t> order;
  std::vector<std::size_t> chunk_boundaries;
};

// Stable: ties keep input order. ByExternalKey sorts ascending by key.
Organization organize(std::span<const OrgItem> items, const OrgSpec& spec,
                      const KeyMap* keys = nullptr);

template <typename T>
std::vector<T> apply_order(std::span<const T> items, const Organization& organization) {
  std::vector<T> out;
  out.reserve(organization.order.size());
  for (std::size_t idx : organization.order) out.push_back(items[idx]);
  return out;
}

// 1-based selection; throws IndexOutOfRange.
template <typename Collection>
const auto& select(const Collection& collection, std::size_t i) {
  if (i < 1 || i > std::size(collection)) {
    throw Error(Errc::IndexOutOfRange, "select index " + std::to_string(i) + " of " +
                                           std::to_string(std::size(collection)));
  }
  return *(std::begin(collection) + static_cast<std::ptrdiff_t>(i - 1));
}

// ---------------------------------------------------------------------------
// Subsets

// First-fit carve of r contiguous elements, moved free -> occupied.
// Infinite pools mint from next_fresh once the free ledger has no fit.
Region make_set(ResourcePool& pool, std::uint64_t r);

// Carves exactly [u_min, u_max] out of the pool's free ledger.
Region make_spec_set(ResourcePool& pool, std::uint64_t u_min, std::uint64_t u_max);

// Pure slice of an addressable set: offsets [first, last] relative to
// set.u_min. No ledger effect.
Region make_spec_set(const Region& set, std::uint64_t first, std::uint64_t last);

// Returns an occupied region to the free ledger, coalescing neighbours.
void release_region(ResourcePool& pool, const Region& region);

struct Binding;
struct BindingTable;

// Unbinds the region held by `binding`, frees it, and drops the binding
// from `table`.
void release_set(ResourcePool& pool, const Binding& binding, BindingTable& table);

// ---------------------------------------------------------------------------
// Audit

enum class Check { Total, Exclusivity, Union, Disjoint };

struct Finding {
  Check check;
  std::string message;
};

struct AuditReport {
  ResourceKind checked_pool = ResourceKind::Memory;
  bool total_ok = true;
  bool exclusivity_ok = true;
  bool union_ok = true;
  bool disjoint_ok = true;
  std::vector<Finding> violations;

  bool ok() const noexcept { return total_ok && exclusivity_ok && union_ok && disjoint_ok; }
};

AuditReport audit_partition(const ResourcePool& pool);

}  // namespace symos
