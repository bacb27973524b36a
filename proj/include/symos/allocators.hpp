#pragma once

// Memory allocation as the generic management predicate: organize the
// procedures, then for each one check availability, carve a region, move it
// from free to occupied, and bind it to the procedure.

#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "symos/binding.hpp"
#include "symos/procedure.hpp"
#include "symos/resource.hpp"

namespace symos {

namespace partition {
struct Variable {
  friend bool operator==(const Variable&, const Variable&) = default;
};
struct Fixed {
  std::uint64_t size = 1;
  friend bool operator==(const Fixed&, const Fixed&) = default;
};
}  // namespace partition

using Partitioning = std::variant<partition::Variable, partition::Fixed>;

// Identity order is first-come-first-serve, SortAscendingBySize is
// shortest-size-first, ByExternalKey("priority") is priority allocation.
struct AllocationPolicy {
  OrgSpec order = org::Identity{};
  Partitioning partitioning = partition::Variable{};

  friend bool operator==(const AllocationPolicy&, const AllocationPolicy&) = default;
};

enum class SizeMeasure { Space, Time };

// Applies `order` to the procedures. Sizes come from payload_size (Space) or
// declared_time (Time); ByExternalKey reads each procedure's priority.
std::vector<Procedure> organize_procedures(std::span<const Procedure> procs, const OrgSpec& order,
                                           SizeMeasure measure);

// All-or-nothing: on failure the pool is restored and the error names the
// procedure that did not fit.
BindingTable allocate_all(std::span<const Procedure> procs, ResourcePool& memory,
                          const AllocationPolicy& policy);

// Units carved but not used by payloads (nonzero only for fixed partitions).
std::uint64_t internal_waste(std::span<const Procedure> procs, const AllocationPolicy& policy);

// Total size of the regions bound to `name`.
std::uint64_t bound_size(const BindingTable& table, const std::string& name);

// Growth carves an extra region; shrink releases the most recent regions
// first, splitting the last one touched.
BindingTable apply_growth(const Procedure& p, GrowthEvent event, ResourcePool& memory,
                          BindingTable table);

BindingTable free_procedure(const Procedure& p, ResourcePool& memory, BindingTable table);

}  // namespace symos
