#pragma once

// Pair and list primitives that glue resources to procedures.
//
// bind() only accepts a closed set of tag combinations:
//   procedure  -> memory region, time interval, or name
//   proc seg   -> virtual-memory segment
//   vm page    -> physical frame

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "symos/procedure.hpp"
#include "symos/resource.hpp"

namespace symos {

struct ProcRef {
  std::string name;
  friend bool operator==(const ProcRef&, const ProcRef&) = default;
};

struct ProcSegment {
  std::string proc;
  std::size_t seg_index = 1;
  Region span;  // procedure offsets
  friend bool operator==(const ProcSegment&, const ProcSegment&) = default;
};

struct VmPage {
  std::string proc;
  std::size_t seg_index = 1;
  std::size_t page_index = 1;
  Region span;  // virtual-memory addresses
  friend bool operator==(const VmPage&, const VmPage&) = default;
};

struct Name {
  std::variant<std::uint64_t, std::string> value;
  friend bool operator==(const Name&, const Name&) = default;
  friend auto operator<=>(const Name&, const Name&) = default;
};

struct Frame {
  Region span;
  friend bool operator==(const Frame&, const Frame&) = default;
};

using TaggedValue = std::variant<ProcRef, ProcSegment, VmPage, Region, Name, Frame>;

std::string to_string(const TaggedValue& value);

struct Binding {
  TaggedValue left;
  TaggedValue right;
  friend bool operator==(const Binding&, const Binding&) = default;
};

// Throws InadmissiblePair for tag combinations outside the closed set.
Binding bind(TaggedValue o1, TaggedValue o2);
const TaggedValue& unbind_fst(const Binding& b) noexcept;
const TaggedValue& unbind_snd(const Binding& b) noexcept;

enum class Uniqueness { OneToOne, ManyToOne };

struct BindingTable {
  std::vector<Binding> entries;
  Uniqueness mode = Uniqueness::OneToOne;

  bool contains(const Binding& b) const;
  std::size_t size() const noexcept { return entries.size(); }
  friend bool operator==(const BindingTable&, const BindingTable&) = default;
};

// DuplicateEntry; RightSideTaken under OneToOne.
BindingTable append(BindingTable table, Binding b);
// NotFound.
BindingTable remove(BindingTable table, const Binding& b);

// All right-hand sides bound to procedure `name`, in table order.
std::vector<TaggedValue> bound_to(const BindingTable& table, const std::string& name);

// Pool of names for the naming predicate. `available` is kept sorted so the
// lowest name is always first.
struct NamePool {
  enum class Kind { ProcessIds, FileNames };

  Kind kind = Kind::ProcessIds;
  std::vector<Name> issued;
  std::vector<Name> available;

  static NamePool process_ids(std::uint64_t first, std::uint64_t count);
  static NamePool file_names(std::vector<std::string> names);
};

// Binds each procedure, in order, to the lowest available name. With
// unique=true each bound name leaves `available`; otherwise names may repeat.
BindingTable assign_names(std::span<const Procedure> procs, NamePool& names, bool unique);

}  // namespace symos
