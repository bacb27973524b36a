#pragma once

// Segmentation followed by paging.
//
// For each procedure, in order:
//   1. segment the procedure            proc_segs
//   2. carve virtual-memory segments    make_segs
//   3. bind them into a segment table   seg_tab
//   4. split each vm segment into pages make_page
//   5. frame physical memory            make_frame
//   6. bind pages to frames             page_tab
// Framing depends on nothing but the page size, so with hoist_frames it runs
// once for the whole batch before the loop, and page_tab takes the first
// free frames from that list instead.

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "symos/procedure.hpp"
#include "symos/resource.hpp"

namespace symos {

struct PagingConfig {
  std::uint64_t page_size = 1;
  std::uint64_t vm_capacity = 1;
  std::uint64_t phys_capacity = 1;
  bool hoist_frames = false;

  // ValidationError unless capacities >= 1, page_size >= 1 and
  // phys_capacity is a multiple of page_size.
  void validate() const;
};

struct SegData {
  std::size_t k = 0;
  std::vector<std::uint64_t> boundaries;  // a_1 = 0 < ... < a_{k+1} = #p
};

struct SegmentRow {
  std::size_t seg_index = 1;
  Region proc_span;  // procedure offsets
  Region vm_span;
  friend bool operator==(const SegmentRow&, const SegmentRow&) = default;
};

struct SegmentTable {
  std::string owner;
  std::vector<SegmentRow> rows;
  friend bool operator==(const SegmentTable&, const SegmentTable&) = default;
};

struct PageRow {
  std::size_t page_index = 1;
  Region vm_span;
  Region frame;
  friend bool operator==(const PageRow&, const PageRow&) = default;
};

struct PageTable {
  std::string owner;
  std::size_t seg_index = 1;
  std::vector<PageRow> rows;
  friend bool operator==(const PageTable&, const PageTable&) = default;
};

struct PageSegResult {
  std::vector<SegmentTable> segment_tables;
  std::vector<PageTable> page_tables;
  friend bool operator==(const PageSegResult&, const PageSegResult&) = default;
};

// Called after every constituent step with the step name.
using StepObserver = std::function<void(std::string_view step)>;

SegData get_segs_data(const Procedure& p);

// Segment i is the offset span [a_i, a_{i+1} - 1].
std::vector<Region> proc_segs(const Procedure& p, const SegData& segs);

// All-or-nothing carve of one vm region per segment.
std::vector<Region> make_segs(ResourcePool& vm, const SegData& segs);

SegmentTable seg_tab(ResourcePool& vm, const Procedure& p, const SegData& segs,
                     const StepObserver& observer = {});

// ceil(#s / g) pages; only the last may be shorter than g.
std::vector<Region> make_page(const Region& segment, std::uint64_t g);

// All-or-nothing carve of `count` frames of exactly g elements.
std::vector<Region> make_frame(ResourcePool& phys, std::uint64_t g, std::size_t count);

// Binds page i of `segment` to frame i. Frames are carved from `phys`, or
// taken from the front of `framed` when it is given.
PageTable page_tab(ResourcePool& phys, const std::string& owner, std::size_t seg_index,
                   const Region& segment, std::uint64_t g,
                   std::vector<Region>* framed = nullptr, const StepObserver& observer = {});

// Exhausted/NoContiguousRun roll back the failing procedure; procedures
// placed before it stay placed.
PageSegResult do_page_seg(std::span<const Procedure> procs, ResourcePool& vm, ResourcePool& phys,
                          const PagingConfig& config, const OrgSpec& order = org::Identity{},
                          const StepObserver& observer = {});

std::uint64_t translate(const std::string& proc, std::uint64_t logical_addr,
                        std::span<const SegmentTable> seg_tables,
                        std::span<const PageTable> page_tables);

// SEG\tproc\tidx\tplo\tphi\tvlo\tvhi and
// PAGE\tproc\tseg\tidx\tvlo\tvhi\tflo\tfhi rows, per procedure in
// construction order.
std::string serialize_tables(const PageSegResult& result);

}  // namespace symos
