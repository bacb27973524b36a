#include "symos/paging.hpp"

#include <algorithm>
#include <sstream>

#include "symos/allocators.hpp"
#include "symos/binding.hpp"

namespace symos {

namespace {

void notify(const StepObserver& observer, std::string_view step) {
  if (observer) observer(step);
}

std::uint64_t page_count(std::uint64_t size, std::uint64_t g) { return (size + g - 1) / g; }

}  // namespace

void PagingConfig::validate() const {
  if (page_size < 1) throw Error(Errc::ValidationError, "page size must be >= 1");
  if (vm_capacity < 1) throw Error(Errc::ValidationError, "vmem capacity must be >= 1");
  if (phys_capacity < 1) throw Error(Errc::ValidationError, "mem capacity must be >= 1");
  if (phys_capacity % page_size != 0) {
    throw Error(Errc::ValidationError, "mem capacity " + std::to_string(phys_capacity) +
                                           " is not a multiple of page size " +
                                           std::to_string(page_size));
  }
}

SegData get_segs_data(const Procedure& p) {
  return SegData{p.segment_count(), p.seg_boundaries()};
}

std::vector<Region> proc_segs(const Procedure& p, const SegData& segs) {
  const Region whole{ResourceKind::Procedure, 0, p.payload_size() - 1};
  std::vector<Region> out;
  out.reserve(segs.k);
  for (std::size_t i = 0; i < segs.k; ++i) {
    out.push_back(make_spec_set(whole, segs.boundaries[i], segs.boundaries[i + 1] - 1));
  }
  return out;
}

std::vector<Region> make_segs(ResourcePool& vm, const SegData& segs) {
  const ResourcePool snapshot = vm;
  std::vector<Region> out;
  out.reserve(segs.k);
  for (std::size_t i = 0; i < segs.k; ++i) {
    const std::uint64_t r = segs.boundaries[i + 1] - segs.boundaries[i];
    try {
      if (vm.free_total() < r) {
        throw Error(Errc::Exhausted, "vmem: need " + std::to_string(r) + ", " +
                                         std::to_string(vm.free_total()) + " free");
      }
      out.push_back(make_set(vm, r));
    } catch (const Error& e) {
      vm = snapshot;
      throw Error(e.code(), "segment " + std::to_string(i + 1) + ": " + e.detail());
    }
  }
  return out;
}

SegmentTable seg_tab(ResourcePool& vm, const Procedure& p, const SegData& segs,
                     const StepObserver& observer) {
  const std::vector<Region> ps = proc_segs(p, segs);
  notify(observer, "proc_segs");
  const std::vector<Region> s = make_segs(vm, segs);
  notify(observer, "make_segs");

  SegmentTable table{p.name(), {}};
  for (std::size_t i = 1; i <= segs.k; ++i) {
    const Binding b = bind(ProcSegment{p.name(), i, select(ps, i)}, select(s, i));
    table.rows.push_back({i, std::get<ProcSegment>(unbind_fst(b)).span,
                          std::get<Region>(unbind_snd(b))});
  }
  notify(observer, "seg_tab");
  return table;
}

std::vector<Region> make_page(const Region& segment, std::uint64_t g) {
  if (g < 1) throw Error(Errc::InvalidArgument, "page size must be >= 1");
  const std::uint64_t size = segment.size();
  const std::uint64_t count = page_count(size, g);
  std::vector<Region> pages;
  pages.reserve(count);
  for (std::uint64_t i = 1; i <= count; ++i) {
    pages.push_back(make_spec_set(segment, (i - 1) * g, std::min(i * g, size) - 1));
  }
  return pages;
}

std::vector<Region> make_frame(ResourcePool& phys, std::uint64_t g, std::size_t count) {
  if (g < 1) throw Error(Errc::InvalidArgument, "page size must be >= 1");
  const ResourcePool snapshot = phys;
  std::vector<Region> frames;
  frames.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    try {
      if (phys.free_total() < g) {
        throw Error(Errc::Exhausted, "mem: need " + std::to_string(g) + ", " +
                                         std::to_string(phys.free_total()) + " free");
      }
      frames.push_back(make_set(phys, g));
    } catch (const Error& e) {
      phys = snapshot;
      throw Error(e.code(), "framing stopped after " + std::to_string(i) + " of " +
                                std::to_string(count) + " frames: " + e.detail());
    }
  }
  return frames;
}

PageTable page_tab(ResourcePool& phys, const std::string& owner, std::size_t seg_index,
                   const Region& segment, std::uint64_t g, std::vector<Region>* framed,
                   const StepObserver& observer) {
  const std::vector<Region> pg_set = make_page(segment, g);
  notify(observer, "make_page");

  std::vector<Region> fr_set;
  if (framed) {
    if (framed->size() < pg_set.size()) {
      throw Error(Errc::Exhausted, std::to_string(pg_set.size()) + " pages, " +
                                       std::to_string(framed->size()) + " framed frames free");
    }
    const auto take = static_cast<std::ptrdiff_t>(pg_set.size());
    fr_set.assign(framed->begin(), framed->begin() + take);
    framed->erase(framed->begin(), framed->begin() + take);
  } else {
    fr_set = make_frame(phys, g, pg_set.size());
    notify(observer, "make_frame");
  }

  PageTable table{owner, seg_index, {}};
  for (std::size_t i = 1; i <= pg_set.size(); ++i) {
    const Binding b = bind(VmPage{owner, seg_index, i, select(pg_set, i)}, Frame{select(fr_set, i)});
    table.rows.push_back(
        {i, std::get<VmPage>(unbind_fst(b)).span, std::get<Frame>(unbind_snd(b)).span});
  }
  notify(observer, "page_tab");
  return table;
}

PageSegResult do_page_seg(std::span<const Procedure> procs, ResourcePool& vm, ResourcePool& phys,
                          const PagingConfig& config, const OrgSpec& order,
                          const StepObserver& observer) {
  config.validate();
  const std::uint64_t g = config.page_size;
  const std::vector<Procedure> ordered = organize_procedures(procs, order, SizeMeasure::Space);

  std::vector<Region> framed;
  std::vector<Region>* framed_ptr = nullptr;
  if (config.hoist_frames) {
    std::size_t demand = 0;
    for (const Procedure& p : ordered) {
      const auto& a = p.seg_boundaries();
      for (std::size_t i = 0; i + 1 < a.size(); ++i) demand += page_count(a[i + 1] - a[i], g);
    }
    framed = make_frame(phys, g, demand);
    framed_ptr = &framed;
    notify(observer, "make_frame");
  }

  PageSegResult result;
  for (std::size_t i = 1; i <= ordered.size(); ++i) {
    const Procedure& p = select(ordered, i);
    const ResourcePool vm_before = vm;
    const ResourcePool phys_before = phys;
    const std::vector<Region> framed_before = framed;
    try {
      const SegData seg_data = get_segs_data(p);
      SegmentTable st = seg_tab(vm, p, seg_data, observer);
      std::vector<PageTable> pts;
      for (const SegmentRow& row : st.rows) {
        pts.push_back(page_tab(phys, p.name(), row.seg_index, row.vm_span, g, framed_ptr, observer));
      }
      result.segment_tables.push_back(std::move(st));
      for (PageTable& pt : pts) result.page_tables.push_back(std::move(pt));
    } catch (const Error& e) {
      vm = vm_before;
      phys = phys_before;
      framed = framed_before;
      for (const Region& f : framed) release_region(phys, f);
      notify(observer, "rollback");
      throw Error(e.code(), "procedure '" + p.name() + "': " + e.detail());
    }
  }
  return result;
}

std::uint64_t translate(const std::string& proc, std::uint64_t logical_addr,
                        std::span<const SegmentTable> seg_tables,
                        std::span<const PageTable> page_tables) {
  auto st = std::find_if(seg_tables.begin(), seg_tables.end(),
                         [&](const SegmentTable& t) { return t.owner == proc; });
  if (st == seg_tables.end()) throw Error(Errc::TableIncomplete, "no segment table for " + proc);

  std::uint64_t extent = 0;
  for (const SegmentRow& row : st->rows) extent = std::max(extent, row.proc_span.u_max + 1);
  if (logical_addr >= extent) {
    throw Error(Errc::AddressOutOfRange,
                proc + " address " + std::to_string(logical_addr) + " >= " + std::to_string(extent));
  }

  auto seg = std::find_if(st->rows.begin(), st->rows.end(),
                          [&](const SegmentRow& r) { return r.proc_span.contains(logical_addr); });
  if (seg == st->rows.end()) {
    throw Error(Errc::TableIncomplete, proc + " address " + std::to_string(logical_addr) +
                                           " in no segment");
  }
  const std::uint64_t vaddr = seg->vm_span.u_min + (logical_addr - seg->proc_span.u_min);

  auto pt = std::find_if(page_tables.begin(), page_tables.end(), [&](const PageTable& t) {
    return t.owner == proc && t.seg_index == seg->seg_index;
  });
  if (pt == page_tables.end()) {
    throw Error(Errc::TableIncomplete,
                "no page table for " + proc + " segment " + std::to_string(seg->seg_index));
  }
  auto page = std::find_if(pt->rows.begin(), pt->rows.end(),
                           [&](const PageRow& r) { return r.vm_span.contains(vaddr); });
  if (page == pt->rows.end()) {
    throw Error(Errc::TableIncomplete, "vm address " + std::to_string(vaddr) + " in no page");
  }
  return page->frame.u_min + (vaddr - page->vm_span.u_min);
}

std::string serialize_tables(const PageSegResult& result) {
  std::ostringstream out;
  for (const SegmentTable& st : result.segment_tables) {
    for (const SegmentRow& r : st.rows) {
      out << "SEG\t" << st.owner << '\t' << r.seg_index << '\t' << r.proc_span.u_min << '\t'
          << r.proc_span.u_max << '\t' << r.vm_span.u_min << '\t' << r.vm_span.u_max << '\n';
    }
    for (const PageTable& pt : result.page_tables) {
      if (pt.owner != st.owner) continue;
      for (const PageRow& r : pt.rows) {
        out << "PAGE\t" << pt.owner << '\t' << pt.seg_index << '\t' << r.page_index << '\t'
            << r.vm_span.u_min << '\t' << r.vm_span.u_max << '\t' << r.frame.u_min << '\t'
            << r.frame.u_max << '\n';
      }
    }
  }
  return out.str();
}

}  // namespace symos
