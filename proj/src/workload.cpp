#include "symos/workload.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

namespace symos {

namespace {

[[noreturn]] void parse_fail(std::size_t line, const std::string& what) {
  throw Error(Errc::ParseError, "line " + std::to_string(line) + ": " + what);
}

std::uint64_t parse_nat(std::string_view text, std::size_t line, std::string_view what) {
  std::uint64_t value = 0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc{} || ptr != end) {
    parse_fail(line, std::string(what) + " expects a natural, got '" + std::string(text) + "'");
  }
  return value;
}

std::int64_t parse_int(std::string_view text, std::size_t line, std::string_view what) {
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  std::int64_t value = 0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc{} || ptr != end) {
    parse_fail(line, std::string(what) + " expects an integer, got '" + std::string(text) + "'");
  }
  return value;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::vector<std::string_view> tokens(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

AllocationPolicy parse_alloc(std::string_view v, std::size_t line) {
  if (v == "fcfs") return {org::Identity{}, partition::Variable{}};
  if (v == "ssf") return {org::SortAscendingBySize{}, partition::Variable{}};
  if (v == "prio") return {org::ByExternalKey{"priority"}, partition::Variable{}};
  if (v.starts_with("fixed:")) {
    return {org::Identity{}, partition::Fixed{parse_nat(v.substr(6), line, "fixed")}};
  }
  parse_fail(line, "unknown alloc policy '" + std::string(v) + "'");
}

SchedulePolicy parse_policy(std::string_view v, std::size_t line) {
  if (v == "fcfs") return sched::Fcfs{};
  if (v == "sjf") return sched::ShortestJobFirst{};
  if (v == "prio") return sched::Priority{};
  if (v.starts_with("rr:")) return sched::RoundRobin{parse_nat(v.substr(3), line, "rr")};
  parse_fail(line, "unknown schedule policy '" + std::string(v) + "'");
}

Procedure parse_proc(const std::vector<std::string_view>& toks, std::size_t line) {
  if (toks.size() < 2) parse_fail(line, "proc needs a name");
  const std::string name(toks[1]);
  std::map<std::string_view, std::string_view> kv;
  for (std::size_t i = 2; i < toks.size(); ++i) {
    const std::size_t eq = toks[i].find('=');
    if (eq == std::string_view::npos) parse_fail(line, "expected key=value, got '" + std::string(toks[i]) + "'");
    const std::string_view key = toks[i].substr(0, eq);
    static const std::set<std::string_view> known{"size", "time", "segs", "prio", "grow"};
    if (!known.contains(key)) parse_fail(line, "unknown proc key '" + std::string(key) + "'");
    if (!kv.emplace(key, toks[i].substr(eq + 1)).second) {
      parse_fail(line, "duplicate proc key '" + std::string(key) + "'");
    }
  }

  auto require = [&](std::string_view key) -> std::string_view {
    auto it = kv.find(key);
    if (it == kv.end()) {
      throw Error(Errc::ValidationError, "line " + std::to_string(line) + ": procedure '" + name +
                                             "' has no " + std::string(key) + "=");
    }
    return it->second;
  };

  const std::uint64_t size = parse_nat(require("size"), line, "size");
  std::vector<std::uint64_t> segs;
  for (std::string_view a : split(require("segs"), ',')) segs.push_back(parse_nat(a, line, "segs"));
  // Boundaries are validated before time so the more specific error wins.
  const std::uint64_t time = kv.contains("time") ? parse_nat(kv["time"], line, "time") : 0;

  std::optional<std::uint64_t> prio;
  if (kv.contains("prio")) prio = parse_nat(kv["prio"], line, "prio");
  std::vector<GrowthEvent> grow;
  if (kv.contains("grow")) {
    for (std::string_view ev : split(kv["grow"], ',')) {
      const std::size_t colon = ev.find(':');
      if (colon == std::string_view::npos) parse_fail(line, "grow expects tick:delta");
      grow.push_back({parse_nat(ev.substr(0, colon), line, "grow tick"),
                      parse_int(ev.substr(colon + 1), line, "grow delta")});
    }
  }
  try {
    return Procedure(name, size, time, std::move(segs), prio, std::move(grow));
  } catch (const Error& e) {
    throw Error(e.code(), "line " + std::to_string(line) + ": " + e.detail());
  }
}

std::string alloc_text(const AllocationPolicy& policy) {
  if (const auto* fixed = std::get_if<partition::Fixed>(&policy.partitioning)) {
    if (!std::holds_alternative<org::Identity>(policy.order)) {
      throw Error(Errc::InvalidArgument, "fixed partitions only combine with fcfs order");
    }
    return "fixed:" + std::to_string(fixed->size);
  }
  if (std::holds_alternative<org::Identity>(policy.order)) return "fcfs";
  if (std::holds_alternative<org::SortAscendingBySize>(policy.order)) return "ssf";
  if (std::holds_alternative<org::ByExternalKey>(policy.order)) return "prio";
  throw Error(Errc::InvalidArgument, "alloc order has no workload spelling");
}

std::string policy_text(const SchedulePolicy& policy) {
  if (std::holds_alternative<sched::Fcfs>(policy)) return "fcfs";
  if (std::holds_alternative<sched::ShortestJobFirst>(policy)) return "sjf";
  if (std::holds_alternative<sched::Priority>(policy)) return "prio";
  return "rr:" + std::to_string(std::get<sched::RoundRobin>(policy).quantum);
}

}  // namespace

void validate(const WorkloadSpec& spec) {
  auto fail = [](const std::string& what) { throw Error(Errc::ValidationError, what); };
  if (spec.procedures.empty()) fail("workload has no procedures");
  PagingConfig{spec.page_size, spec.vmem_capacity, spec.mem_capacity, false}.validate();

  std::set<std::string> names;
  for (const Procedure& p : spec.procedures) {
    if (!names.insert(p.name()).second) fail("duplicate procedure '" + p.name() + "'");
  }
  const bool needs_prio = std::holds_alternative<sched::Priority>(spec.sched_policy) ||
                          std::holds_alternative<org::ByExternalKey>(spec.alloc_policy.order);
  if (needs_prio) {
    for (const Procedure& p : spec.procedures) {
      if (!p.priority()) fail("priority policy needs prio= on procedure '" + p.name() + "'");
    }
  }
  if (const auto* rr = std::get_if<sched::RoundRobin>(&spec.sched_policy); rr && rr->quantum < 1) {
    fail("round-robin quantum must be >= 1");
  }
  if (const auto* fixed = std::get_if<partition::Fixed>(&spec.alloc_policy.partitioning)) {
    for (const Procedure& p : spec.procedures) {
      if (p.payload_size() > fixed->size) {
        fail("partition size " + std::to_string(fixed->size) + " smaller than procedure '" +
             p.name() + "'");
      }
    }
  }
}

WorkloadSpec parse_workload(std::string_view text) {
  WorkloadSpec spec;
  std::set<std::string_view> seen;
  std::size_t line_no = 0;
  for (std::string_view line : split(text, '\n')) {
    ++line_no;
    if (const std::size_t hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    const auto toks = tokens(line);
    if (toks.empty()) continue;
    const std::string_view directive = toks[0];
    if (directive == "proc") {
      spec.procedures.push_back(parse_proc(toks, line_no));
      continue;
    }

    static const std::set<std::string_view> scalar{"mem", "vmem", "page", "alloc", "policy"};
    if (!scalar.contains(directive)) {
      parse_fail(line_no, "unknown directive '" + std::string(directive) + "'");
    }
    if (toks.size() != 2) parse_fail(line_no, std::string(directive) + " takes one argument");
    if (!seen.insert(directive).second) {
      parse_fail(line_no, "duplicate directive '" + std::string(directive) + "'");
    }
    const std::string_view arg = toks[1];
    if (directive == "mem") spec.mem_capacity = parse_nat(arg, line_no, "mem");
    else if (directive == "vmem") spec.vmem_capacity = parse_nat(arg, line_no, "vmem");
    else if (directive == "page") spec.page_size = parse_nat(arg, line_no, "page");
    else if (directive == "alloc") spec.alloc_policy = parse_alloc(arg, line_no);
    else spec.sched_policy = parse_policy(arg, line_no);
  }
  for (std::string_view required : {"mem", "vmem", "page"}) {
    if (!seen.contains(required)) {
      throw Error(Errc::ValidationError, "missing '" + std::string(required) + "' directive");
    }
  }
  validate(spec);
  return spec;
}

std::string to_text(const WorkloadSpec& spec) {
  std::ostringstream out;
  out << "mem " << spec.mem_capacity << '\n'
      << "vmem " << spec.vmem_capacity << '\n'
      << "page " << spec.page_size << '\n'
      << "alloc " << alloc_text(spec.alloc_policy) << '\n'
      << "policy " << policy_text(spec.sched_policy) << '\n';
  for (const Procedure& p : spec.procedures) {
    out << "proc " << p.name() << " size=" << p.payload_size() << " time=" << p.declared_time()
        << " segs=";
    const auto& a = p.seg_boundaries();
    for (std::size_t i = 0; i < a.size(); ++i) out << (i ? "," : "") << a[i];
    if (p.priority()) out << " prio=" << *p.priority();
    if (!p.growth_schedule().empty()) {
      out << " grow=";
      const auto& g = p.growth_schedule();
      for (std::size_t i = 0; i < g.size(); ++i) {
        out << (i ? "," : "") << g[i].at_tick << ':' << g[i].delta;
      }
    }
    out << '\n';
  }
  return out.str();
}

// ---------------------------------------------------------------------------

bool RunReport::audits_ok() const {
  return std::all_of(audits.begin(), audits.end(),
                     [](const AuditEntry& a) { return a.report.ok(); });
}

RunReport run(const WorkloadSpec& spec, const RunOptions& options) {
  validate(spec);
  RunReport report;

  ResourcePool vm = finite_pool(ResourceKind::VirtualMemory, spec.vmem_capacity);
  ResourcePool phys = finite_pool(ResourceKind::Memory, spec.mem_capacity);
  std::optional<ResourcePool> contiguous;
  std::optional<ResourcePool> time;

  auto audit_all = [&](const std::string& phase) {
    report.audits.push_back({"vmem", phase, audit_partition(vm)});
    report.audits.push_back({"mem", phase, audit_partition(phys)});
    if (contiguous) report.audits.push_back({"alloc", phase, audit_partition(*contiguous)});
    if (time) report.audits.push_back({"time", phase, audit_partition(*time)});
  };
  auto guarded = [&](const std::string& phase, auto&& body) {
    try {
      body();
    } catch (const Error& e) {
      report.failure = RunFailure{phase, e.code(), e.what()};
    }
    audit_all(phase);
    return !report.failure;
  };

  const PagingConfig config{spec.page_size, spec.vmem_capacity, spec.mem_capacity,
                            options.hoist_frames};
  if (!guarded("paging", [&] {
        report.tables = do_page_seg(spec.procedures, vm, phys, config, spec.alloc_policy.order);
      })) {
    return report;
  }

  contiguous = finite_pool(ResourceKind::Memory, spec.mem_capacity);
  if (!guarded("alloc", [&] {
        report.allocation = allocate_all(spec.procedures, *contiguous, spec.alloc_policy);
        report.fragmentation_waste = internal_waste(spec.procedures, spec.alloc_policy);
        // Growth events apply in tick order; ties keep allocation order.
        struct Pending {
          std::uint64_t tick;
          const Procedure* proc;
          GrowthEvent event;
        };
        std::vector<Pending> pending;
        for (const Procedure& p :
             organize_procedures(spec.procedures, spec.alloc_policy.order, SizeMeasure::Space)) {
          const auto it = std::find_if(spec.procedures.begin(), spec.procedures.end(),
                                       [&](const Procedure& q) { return q.name() == p.name(); });
          for (const GrowthEvent& ev : it->growth_schedule()) pending.push_back({ev.at_tick, &*it, ev});
        }
        std::stable_sort(pending.begin(), pending.end(),
                         [](const Pending& a, const Pending& b) { return a.tick < b.tick; });
        for (const Pending& ev : pending) {
          report.allocation =
              apply_growth(*ev.proc, ev.event, *contiguous, std::move(report.allocation));
        }
      })) {
    return report;
  }

  time = time_pool();
  guarded("schedule", [&] {
    report.schedule = run_simulation(spec.procedures, spec.sched_policy, *time, options.switch_mode);
    report.switch_count = report.schedule.switch_count;
    report.total_ticks = report.schedule.total_ticks;
  });
  return report;
}

// ---------------------------------------------------------------------------

namespace {

void emit_machine(const RunReport& report, const EmitOptions& options, std::ostream& out) {
  const bool tables = options.what != EmitWhat::Trace;
  const bool trace = options.what != EmitWhat::Tables;
  if (tables) {
    out << serialize_tables(report.tables);
    for (const Binding& b : report.allocation.entries) {
      const auto& r = std::get<Region>(b.right);
      out << "ALLOC\t" << std::get<ProcRef>(b.left).name << '\t' << r.u_min << '\t' << r.u_max
          << '\n';
    }
  }
  if (trace) out << serialize(report.schedule.trace);
  if (options.what == EmitWhat::All) {
    out << "SUMMARY\twaste\t" << report.fragmentation_waste << '\n'
        << "SUMMARY\tswitches\t" << report.switch_count << '\n'
        << "SUMMARY\tticks\t" << report.total_ticks << '\n';
  }
  if (options.audit) {
    for (const AuditEntry& a : report.audits) {
      out << "AUDIT\t" << a.pool << '\t' << a.phase << '\t' << (a.report.ok() ? "PASS" : "FAIL")
          << '\n';
    }
  }
}

// Renders rows as columns padded to the widest cell.
void emit_columns(std::ostream& out, const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width;
  for (const auto& row : rows) {
    width.resize(std::max(width.size(), row.size()), 0);
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  }
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      out << std::left << std::setw(static_cast<int>(width[c])) << row[c];
      out << (c + 1 < row.size() ? "  " : "\n");
    }
  }
}

std::string span(const Region& r) { return to_string(r); }

void emit_human(const RunReport& report, const EmitOptions& options, std::ostream& out) {
  const bool tables = options.what != EmitWhat::Trace;
  const bool trace = options.what != EmitWhat::Tables;
  if (tables) {
    out << "Segment tables\n";
    std::vector<std::vector<std::string>> rows{{"proc", "seg", "proc span", "vmem span"}};
    for (const SegmentTable& st : report.tables.segment_tables) {
      for (const SegmentRow& r : st.rows) {
        rows.push_back({st.owner, std::to_string(r.seg_index), span(r.proc_span), span(r.vm_span)});
      }
    }
    emit_columns(out, rows);

    out << "\nPage tables\n";
    rows = {{"proc", "seg", "page", "vmem span", "frame"}};
    for (const PageTable& pt : report.tables.page_tables) {
      for (const PageRow& r : pt.rows) {
        rows.push_back({pt.owner, std::to_string(pt.seg_index), std::to_string(r.page_index),
                        span(r.vm_span), span(r.frame)});
      }
    }
    emit_columns(out, rows);

    out << "\nContiguous allocation\n";
    rows = {{"proc", "region"}};
    for (const Binding& b : report.allocation.entries) {
      rows.push_back({std::get<ProcRef>(b.left).name, span(std::get<Region>(b.right))});
    }
    emit_columns(out, rows);
  }
  if (trace) {
    out << (tables ? "\n" : "") << "Switch trace\n";
    std::vector<std::vector<std::string>> rows{{"tick", "op", "proc", "by"}};
    for (const TraceEvent& e : report.schedule.trace.events) {
      rows.push_back({std::to_string(e.tick), std::string(to_string(e.op)), e.proc,
                      std::string(to_string(e.attribution))});
    }
    emit_columns(out, rows);
  }
  if (options.what == EmitWhat::All) {
    out << "\nwaste " << report.fragmentation_waste << ", switches " << report.switch_count
        << ", ticks " << report.total_ticks << '\n';
  }
  if (options.audit) {
    out << "\nAudits\n";
    std::vector<std::vector<std::string>> rows{{"pool", "phase", "result"}};
    for (const AuditEntry& a : report.audits) {
      rows.push_back({a.pool, a.phase, a.report.ok() ? "PASS" : "FAIL"});
      for (const Finding& f : a.report.violations) rows.push_back({"", "", f.message});
    }
    emit_columns(out, rows);
  }
}

}  // namespace

void emit(const RunReport& report, const EmitOptions& options, std::ostream& out) {
  if (options.format == Format::Machine) {
    emit_machine(report, options, out);
  } else {
    emit_human(report, options, out);
  }
  out.flush();
  if (!out) throw std::ios_base::failure("write failed");
}

int exit_code_for(Errc code) noexcept {
  switch (code) {
    case Errc::ParseError: return 2;
    case Errc::ValidationError: return 3;
    case Errc::Exhausted:
    case Errc::NoContiguousRun: return 4;
    default: return 1;
  }
}

}  // namespace symos
