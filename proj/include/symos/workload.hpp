#pragma once

// Workload files, end-to-end runs, and report emission.
//
// Grammar, one directive per line, `#` starts a comment:
//   mem <nat>
//   vmem <nat>
//   page <nat>
//   alloc fcfs|ssf|prio|fixed:<nat>
//   policy fcfs|sjf|prio|rr:<nat>
//   proc <name> size=<nat> time=<nat> segs=<a1,...> [prio=<nat>] [grow=<tick:delta,...>]
// `proc` lines keep file order, which is the first-come-first-serve order.

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "symos/allocators.hpp"
#include "symos/paging.hpp"
#include "symos/procedure.hpp"
#include "symos/resource.hpp"
#include "symos/scheduler.hpp"

namespace symos {

struct WorkloadSpec {
  std::uint64_t mem_capacity = 0;
  std::uint64_t vmem_capacity = 0;
  std::uint64_t page_size = 0;
  AllocationPolicy alloc_policy;
  SchedulePolicy sched_policy = sched::Fcfs{};
  std::vector<Procedure> procedures;

  friend bool operator==(const WorkloadSpec&, const WorkloadSpec&) = default;
};

// ParseError (with line number) for malformed or unknown directives;
// ValidationError for well-formed input that breaks an invariant.
WorkloadSpec parse_workload(std::string_view text);

// Checks the cross-directive invariants parse_workload enforces.
void validate(const WorkloadSpec& spec);

// Canonical text; parse_workload(to_text(s)) == s.
std::string to_text(const WorkloadSpec& spec);

struct RunOptions {
  bool hoist_frames = false;
  SwitchMode switch_mode = SwitchMode::Preemptive;
};

struct AuditEntry {
  std::string pool;
  std::string phase;
  AuditReport report;
};

struct RunFailure {
  std::string phase;
  Errc code;
  std::string message;
};

struct RunReport {
  PageSegResult tables;
  BindingTable allocation;
  SimulationResult schedule;
  std::vector<AuditEntry> audits;
  std::uint64_t fragmentation_waste = 0;
  std::uint64_t switch_count = 0;
  std::uint64_t total_ticks = 0;
  std::optional<RunFailure> failure;

  bool audits_ok() const;
};

// Phases, in order: "paging" (segmentation + paging over vmem/mem),
// "alloc" (contiguous allocation plus growth events), "schedule".
// Every pool is audited after each phase. A failing phase stops the run
// and is recorded in `failure`; the audits up to that point remain.
RunReport run(const WorkloadSpec& spec, const RunOptions& options = {});

enum class EmitWhat { Tables, Trace, All };
enum class Format { Human, Machine };

struct EmitOptions {
  EmitWhat what = EmitWhat::All;
  Format format = Format::Machine;
  bool audit = false;
};

void emit(const RunReport& report, const EmitOptions& options, std::ostream& out);

// Process exit code for an error code: 2 parse, 3 validation,
// 4 resource exhaustion, 1 anything else. Audit failures map to 5.
int exit_code_for(Errc code) noexcept;
inline constexpr int kExitAuditFailure = 5;

}  // namespace symos
