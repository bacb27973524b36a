#pragma once

// CPU-time allocation and context switching.
//
// Time is a consumable pool: carving an interval always succeeds and nothing
// is ever released. Scheduling policies are orderings of the procedure set;
// round robin is the constant-chunk ordering applied to time.
//
// A context switch is the fixed sequence
//   Sel(current) ; close ; Sel(next) ; schedule ; resume
// so close and schedule both happen before resume in every episode.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "symos/binding.hpp"
#include "symos/procedure.hpp"
#include "symos/resource.hpp"

namespace symos {

namespace sched {
struct Fcfs {
  friend bool operator==(const Fcfs&, const Fcfs&) = default;
};
struct ShortestJobFirst {
  friend bool operator==(const ShortestJobFirst&, const ShortestJobFirst&) = default;
};
struct Priority {
  friend bool operator==(const Priority&, const Priority&) = default;
};
struct RoundRobin {
  std::uint64_t quantum = 1;
  friend bool operator==(const RoundRobin&, const RoundRobin&) = default;
};
}  // namespace sched

using SchedulePolicy =
    std::variant<sched::Fcfs, sched::ShortestJobFirst, sched::Priority, sched::RoundRobin>;

struct Slice {
  std::string proc;
  std::uint64_t length = 0;
  friend bool operator==(const Slice&, const Slice&) = default;
};

// Snapshot of a suspended procedure. Stored closures are never modified in
// place; close_proc replaces them wholesale.
struct Closure {
  std::string owner;
  std::uint64_t remaining_time = 0;
  std::vector<Region> bound_regions;
  std::uint64_t resume_count = 0;
  friend bool operator==(const Closure&, const Closure&) = default;
};

// `closures` holds the stored snapshots, `live` the running state of every
// admitted procedure. The null procedure is always admitted and is current
// whenever no user procedure runs.
struct Environment {
  std::map<std::string, Closure> closures;
  std::map<std::string, Closure> live;
  std::string current = kNullProcedure;

  static Environment fresh();
  static const char* null_proc() noexcept { return kNullProcedure; }
};

// Initial closure: remaining_time = declared_time, no bound regions.
void admit(Environment& env, const Procedure& p);

enum class TraceOp { Sel, Close, Schedule, Resume, Idle, Loaded };
enum class Attribution { Os, Proc };
enum class SwitchMode { Preemptive, Cooperative };

std::string_view to_string(TraceOp op) noexcept;
std::string_view to_string(Attribution a) noexcept;

struct TraceEvent {
  std::uint64_t tick = 0;
  TraceOp op = TraceOp::Sel;
  std::string proc;
  Attribution attribution = Attribution::Os;
  friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

struct SwitchTrace {
  std::vector<TraceEvent> events;
  friend bool operator==(const SwitchTrace&, const SwitchTrace&) = default;
};

// One `TICK\tOP\tPROC\tATTRIB` line per event.
std::string serialize(const SwitchTrace& trace);

Region carve_interval(ResourcePool& time, std::uint64_t r);

// FCFS, SJF and Priority give one slice of declared_time per procedure
// (stable ties, lower priority value first). RoundRobin(q) cycles the queue
// with slices of min(q, remaining).
std::vector<Slice> build_schedule(std::span<const Procedure> procs, const SchedulePolicy& policy);

void close_proc(Environment& env, const std::string& p);
Closure schedule_next(const Environment& env, const std::string& p);
// Returns Idle or Loaded when the resume crosses the null procedure.
std::optional<TraceOp> resume_proc(Environment& env, const Closure& c);

// `procs[0]` is the null procedure. Appends the five switch events (plus an
// Idle/Loaded marker when applicable) at `tick`.
void switch_procs(std::span<const std::string> procs, std::size_t i_cur, std::size_t i_next,
                  Environment& env, SwitchTrace& trace, std::uint64_t tick,
                  SwitchMode mode = SwitchMode::Preemptive);

struct SimulationResult {
  SwitchTrace trace;
  std::vector<Slice> plan;
  BindingTable time_bindings;  // procedure -> interval, in carve order
  Environment env;
  std::uint64_t switch_count = 0;
  std::uint64_t total_ticks = 0;
};

// Runs the plan to completion. Switches only when the next slice belongs to
// a different procedure, and returns to the null procedure at the end.
SimulationResult run_simulation(std::span<const Procedure> procs, const SchedulePolicy& policy,
                                ResourcePool& time, SwitchMode mode = SwitchMode::Preemptive);

}  // namespace symos
