#include "symos/scheduler.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

#include "symos/allocators.hpp"

namespace symos {

Environment Environment::fresh() {
  Environment env;
  Closure null_closure{kNullProcedure, 0, {}, 0};
  env.closures.emplace(kNullProcedure, null_closure);
  env.live.emplace(kNullProcedure, null_closure);
  return env;
}

void admit(Environment& env, const Procedure& p) {
  if (env.closures.contains(p.name())) throw Error(Errc::DuplicateEntry, "admit " + p.name());
  Closure initial{p.name(), p.declared_time(), {}, 0};
  env.closures.emplace(p.name(), initial);
  env.live.emplace(p.name(), std::move(initial));
}

std::string_view to_string(TraceOp op) noexcept {
  switch (op) {
    case TraceOp::Sel: return "Sel";
    case TraceOp::Close: return "Close";
    case TraceOp::Schedule: return "Schedule";
    case TraceOp::Resume: return "Resume";
    case TraceOp::Idle: return "Idle";
    case TraceOp::Loaded: return "Loaded";
  }
  return "?";
}

std::string_view to_string(Attribution a) noexcept {
  return a == Attribution::Os ? "os" : "proc";
}

std::string serialize(const SwitchTrace& trace) {
  std::ostringstream out;
  for (const TraceEvent& e : trace.events) {
    out << e.tick << '\t' << to_string(e.op) << '\t' << e.proc << '\t'
        << to_string(e.attribution) << '\n';
  }
  return out.str();
}

Region carve_interval(ResourcePool& time, std::uint64_t r) {
  if (time.kind != ResourceKind::Time) {
    throw Error(Errc::InvalidArgument, "carve_interval needs the time pool");
  }
  return make_set(time, r);
}

std::vector<Slice> build_schedule(std::span<const Procedure> procs, const SchedulePolicy& policy) {
  std::vector<Slice> plan;
  if (const auto* rr = std::get_if<sched::RoundRobin>(&policy)) {
    if (rr->quantum < 1) throw Error(Errc::InvalidArgument, "quantum must be >= 1");
    std::deque<Slice> queue;
    for (const Procedure& p : procs) queue.push_back({p.name(), p.declared_time()});
    while (!queue.empty()) {
      Slice head = std::move(queue.front());
      queue.pop_front();
      const std::uint64_t run = std::min(rr->quantum, head.length);
      plan.push_back({head.proc, run});
      head.length -= run;
      if (head.length > 0) queue.push_back(std::move(head));
    }
    return plan;
  }

  OrgSpec order = org::Identity{};
  if (std::holds_alternative<sched::ShortestJobFirst>(policy)) {
    order = org::SortAscendingBySize{};
  } else if (std::holds_alternative<sched::Priority>(policy)) {
    for (const Procedure& p : procs) {
      if (!p.priority()) throw Error(Errc::MissingPriority, p.name());
    }
    order = org::ByExternalKey{"priority"};
  }
  for (const Procedure& p : organize_procedures(procs, order, SizeMeasure::Time)) {
    plan.push_back({p.name(), p.declared_time()});
  }
  return plan;
}

void close_proc(Environment& env, const std::string& p) {
  if (p != env.current) {
    throw Error(Errc::NotCurrent, p + " is not running (current " + env.current + ")");
  }
  env.closures.insert_or_assign(p, env.live.at(p));
}

Closure schedule_next(const Environment& env, const std::string& p) {
  auto it = env.closures.find(p);
  if (it == env.closures.end()) throw Error(Errc::NoClosure, p);
  return it->second;
}

std::optional<TraceOp> resume_proc(Environment& env, const Closure& c) {
  const std::string previous = env.current;
  Closure restored = c;
  ++restored.resume_count;
  env.live.insert_or_assign(c.owner, std::move(restored));
  env.current = c.owner;

  const bool to_null = c.owner == kNullProcedure;
  const bool from_null = previous == kNullProcedure;
  if (to_null && !from_null) return TraceOp::Idle;
  if (!to_null && from_null) return TraceOp::Loaded;
  return std::nullopt;
}

void switch_procs(std::span<const std::string> procs, std::size_t i_cur, std::size_t i_next,
                  Environment& env, SwitchTrace& trace, std::uint64_t tick, SwitchMode mode) {
  if (i_cur >= procs.size() || i_next >= procs.size()) {
    throw Error(Errc::IndexOutOfRange, "switch index beyond " + std::to_string(procs.size()));
  }
  const std::string& outgoing = procs[i_cur];
  const std::string& incoming = procs[i_next];
  const Attribution out_attr = (mode == SwitchMode::Cooperative && outgoing != kNullProcedure)
                                   ? Attribution::Proc
                                   : Attribution::Os;

  trace.events.push_back({tick, TraceOp::Sel, outgoing, out_attr});
  close_proc(env, outgoing);
  trace.events.push_back({tick, TraceOp::Close, outgoing, out_attr});
  trace.events.push_back({tick, TraceOp::Sel, incoming, Attribution::Os});
  const Closure next = schedule_next(env, incoming);
  trace.events.push_back({tick, TraceOp::Schedule, incoming, Attribution::Os});
  const auto transition = resume_proc(env, next);
  trace.events.push_back({tick, TraceOp::Resume, incoming, Attribution::Os});
  if (transition) trace.events.push_back({tick, *transition, incoming, Attribution::Os});
}

SimulationResult run_simulation(std::span<const Procedure> procs, const SchedulePolicy& policy,
                                ResourcePool& time, SwitchMode mode) {
  SimulationResult result;
  result.env = Environment::fresh();
  std::vector<std::string> names{kNullProcedure};
  std::map<std::string, std::size_t> index_of{{kNullProcedure, 0}};
  for (const Procedure& p : procs) {
    admit(result.env, p);
    index_of.emplace(p.name(), names.size());
    names.push_back(p.name());
  }

  result.plan = build_schedule(procs, policy);
  Environment& env = result.env;
  std::uint64_t tick = time.next_fresh;
  for (const Slice& slice : result.plan) {
    if (env.current != slice.proc) {
      switch_procs(names, index_of.at(env.current), index_of.at(slice.proc), env, result.trace,
                   tick, mode);
      ++result.switch_count;
    }
    const Region interval = carve_interval(time, slice.length);
    result.time_bindings =
        append(std::move(result.time_bindings), bind(ProcRef{slice.proc}, interval));
    env.live.at(slice.proc).remaining_time -= slice.length;
    result.total_ticks += slice.length;
    tick = interval.u_max + 1;
  }
  if (env.current != kNullProcedure) {
    switch_procs(names, index_of.at(env.current), 0, env, result.trace, tick, mode);
    ++result.switch_count;
  }
  return result;
}

}  // namespace symos
