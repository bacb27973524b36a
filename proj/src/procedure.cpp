#include "symos/procedure.hpp"

#include <utility>

#include "symos/error.hpp"

namespace symos {

namespace {

void fail(const std::string& name, const std::string& what) {
  throw Error(Errc::ValidationError, "procedure '" + name + "': " + what);
}

}  // namespace

Procedure::Procedure(std::string name, std::uint64_t payload_size, std::uint64_t declared_time,
                     std::vector<std::uint64_t> seg_boundaries,
                     std::optional<std::uint64_t> priority,
                     std::vector<GrowthEvent> growth_schedule)
    : name_(std::move(name)),
      payload_size_(payload_size),
      declared_time_(declared_time),
      seg_boundaries_(std::move(seg_boundaries)),
      priority_(priority),
      growth_schedule_(std::move(growth_schedule)) {
  if (name_.empty()) fail(name_, "name must be non-empty");
  if (name_ == kNullProcedure) fail(name_, "name is reserved for the null procedure");
  if (payload_size_ < 1) fail(name_, "size must be >= 1");
  if (seg_boundaries_.size() < 2) fail(name_, "segment boundaries need at least two entries");
  if (seg_boundaries_.front() != 0) fail(name_, "segment boundaries must start at 0");
  for (std::size_t i = 1; i < seg_boundaries_.size(); ++i) {
    if (seg_boundaries_[i] <= seg_boundaries_[i - 1]) {
      fail(name_, "segment boundaries must be strictly increasing");
    }
  }
  if (seg_boundaries_.back() != payload_size_) {
    fail(name_, "segment boundaries must end at size " + std::to_string(payload_size_));
  }
  if (declared_time_ < 1) fail(name_, "time must be >= 1");

  std::int64_t size = static_cast<std::int64_t>(payload_size_);
  std::uint64_t last_tick = 0;
  for (const GrowthEvent& ev : growth_schedule_) {
    if (ev.at_tick < 1 || ev.at_tick + 1 > declared_time_) {
      fail(name_, "growth tick " + std::to_string(ev.at_tick) + " outside [1, time-1]");
    }
    if (ev.at_tick < last_tick) fail(name_, "growth ticks must be nondecreasing");
    last_tick = ev.at_tick;
    size += ev.delta;
    if (size < 1) fail(name_, "growth schedule drops size below 1");
  }
}

Procedure Procedure::whole(std::string name, std::uint64_t payload_size,
                           std::uint64_t declared_time, std::optional<std::uint64_t> priority) {
  return Procedure(std::move(name), payload_size, declared_time, {0, payload_size}, priority);
}

}  // namespace symos
