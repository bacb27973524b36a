#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace symos {

// One step of a procedure's memory growth: at tick `at_tick` of its own
// execution the payload changes by `delta` units.
struct GrowthEvent {
  std::uint64_t at_tick = 1;
  std::int64_t delta = 0;

  friend bool operator==(const GrowthEvent&, const GrowthEvent&) = default;
};

// A named finite set of naturals: spatial size, an estimate of the CPU time
// it needs, its segment boundaries, and optional priority/growth data.
// Procedures are plain values; every operation takes and returns them by value.
//
// Construction validates:
// - payload_size >= 1
// - boundaries strictly increasing, first == 0, last == payload_size
// - declared_time >= 1
// - growth ticks in [1, declared_time - 1], cumulative size never below 1
class Procedure {
 public:
  Procedure(std::string name, std::uint64_t payload_size, std::uint64_t declared_time,
            std::vector<std::uint64_t> seg_boundaries,
            std::optional<std::uint64_t> priority = std::nullopt,
            std::vector<GrowthEvent> growth_schedule = {});

  // Single-segment procedure: boundaries (0, payload_size).
  static Procedure whole(std::string name, std::uint64_t payload_size,
                         std::uint64_t declared_time = 1,
                         std::optional<std::uint64_t> priority = std::nullopt);

  const std::string& name() const noexcept { return name_; }
  std::uint64_t payload_size() const noexcept { return payload_size_; }
  std::uint64_t declared_time() const noexcept { return declared_time_; }
  const std::vector<std::uint64_t>& seg_boundaries() const noexcept { return seg_boundaries_; }
  std::size_t segment_count() const noexcept { return seg_boundaries_.size() - 1; }
  const std::optional<std::uint64_t>& priority() const noexcept { return priority_; }
  const std::vector<GrowthEvent>& growth_schedule() const noexcept { return growth_schedule_; }

  friend bool operator==(const Procedure&, const Procedure&) = default;

 private:
  std::string name_;
  std::uint64_t payload_size_;
  std::uint64_t declared_time_;
  std::vector<std::uint64_t> seg_boundaries_;
  std::optional<std::uint64_t> priority_;
  std::vector<GrowthEvent> growth_schedule_;
};

// Name reserved for the null procedure.
inline constexpr const char* kNullProcedure = "p0";

}  // namespace symos
