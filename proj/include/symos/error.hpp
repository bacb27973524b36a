#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace symos {

// Every failure the model can report. Callers branch on the code; the
// message carries the context (procedure, segment index, line number).
enum class Errc {
  UniverseTooSmall,
  MissingKey,
  IndexOutOfRange,
  InvalidArgument,
  Exhausted,
  NoContiguousRun,
  SpanNotFree,
  SpanOutOfBounds,
  ConsumableResource,
  UnknownBinding,
  RegionNotOccupied,
  InadmissiblePair,
  DuplicateEntry,
  RightSideTaken,
  NotFound,
  NamesExhausted,
  ShrinkBelowZero,
  NotBound,
  MissingPriority,
  NotCurrent,
  NoClosure,
  AddressOutOfRange,
  TableIncomplete,
  ParseError,
  ValidationError,
};

std::string_view to_string(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), detail_(what) {}

  Errc code() const noexcept { return code_; }
  // The message without the code prefix, for wrapping with more context.
  const std::string& detail() const noexcept { return detail_; }

 private:
  Errc code_;
  std::string detail_;
};

}  // namespace symos
