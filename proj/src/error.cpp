#include "symos/error.hpp"

namespace symos {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::UniverseTooSmall: return "UniverseTooSmall";
    case Errc::MissingKey: return "MissingKey";
    case Errc::IndexOutOfRange: return "IndexOutOfRange";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::Exhausted: return "Exhausted";
    case Errc::NoContiguousRun: return "NoContiguousRun";
    case Errc::SpanNotFree: return "SpanNotFree";
    case Errc::SpanOutOfBounds: return "SpanOutOfBounds";
    case Errc::ConsumableResource: return "ConsumableResource";
    case Errc::UnknownBinding: return "UnknownBinding";
    case Errc::RegionNotOccupied: return "RegionNotOccupied";
    case Errc::InadmissiblePair: return "InadmissiblePair";
    case Errc::DuplicateEntry: return "DuplicateEntry";
    case Errc::RightSideTaken: return "RightSideTaken";
    case Errc::NotFound: return "NotFound";
    case Errc::NamesExhausted: return "NamesExhausted";
    case Errc::ShrinkBelowZero: return "ShrinkBelowZero";
    case Errc::NotBound: return "NotBound";
    case Errc::MissingPriority: return "MissingPriority";
    case Errc::NotCurrent: return "NotCurrent";
    case Errc::NoClosure: return "NoClosure";
    case Errc::AddressOutOfRange: return "AddressOutOfRange";
    case Errc::TableIncomplete: return "TableIncomplete";
    case Errc::ParseError: return "ParseError";
    case Errc::ValidationError: return "ValidationError";
  }
  return "Unknown";
}

}  // namespace symos
