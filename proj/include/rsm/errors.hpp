#pragma once

#include <stdexcept>
#include <string>

namespace rsm {

// Every error raised by the library derives from rsm::Error so callers can
// catch the whole family at once; the subclasses name the failure mode.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ShapeError : Error { using Error::Error; };
struct RankDeficiencyError : Error { using Error::Error; };
struct SingularError : Error { using Error::Error; };
struct HypothesisError : Error { using Error::Error; };
struct DegeneracyError : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };
struct PreconditionError : Error { using Error::Error; };
struct IllPosedError : Error { using Error::Error; };

}  // namespace rsm
