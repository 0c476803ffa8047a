#pragma once

#include <stdexcept>
#include <string>

namespace stablematch {

// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Two sets (or a set and a map) built over different universes met in one operation.
struct UniverseMismatch : Error {
    using Error::Error;
};

// A wrapped choice map returned a set that is not contained in its input.
struct InclusionViolation : Error {
    using Error::Error;
};

// Invalid specification: duplicate labels, unknown ids, negative quotas,
// non-partition blocks, malformed tables, and similar construction-time faults.
struct ValidationError : Error {
    using Error::Error;
};

// An exhaustive operation was asked to run past its universe-size cap.
struct CapExceeded : Error {
    using Error::Error;
};

// A method precondition (consistency / revealingness of the input maps)
// was checked and found violated, or could not be checked under the cap.
struct PreconditionFailed : Error {
    using Error::Error;
};

// The fixed-point iteration ran past its hard bound. Monotone rejection maps
// cannot do this; hitting the bound means an input map is not persistent.
struct ConvergenceFailure : Error {
    using Error::Error;
};

// Malformed input document (syntax or semantic), with location context.
struct ParseError : Error {
    using Error::Error;
};

}  // namespace stablematch
