#pragma once

#include <stdexcept>
#include <string>

namespace qimg {

// Base class for everything thrown on purpose by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Mismatched or invalid index sets, non-bijective relabels, wrong arity.
struct ShapeError : Error {
    using Error::Error;
};

// make_node called with children that violate the global index order.
struct ConstructionError : Error {
    using Error::Error;
};

// Dense conversion requested beyond the supported rank.
struct CapacityError : Error {
    using Error::Error;
};

// Bad user-facing parameters (benchmark sizes, probabilities, k values).
struct ParamError : Error {
    using Error::Error;
};

// .qts / init file syntax problems; carries a 1-based line number.
struct ParseError : Error {
    int line;
    ParseError(int line_, const std::string& what_)
        : Error("line " + std::to_string(line_) + ": " + what_), line(line_) {}
};

// basis_decompose ran past 2^n extractions: the input was not a projector.
struct NonProjectorError : Error {
    using Error::Error;
};

// A documented precondition was violated (e.g. non-orthonormal basis).
struct PreconditionError : Error {
    using Error::Error;
};

// Cooperative deadline hit inside the engine.
struct TimeoutError : Error {
    TimeoutError() : Error("computation exceeded its time budget") {}
};

}  // namespace qimg
