#pragma once

#include <stdexcept>
#include <string>

namespace minsurf {

// Base class for everything thrown by this library.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Curve parameter outside the domain of an open arc.
struct OutOfDomain : Error {
    using Error::Error;
};

// Unknown builtin contour name.
struct UnknownName : Error {
    using Error::Error;
};

// Triangle with signed area at or below the degeneracy threshold.
struct DegenerateTriangle : Error {
    using Error::Error;
};

// Mismatched sizes between a mesh, a stiffness matrix, or a surface map.
struct DimensionMismatch : Error {
    using Error::Error;
};

// No element matches a requested boundary edge.
struct NoSuchElement : Error {
    using Error::Error;
};

// Fixed-point configuration that does not name valid, cyclically ordered
// boundary nodes / parameters.
struct InvalidFixedPoints : Error {
    using Error::Error;
};

// Refinement was requested after the insertion budget ran out.
struct InsertionCapReached : Error {
    using Error::Error;
};

// Syntax error in a config or mesh file (message carries the line number).
struct ParseError : Error {
    using Error::Error;
};

// Semantically invalid configuration or data (message names the field).
struct ValidationError : Error {
    using Error::Error;
};

// Filesystem failure (message carries the path).
struct IoError : Error {
    using Error::Error;
};

} // namespace minsurf
