#pragma once

#include <stdexcept>
#include <string>

namespace meshwm {

// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed mesh file (header, counts, tokens).
struct ParseError : Error {
    using Error::Error;
};

// Face references a vertex outside [0, vertex_count).
struct IndexOutOfRange : ParseError {
    using ParseError::ParseError;
};

// File could not be opened or written.
struct IoError : Error {
    using Error::Error;
};

// A vertex with incident faces has an exactly zero normal sum.
struct DegenerateGeometry : Error {
    using Error::Error;
};

// Requested payload exceeds carrier capacity in strict mode.
struct CapacityError : Error {
    using Error::Error;
};

// Extraction found no salient vertices to read from.
struct EmptySalientSet : Error {
    using Error::Error;
};

// Adaptive quantization step undefined: all salient normal norms are zero.
struct ZeroNormals : Error {
    using Error::Error;
};

// Correspondence-based metric given meshes of unequal vertex count.
struct CorrespondenceMismatch : Error {
    using Error::Error;
};

// Bit sequences of unequal length passed to correlation.
struct LengthMismatch : Error {
    using Error::Error;
};

// Matrix handed to similarity_transform is not orthonormal.
struct InvalidRotation : Error {
    using Error::Error;
};

// Subdivision requires every edge to have at most two incident faces.
struct NonManifoldEdge : Error {
    using Error::Error;
};

// Attack would leave fewer than four vertices.
struct EmptyResult : Error {
    using Error::Error;
};

}  // namespace meshwm
