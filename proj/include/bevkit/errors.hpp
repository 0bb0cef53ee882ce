#pragma once

#include <stdexcept>
#include <string>

namespace bevkit {

// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Plane-to-image homography does not exist (plane at or above the camera).
struct DegeneratePlane : Error {
    using Error::Error;
};

// Geometry that admits no usable mapping: singular homography, pitch or
// height outside the valid range, grid with non-positive scale.
struct DegenerateGeometry : Error {
    using Error::Error;
};

// Risk kernel radius exceeds the raster extent.
struct KernelTooLarge : Error {
    using Error::Error;
};

// A metric is undefined for the given inputs, e.g. Chamfer distance when
// exactly one of the two point sets is empty.
struct UndefinedMetric : Error {
    UndefinedMetric(const std::string& what, bool prediction_empty, bool truth_empty)
        : Error(what), prediction_empty(prediction_empty), truth_empty(truth_empty) {}

    bool prediction_empty = false;
    bool truth_empty = false;
};

// Scene or sampler configuration that cannot be satisfied.
struct InfeasibleConfig : Error {
    using Error::Error;
};

// Operands whose raster dimensions disagree.
struct DimensionMismatch : Error {
    using Error::Error;
};

// Operands tagged with incompatible coordinate frames.
struct FrameMismatch : Error {
    using Error::Error;
};

// File or stream level failure, including malformed grid payloads.
struct IoError : Error {
    using Error::Error;
};

} // namespace bevkit
