// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the cctransfer Project.

#pragma once

#include <stdexcept>
#include <string>

namespace cct {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Annotation corners are collinear, concave, or otherwise unusable.
class DegenerateQuad : public Error {
public:
    using Error::Error;
};

/// A patch sample point fell outside the image raster.
class PatchOutOfBounds : public Error {
public:
    using Error::Error;
};

/// The regularized normal equations are numerically singular.
class SingularSystem : public Error {
public:
    using Error::Error;
};

/// Two rasters that must share dimensions do not.
class DimensionMismatch : public Error {
public:
    using Error::Error;
};

/// No crop candidate clears the minimum-area threshold.
class CheckerDominates : public Error {
public:
    using Error::Error;
};

/// Not enough same-split images to draw references from.
class InsufficientPool : public Error {
public:
    using Error::Error;
};

/// An image file could not be read or decoded.
class UnreadableImage : public Error {
public:
    using Error::Error;
};

/// A mask has no foreground pixels.
class EmptyMask : public Error {
public:
    using Error::Error;
};

/// A mask contains values other than 0 and 255.
class InvalidMask : public Error {
public:
    using Error::Error;
};

/// A structured input file failed to parse.
class ParseError : public Error {
public:
    using Error::Error;
};

} // namespace cct
