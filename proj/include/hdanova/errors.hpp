#pragma once

#include <stdexcept>
#include <string>

namespace hdanova {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Input file exists but its contents are unusable (missing cells, NaN, bad header).
class MalformedData : public Error {
public:
    using Error::Error;
};

// Dimensions disagree (value-column counts across groups, vector lengths).
class ShapeMismatch : public Error {
public:
    using Error::Error;
};

// A group (or split block) has fewer rows than the data layer allows.
class TooShort : public Error {
public:
    using Error::Error;
};

// Bandwidths (B, B1) invalid for the series lengths they are applied to.
class BandwidthError : public Error {
public:
    using Error::Error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

// A matrix factorization failed even at the maximum diagonal jitter.
class NumericalFailure : public Error {
public:
    using Error::Error;
};

// Bandwidth selection found no candidate pair admissible for every group.
class NoAdmissibleBandwidth : public Error {
public:
    using Error::Error;
};

// Input sequence carries no usable signal (e.g. zero sample variance).
class DegenerateInput : public Error {
public:
    using Error::Error;
};

}  // namespace hdanova
