#pragma once

#include <stdexcept>
#include <string>

namespace sidelink {

// Base class for all errors raised by this library. Catching `Error`
// is enough to intercept any failure that is specific to sidelink
// allocation; plain std::invalid_argument is reserved for misuse of
// low-level value-type constructors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// A cluster was declared with no member vehicles.
class EmptyCluster : public Error {
public:
    using Error::Error;
};

// A cluster (or pair list) references a vehicle id outside 1..N.
class UnknownVehicleId : public Error {
public:
    using Error::Error;
};

// The same vehicle id appears twice within one cluster.
class DuplicateVehicleId : public Error {
public:
    using Error::Error;
};

// A vehicle belongs to no cluster; every vehicle must be covered.
class UncoveredVehicle : public Error {
public:
    using Error::Error;
};

// A demanded rate q_i must be strictly positive.
class NonPositiveQos : public Error {
public:
    using Error::Error;
};

// The demand tolerance epsilon must be non-negative.
class NegativeEpsilon : public Error {
public:
    using Error::Error;
};

// A matrix or vector does not have the dimensions implied by the
// scenario and channel grid it is used with.
class ShapeMismatch : public Error {
public:
    using Error::Error;
};

// The matrix-form constraint check and the direct pairwise check
// disagreed about the same assignment; one of the two code paths is
// defective and the result cannot be trusted.
class InternalCheckerDisagreement : public Error {
public:
    using Error::Error;
};

// Two inputs that must describe the same instance do not match
// (e.g. a capacity matrix generated for a different grid).
class InconsistentInputs : public Error {
public:
    using Error::Error;
};

// An exhaustive routine was asked to process an instance beyond its
// hard size guard.
class InstanceTooLarge : public Error {
public:
    using Error::Error;
};

// A cluster has more vehicles needing distinct subframes than the
// grid provides.
class InsufficientSubframes : public Error {
public:
    using Error::Error;
};

// A numeric input was NaN or infinite where a finite value is required.
class NonFiniteInput : public Error {
public:
    using Error::Error;
};

// A statistics routine received an empty sample set.
class EmptySamples : public Error {
public:
    using Error::Error;
};

// A configuration file or value set is malformed or out of range.
class ConfigInvalid : public Error {
public:
    using Error::Error;
};

// A file could not be read or written.
class IoError : public Error {
public:
    using Error::Error;
};

} // namespace sidelink
