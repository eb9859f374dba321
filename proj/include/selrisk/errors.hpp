#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace selrisk {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class NonPositiveProbability : public Error {
public:
    using Error::Error;
};

class ProbabilitiesDoNotSumToOne : public Error {
public:
    using Error::Error;
};

class IndexOutOfRange : public Error {
public:
    using Error::Error;
};

class InvalidAlpha : public Error {
public:
    using Error::Error;
};

class InvalidDistortion : public Error {
public:
    using Error::Error;
};

class EmptyScenarioSet : public Error {
public:
    using Error::Error;
};

class NegativeDensity : public Error {
public:
    using Error::Error;
};

class InvalidDensity : public Error {
public:
    using Error::Error;
};

class EmptyGeneratorSet : public Error {
public:
    using Error::Error;
};

class NonPositiveScale : public Error {
public:
    using Error::Error;
};

class UnsupportedDimension : public Error {
public:
    using Error::Error;
};

// Intersection (or another derived set) left the primitive class.
class NotRepresentable : public Error {
public:
    using Error::Error;
};

class GridMismatch : public Error {
public:
    using Error::Error;
};

// Enumeration would exceed the configured selection budget; carries the
// number of selections that would have been required.
class SelectionBudgetExceeded : public Error {
public:
    SelectionBudgetExceeded(const std::string& what, std::uint64_t required)
        : Error(what), required_(required) {}
    std::uint64_t required() const { return required_; }

private:
    std::uint64_t required_;
};

class NonConvexRisk : public Error {
public:
    using Error::Error;
};

class PreconditionRiskDominatesMean : public Error {
public:
    using Error::Error;
};

class SameSignTransfer : public Error {
public:
    using Error::Error;
};

class OrientationViolated : public Error {
public:
    using Error::Error;
};

// Scenario file failed validation; carries the offending key path.
class SchemaError : public Error {
public:
    SchemaError(const std::string& what, std::string key)
        : Error(what + " (key: " + key + ")"), key_(std::move(key)) {}
    const std::string& key() const { return key_; }

private:
    std::string key_;
};

} // namespace selrisk
