#pragma once

#include <stdexcept>
#include <string>

namespace acs {

/// Input data failed validation (parse errors, dimension mismatches,
/// constant features, invalid partitions).
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A correlation's denominator term was nonpositive (or below epsilon),
/// so the measure is undefined on this input.
class DegenerateDenominator : public std::runtime_error {
public:
    DegenerateDenominator(const std::string& term, double value)
        : std::runtime_error("degenerate denominator term '" + term +
                             "' = " + std::to_string(value)),
          term_(term), value_(value) {}

    const std::string& term() const { return term_; }
    double value() const { return value_; }

private:
    std::string term_;
    double value_;
};

/// Numerical degeneracy that invalidates an entire run rather than a
/// single feature (e.g. an oracle threshold built on a flagged feature).
class DegeneracyError : public std::runtime_error {
public:
    explicit DegeneracyError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace acs
