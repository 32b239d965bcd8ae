#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace stieltjes {

// Malformed input: bad expressions, out-of-range parameters, unknown names.
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// Expression text does not conform to the grammar.  offset is the byte
// position of the first offending character.
class SyntaxError : public InputError {
public:
    SyntaxError(const std::string& what, std::size_t offset)
        : InputError(what + " at offset " + std::to_string(offset)), offset_(offset) {}
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

// No half-line of definition exists for an expression.
class DomainError : public InputError {
public:
    explicit DomainError(const std::string& what) : InputError(what) {}
};

// Monotone inversion could not bracket the target value within budget.
// `Above` means the target exceeded every reachable function value (the
// solution lies beyond double range); `Below` means the target sits under the
// attainable infimum.
enum class RangeSide { Above, Below };

class RangeError : public std::runtime_error {
public:
    RangeError(const std::string& what, RangeSide side)
        : std::runtime_error(what), side_(side) {}
    RangeSide side() const { return side_; }

private:
    RangeSide side_;
};

// A convexity certificate could not be established (G'' <= 0 somewhere, or a
// conjugate profile failed its positivity check).
class CertificationError : public std::runtime_error {
public:
    explicit CertificationError(const std::string& what) : std::runtime_error(what) {}
};

// Quadrature failed to reach the requested tolerance; carries the offending
// subinterval when known.
class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& what, double lo, double hi)
        : std::runtime_error(what), lo_(lo), hi_(hi) {}
    double interval_lo() const { return lo_; }
    double interval_hi() const { return hi_; }

private:
    double lo_, hi_;
};

} // namespace stieltjes
