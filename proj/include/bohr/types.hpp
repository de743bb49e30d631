#pragma once

#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace bohr {

using Complex = std::complex<double>;
using Point = std::vector<Complex>;

/// An analytic function sampled pointwise.
using Evaluable = std::function<Complex(const Point&)>;

/// A real-valued functional of a point (used for sup of Re f).
using RealEvaluable = std::function<double(const Point&)>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr const char* kSchema = "bohr-lab/1";
inline constexpr const char* kToolVersion = "0.3.0";

/// Rejected input: violated precondition or malformed parameter.
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A function produced a non-finite value at some sample point.
class EvaluationFailure : public std::runtime_error {
public:
    EvaluationFailure(const std::string& what, Point where)
        : std::runtime_error(what), point(std::move(where)) {}
    Point point;
};

/// Numerical routine failed to reach its goal (LP iterations, search caps).
class NumericalFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string format_point(const Point& z);

}  // namespace bohr
