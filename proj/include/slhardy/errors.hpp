#pragma once

#include <stdexcept>
#include <string>

namespace slhardy {

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// Iteration depth exhausted (tower truncation, bisection, dyadic refinement).
class DepthError : public std::runtime_error {
public:
    explicit DepthError(const std::string& what) : std::runtime_error(what) {}
};

// Adaptive quadrature could not reach the requested tolerance.
class QuadratureError : public std::runtime_error {
public:
    explicit QuadratureError(const std::string& what) : std::runtime_error(what) {}
};

// Operation requires a weight of the other class (P vs Q) or another family.
class ClassError : public std::invalid_argument {
public:
    explicit ClassError(const std::string& what) : std::invalid_argument(what) {}
};

class OverflowError : public std::overflow_error {
public:
    explicit OverflowError(const std::string& what) : std::overflow_error(what) {}
};

} // namespace slhardy
