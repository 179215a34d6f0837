#pragma once

#include <functional>
#include <utility>
#include <vector>

namespace slhardy::quad {

struct Result {
    double value = 0.0;
    double error = 0.0;   // estimated absolute error
    int evaluations = 0;
};

struct Options {
    double abs_tol = 1e-12;
    double rel_tol = 1e-12;
    int max_intervals = 4000;
};

using Integrand = std::function<double(double)>;

// One Gauss-Kronrod 7/15 panel; err is |K15 - G7|.
Result gk15(const Integrand& f, double a, double b);

// Globally adaptive bisection: always splits the panel with the largest error
// until sum(err) <= max(abs_tol, rel_tol*|I|). Throws QuadratureError when
// max_intervals is reached first.
Result integrate(const Integrand& f, double a, double b, const Options& opt = {});

// Integral over [a, b] (0 < a < b) computed in the variable x = log t.
Result integrate_log(const Integrand& f, double a, double b, const Options& opt = {});

// Sum over consecutive pieces in the log variable. One GK15 pass fixes the
// overall scale; a piece is refined only if its error exceeds rel_tol * scale.
// Suited to piecewise-smooth integrands whose pieces differ wildly in size.
Result integrate_pieces_log(const Integrand& f, const std::vector<std::pair<double, double>>& pieces,
                            double rel_tol = 1e-14);

// Fixed n-point Gauss-Legendre nodes/weights on [-1, 1], n in {8, 10}.
struct GaussRule {
    const double* nodes;
    const double* weights;
    int n;
};
GaussRule gauss_legendre(int n);

// Primitive x -> int_a^x f of a smooth f on [a, b], from a degree-31
// Chebyshev interpolant. Cheap to evaluate; callers should check
// total() against an adaptive integral before trusting it.
class ChebPrimitive {
public:
    static constexpr int kOrder = 32;
    ChebPrimitive() = default;
    ChebPrimitive(const Integrand& f, double a, double b);
    double operator()(double x) const;
    double total() const { return (*this)(b_); }
    // interpolant of f itself
    double integrand(double x) const;

private:
    double a_ = 0.0, b_ = 0.0;
    std::vector<double> c_;     // coefficients of f
    std::vector<double> cint_;  // coefficients of the primitive
};

} // namespace slhardy::quad
