#pragma once

#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "slhardy/profile.hpp"
#include "slhardy/quadrature.hpp"

namespace slhardy {

// Surface measure of the unit sphere in R^n: 2 pi^(n/2) / Gamma(n/2).
double unit_sphere_measure(int n);

/// Radial, non-negative, non-increasing density g on (0, r_max] in R^n. The
/// ball measure mu_g(B_r) is tabulated once on a log grid at construction.
class AdmissibleDensity {
public:
    using Fn = std::function<double(double)>;

    // `radial_cumulative`, when given, must return int_0^r g(s) s^(n-1) ds.
    // Throws DomainError when g is negative, increasing or not locally integrable.
    // `tabulate_g` serves g itself from the Chebyshev tabulation of the measure
    // wherever that reproduces it to roundoff; worth it only for costly g.
    AdmissibleDensity(int n, double r_max, Fn g, Fn radial_cumulative = nullptr, bool tabulate_g = false);

    int dimension() const { return n_; }
    double r_max() const { return r_max_; }
    double operator()(double r) const;

    // mu_g(B_r) = omega_{n-1} int_0^r g(s) s^(n-1) ds
    double ball_measure(double r) const;
    // Smallest r with ball_measure(r) >= m (bisection on the tabulated measure).
    double radius_for_measure(double m) const;

private:
    double radial_cumulative(double r) const;

    int n_;
    double r_max_;
    double omega_;
    Fn g_;
    Fn cumulative_;
    std::vector<double> knots_;
    std::vector<double> knot_cum_;
    std::vector<quad::ChebPrimitive> panels_;  // in log r; used where they pass the check
    std::vector<char> panel_ok_;
    bool tabulate_g_;
    std::vector<char> panel_pointwise_;
};

// mu_g({|u| > t}); with `closed` set, mu_g({|u| >= t}).
double distribution(const AdmissibleDensity& g, const RadialProfile& u, double t, bool closed = false);

// Exact R_g[u](r) = sup{t >= 0 : mu_g[u](t) > mu_g(B_r)} by bisection in t.
double rearranged_value(const AdmissibleDensity& g, const RadialProfile& u, double r);

/// Generalized decreasing rearrangement. The output grid is built from level
/// values (nodes of |u| plus adaptive refinement between them) mapped to radii
/// through mu_g(B_rho) = mu_g[u](t); the result is non-increasing by construction.
RadialProfile rearrange(const AdmissibleDensity& g, const RadialProfile& u);

// (left, right) pairs of the rearrangement relations.
std::pair<double, double> check_norm_preservation(const AdmissibleDensity& g, const RadialProfile& u, double p);
std::pair<double, double> check_hardy_littlewood(const AdmissibleDensity& g, const RadialProfile& u,
                                                 const RadialProfile& v);
std::pair<double, double> check_polya_szego(const AdmissibleDensity& g, const RadialProfile& u, double p);

// Rayleigh quotients int |u'|^p g^(1-p) / (int |u|^q v g)^(p/q) of u and of R_g[u].
// `v_head(r)`, if given, is int_0^r v g s^(n-1) ds; near the origin v g can
// overflow or decay too slowly for numerical integration.
std::pair<double, double> quotient_comparison(const AdmissibleDensity& g,
                                              const std::function<double(double)>& v,
                                              const RadialProfile& u, double p, double q,
                                              const std::function<double(double)>& v_head = nullptr);

// Building blocks shared by the checks (all include omega and r^(n-1)).
double weighted_power_integral(const AdmissibleDensity& g, const RadialProfile& u, double p,
                               const std::function<double(double)>& extra = nullptr,
                               const std::function<double(double)>& extra_head = nullptr);
double weighted_gradient_integral(const AdmissibleDensity& g, const RadialProfile& u, double p);

struct RearrangementRow {
    double r, u, rearranged;
};
std::vector<RearrangementRow> tabulate_rearrangement(const AdmissibleDensity& g, const RadialProfile& u,
                                                     const std::vector<double>& rs);

} // namespace slhardy
