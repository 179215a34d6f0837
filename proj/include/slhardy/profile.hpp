#pragma once

#include <span>
#include <vector>

namespace slhardy {

/// Piecewise-linear radial function on strictly increasing radii r_0 < ... < r_N.
/// Below r_0 the profile is constant (u_0); beyond r_N it vanishes.
class RadialProfile {
public:
    RadialProfile() = default;
    RadialProfile(std::vector<double> radii, std::vector<double> values);

    std::span<const double> radii() const { return r_; }
    std::span<const double> values() const { return u_; }
    std::size_t size() const { return r_.size(); }
    bool empty() const { return r_.empty(); }

    double operator()(double r) const;
    // Slope of segment i (between r_i and r_{i+1}).
    double slope(std::size_t i) const;
    // Nodal derivative samples: one-sided at the ends, averaged inside.
    std::vector<double> derivative_samples() const;
    // Radius beyond which the profile vanishes identically.
    double support_radius() const;
    double max_abs() const;

    RadialProfile scaled(double c) const;
    RadialProfile abs_pow(double p) const;
    bool non_increasing() const;

private:
    std::vector<double> r_;
    std::vector<double> u_;
};

// n points log-spaced on [lo, hi].
std::vector<double> log_grid(double lo, double hi, int n);

} // namespace slhardy
