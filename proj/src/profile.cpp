#include "slhardy/profile.hpp"

#include <algorithm>
#include <cmath>

#include "slhardy/errors.hpp"

namespace slhardy {

RadialProfile::RadialProfile(std::vector<double> radii, std::vector<double> values)
    : r_(std::move(radii)), u_(std::move(values)) {
    if (r_.size() != u_.size()) throw DomainError("RadialProfile: radii/value size mismatch");
    if (r_.empty()) throw DomainError("RadialProfile: empty grid");
    for (std::size_t i = 0; i < r_.size(); ++i) {
        if (!(r_[i] > 0.0) || !std::isfinite(r_[i])) throw DomainError("RadialProfile: radii must be positive");
        if (i > 0 && !(r_[i] > r_[i - 1])) throw DomainError("RadialProfile: radii must increase strictly");
        if (!std::isfinite(u_[i])) throw DomainError("RadialProfile: non-finite value");
    }
}

double RadialProfile::operator()(double r) const {
    if (r <= r_.front()) return u_.front();
    if (r > r_.back()) return 0.0;
    const auto it = std::upper_bound(r_.begin(), r_.end(), r);
    if (it == r_.end()) return u_.back();
    const auto i = static_cast<std::size_t>(it - r_.begin()) - 1;
    const double lam = (r - r_[i]) / (r_[i + 1] - r_[i]);
    return u_[i] + lam * (u_[i + 1] - u_[i]);
}

double RadialProfile::slope(std::size_t i) const { return (u_[i + 1] - u_[i]) / (r_[i + 1] - r_[i]); }

std::vector<double> RadialProfile::derivative_samples() const {
    const std::size_t n = r_.size();
    std::vector<double> d(n, 0.0);
    if (n < 2) return d;
    d.front() = slope(0);
    d.back() = slope(n - 2);
    for (std::size_t i = 1; i + 1 < n; ++i) d[i] = 0.5 * (slope(i - 1) + slope(i));
    return d;
}

double RadialProfile::support_radius() const {
    for (std::size_t i = r_.size(); i-- > 0;) {
        if (u_[i] != 0.0) return i + 1 < r_.size() ? r_[i + 1] : r_[i];
    }
    return 0.0;
}

double RadialProfile::max_abs() const {
    double m = 0.0;
    for (double v : u_) m = std::max(m, std::abs(v));
    return m;
}

RadialProfile RadialProfile::scaled(double c) const {
    std::vector<double> v(u_);
    for (double& x : v) x *= c;
    return {r_, std::move(v)};
}

RadialProfile RadialProfile::abs_pow(double p) const {
    std::vector<double> v(u_);
    for (double& x : v) x = std::pow(std::abs(x), p);
    return {r_, std::move(v)};
}

bool RadialProfile::non_increasing() const {
    for (std::size_t i = 1; i < u_.size(); ++i) {
        if (u_[i] > u_[i - 1]) return false;
    }
    return true;
}

std::vector<double> log_grid(double lo, double hi, int n) {
    if (!(lo > 0.0) || !(hi > lo) || n < 2) throw DomainError("log_grid: need 0 < lo < hi and n >= 2");
    std::vector<double> g(static_cast<std::size_t>(n));
    const double a = std::log(lo), b = std::log(hi);
    for (int i = 0; i < n; ++i) g[static_cast<std::size_t>(i)] = std::exp(a + (b - a) * i / (n - 1));
    g.front() = lo;
    g.back() = hi;
    return g;
}

} // namespace slhardy
