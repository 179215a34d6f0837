#include "slhardy/superlog.hpp"

#include <cmath>
#include <deque>
#include <limits>
#include <mutex>
#include <shared_mutex>
#include <string>

#include "slhardy/errors.hpp"
#include "slhardy/quadrature.hpp"

namespace slhardy {

double poly_log(int n, double r) {
    if (n < 0) throw DomainError("poly_log: negative order");
    double x = r;
    for (int i = 0; i < n; ++i) {
        if (!(x > 0.0)) {
            throw DomainError("poly_log: iterate " + std::to_string(i) + " is not positive");
        }
        x = std::log(x);
    }
    return x;
}

double poly_exp(int n, double r) {
    if (n < 0) throw DomainError("poly_exp: negative order");
    double x = r;
    for (int i = 0; i < n; ++i) {
        if (x > std::log(std::numeric_limits<double>::max())) {
            throw OverflowError("poly_exp: exp^" + std::to_string(n) + " exceeds double range");
        }
        x = std::exp(x);
    }
    return x;
}

void SuperLogParams::validate() const {
    if (!(a > 1.0)) throw DomainError("SuperLogParams: base a must exceed 1");
    if (!(product_tol > 0.0 && product_tol < 1.0)) throw DomainError("SuperLogParams: product_tol must lie in (0, 1)");
    if (!(quad_tol > 0.0 && quad_tol < 1.0)) throw DomainError("SuperLogParams: quad_tol must lie in (0, 1)");
    if (max_tower_depth < 1) throw DomainError("SuperLogParams: max_tower_depth must be >= 1");
}

namespace {

// Sum of log1p(d_k / a) over the tower started at excess d0 = u - a,
// skipping the first `skip` factors. Stops on the geometric tail certificate
// expm1(d_K / (a - 1)) <= tol (factors beyond K have excess d_k/a <= d_K/a^(k-K+1)).
TowerValue tower_log_sum(double a, double d0, int skip, double tol, int max_depth) {
    TowerValue tv;
    double d = d0;
    double sum = 0.0;
    for (int k = 0;; ++k) {
        if (k >= skip) {
            const double tail = std::expm1(d / (a - 1.0));
            if (tail <= tol) {
                tv.value = sum;
                tv.truncation_depth = k;
                tv.error_bound = tail;
                return tv;
            }
        }
        if (k >= max_depth) {
            throw DepthError("Ftilde: tail bound not reached within max_tower_depth = " +
                             std::to_string(max_depth));
        }
        const double lf = std::log1p(d / a);
        if (k >= skip) sum += lf;
        d = lf;
    }
}

} // namespace

namespace detail {

class PhiCache {
public:
    explicit PhiCache(const SuperLogParams& p) : p_(p), x0_(std::log(p.a)), tol_(p.quad_tol) {
        cum_.push_back(0.0);
    }

    double integrand(double x) const {
        // e^x / Ftilde(e^x) = exp(x - log Ftilde(e^x))
        const double d0 = std::max(std::exp(x) - p_.a, 0.0);
        const TowerValue lt = tower_log_sum(p_.a, d0, 0, p_.product_tol, p_.max_tower_depth);
        return std::exp(x - std::log(p_.a) - lt.value);
    }

    double integral_to(double x) const {
        const double rel = (x - x0_) / kStep;
        const auto j = static_cast<std::size_t>(std::floor(rel));
        const double xj = x0_ + static_cast<double>(j) * kStep;
        // panel j is built only when x reaches into it
        const Knot k = knot(j, x > xj);
        if (x <= xj) return k.cum;
        if (k.panel) return k.cum + (*k.panel)(x);
        auto f = [this](double s) { return integrand(s); };
        quad::Result r = quad::gk15(f, xj, x);
        if (r.error > 1e-3 * tol_) {
            r = quad::integrate(f, xj, x, {1e-3 * tol_, 1e-15, 2000});
        }
        return k.cum + r.value;
    }

private:
    struct Knot {
        double cum;
        const quad::ChebPrimitive* panel;  // null when the interpolant failed its check
    };

    Knot knot(std::size_t j, bool with_panel) const {
        const std::size_t need = j + (with_panel ? 1 : 0);
        {
            std::shared_lock lock(mutex_);
            if (need <= panels_.size()) return {cum_[j], j < panels_.size() && ok_[j] ? &panels_[j] : nullptr};
        }
        std::unique_lock lock(mutex_);
        auto f = [this](double s) { return integrand(s); };
        while (panels_.size() < need) {
            const std::size_t i = panels_.size();
            const double xa = x0_ + static_cast<double>(i) * kStep;
            quad::Result r = quad::integrate(f, xa, xa + kStep, {1e-4 * tol_, 1e-16, 2000});
            cum_.push_back(cum_.back() + r.value);
            // deque: references to earlier panels stay valid while it grows
            panels_.emplace_back(f, xa, xa + kStep);
            const double probe = xa + 0.3 * kStep, fp = f(probe);
            ok_.push_back(std::abs(panels_.back().total() - r.value) <= 1e-4 * tol_ * std::abs(r.value) &&
                          std::abs(panels_.back().integrand(probe) - fp) <= 1e-4 * tol_ * std::abs(fp));
        }
        return {cum_[j], j < panels_.size() && ok_[j] ? &panels_[j] : nullptr};
    }

    static constexpr double kStep = 0.25;
    SuperLogParams p_;
    double x0_;
    double tol_;
    mutable std::shared_mutex mutex_;
    mutable std::vector<double> cum_;
    mutable std::deque<quad::ChebPrimitive> panels_;  // panel i spans [knot i, knot i+1]
    mutable std::deque<bool> ok_;
};

} // namespace detail

SuperLog::SuperLog(SuperLogParams params) : params_(params) {
    params_.validate();
    cache_ = std::make_shared<detail::PhiCache>(params_);
}

double SuperLog::check_u(double u, const char* who) const {
    const double a = params_.a;
    if (u >= a) return u;
    if (u >= a * (1.0 - 4.0 * std::numeric_limits<double>::epsilon())) return a;
    throw DomainError(std::string(who) + ": argument below the fixed point a");
}

double SuperLog::f_map(double u) const {
    u = check_u(u, "F");
    const double a = params_.a;
    return a + std::log1p((u - a) / a);
}

double SuperLog::f_iter(int k, double u) const {
    if (k < 0) throw DomainError("F^k: negative k");
    if (k > params_.max_tower_depth) {
        throw DepthError("F^k: k exceeds max_tower_depth");
    }
    u = check_u(u, "F^k");
    const double a = params_.a;
    double d = u - a;
    for (int i = 0; i < k; ++i) d = std::log1p(d / a);
    return a + d;
}

TowerValue SuperLog::log_f_tilde(double u) const {
    u = check_u(u, "Ftilde");
    const double a = params_.a;
    TowerValue tv = tower_log_sum(a, u - a, 0, params_.product_tol, params_.max_tower_depth);
    tv.value += std::log(a);
    return tv;
}

TowerValue SuperLog::f_tilde(double u) const {
    TowerValue tv = log_f_tilde(u);
    tv.value = std::exp(tv.value);
    return tv;
}

double SuperLog::v_form(double u) const {
    u = check_u(u, "V");
    const double a = params_.a;
    const double tail_tol = 1e-3 * params_.quad_tol;
    const int depth = params_.max_tower_depth;
    // In x = log t the summand becomes 1 + 1/F^1 + 1/(F^1 F^2) + ...
    auto integrand = [a, tail_tol, depth](double x) {
        double d = std::max(std::exp(x) - a, 0.0);
        double term = 1.0;
        double sum = 1.0;
        for (int k = 1; k <= 4 * depth; ++k) {
            d = std::log1p(d / a);
            term /= (a + d);
            sum += term;
            if (term / (a - 1.0) <= tail_tol) return sum;
        }
        throw DepthError("V: inner series did not reach tolerance");
    };
    const quad::Result r = quad::integrate(integrand, std::log(a), std::log(u),
                                           {0.5 * params_.quad_tol, 1e-15, 8000});
    return std::log(a) + r.value;
}

double SuperLog::phi_minus_a(double u) const {
    u = check_u(u, "phi");
    return cache_->integral_to(std::log(u));
}

double SuperLog::phi(double u) const { return params_.a + phi_minus_a(u); }

double SuperLog::super_log(double r) const {
    if (!(r > 0.0)) throw DomainError("super_log: r must be positive");
    const double a = params_.a;
    if (r >= 1.0) return phi_minus_a(a * r);
    return -phi_minus_a(a / r);
}

double SuperLog::a0(int k, double r) const {
    if (r < 1.0) throw DomainError("A0_k: r must be >= 1");
    return f_iter(k, params_.a * r);
}

double SuperLog::a1(int k, double r) const {
    if (r < 1.0) throw DomainError("A1_k: r must be >= 1");
    return f_iter(k, phi(params_.a * r));
}

std::vector<double> SuperLog::a1_chain(int kmax, double r) const {
    if (r < 1.0) throw DomainError("A1_k: r must be >= 1");
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(kmax) + 1);
    const double a = params_.a;
    double d = phi_minus_a(a * r);
    out.push_back(a + d);
    for (int k = 1; k <= kmax; ++k) {
        d = std::log1p(d / a);
        out.push_back(a + d);
    }
    return out;
}

TowerValue SuperLog::b0(double r) const {
    if (r < 1.0) throw DomainError("B0: r must be >= 1");
    const double a = params_.a;
    TowerValue tv = tower_log_sum(a, a * r - a, 1, params_.product_tol, params_.max_tower_depth);
    tv.value = std::exp(tv.value);
    return tv;
}

double SuperLog::da1(int k, double r) const {
    if (r < 1.0) throw DomainError("dA1_k: r must be >= 1");
    const std::vector<double> chain = a1_chain(std::max(k - 1, 0), r);
    double denom = r * b0(r).value;
    for (int j = 0; j < k; ++j) denom *= chain[static_cast<std::size_t>(j)];
    return 1.0 / denom;
}

double SuperLog::db0(double r) const {
    if (r < 1.0) throw DomainError("dB0: r must be >= 1");
    const double a = params_.a;
    double d = a * r - a;
    double prod = 1.0;
    double sum = 0.0;
    for (int k = 1; k <= 4 * params_.max_tower_depth; ++k) {
        d = std::log1p(d / a);
        prod *= (a + d);
        const double term = 1.0 / prod;
        sum += term;
        if (term / (a - 1.0) <= 1e-17 * sum) break;
    }
    return b0(r).value * sum / r;
}

std::vector<SuperLogRow> tabulate_superlog(const SuperLog& sl, int k, const std::vector<double>& rs) {
    std::vector<SuperLogRow> rows;
    rows.reserve(rs.size());
    for (double r : rs) {
        const TowerValue b = sl.b0(r);
        rows.push_back({r, sl.super_log(r), sl.a0(k, r), sl.a1(k, r), b.value, b.error_bound});
    }
    return rows;
}

} // namespace slhardy
