#pragma once

#include <memory>
#include <vector>

namespace slhardy {

// n-fold iterated logarithm; throws DomainError when an iterate leaves (0, inf).
double poly_log(int n, double r);
// n-fold iterated exponential; throws OverflowError past the double range.
double poly_exp(int n, double r);

struct SuperLogParams {
    double a = 2.0;
    double product_tol = 1e-13;
    double quad_tol = 1e-10;
    int max_tower_depth = 64;

    // Throws DomainError unless a > 1, tolerances in (0, 1) and depth >= 1.
    void validate() const;
};

struct TowerValue {
    double value = 0.0;
    int truncation_depth = 0;
    double error_bound = 0.0;
};

namespace detail {
class PhiCache;
}

/// Evaluator for the tower map F(u) = a - log a + log u, the infinite product
/// Ftilde(u) = a * prod_k F^k(u)/a, its primitive phi and the super-logarithm
/// L(r) = phi(a r) - a.
///
/// Iterates are carried as excesses d_k = F^k(u) - a through the exact
/// recursion d_{k+1} = log1p(d_k / a), so factors close to 1 never lose digits
/// to cancellation. Copies share one append-only cache of phi on a log-spaced
/// knot grid; the evaluator is safe for concurrent use.
class SuperLog {
public:
    explicit SuperLog(SuperLogParams params = {});

    const SuperLogParams& params() const { return params_; }
    double a() const { return params_.a; }

    double f_map(double u) const;
    double f_iter(int k, double u) const;
    TowerValue f_tilde(double u) const;
    // log Ftilde(u) from the truncated product (same certificate as f_tilde).
    TowerValue log_f_tilde(double u) const;
    // Independent route: V(u) = log a + int_a^u sum_k 1/prod_{j<=k} F^j(t) dt.
    double v_form(double u) const;

    double phi(double u) const;
    // int_a^u dt / Ftilde(t) without the additive a (no cancellation near u = a).
    double phi_minus_a(double u) const;
    double super_log(double r) const;

    double a0(int k, double r) const;
    double a1(int k, double r) const;
    // A1_0(r), ..., A1_kmax(r) in one pass.
    std::vector<double> a1_chain(int kmax, double r) const;
    TowerValue b0(double r) const;

    double da1(int k, double r) const;
    double db0(double r) const;

private:
    double check_u(double u, const char* who) const;

    SuperLogParams params_;
    std::shared_ptr<detail::PhiCache> cache_;
};

// One tabulation row for CSV export.
struct SuperLogRow {
    double r, L, a0_k, a1_k, b0, error_bound;
};
std::vector<SuperLogRow> tabulate_superlog(const SuperLog& sl, int k, const std::vector<double>& rs);

} // namespace slhardy
