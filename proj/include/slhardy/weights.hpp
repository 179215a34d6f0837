#pragma once

#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "slhardy/superlog.hpp"

namespace slhardy {

enum class WeightClass { P, Q };

std::string to_string(WeightClass c);

// w(t) = t prod_{j<k} log^j(R eta/t) (log^k(R eta/t))^alpha on (0, eta].
struct PolyLogFamily {
    int k = 1;
    double alpha = 0.0;
    double R = 10.0;
};

// w(t) = t B0(eta/t) prod_{j<k} A1_j(eta/t) A1_k(eta/t)^alpha on (0, eta].
struct SuperLogFamily {
    int k = 0;
    double alpha = 1.0;
    double a = 2.0;
};

// Samples (t_i, w_i) on (0, eta]; linear between samples, power law below the
// first sample, constant beyond eta. Class and potentials are numerical evidence.
struct TabulatedFamily {
    std::vector<double> t;
    std::vector<double> w;
    double mu = 1.0;
};

/// One admissible weight: a family plus the length scale eta. Immutable after
/// construction; every derived map below is a pure function of it.
class WeightSpec {
public:
    using Family = std::variant<PolyLogFamily, SuperLogFamily, TabulatedFamily>;

    static WeightSpec polylog(int k, double alpha, double R, double eta = 1.0);
    static WeightSpec superlog(int k, double alpha, double a, double eta = 1.0,
                               SuperLogParams params = {});
    static WeightSpec tabulated(std::vector<double> t, std::vector<double> w, double eta, double mu);

    // Copy with mu replaced; f_eta shifts by (mu - canonical mu).
    WeightSpec with_mu(double mu) const;

    const Family& family() const { return family_; }
    double eta() const { return eta_; }
    bool is_polylog() const { return std::holds_alternative<PolyLogFamily>(family_); }
    bool is_superlog() const { return std::holds_alternative<SuperLogFamily>(family_); }
    bool is_tabulated() const { return std::holds_alternative<TabulatedFamily>(family_); }
    int k() const;
    double alpha() const;
    // Evaluator for the super-log family (base a); DomainError otherwise.
    const SuperLog& superlog_eval() const;
    std::optional<double> mu_override() const { return mu_override_; }
    std::string describe() const;

    double operator()(double t) const { return value(t); }
    double value(double t) const;
    // t / w(t), the log-variable integrand of 1/w.
    double t_over_w(double t) const;

private:
    WeightSpec(Family f, double eta) : family_(std::move(f)), eta_(eta) {}

    Family family_;
    double eta_ = 1.0;
    std::optional<double> mu_override_;
    std::optional<SuperLog> sl_;
};

WeightClass classify(const WeightSpec& w);
// The family's canonical mu (P-class); ClassError for Q-class.
double canonical_mu(const WeightSpec& w);
// Override if present, else canonical. Tabulated: the supplied mu.
double mu_of(const WeightSpec& w);

// Closed forms of f_eta for the poly-log and super-log families.
double f_eta_closed(const WeightSpec& w, double t);
// Direct quadrature of 1/w; for Q-class the segment below t e^-30 is taken in
// the family's tower coordinate (z = log^k(R eta/s) or z = A1_k(eta/s)),
// where 1/w ds becomes z^-alpha dz.
double f_eta_quad(const WeightSpec& w, double t);
// Closed form where available, quadrature for tabulated weights.
double f_eta(const WeightSpec& w, double t);

double G_eta(const WeightSpec& w, double t);

// Upper end of the admissible rho interval: 1/mu (P) or f_eta(eta) (Q).
double rho_max(const WeightSpec& w);
double rho_map(const WeightSpec& w, double rho);
// Always by bisection (cross-check for the closed-form fast path).
double rho_map_bisect(const WeightSpec& w, double rho);

// H in the t variable: w(t) f_eta(t) / t.
double H_at_t(const WeightSpec& w, double t);
double H_of(const WeightSpec& w, double rho);
// Product formulas for the closed families at canonical mu.
double H_product(const WeightSpec& w, double t);

// Lower bound for inf H from the family parameters; NaN for tabulated weights.
double analytic_H_bound(const WeightSpec& w);

struct NdcReport {
    double grid_inf_H = std::numeric_limits<double>::quiet_NaN();
    double analytic_bound = std::numeric_limits<double>::quiet_NaN();
    bool satisfied = false;
    bool ge_one = false;
    bool numerical_only = false;
};

// rho values 1/f_eta(t) (P) or f_eta(t) (Q) for t log-spaced in [eta*t_ratio_min, eta].
std::vector<double> rho_grid(const WeightSpec& w, int points, double t_ratio_min = 1e-12);
NdcReport ndc_check(const WeightSpec& w, const std::vector<double>& rho_grid);

// Smallest R with analytic poly-log bound >= 1.
double polylog_ge_one_threshold(int k, double alpha);

double gamma_pq(int n, double p, double q);
bool admissible_exponents(int n, double p, double q);
bool lemma_sufficiency(int n, double p);
inline double conjugate(double p) { return p / (p - 1.0); }

struct MonotonicityReport {
    double beta = 0.0;
    double A = 0.0, B = 0.0, C = 0.0;
    // Minimal a (super-log) or R (poly-log) from the sufficient conditions.
    double threshold_v = 0.0;
    double threshold_g = 0.0;
    bool thresholds_hold = false;
    double max_sign_G = 0.0;        // max over the grid of t g'(t)/g(t)
    bool sampled_g_decreasing = false;
    bool sampled_v_decreasing = false;
    int grid_points = 0;
};

// Density g(t) with g^(1-p) = w^(p-1) t^(1-n) and the norm factor v(t).
double rearrangement_density(const WeightSpec& w, int n, double p, double t);
double rearrangement_factor(const WeightSpec& w, int n, double p, double q, double t);
// int_0^t v g s^(n-1) ds = f_eta(t)^(-q/p') / (q/p'), P-class only.
double rearrangement_factor_head(const WeightSpec& w, int n, double p, double q, double t);
// t g'(t)/g(t) from the derivative identities.
double g_sign_function(const WeightSpec& w, int n, double p, double t);

MonotonicityReport monotonicity_probe(const WeightSpec& w, int n, double p, double q,
                                      int grid_points = 1000);

struct PotentialRow {
    double t, w, f_closed, f_quad, G, H;
};
std::vector<PotentialRow> tabulate_potential(const WeightSpec& w, const std::vector<double>& ts);

} // namespace slhardy
