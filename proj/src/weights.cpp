#include "slhardy/weights.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "slhardy/errors.hpp"
#include "slhardy/quadrature.hpp"

namespace slhardy {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kQtailLog = 30.0;  // Q-class quadrature starts at t e^-30

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// log^1(x), ..., log^m(x)
std::vector<double> log_chain(int m, double x) {
    std::vector<double> out(static_cast<std::size_t>(m));
    double v = x;
    for (int j = 0; j < m; ++j) {
        if (!(v > 0.0)) throw DomainError("poly-log weight: iterated logarithm undefined");
        v = std::log(v);
        out[static_cast<std::size_t>(j)] = v;
    }
    return out;
}

double check_t(const WeightSpec& w, double t, const char* who) {
    if (!(t > 0.0) || t > w.eta() * (1.0 + 1e-12)) {
        throw DomainError(std::string(who) + ": t must lie in (0, eta]");
    }
    return std::min(t, w.eta());
}

struct TabModel {
    double t0, w0, gamma;
};

TabModel tab_model(const TabulatedFamily& f) {
    TabModel m{f.t.front(), f.w.front(), 0.0};
    if (f.t.size() >= 2) m.gamma = std::log(f.w[1] / f.w[0]) / std::log(f.t[1] / f.t[0]);
    return m;
}

double tab_value(const TabulatedFamily& f, double t) {
    if (t <= f.t.front()) {
        const TabModel m = tab_model(f);
        return m.w0 * std::pow(t / m.t0, m.gamma);
    }
    if (t >= f.t.back()) return f.w.back();
    const auto it = std::upper_bound(f.t.begin(), f.t.end(), t);
    const auto i = static_cast<std::size_t>(it - f.t.begin()) - 1;
    const double lam = (t - f.t[i]) / (f.t[i + 1] - f.t[i]);
    return (1.0 - lam) * f.w[i] + lam * f.w[i + 1];
}

// int_lo^hi ds / w(s) in x = log s.
double inv_w_integral(const WeightSpec& w, double lo, double hi) {
    if (hi <= lo) return 0.0;
    const quad::Result r = quad::integrate(
        [&w](double x) { return w.t_over_w(std::exp(x)); }, std::log(lo), std::log(hi),
        {1e-15, 1e-14, 20000});
    return r.value;
}

// Closed-form f_eta at the canonical mu (family forms only).
double f_closed_canonical(const WeightSpec& w, double t) {
    const double eta = w.eta();
    return std::visit(
        Overloaded{
            [&](const PolyLogFamily& f) {
                const double x = f.R * eta / t;
                if (f.alpha == 1.0) return log_chain(f.k + 1, x).back();
                const double z = log_chain(f.k, x).back();
                return std::pow(z, 1.0 - f.alpha) / std::abs(1.0 - f.alpha);
            },
            [&](const SuperLogFamily& f) {
                const std::vector<double> chain = w.superlog_eval().a1_chain(f.k + 1, eta / t);
                if (f.alpha == 1.0) return chain.back();
                return std::pow(chain[static_cast<std::size_t>(f.k)], 1.0 - f.alpha) /
                       std::abs(1.0 - f.alpha);
            },
            [&](const TabulatedFamily&) -> double {
                throw ClassError("f_eta_closed: no closed form for tabulated weights");
            }},
        w.family());
}

} // namespace

std::string to_string(WeightClass c) { return c == WeightClass::P ? "P" : "Q"; }

WeightSpec WeightSpec::polylog(int k, double alpha, double R, double eta) {
    if (k < 1) throw DomainError("poly-log weight: k must be >= 1");
    if (!(eta > 0.0)) throw DomainError("weight: eta must be positive");
    if (!std::isfinite(alpha)) throw DomainError("poly-log weight: alpha must be finite");
    const int levels = alpha == 1.0 ? k + 1 : k;
    if (!(R > poly_exp(levels, 1.0))) {
        throw DomainError("poly-log weight: R must exceed exp^" + std::to_string(levels) + "(1)");
    }
    return WeightSpec(PolyLogFamily{k, alpha, R}, eta);
}

WeightSpec WeightSpec::superlog(int k, double alpha, double a, double eta, SuperLogParams params) {
    if (k < 0) throw DomainError("super-log weight: k must be >= 0");
    if (!(eta > 0.0)) throw DomainError("weight: eta must be positive");
    if (!std::isfinite(alpha)) throw DomainError("super-log weight: alpha must be finite");
    const double floor_a = std::max(1.0, std::pow(std::abs(alpha - 1.0), 1.0 / (k + 1)));
    if (!(a > floor_a)) {
        throw DomainError("super-log weight: a must exceed max(1, |alpha-1|^(1/(k+1)))");
    }
    params.a = a;
    WeightSpec spec(SuperLogFamily{k, alpha, a}, eta);
    spec.sl_.emplace(params);
    return spec;
}

WeightSpec WeightSpec::tabulated(std::vector<double> t, std::vector<double> w, double eta, double mu) {
    if (t.empty() || t.size() != w.size()) throw DomainError("tabulated weight: sample size mismatch");
    if (!(eta > 0.0)) throw DomainError("weight: eta must be positive");
    if (!(mu > 0.0)) throw DomainError("tabulated weight: mu must be positive");
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (!(t[i] > 0.0) || !(w[i] > 0.0)) throw DomainError("tabulated weight: samples must be positive");
        if (i > 0 && !(t[i] > t[i - 1])) throw DomainError("tabulated weight: radii must increase");
    }
    if (t.back() > eta * (1.0 + 1e-12)) throw DomainError("tabulated weight: samples beyond eta");
    return WeightSpec(TabulatedFamily{std::move(t), std::move(w), mu}, eta);
}

WeightSpec WeightSpec::with_mu(double mu) const {
    if (!(mu > 0.0)) throw DomainError("weight: mu must be positive");
    WeightSpec copy = *this;
    copy.mu_override_ = mu;
    return copy;
}

int WeightSpec::k() const {
    return std::visit(Overloaded{[](const PolyLogFamily& f) { return f.k; },
                                 [](const SuperLogFamily& f) { return f.k; },
                                 [](const TabulatedFamily&) { return 0; }},
                      family_);
}

double WeightSpec::alpha() const {
    return std::visit(Overloaded{[](const PolyLogFamily& f) { return f.alpha; },
                                 [](const SuperLogFamily& f) { return f.alpha; },
                                 [](const TabulatedFamily&) { return kNaN; }},
                      family_);
}

const SuperLog& WeightSpec::superlog_eval() const {
    if (!sl_) throw DomainError("weight: not a super-log family");
    return *sl_;
}

std::string WeightSpec::describe() const {
    std::ostringstream os;
    os.precision(17);
    std::visit(Overloaded{[&](const PolyLogFamily& f) {
                              os << "polylog(k=" << f.k << ", alpha=" << f.alpha << ", R=" << f.R;
                          },
                          [&](const SuperLogFamily& f) {
                              os << "superlog(k=" << f.k << ", alpha=" << f.alpha << ", a=" << f.a;
                          },
                          [&](const TabulatedFamily& f) {
                              os << "tabulated(samples=" << f.t.size() << ", mu=" << f.mu;
                          }},
               family_);
    os << ", eta=" << eta_;
    if (mu_override_) os << ", mu=" << *mu_override_;
    os << ")";
    return os.str();
}

double WeightSpec::t_over_w(double t) const {
    if (!(t > 0.0)) throw DomainError("weight: t must be positive");
    if (t > eta_) return t / value(t);
    return std::visit(
        Overloaded{
            [&](const PolyLogFamily& f) {
                const std::vector<double> L = log_chain(f.k, f.R * eta_ / t);
                double prod = 1.0;
                for (int j = 0; j + 1 < f.k; ++j) prod *= L[static_cast<std::size_t>(j)];
                return 1.0 / (prod * std::pow(L.back(), f.alpha));
            },
            [&](const SuperLogFamily& f) {
                const double x = eta_ / t;
                const std::vector<double> chain = sl_->a1_chain(f.k, x);
                double prod = sl_->b0(x).value;
                for (int j = 0; j < f.k; ++j) prod *= chain[static_cast<std::size_t>(j)];
                return 1.0 / (prod * std::pow(chain.back(), f.alpha));
            },
            [&](const TabulatedFamily& f) { return t / tab_value(f, t); }},
        family_);
}

double WeightSpec::value(double t) const {
    if (!(t > 0.0)) throw DomainError("weight: t must be positive");
    if (is_tabulated()) {
        const auto& f = std::get<TabulatedFamily>(family_);
        return tab_value(f, std::min(t, std::max(eta_, f.t.back())));
    }
    const double s = std::min(t, eta_);
    return s / t_over_w(s);
}

WeightClass classify(const WeightSpec& w) {
    if (!w.is_tabulated()) return w.alpha() <= 1.0 ? WeightClass::P : WeightClass::Q;
    // Dyadic integrals I_j of 1/w over [t0 2^-(j+1), t0 2^-j]: geometric decay
    // means 1/w is integrable at 0, a non-decaying ratio means divergence.
    const auto& f = std::get<TabulatedFamily>(w.family());
    const double t0 = f.t.back();
    double prev = 0.0;
    double last_ratio = kNaN;
    int decaying = 0;
    int flat = 0;
    for (int j = 0; j < 200; ++j) {
        const double hi = t0 * std::ldexp(1.0, -j);
        const double cur = inv_w_integral(w, 0.5 * hi, hi);
        if (j > 0) {
            last_ratio = cur / prev;
            if (last_ratio < 1.0 - 1e-6) {
                ++decaying;
                flat = 0;
            } else if (last_ratio > 1.0 - 1e-12) {
                ++flat;
                decaying = 0;
            } else {
                decaying = flat = 0;
            }
            if (decaying >= 8) return WeightClass::Q;
            if (flat >= 8) return WeightClass::P;
        }
        prev = cur;
    }
    throw DomainError("classify: dyadic integrals neither converge nor diverge (last ratio " +
                      std::to_string(last_ratio) + ")");
}

double canonical_mu(const WeightSpec& w) {
    if (classify(w) != WeightClass::P) throw ClassError("canonical mu: weight is Q-class");
    return std::visit(
        Overloaded{[](const PolyLogFamily& f) {
                       if (f.alpha == 1.0) return log_chain(f.k + 1, f.R).back();
                       return std::pow(log_chain(f.k, f.R).back(), 1.0 - f.alpha) / (1.0 - f.alpha);
                   },
                   [](const SuperLogFamily& f) {
                       if (f.alpha == 1.0) return f.a;
                       return std::pow(f.a, 1.0 - f.alpha) / (1.0 - f.alpha);
                   },
                   [](const TabulatedFamily& f) { return f.mu; }},
        w.family());
}

double mu_of(const WeightSpec& w) {
    if (w.mu_override()) return *w.mu_override();
    return canonical_mu(w);
}

double f_eta_closed(const WeightSpec& w, double t) {
    t = check_t(w, t, "f_eta_closed");
    if (w.is_tabulated()) throw ClassError("f_eta_closed: no closed form for tabulated weights");
    const double base = f_closed_canonical(w, t);
    if (classify(w) == WeightClass::P && w.mu_override()) return base + (*w.mu_override() - canonical_mu(w));
    return base;
}

double f_eta_quad(const WeightSpec& w, double t) {
    t = check_t(w, t, "f_eta_quad");
    const double eta = w.eta();
    if (classify(w) == WeightClass::P) return mu_of(w) + inv_w_integral(w, t, eta);

    if (const auto* tab = std::get_if<TabulatedFamily>(&w.family())) {
        // Power-law model below the first sample: int_0^s dt/w = s / (w(s) (1 - gamma)).
        const TabModel m = tab_model(*tab);
        const double s = std::min(t, m.t0);
        return s / (tab_value(*tab, s) * (1.0 - m.gamma)) + inv_w_integral(w, s, t);
    }
    const double tc = t * std::exp(-kQtailLog);
    const double alpha = w.alpha();
    double z = 0.0;
    if (const auto* pl = std::get_if<PolyLogFamily>(&w.family())) {
        z = log_chain(pl->k, pl->R * eta / tc).back();
    } else {
        z = w.superlog_eval().a1(w.k(), eta / tc);
    }
    // int_z^inf y^-alpha dy
    const double tail = std::pow(z, 1.0 - alpha) / (alpha - 1.0);
    return tail + inv_w_integral(w, tc, t);
}

double f_eta(const WeightSpec& w, double t) {
    if (w.is_tabulated()) return f_eta_quad(w, t);
    return f_eta_closed(w, t);
}

double G_eta(const WeightSpec& w, double t) {
    if (classify(w) != WeightClass::P) throw ClassError("G_eta: requires a P-class weight");
    t = check_t(w, t, "G_eta");
    const double mu = mu_of(w);
    if (!w.is_tabulated()) return mu - std::log(mu) + std::log(f_eta_closed(w, t));
    const quad::Result r = quad::integrate(
        [&w](double x) {
            const double s = std::exp(x);
            return w.t_over_w(s) / f_eta_quad(w, s);
        },
        std::log(t), std::log(w.eta()), {1e-13, 1e-12, 4000});
    return mu + r.value;
}

double rho_max(const WeightSpec& w) {
    if (classify(w) == WeightClass::P) return 1.0 / mu_of(w);
    return f_eta(w, w.eta());
}

double rho_map_bisect(const WeightSpec& w, double rho) {
    const double rmax = rho_max(w);
    if (!(rho > 0.0) || rho > rmax * (1.0 + 1e-12)) throw DomainError("rho_map: rho outside (0, rho_max]");
    const bool pclass = classify(w) == WeightClass::P;
    const double target = pclass ? 1.0 / rho : rho;
    // P: f decreasing in t; Q: increasing. Search x = log t.
    double hi = std::log(w.eta());
    double lo = hi - 700.0;
    const double f_lo = f_eta(w, std::exp(lo));
    if (pclass ? f_lo < target : f_lo > target) {
        throw DomainError("rho_map: preimage below representable radii");
    }
    for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f_eta(w, std::exp(mid));
        const bool below = pclass ? fm >= target : fm <= target;
        (below ? lo : hi) = mid;
    }
    return std::exp(0.5 * (lo + hi));
}

double rho_map(const WeightSpec& w, double rho) {
    const double rmax = rho_max(w);
    if (!(rho > 0.0) || rho > rmax * (1.0 + 1e-12)) throw DomainError("rho_map: rho outside (0, rho_max]");
    if (rho >= rmax) return w.eta();
    const auto* pl = std::get_if<PolyLogFamily>(&w.family());
    if (pl == nullptr) return rho_map_bisect(w, rho);

    // Closed-form inversion through the iterated exponential.
    const bool pclass = classify(w) == WeightClass::P;
    double c = pclass ? 1.0 / rho : rho;
    if (pclass && w.mu_override()) c -= *w.mu_override() - canonical_mu(w);
    int levels = pl->k;
    double z = 0.0;
    if (pl->alpha == 1.0) {
        levels = pl->k + 1;
        z = c;
    } else {
        z = std::pow(std::abs(1.0 - pl->alpha) * c, 1.0 / (1.0 - pl->alpha));
    }
    // R eta / t = exp^levels(z)  =>  t = R eta exp(-exp^(levels-1)(z))
    double inner = 0.0;
    try {
        inner = poly_exp(levels - 1, z);
    } catch (const OverflowError&) {
        throw DomainError("rho_map: preimage below representable radii");
    }
    const double t = pl->R * w.eta() * std::exp(-inner);
    if (!(t >= std::numeric_limits<double>::min())) throw DomainError("rho_map: preimage below representable radii");
    return std::min(t, w.eta());
}

double H_at_t(const WeightSpec& w, double t) {
    t = check_t(w, t, "H");
    return f_eta(w, t) / w.t_over_w(t);
}

double H_of(const WeightSpec& w, double rho) { return H_at_t(w, rho_map(w, rho)); }

double H_product(const WeightSpec& w, double t) {
    t = check_t(w, t, "H_product");
    const double eta = w.eta();
    return std::visit(
        Overloaded{
            [&](const PolyLogFamily& f) {
                const int m = f.alpha == 1.0 ? f.k + 1 : f.k;
                const std::vector<double> L = log_chain(m, f.R * eta / t);
                double prod = 1.0;
                for (double v : L) prod *= v;
                return f.alpha == 1.0 ? prod : prod / std::abs(1.0 - f.alpha);
            },
            [&](const SuperLogFamily& f) {
                const double x = eta / t;
                const std::vector<double> chain = w.superlog_eval().a1_chain(f.k + 1, x);
                double prod = w.superlog_eval().b0(x).value;
                for (int j = 0; j <= f.k; ++j) prod *= chain[static_cast<std::size_t>(j)];
                return f.alpha == 1.0 ? prod * chain.back() : prod / std::abs(1.0 - f.alpha);
            },
            [&](const TabulatedFamily&) -> double {
                throw ClassError("H_product: no product formula for tabulated weights");
            }},
        w.family());
}

double analytic_H_bound(const WeightSpec& w) {
    return std::visit(
        Overloaded{
            [](const PolyLogFamily& f) {
                const int m = f.alpha == 1.0 ? f.k + 1 : f.k;
                const std::vector<double> L = log_chain(m, f.R);
                double prod = 1.0;
                for (double v : L) prod *= v;
                return f.alpha == 1.0 ? prod : prod / std::abs(1.0 - f.alpha);
            },
            [](const SuperLogFamily& f) {
                if (f.alpha == 1.0) return std::pow(f.a, f.k + 2);
                return std::pow(f.a, f.k + 1) / std::abs(1.0 - f.alpha);
            },
            [](const TabulatedFamily&) { return kNaN; }},
        w.family());
}

std::vector<double> rho_grid(const WeightSpec& w, int points, double t_ratio_min) {
    if (points < 2) throw DomainError("rho_grid: need at least two points");
    const bool pclass = classify(w) == WeightClass::P;
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(points));
    const double lmin = std::log(t_ratio_min);
    for (int i = 0; i < points; ++i) {
        const double t = w.eta() * std::exp(lmin * (1.0 - static_cast<double>(i) / (points - 1)));
        const double f = f_eta(w, t);
        out.push_back(pclass ? 1.0 / f : f);
    }
    std::sort(out.begin(), out.end());
    return out;
}

NdcReport ndc_check(const WeightSpec& w, const std::vector<double>& grid) {
    NdcReport rep;
    double inf = std::numeric_limits<double>::infinity();
    for (double rho : grid) inf = std::min(inf, H_of(w, rho));
    rep.grid_inf_H = inf;
    rep.analytic_bound = analytic_H_bound(w);
    if (std::isnan(rep.analytic_bound)) {
        rep.numerical_only = true;
        rep.analytic_bound = inf;
    }
    rep.satisfied = rep.analytic_bound > 0.0 && rep.grid_inf_H > 0.0;
    rep.ge_one = rep.analytic_bound >= 1.0;
    return rep;
}

double polylog_ge_one_threshold(int k, double alpha) {
    const int levels = alpha == 1.0 ? k + 1 : k;
    auto bound = [&](double logR) {
        return analytic_H_bound(WeightSpec::polylog(k, alpha, std::exp(logR)));
    };
    double lo = std::log(poly_exp(levels, 1.0)) * (1.0 + 1e-12) + 1e-12;
    if (bound(lo) >= 1.0) return std::exp(lo);
    double hi = lo;
    do {
        hi = 2.0 * hi + 1.0;
        if (hi > 700.0) throw DepthError("polylog_ge_one_threshold: no threshold below R = e^700");
    } while (bound(hi) < 1.0);
    for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (bound(mid) >= 1.0 ? hi : lo) = mid;
    }
    return std::exp(hi);
}

double gamma_pq(int n, double p, double q) {
    if (n < 1) throw DomainError("gamma_pq: n must be >= 1");
    if (!(p > 1.0)) throw DomainError("gamma_pq: p must exceed 1");
    if (!(q >= p)) throw DomainError("gamma_pq: q must be >= p");
    return (n - 1) / (1.0 + q / conjugate(p));
}

bool admissible_exponents(int n, double p, double q) {
    if (n < 1 || !(p > 1.0) || !(q >= p) || !std::isfinite(q)) return false;
    const double s = 1.0 / p - 1.0 / q;
    return s >= -1e-15 && s <= 1.0 / n + 1e-15;
}

bool lemma_sufficiency(int n, double p) {
    if (!(p > 1.0)) throw DomainError("lemma_sufficiency: p must exceed 1");
    return n > 1 && p <= (n + 1) / 2.0;
}

double rearrangement_density(const WeightSpec& w, int n, double p, double t) {
    // g = t^((n-1)/(p-1)) / w(t)
    return std::pow(t, (n - 1) / (p - 1.0)) / w.value(t);
}

double rearrangement_factor(const WeightSpec& w, int n, double p, double q, double t) {
    const double pc = conjugate(p);
    return std::pow(t, -pc * (n - 1)) * std::pow(f_eta(w, t), -(1.0 + q / pc));
}

double rearrangement_factor_head(const WeightSpec& w, int, double p, double q, double t) {
    // v g t^(n-1) = 1 / (w f^(1+q/p')) and f' = -1/w
    if (classify(w) != WeightClass::P) throw ClassError("rearrangement_factor_head: needs a P-class weight");
    const double r = q / conjugate(p);
    return std::pow(f_eta(w, t), -r) / r;
}

double g_sign_function(const WeightSpec& w, int n, double p, double t) {
    t = check_t(w, t, "g_sign_function");
    const double beta = (n - p) / (p - 1.0);
    if (const auto* pl = std::get_if<PolyLogFamily>(&w.family())) {
        const std::vector<double> L = log_chain(pl->k, pl->R * w.eta() / t);
        double sum = beta;
        double prod = 1.0;
        for (int j = 0; j + 1 < pl->k; ++j) {
            prod *= L[static_cast<std::size_t>(j)];
            sum += 1.0 / prod;
        }
        prod *= L.back();
        return sum + pl->alpha / prod;
    }
    if (const auto* sf = std::get_if<SuperLogFamily>(&w.family())) {
        const SuperLog& sl = w.superlog_eval();
        const double a = sf->a;
        const double x = w.eta() / t;
        double sum = beta;
        // x B0'/B0 = sum_{m>=1} 1 / prod_{j=1}^m A0_j(x)
        double d = a * x - a;
        double prod = 1.0;
        for (int m = 1; m <= 4 * sl.params().max_tower_depth; ++m) {
            d = std::log1p(d / a);
            prod *= a + d;
            sum += 1.0 / prod;
            if (1.0 / (prod * (a - 1.0)) < 1e-17) break;
        }
        // x A1_j'/A1_j = 1 / (B0 prod_{i<=j} A1_i)
        const std::vector<double> chain = sl.a1_chain(sf->k, x);
        double q = sl.b0(x).value;
        for (int j = 0; j < sf->k; ++j) {
            q *= chain[static_cast<std::size_t>(j)];
            sum += 1.0 / q;
        }
        q *= chain.back();
        return sum + sf->alpha / q;
    }
    // Tabulated: central difference of log g in log t.
    const double h = 1e-5;
    const double tp = std::min(t * std::exp(h), w.eta());
    const double tm = t * std::exp(-h);
    return (std::log(rearrangement_density(w, n, p, tp)) - std::log(rearrangement_density(w, n, p, tm))) /
           std::log(tp / tm);
}

MonotonicityReport monotonicity_probe(const WeightSpec& w, int n, double p, double q, int grid_points) {
    if (!(n < p)) throw DomainError("monotonicity_probe: requires n < p");
    if (!(w.alpha() <= 1.0)) throw DomainError("monotonicity_probe: requires alpha <= 1");
    if (!admissible_exponents(n, p, q)) throw DomainError("monotonicity_probe: inadmissible exponents");
    MonotonicityReport rep;
    const double pc = conjugate(p);
    const double alpha = w.alpha();
    rep.beta = (n - p) / (p - 1.0);
    rep.A = pc * (n - 1);
    rep.C = 1.0 + q / pc;
    rep.B = (1.0 - alpha) * rep.C;
    rep.grid_points = grid_points;
    const double inf = std::numeric_limits<double>::infinity();

    if (const auto* sf = std::get_if<SuperLogFamily>(&w.family())) {
        const int k = sf->k;
        if (rep.A <= 0.0) {
            rep.threshold_v = inf;
        } else if (alpha == 1.0) {
            rep.threshold_v = std::pow(rep.C / rep.A, 1.0 / (k + 2));
        } else {
            rep.threshold_v = rep.B > 0.0 ? std::pow(rep.B / rep.A, 1.0 / (k + 1)) : 1.0;
        }
        // beta + 2/(a-1) + |alpha|/a^(k+1) < 0; the left side decreases in a.
        auto bound = [&](double a) { return rep.beta + 2.0 / (a - 1.0) + std::abs(alpha) / std::pow(a, k + 1); };
        if (bound(1e12) >= 0.0) {
            rep.threshold_g = inf;
        } else {
            double lo = 1.0, hi = 1e12;
            for (int it = 0; it < 300; ++it) {
                const double mid = std::sqrt(lo * hi) > lo ? 0.5 * (lo + hi) : hi;
                (bound(mid) < 0.0 ? hi : lo) = mid;
            }
            rep.threshold_g = hi;
        }
        rep.thresholds_hold = sf->a >= rep.threshold_v && sf->a >= rep.threshold_g;
    } else if (const auto* pl = std::get_if<PolyLogFamily>(&w.family())) {
        const int k = pl->k;
        const int levels = alpha == 1.0 ? k + 1 : k;
        auto v_margin = [&](double logR) {
            const std::vector<double> L = log_chain(k + 1, std::exp(logR));
            double prod = 1.0;
            const int m = alpha == 1.0 ? k + 1 : k;
            for (int j = 0; j < m; ++j) prod *= L[static_cast<std::size_t>(j)];
            return alpha == 1.0 ? prod - rep.C / rep.A : prod - rep.B / rep.A;
        };
        auto g_margin = [&](double logR) {
            const std::vector<double> L = log_chain(k, std::exp(logR));
            double sum = rep.beta;
            double prod = 1.0;
            for (int j = 0; j + 1 < k; ++j) {
                prod *= L[static_cast<std::size_t>(j)];
                sum += 1.0 / prod;
            }
            prod *= L.back();
            return -(sum + alpha / prod);
        };
        const double lo0 = std::log(poly_exp(std::max(levels, k + 1), 1.0)) + 1e-9;
        auto threshold = [&](auto margin) {
            if (margin(lo0) >= 0.0) return std::exp(lo0);
            if (margin(700.0) < 0.0) return inf;
            double lo = lo0, hi = 700.0;
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (lo + hi);
                (margin(mid) >= 0.0 ? hi : lo) = mid;
            }
            return std::exp(hi);
        };
        rep.threshold_v = rep.A > 0.0 ? threshold(v_margin) : inf;
        rep.threshold_g = threshold(g_margin);
        rep.thresholds_hold = pl->R >= rep.threshold_v && pl->R >= rep.threshold_g;
    } else {
        rep.threshold_v = rep.threshold_g = kNaN;
    }

    // Sampled confirmation on a log grid over [1e-6 eta, eta].
    rep.sampled_g_decreasing = true;
    rep.sampled_v_decreasing = true;
    rep.max_sign_G = -inf;
    double g_prev = 0.0, v_prev = 0.0;
    for (int i = 0; i < grid_points; ++i) {
        const double t = w.eta() * std::pow(1e-6, 1.0 - static_cast<double>(i) / (grid_points - 1));
        const double g = rearrangement_density(w, n, p, t);
        const double v = rearrangement_factor(w, n, p, q, t);
        rep.max_sign_G = std::max(rep.max_sign_G, g_sign_function(w, n, p, t));
        if (i > 0) {
            if (g > g_prev * (1.0 + 1e-12)) rep.sampled_g_decreasing = false;
            if (v > v_prev * (1.0 + 1e-12)) rep.sampled_v_decreasing = false;
        }
        g_prev = g;
        v_prev = v;
    }
    return rep;
}

std::vector<PotentialRow> tabulate_potential(const WeightSpec& w, const std::vector<double>& ts) {
    const bool pclass = classify(w) == WeightClass::P;
    std::vector<PotentialRow> rows;
    rows.reserve(ts.size());
    for (double t : ts) {
        PotentialRow row;
        row.t = t;
        row.w = w.value(t);
        row.f_closed = w.is_tabulated() ? kNaN : f_eta_closed(w, t);
        row.f_quad = f_eta_quad(w, t);
        row.G = pclass ? G_eta(w, t) : kNaN;
        row.H = H_at_t(w, t);
        rows.push_back(row);
    }
    return rows;
}

} // namespace slhardy
