#include "slhardy/functionals.hpp"

#include <cmath>
#include <limits>

#include "slhardy/errors.hpp"
#include "slhardy/quadrature.hpp"
#include "slhardy/rearrangement.hpp"

namespace slhardy {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool weight_based(Variant v) { return v != Variant::ClassicCkn && v != Variant::CriticalCkn; }

// The weight whose potential governs the variant. The critical CKN form is the
// poly-log family with k = 1, alpha = 0.
WeightSpec potential_weight(const QuotientSpec& spec) {
    if (spec.variant == Variant::CriticalCkn) return WeightSpec::polylog(1, 0.0, spec.R, spec.eta());
    if (spec.variant == Variant::ClassicCkn) throw DomainError("classic CKN quotient has no Hardy potential");
    return spec.weight;
}

void check_support(const QuotientSpec& spec, const RadialProfile& u) {
    if (u.empty()) throw DomainError("empty profile");
    if (u.support_radius() > spec.eta() * (1.0 + 1e-12)) {
        throw DomainError("profile support exceeds eta");
    }
}

std::vector<std::pair<double, double>> segments(const RadialProfile& u) {
    const auto r = u.radii();
    std::vector<std::pair<double, double>> out;
    for (std::size_t i = 0; i + 1 < r.size(); ++i) out.emplace_back(r[i], r[i + 1]);
    return out;
}

// |u|^q is smooth on each piece once sign changes become breakpoints.
std::vector<std::pair<double, double>> abs_pieces(const RadialProfile& u) {
    const auto r = u.radii();
    const auto v = u.values();
    std::vector<std::pair<double, double>> out;
    for (std::size_t i = 0; i + 1 < r.size(); ++i) {
        if ((v[i] < 0.0 && v[i + 1] > 0.0) || (v[i] > 0.0 && v[i + 1] < 0.0)) {
            const double z = r[i] + (r[i + 1] - r[i]) * v[i] / (v[i] - v[i + 1]);
            out.emplace_back(r[i], z);
            out.emplace_back(z, r[i + 1]);
        } else {
            out.emplace_back(r[i], r[i + 1]);
        }
    }
    return out;
}

// int_0^{r0} D(t) dt for the constant head of a profile.
double head_integral(const QuotientSpec& spec, double r0) {
    const double C = spec.norm_exponent();
    if (spec.variant == Variant::ClassicCkn) {
        if (spec.gamma <= 0.0) throw DomainError("norm_term: diverges at the origin unless u vanishes there");
        return std::pow(r0, spec.gamma * spec.q) / (spec.gamma * spec.q);
    }
    const WeightSpec w = potential_weight(spec);
    if (classify(w) == WeightClass::Q) {
        throw DomainError("norm_term: Q-class weight, u must vanish near the origin");
    }
    // int_0^{r0} dt / (w f^C) = int_{f(r0)}^inf s^{-C} ds
    const double s0 = f_eta(w, r0);
    double value = std::pow(s0, 1.0 - C) / (C - 1.0);
    if (spec.variant == Variant::PolyLog || spec.variant == Variant::SuperLog) {
        if (w.alpha() != 1.0) value /= std::pow(std::abs(1.0 - w.alpha()), C);
    }
    return value;
}

} // namespace

std::string to_string(Variant v) {
    switch (v) {
    case Variant::ClassicCkn: return "classic_ckn";
    case Variant::CriticalCkn: return "critical_ckn";
    case Variant::General: return "general";
    case Variant::PolyLog: return "polylog";
    case Variant::SuperLog: return "superlog";
    case Variant::HardyRemainder: return "hardy_remainder";
    }
    return "?";
}

Variant variant_from_string(const std::string& s) {
    for (Variant v : {Variant::ClassicCkn, Variant::CriticalCkn, Variant::General, Variant::PolyLog,
                      Variant::SuperLog, Variant::HardyRemainder}) {
        if (to_string(v) == s) return v;
    }
    throw DomainError("unknown quotient variant: " + s);
}

QuotientSpec QuotientSpec::general(int n, double p, double q, WeightSpec w) {
    QuotientSpec s{n, p, q, std::move(w), Variant::General};
    s.validate();
    return s;
}

QuotientSpec QuotientSpec::explicit_form(int n, double p, double q, WeightSpec w) {
    Variant v = Variant::General;
    if (w.is_polylog()) v = Variant::PolyLog;
    else if (w.is_superlog()) v = Variant::SuperLog;
    else throw DomainError("explicit form needs a poly-log or super-log weight");
    if (w.mu_override()) throw DomainError("explicit form assumes the canonical mu");
    QuotientSpec s{n, p, q, std::move(w), v};
    s.validate();
    return s;
}

QuotientSpec QuotientSpec::classic_ckn(int n, double p, double q, double gamma, double eta) {
    QuotientSpec s{n, p, q, WeightSpec::polylog(1, 0.0, 10.0, eta), Variant::ClassicCkn, gamma};
    s.validate();
    return s;
}

QuotientSpec QuotientSpec::critical_ckn(int n, double p, double q, double R, double eta) {
    if (!(R > 1.0)) throw DomainError("critical CKN: R must exceed 1");
    QuotientSpec s{n, p, q, WeightSpec::polylog(1, 0.0, R, eta), Variant::CriticalCkn, 0.0, R};
    s.validate();
    return s;
}

QuotientSpec QuotientSpec::hardy_remainder(int n, double p, WeightSpec w) {
    QuotientSpec s{n, p, p, std::move(w), Variant::HardyRemainder};
    s.validate();
    return s;
}

double QuotientSpec::omega() const { return unit_sphere_measure(n); }

void QuotientSpec::validate() const {
    if (!admissible_exponents(n, p, q)) {
        throw DomainError("inadmissible exponents: need n >= 1, 1 < p <= q, 1/p - 1/q <= 1/n");
    }
    if (variant == Variant::ClassicCkn && gamma == 0.0) throw DomainError("classic CKN needs gamma != 0");
    if (variant == Variant::HardyRemainder) {
        if (p != q) throw DomainError("hardy_remainder requires p = q");
        if (!weight.is_superlog() || weight.alpha() != 1.0) {
            throw DomainError("hardy_remainder requires a super-log weight with alpha = 1");
        }
    }
    if (variant == Variant::PolyLog && !weight.is_polylog()) throw DomainError("variant/weight mismatch");
    if (variant == Variant::SuperLog && !weight.is_superlog()) throw DomainError("variant/weight mismatch");
}

double energy_weight(const QuotientSpec& spec, double t) {
    switch (spec.variant) {
    case Variant::ClassicCkn: return std::pow(t, spec.p * (1.0 + spec.gamma) - 1.0);
    case Variant::CriticalCkn: return std::pow(t, spec.p - 1.0);
    default: return std::pow(spec.weight(t), spec.p - 1.0);
    }
}

double norm_density(const QuotientSpec& spec, double t) {
    const double C = spec.norm_exponent();
    switch (spec.variant) {
    case Variant::ClassicCkn: return std::pow(t, spec.gamma * spec.q - 1.0);
    case Variant::CriticalCkn: return 1.0 / (t * std::pow(std::log(spec.R * spec.eta() / t), C));
    case Variant::General:
    case Variant::HardyRemainder: return 1.0 / (spec.weight(t) * std::pow(f_eta(spec.weight, t), C));
    case Variant::PolyLog: {
        const auto& f = std::get<PolyLogFamily>(spec.weight.family());
        const double x = f.R * spec.eta() / t;
        const double D = f.alpha == 1.0 ? std::pow(poly_log(f.k + 1, x), C)
                                        : std::pow(poly_log(f.k, x), (1.0 - f.alpha) * C);
        return 1.0 / (spec.weight(t) * D);
    }
    case Variant::SuperLog: {
        const auto& f = std::get<SuperLogFamily>(spec.weight.family());
        const auto chain = spec.weight.superlog_eval().a1_chain(f.k + 1, spec.eta() / t);
        const double D = f.alpha == 1.0 ? std::pow(chain.back(), C)
                                        : std::pow(chain[static_cast<std::size_t>(f.k)], (1.0 - f.alpha) * C);
        return 1.0 / (spec.weight(t) * D);
    }
    }
    return kNaN;
}

double energy(const QuotientSpec& spec, const RadialProfile& u, double* err) {
    check_support(spec, u);
    const auto segs = segments(u);
    const auto vals = u.values();
    double total = 0.0;
    double total_err = 0.0;
    for (std::size_t i = 0; i < segs.size(); ++i) {
        const double du = std::abs(vals[i + 1] - vals[i]);
        if (du == 0.0) continue;
        const auto [a, b] = segs[i];
        const quad::Result r =
            quad::integrate_pieces_log([&](double t) { return energy_weight(spec, t); }, {segs[i]}, 1e-13);
        // |slope|^p I in logs: segments near the origin can be shorter than 1e-300.
        const double lf = spec.p * (std::log(du) - std::log(b - a));
        total += std::exp(lf + std::log(r.value));
        total_err += std::exp(lf + std::log(std::max(r.error, 1e-300)));
    }
    const double omega = spec.omega();
    if (err) *err = omega * total_err;
    return omega * total;
}

double norm_term(const QuotientSpec& spec, const RadialProfile& u, double* err) {
    check_support(spec, u);
    const double omega = spec.omega();
    const double u0 = std::abs(u.values()[0]);
    double head = 0.0;
    if (u0 != 0.0) head = std::pow(u0, spec.q) * head_integral(spec, u.radii()[0]);
    const quad::Result body = quad::integrate_pieces_log(
        [&](double t) {
            const double v = std::abs(u(t));
            return v == 0.0 ? 0.0 : std::pow(v, spec.q) * norm_density(spec, t);
        },
        abs_pieces(u));
    if (err) *err = omega * body.error;
    return omega * (head + body.value);
}

double norm_term_s(const QuotientSpec& spec, const RadialProfile& u) {
    check_support(spec, u);
    if (!weight_based(spec.variant) && spec.variant != Variant::CriticalCkn) {
        throw DomainError("norm_term_s: no potential variable for this variant");
    }
    const WeightSpec w = potential_weight(spec);
    const bool P = classify(w) == WeightClass::P;
    const double C = spec.norm_exponent();
    double scale = 1.0;
    if ((spec.variant == Variant::PolyLog || spec.variant == Variant::SuperLog) && w.alpha() != 1.0) {
        scale = std::pow(std::abs(1.0 - w.alpha()), -C);
    }
    auto t_of_s = [&](double s) { return rho_map(w, P ? 1.0 / s : s); };
    double total = 0.0;
    const double u0 = std::abs(u.values()[0]);
    if (u0 != 0.0) total += std::pow(u0, spec.q) * head_integral(spec, u.radii()[0]) / scale;
    // pieces where |u| is tiny would otherwise chase roundoff
    double umax = 0.0;
    for (double v : u.values()) umax = std::max(umax, std::abs(v));
    const double abs_floor = 1e-14 * std::pow(umax, spec.q);
    for (const auto& [a, b] : abs_pieces(u)) {
        const double sa = f_eta(w, a);
        const double sb = f_eta(w, b);
        const double lo = std::min(sa, sb);
        const double hi = std::max(sa, sb);
        if (!(hi > lo)) continue;
        total += quad::integrate_log(
                     [&](double s) {
                         const double t = std::clamp(t_of_s(s), a, b);
                         const double v = std::abs(u(t));
                         return v == 0.0 ? 0.0 : std::pow(v, spec.q) * std::pow(s, -C);
                     },
                     lo, hi, {abs_floor * (hi - lo) * std::max(std::pow(lo, -C), std::pow(hi, -C)), 1e-12, 4000})
                     .value;
    }
    return spec.omega() * scale * total;
}

QuotientValue quotient(const QuotientSpec& spec, const RadialProfile& u) {
    QuotientValue out;
    double e_err = 0.0, n_err = 0.0;
    out.numerator = energy(spec, u, &e_err);
    out.denominator = norm_term(spec, u, &n_err);
    if (!std::isfinite(out.numerator) || !std::isfinite(out.denominator)) {
        throw OverflowError("quotient: weight or potential left the double range on the support");
    }
    if (!(out.denominator > 0.0)) throw DomainError("quotient: zero denominator");
    const double r = spec.p / spec.q;
    out.quotient = out.numerator / std::pow(out.denominator, r);
    // First-order propagation of the two quadrature errors.
    out.quadrature_error =
        std::abs(out.quotient) * (e_err / std::max(out.numerator, 1e-300) + r * n_err / out.denominator);
    return out;
}

double explicit_factor(const QuotientSpec& spec) {
    if (spec.variant != Variant::PolyLog && spec.variant != Variant::SuperLog) return 1.0;
    const double alpha = spec.weight.alpha();
    if (alpha == 1.0) return 1.0;
    return std::pow(std::abs(alpha - 1.0), spec.p - 1.0 + spec.p / spec.q);
}

double hardy_constant(const QuotientSpec& spec) {
    if (spec.p != spec.q || spec.variant == Variant::ClassicCkn) return kNaN;
    return std::pow(1.0 / spec.p_conj(), spec.p) * explicit_factor(spec);
}

RemainderSides remainder_sides(const QuotientSpec& spec, const RadialProfile& u) {
    if (spec.variant != Variant::HardyRemainder) throw DomainError("remainder_sides: variant mismatch");
    check_support(spec, u);
    RemainderSides out;
    if (u.max_abs() == 0.0) return out;
    const double p = spec.p;
    const WeightSpec& w = spec.weight;
    out.lhs = energy(spec, u);
    const double omega = spec.omega();
    const double u0 = std::abs(u.values()[0]);
    const auto pieces = abs_pieces(u);
    auto body = [&](bool with_G) {
        return quad::integrate_pieces_log(
                   [&](double t) {
                       const double v = std::abs(u(t));
                       if (v == 0.0) return 0.0;
                       double d = w(t) * std::pow(f_eta(w, t), p);
                       if (with_G) {
                           const double G = G_eta(w, t);
                           d *= G * G;
                       }
                       return std::pow(v, p) / d;
                   },
                   pieces)
            .value;
    };
    double main_head = 0.0, rem_head = 0.0;
    if (u0 != 0.0) {
        // int_0^{r0} dt/(w f^p) = s0^{1-p}/(p-1); the G-weighted head by quadrature in s.
        const double r0 = u.radii()[0];
        const double s0 = f_eta(w, r0);
        const double mu = mu_of(w);
        main_head = std::pow(u0, p) * std::pow(s0, 1.0 - p) / (p - 1.0);
        auto g = [&](double s) {
            const double G = mu - std::log(mu) + std::log(s);
            return std::pow(s, -p) / (G * G);
        };
        // Substitute s = s0 e^x over x in [0, inf).
        const double tail = quad::integrate(
                                [&](double x) {
                                    const double s = s0 * std::exp(x);
                                    return g(s) * s;
                                },
                                0.0, 700.0, {1e-300, 1e-12, 4000})
                                .value;
        rem_head = std::pow(u0, p) * tail;
    }
    out.main = std::pow(1.0 / spec.p_conj(), p) * omega * (main_head + body(false));
    out.rem = omega * (rem_head + body(true));
    return out;
}

} // namespace slhardy
