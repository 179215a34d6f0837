#pragma once

#include <string>

#include "slhardy/profile.hpp"
#include "slhardy/weights.hpp"

namespace slhardy {

enum class Variant {
    ClassicCkn,     // |x|^{p(1+gamma)-n} against |x|^{gamma q - n}
    CriticalCkn,    // |x|^{p-n} against |x|^{-n} log(R eta/|x|)^{-1-q/p'}
    General,        // w^{p-1}|x|^{1-n} against |x|^{1-n} / (w f_eta^{1+q/p'})
    PolyLog,        // explicit poly-log denominators
    SuperLog,       // explicit super-log denominators
    HardyRemainder  // p = q, super-log alpha = 1; see remainder_sides
};

std::string to_string(Variant v);
Variant variant_from_string(const std::string& s);

/// Exponents, weight and the flavour of the inequality. All radial; u is a
/// function of t = |x| on (0, eta].
struct QuotientSpec {
    int n = 1;
    double p = 2.0;
    double q = 2.0;
    WeightSpec weight = WeightSpec::polylog(1, 0.0, 10.0);
    Variant variant = Variant::General;
    double gamma = 0.0;  // ClassicCkn only
    double R = 10.0;     // CriticalCkn only

    static QuotientSpec general(int n, double p, double q, WeightSpec w);
    // PolyLog or SuperLog explicit form, picked from the weight family.
    static QuotientSpec explicit_form(int n, double p, double q, WeightSpec w);
    static QuotientSpec classic_ckn(int n, double p, double q, double gamma, double eta = 1.0);
    static QuotientSpec critical_ckn(int n, double p, double q, double R, double eta = 1.0);
    static QuotientSpec hardy_remainder(int n, double p, WeightSpec w);

    double eta() const { return weight.eta(); }
    double p_conj() const { return p / (p - 1.0); }
    // 1 + q/p'
    double norm_exponent() const { return 1.0 + q / p_conj(); }
    double omega() const;
    void validate() const;
};

struct QuotientValue {
    double numerator = 0.0;
    double denominator = 0.0;  // the q-integral before the p/q power
    double quotient = 0.0;
    double quadrature_error = 0.0;
};

// omega * int |u'|^p W(t) dt, W = w^{p-1} (or the CKN power).
double energy(const QuotientSpec& spec, const RadialProfile& u, double* err = nullptr);
// omega * int |u|^q D(t) dt with the variant's density D.
double norm_term(const QuotientSpec& spec, const RadialProfile& u, double* err = nullptr);
// Same integral taken in s = f_eta(t), where D dt becomes (a constant times)
// s^{-1-q/p'} ds. Weight-based variants only.
double norm_term_s(const QuotientSpec& spec, const RadialProfile& u);
QuotientValue quotient(const QuotientSpec& spec, const RadialProfile& u);

// Density D(t) multiplying |u|^q in norm_term, and the energy weight W(t).
double norm_density(const QuotientSpec& spec, double t);
double energy_weight(const QuotientSpec& spec, double t);

// Factor by which an explicit-form constant exceeds the general one:
// |alpha - 1|^{p-1+p/q} for alpha != 1, otherwise 1.
double explicit_factor(const QuotientSpec& spec);

// Proven lower bound for the radial quotient when p = q: (1/p')^p times the
// explicit factor. NaN when p < q or for ClassicCkn.
double hardy_constant(const QuotientSpec& spec);

struct RemainderSides {
    double lhs = 0.0;   // energy
    double main = 0.0;  // (1/p')^p int |u|^p / (w f^p), factor included
    double rem = 0.0;   // int |u|^p / (w f^p G^2)
};
RemainderSides remainder_sides(const QuotientSpec& spec, const RadialProfile& u);

} // namespace slhardy
