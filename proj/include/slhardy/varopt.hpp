#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "slhardy/functionals.hpp"
#include "slhardy/profile.hpp"

namespace slhardy {

// The radial quotient written in the potential s = f_eta(t). With ds = -dt/w
// (P-class) or ds = dt/w (Q-class):
//   energy = omega int |dv/ds|^p ds,  norm = omega int |v|^q s^{-1-q/p'} ds,
// independent of the weight. v is piecewise linear in s on log-spaced nodes
// s_0 < ... < s_N, s_N / s_0 = e^L. P-class: v(s_0) = 0 (t = eta) and v is
// constant beyond s_N (a neighbourhood of the origin). Q-class: v vanishes at
// both ends.
//
// Two-sided mode (n = 1 without symmetry) chains a mirrored copy of the grid:
// nodes s_0..s_{N-1}..s_0, the shared middle node being the origin.
class PotentialProblem {
public:
    PotentialProblem(double p, double q, double omega, WeightClass cls, int nodes, double log_range,
                     double s0 = 1.0, bool two_sided = false);

    // Length of the node chain: N, or 2N - 1 when two-sided.
    int nodes() const { return static_cast<int>(chain_.size()); }
    int half_nodes() const { return static_cast<int>(s_.size()); }
    const std::vector<double>& s() const { return s_; }
    // s value of each chain node.
    const std::vector<double>& chain() const { return chain_; }
    WeightClass weight_class() const { return cls_; }
    bool two_sided() const { return two_sided_; }
    double p() const { return p_; }
    double q() const { return q_; }
    double omega() const { return omega_; }

    // (energy, norm) for node values v (size nodes()).
    std::pair<double, double> evaluate(const std::vector<double>& v) const;
    double quotient(const std::vector<double>& v) const;
    // Per-segment terms, used for cheap local updates. Segment k joins chain
    // nodes k and k+1; the tail term belongs to the origin node.
    double segment_energy(std::size_t k, double va, double vb) const;
    double segment_norm(std::size_t k, double va, double vb) const;
    double tail_norm(double v_origin) const;
    std::size_t origin_index() const { return s_.size() - 1; }

    bool pinned(std::size_t i) const;
    void pin(std::vector<double>& v) const;
    // Running maximum of |v| from the pinned end toward the origin: a
    // non-increasing radial profile in t. Never increases the quotient.
    // One-sided P-class problems only; the two-sided problem is not radial.
    void project_monotone(std::vector<double>& v) const;
    bool monotone_allowed() const { return cls_ == WeightClass::P && !two_sided_; }

    // s^{1/p'} sin(...) trial shape (asymmetric when two-sided).
    std::vector<double> initial_guess() const;

    // One side as a function of rho = 1/s (P-class): a RadialProfile on
    // (0, 1/s_0], constant near 0 and vanishing at 1/s_0. Q-class: rho = s.
    RadialProfile to_rho_profile(const std::vector<double>& v, int side = 0) const;

private:
    double p_, q_, omega_;
    WeightClass cls_;
    bool two_sided_;
    std::vector<double> s_;
    std::vector<double> chain_;
    std::vector<double> ds_pow_;  // |ds|^{1-p} per segment
    // Per segment: Gauss-Legendre positions as fractions from node k to k+1
    // (in s) and weights including s^{-q/p'} and the log-width.
    std::vector<std::array<double, 10>> lam_;
    std::vector<std::array<double, 10>> wts_;
};

struct OptimizerOptions {
    int nodes = 256;
    double log_range = 60.0;
    int max_sweeps = 600;
    long max_evaluations = 4'000'000;
    double step_tol = 1e-9;
    bool monotone = true;
    std::uint64_t seed = 1;
};

struct BestConstantEstimate {
    double value = 0.0;  // best quotient found: an upper bound on the infimum
    std::string method;
    RadialProfile minimizer;  // in rho = 1/f_eta (P) or f_eta (Q)
    std::vector<double> trace;  // best quotient after each sweep
    double lower_reference = 0.0;  // (1/p')^p times the explicit factor when p = q, else NaN
    bool converged = false;  // false: budget exhausted before the steps shrank
    bool monotone_projection = false;
    long evaluations = 0;
};

// Derivative-free pattern search over node values with multilevel hat
// directions. Deterministic for a fixed seed.
BestConstantEstimate minimize_potential(const PotentialProblem& prob, std::vector<double> init,
                                        const OptimizerOptions& opt);

// Best radial constant for the spec. The search runs in the potential
// variable; explicit-form variants are rescaled by explicit_factor.
BestConstantEstimate minimize_quotient(const QuotientSpec& spec, const OptimizerOptions& opt = {});
// Starts from a profile in t, resampled onto the potential grid.
BestConstantEstimate minimize_quotient(const QuotientSpec& spec, const RadialProfile& init,
                                       const OptimizerOptions& opt = {});

// n = 1 without symmetry: u on (-eta, eta) splits into two half-line profiles
// glued at the origin. Returns inf (E1 + E2) / (N1 + N2)^{p/q}.
BestConstantEstimate minimize_unconstrained_1d(const QuotientSpec& spec, const OptimizerOptions& opt = {});

// u = f_eta^delta times a cutoff supported on [eps_in eta, (1 - eps_out) eta]:
// one sine arch in log f_eta. Sampled on `nodes` log-spaced points in t.
RadialProfile near_extremal(const QuotientSpec& spec, double delta, double eps_in, double eps_out,
                            int nodes = 2000);

struct ConstantRelationsReport {
    int n = 1;
    double p = 2.0, q = 2.0;
    double factor = 1.0;  // 2^{p/q-1}
    std::optional<double> c1, c1_rad;
    double ratio = 0.0;  // c1 / c1_rad
    double relative_gap = 0.0;  // |ratio / factor - 1|
    bool consistent = false;
    double gamma = 0.0;
    double inv_p_conj = 0.0;
    bool lemma_sufficiency = false;
    bool gamma_condition = false;  // 1/p' <= gamma
    std::optional<double> c0;  // inf H of the supplied weight
    bool c0_ge_one = false;
    bool equal_constants_applicable = false;  // C0 >= 1 and 1/p' <= gamma
};

ConstantRelationsReport constant_relations(int n, double p, double q, std::optional<double> c1,
                                           std::optional<double> c1_rad, double tolerance = 0.05,
                                           const std::optional<WeightSpec>& weight = {});

} // namespace slhardy
