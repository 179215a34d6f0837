#include "slhardy/varopt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <stdexcept>

#include "slhardy/errors.hpp"
#include "slhardy/quadrature.hpp"
#include "slhardy/rearrangement.hpp"

namespace slhardy {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

inline double abs_pow(double x, double e) {
    x = std::abs(x);
    if (e == 2.0) return x * x;
    if (e == 3.0) return x * x * x;
    if (e == 4.0) {
        const double y = x * x;
        return y * y;
    }
    return std::pow(x, e);
}

} // namespace

PotentialProblem::PotentialProblem(double p, double q, double omega, WeightClass cls, int nodes,
                                   double log_range, double s0, bool two_sided)
    : p_(p), q_(q), omega_(omega), cls_(cls), two_sided_(two_sided) {
    if (!(p > 1.0) || !(q >= p)) throw DomainError("PotentialProblem: need 1 < p <= q");
    if (nodes < 8) throw DomainError("PotentialProblem: need at least 8 nodes");
    if (!(log_range > 0.0) || !(s0 > 0.0)) throw DomainError("PotentialProblem: bad grid");
    s_.resize(static_cast<std::size_t>(nodes));
    const double h = log_range / (nodes - 1);
    for (int i = 0; i < nodes; ++i) s_[static_cast<std::size_t>(i)] = s0 * std::exp(h * i);
    chain_ = s_;
    if (two_sided) {
        for (int i = nodes - 2; i >= 0; --i) chain_.push_back(s_[static_cast<std::size_t>(i)]);
    }
    const double r = q / (p / (p - 1.0));  // q/p'
    const quad::GaussRule gl = quad::gauss_legendre(10);
    const std::size_t segs = chain_.size() - 1;
    ds_pow_.resize(segs);
    lam_.resize(segs);
    wts_.resize(segs);
    for (std::size_t k = 0; k < segs; ++k) {
        const double sa = chain_[k], sb = chain_[k + 1];
        ds_pow_[k] = std::pow(std::abs(sb - sa), 1.0 - p);
        const double xa = std::log(std::min(sa, sb)), xb = std::log(std::max(sa, sb));
        for (int j = 0; j < 10; ++j) {
            const double x = 0.5 * (xa + xb) + 0.5 * (xb - xa) * gl.nodes[j];
            const double s = std::exp(x);
            lam_[k][static_cast<std::size_t>(j)] = (s - sa) / (sb - sa);
            wts_[k][static_cast<std::size_t>(j)] = 0.5 * (xb - xa) * gl.weights[j] * std::pow(s, -r);
        }
    }
}

double PotentialProblem::segment_energy(std::size_t k, double va, double vb) const {
    return abs_pow(vb - va, p_) * ds_pow_[k];
}

double PotentialProblem::segment_norm(std::size_t k, double va, double vb) const {
    if ((va < 0.0 && vb > 0.0) || (va > 0.0 && vb < 0.0)) {
        // |v|^q has a kink at the zero crossing; integrate the two sides separately
        const double sa = chain_[k], sb = chain_[k + 1];
        const double sz = sa + (sb - sa) * va / (va - vb);
        const double r = q_ / (p_ / (p_ - 1.0));
        const quad::GaussRule gl = quad::gauss_legendre(10);
        double sum = 0.0;
        for (auto [lo, hi] : {std::pair{sa, sz}, std::pair{sz, sb}}) {
            const double xa = std::log(std::min(lo, hi)), xb = std::log(std::max(lo, hi));
            for (int j = 0; j < 10; ++j) {
                const double s = std::exp(0.5 * (xa + xb) + 0.5 * (xb - xa) * gl.nodes[j]);
                const double v = va + (s - sa) / (sb - sa) * (vb - va);
                sum += 0.5 * (xb - xa) * gl.weights[j] * std::pow(s, -r) * abs_pow(v, q_);
            }
        }
        return sum;
    }
    double sum = 0.0;
    for (std::size_t j = 0; j < 10; ++j) sum += wts_[k][j] * abs_pow(va + lam_[k][j] * (vb - va), q_);
    return sum;
}

double PotentialProblem::tail_norm(double v_origin) const {
    if (cls_ == WeightClass::Q) return 0.0;
    const double r = q_ / (p_ / (p_ - 1.0));
    const double mult = two_sided_ ? 2.0 : 1.0;
    return mult * abs_pow(v_origin, q_) * std::pow(s_.back(), -r) / r;
}

std::pair<double, double> PotentialProblem::evaluate(const std::vector<double>& v) const {
    if (v.size() != chain_.size()) throw DomainError("PotentialProblem: size mismatch");
    double E = 0.0, N = 0.0;
    for (std::size_t k = 0; k + 1 < chain_.size(); ++k) {
        E += segment_energy(k, v[k], v[k + 1]);
        N += segment_norm(k, v[k], v[k + 1]);
    }
    N += tail_norm(v[origin_index()]);
    return {omega_ * E, omega_ * N};
}

double PotentialProblem::quotient(const std::vector<double>& v) const {
    const auto [E, N] = evaluate(v);
    if (!(N > 0.0)) throw DomainError("PotentialProblem: zero denominator");
    return E / std::pow(N, p_ / q_);
}

bool PotentialProblem::pinned(std::size_t i) const {
    if (i == 0 || (two_sided_ && i + 1 == chain_.size())) return true;
    if (cls_ == WeightClass::Q) {
        if (!two_sided_ && i + 1 == chain_.size()) return true;
        if (i == origin_index()) return true;
    }
    return false;
}

void PotentialProblem::pin(std::vector<double>& v) const {
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (pinned(i)) v[i] = 0.0;
    }
}

void PotentialProblem::project_monotone(std::vector<double>& v) const {
    if (!monotone_allowed()) return;
    const std::size_t o = origin_index();
    double m = 0.0;
    for (std::size_t i = 0; i <= o; ++i) v[i] = m = std::max(m, std::abs(v[i]));
}

std::vector<double> PotentialProblem::initial_guess() const {
    const double pc = p_ / (p_ - 1.0);
    const double L = std::log(s_.back() / s_.front());
    std::vector<double> v(chain_.size());
    const std::size_t o = origin_index();
    for (std::size_t i = 0; i < chain_.size(); ++i) {
        const double x = std::log(chain_[i] / s_.front()) / L;  // 0 at t = eta, 1 at the origin
        double shape = cls_ == WeightClass::P ? std::sin(0.5 * std::numbers::pi * x) : std::sin(std::numbers::pi * x);
        if (two_sided_ && i > o) shape = std::pow(shape, 3.0);  // break the symmetry
        v[i] = std::pow(chain_[i], 1.0 / pc) * shape;
    }
    pin(v);
    return v;
}

RadialProfile PotentialProblem::to_rho_profile(const std::vector<double>& v, int side) const {
    const std::size_t n = s_.size();
    std::vector<double> half(n);
    for (std::size_t i = 0; i < n; ++i) half[i] = side == 0 ? v[i] : v[v.size() - 1 - i];
    if (cls_ == WeightClass::Q) return RadialProfile(s_, half);
    std::vector<double> rho(n), val(n);
    for (std::size_t j = 0; j < n; ++j) {
        rho[j] = 1.0 / s_[n - 1 - j];
        val[j] = half[n - 1 - j];
    }
    return RadialProfile(std::move(rho), std::move(val));
}

BestConstantEstimate minimize_potential(const PotentialProblem& prob, std::vector<double> v,
                                        const OptimizerOptions& opt) {
    const std::size_t M = static_cast<std::size_t>(prob.nodes());
    if (v.size() != M) throw DomainError("minimize_potential: init size mismatch");
    prob.pin(v);
    const bool project = opt.monotone && prob.monotone_allowed();
    if (project) prob.project_monotone(v);

    BestConstantEstimate est;
    est.monotone_projection = project;
    const double p = prob.p(), q = prob.q(), pq = p / q;
    const double pc = p / (p - 1.0);
    const double omega = prob.omega();
    const std::size_t segs = M - 1;
    const std::size_t o = prob.origin_index();

    std::vector<double> scale(M);
    for (std::size_t i = 0; i < M; ++i) scale[i] = std::pow(prob.chain()[i], 1.0 / pc);

    std::vector<double> e(segs), nn(segs);
    double E = 0.0, N = 0.0, tail = 0.0;
    auto recompute = [&] {
        E = N = 0.0;
        for (std::size_t k = 0; k < segs; ++k) {
            e[k] = prob.segment_energy(k, v[k], v[k + 1]);
            nn[k] = prob.segment_norm(k, v[k], v[k + 1]);
            E += e[k];
            N += nn[k];
        }
        tail = prob.tail_norm(v[o]);
        N += tail;
        est.evaluations += 1;
    };
    auto normalize = [&] {
        const double c = std::pow(omega * N, -1.0 / q);
        for (double& x : v) x *= c;
        recompute();
    };
    auto Q = [&](double e_, double n_) { return omega * e_ / std::pow(omega * n_, pq); };

    recompute();
    if (!(N > 0.0)) throw DomainError("minimize_potential: initial profile is zero");
    normalize();
    double best = Q(E, N);

    int levels = 0;
    while ((2u << levels) < M) ++levels;
    std::vector<double> sigma(static_cast<std::size_t>(levels), 0.25);
    std::mt19937_64 rng(opt.seed);
    std::vector<double> trial;

    for (int sweep = 0; sweep < opt.max_sweeps; ++sweep) {
        double ymax = 0.0;
        for (std::size_t i = 0; i < M; ++i) ymax = std::max(ymax, std::abs(v[i]) / scale[i]);
        for (int lev = levels - 1; lev >= 0; --lev) {
            const std::size_t h = std::size_t{1} << lev;
            std::vector<std::size_t> centers;
            for (std::size_t c = h; c + 1 < M + h; c += h) {
                if (c < M) centers.push_back(c);
            }
            std::shuffle(centers.begin(), centers.end(), rng);
            bool any = false;
            double& sg = sigma[static_cast<std::size_t>(lev)];
            for (std::size_t c : centers) {
                const std::size_t lo = c >= h ? c - h : 0;
                const std::size_t hi = std::min(c + h, M - 1);
                for (double sign : {1.0, -1.0}) {
                    trial.assign(v.begin() + static_cast<long>(lo), v.begin() + static_cast<long>(hi) + 1);
                    bool moved = false;
                    for (std::size_t i = lo; i <= hi; ++i) {
                        if (prob.pinned(i)) continue;
                        const double hat = 1.0 - std::abs(static_cast<double>(i) - static_cast<double>(c)) / h;
                        if (hat <= 0.0) continue;
                        trial[i - lo] += sign * sg * ymax * hat * scale[i];
                        moved = true;
                    }
                    if (!moved) break;
                    double dE = 0.0, dN = 0.0;
                    for (std::size_t k = lo; k < hi; ++k) {
                        dE += prob.segment_energy(k, trial[k - lo], trial[k + 1 - lo]) - e[k];
                        dN += prob.segment_norm(k, trial[k - lo], trial[k + 1 - lo]) - nn[k];
                    }
                    if (o >= lo && o <= hi) dN += prob.tail_norm(trial[o - lo]) - tail;
                    ++est.evaluations;
                    const double qt = Q(E + dE, N + dN);
                    if (qt < best * (1.0 - 1e-15)) {
                        std::copy(trial.begin(), trial.end(), v.begin() + static_cast<long>(lo));
                        recompute();
                        if (project) {
                            const double before = Q(E, N);
                            prob.project_monotone(v);
                            recompute();
                            if (Q(E, N) > before * (1.0 + 1e-12)) {
                                throw std::logic_error("monotone projection increased the quotient");
                            }
                        }
                        normalize();
                        best = Q(E, N);
                        any = true;
                        break;
                    }
                }
                if (est.evaluations >= opt.max_evaluations) break;
            }
            sg = any ? std::min(sg * 1.5, 0.5) : sg * 0.5;
            if (est.evaluations >= opt.max_evaluations) break;
        }
        est.trace.push_back(best);
        if (*std::max_element(sigma.begin(), sigma.end()) < opt.step_tol) {
            est.converged = true;
            break;
        }
        if (est.evaluations >= opt.max_evaluations) break;
    }
    est.value = best;
    est.minimizer = prob.to_rho_profile(v);
    est.method = std::string("pattern search, ") + std::to_string(M) + " nodes in log f_eta" +
                 (project ? ", monotone projection" : "");
    est.lower_reference = kNaN;
    return est;
}

namespace {

WeightSpec potential_weight_of(const QuotientSpec& spec) {
    switch (spec.variant) {
    case Variant::ClassicCkn: throw DomainError("optimizer: classic CKN quotient is not supported");
    case Variant::CriticalCkn: return WeightSpec::polylog(1, 0.0, spec.R, spec.eta());
    default: return spec.weight;
    }
}

PotentialProblem problem_for(const QuotientSpec& spec, const OptimizerOptions& opt, double omega, bool two_sided) {
    const WeightSpec w = potential_weight_of(spec);
    const WeightClass cls = classify(w);
    const double s0 = cls == WeightClass::P ? mu_of(w) : f_eta(w, w.eta()) * std::exp(-opt.log_range);
    return PotentialProblem(spec.p, spec.q, omega, cls, opt.nodes, opt.log_range, s0, two_sided);
}

void finish(BestConstantEstimate& est, const QuotientSpec& spec) {
    est.value *= explicit_factor(spec);
    est.lower_reference = hardy_constant(spec);
}

} // namespace

BestConstantEstimate minimize_quotient(const QuotientSpec& spec, const OptimizerOptions& opt) {
    spec.validate();
    const PotentialProblem prob = problem_for(spec, opt, spec.omega(), false);
    BestConstantEstimate est = minimize_potential(prob, prob.initial_guess(), opt);
    finish(est, spec);
    return est;
}

BestConstantEstimate minimize_quotient(const QuotientSpec& spec, const RadialProfile& init,
                                       const OptimizerOptions& opt) {
    spec.validate();
    const PotentialProblem prob = problem_for(spec, opt, spec.omega(), false);
    const WeightSpec w = potential_weight_of(spec);
    const bool P = prob.weight_class() == WeightClass::P;
    const double r0 = init.radii().front(), rN = init.radii().back();
    const double s_r0 = f_eta(w, std::min(r0, w.eta()));
    const double s_rN = f_eta(w, std::min(rN, w.eta()));
    std::vector<double> v(static_cast<std::size_t>(prob.nodes()));
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double s = prob.chain()[i];
        // Outside the sampled range u is u_0 (near the origin) or 0.
        if (P ? s >= s_r0 : s <= s_r0) v[i] = init.values().front();
        else if (P ? s <= s_rN : s >= s_rN) v[i] = 0.0;
        else v[i] = init(rho_map(w, P ? 1.0 / s : s));
    }
    BestConstantEstimate est = minimize_potential(prob, std::move(v), opt);
    finish(est, spec);
    return est;
}

BestConstantEstimate minimize_unconstrained_1d(const QuotientSpec& spec, const OptimizerOptions& opt) {
    spec.validate();
    if (spec.n != 1) throw DomainError("minimize_unconstrained_1d: n must be 1");
    const PotentialProblem prob = problem_for(spec, opt, 1.0, true);
    BestConstantEstimate est = minimize_potential(prob, prob.initial_guess(), opt);
    est.method += ", two-sided";
    finish(est, spec);
    // The p = q bound is unchanged; the symmetric relation does not apply here.
    return est;
}

RadialProfile near_extremal(const QuotientSpec& spec, double delta, double eps_in, double eps_out, int nodes) {
    spec.validate();
    if (spec.p != spec.q) throw DomainError("near_extremal: requires p = q");
    const WeightSpec w = potential_weight_of(spec);
    if (classify(w) != WeightClass::P) throw ClassError("near_extremal: requires a P-class weight");
    if (!(delta > 0.0 && delta < 1.0 / spec.p_conj())) throw DomainError("near_extremal: delta must lie in (0, 1/p')");
    if (!(eps_in > 0.0 && eps_in < 0.5) || !(eps_out > 0.0 && eps_out < 0.5)) {
        throw DomainError("near_extremal: cutoffs out of range");
    }
    if (nodes < 20) throw DomainError("near_extremal: too few nodes");
    const double eta = w.eta();
    const double t_in = eps_in * eta, t_out = (1.0 - eps_out) * eta;
    if (!(t_in < t_out)) throw DomainError("near_extremal: cutoffs overlap");
    // The cutoff is one sine arch in log f: it vanishes at t_in and t_out, and
    // its slope in log f is the smallest the support allows.
    const double l_in = std::log(f_eta(w, t_in)), l_out = std::log(f_eta(w, t_out));
    std::vector<double> r = log_grid(t_in, t_out, nodes);
    std::vector<double> v(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
        const double f = f_eta(w, r[i]);
        const double x = (std::log(f) - l_out) / (l_in - l_out);
        v[i] = std::pow(f, delta) * std::sin(std::numbers::pi * std::clamp(x, 0.0, 1.0));
    }
    v.front() = 0.0;
    v.back() = 0.0;
    return RadialProfile(std::move(r), std::move(v));
}

ConstantRelationsReport constant_relations(int n, double p, double q, std::optional<double> c1,
                                           std::optional<double> c1_rad, double tolerance,
                                           const std::optional<WeightSpec>& weight) {
    if (!admissible_exponents(n, p, q)) throw DomainError("constant_relations: inadmissible exponents");
    ConstantRelationsReport rep;
    rep.n = n;
    rep.p = p;
    rep.q = q;
    rep.factor = std::pow(2.0, p / q - 1.0);
    rep.c1 = c1;
    rep.c1_rad = c1_rad;
    if (n == 1) {
        if (!c1 || !c1_rad) throw DomainError("constant_relations: n = 1 needs both estimates");
        rep.ratio = *c1 / *c1_rad;
        rep.relative_gap = std::abs(rep.ratio / rep.factor - 1.0);
        rep.consistent = rep.relative_gap <= tolerance;
    } else {
        rep.consistent = true;
    }
    rep.gamma = gamma_pq(n, p, q);
    rep.inv_p_conj = 1.0 / conjugate(p);
    rep.lemma_sufficiency = lemma_sufficiency(n, p);
    rep.gamma_condition = rep.inv_p_conj <= rep.gamma;
    if (weight) {
        const NdcReport ndc = ndc_check(*weight, rho_grid(*weight, 400));
        rep.c0 = std::isfinite(ndc.analytic_bound) ? ndc.analytic_bound : ndc.grid_inf_H;
        rep.c0_ge_one = *rep.c0 >= 1.0;
        rep.equal_constants_applicable = rep.c0_ge_one && rep.gamma_condition;
    }
    return rep;
}

} // namespace slhardy
