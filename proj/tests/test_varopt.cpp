#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "slhardy/errors.hpp"
#include "slhardy/varopt.hpp"

using namespace slhardy;

namespace {

// Energy and norm of a chain by the defining integrals, with a fixed rule.
std::pair<double, double> chain_integrals(const PotentialProblem& prob, const std::vector<double>& v) {
    const auto& s = prob.chain();
    const double r = prob.q() * (prob.p() - 1.0) / prob.p();
    double E = 0.0, N = 0.0;
    for (std::size_t k = 0; k + 1 < s.size(); ++k) {
        const double sa = s[k], sb = s[k + 1];
        E += std::pow(std::abs(v[k + 1] - v[k]), prob.p()) / std::pow(std::abs(sb - sa), prob.p() - 1.0);
        auto f = [&](double x) {
            const double val = v[k] + (x - sa) / (sb - sa) * (v[k + 1] - v[k]);
            return std::pow(std::abs(val), prob.q()) * std::pow(x, -1.0 - r);
        };
        N += oracle::gl5(f, std::min(sa, sb), std::max(sa, sb), 200);
    }
    if (prob.weight_class() == WeightClass::P) {
        const double tail = std::pow(std::abs(v[prob.origin_index()]), prob.q()) * std::pow(s[prob.origin_index()], -r) / r;
        N += prob.two_sided() ? 2.0 * tail : tail;
    }
    return {prob.omega() * E, prob.omega() * N};
}

OptimizerOptions quick() {
    OptimizerOptions o;
    o.nodes = 64;
    o.log_range = 30.0;
    o.max_sweeps = 60;
    return o;
}

}  // namespace

TEST_SUITE("varopt") {

TEST_CASE("discrete functional matches the defining integrals") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    for (bool two : {false, true}) {
        for (auto cls : {WeightClass::P, WeightClass::Q}) {
            const PotentialProblem prob(2.0, 3.0, 2.0, cls, 16, 8.0, 0.5, two);
            std::vector<double> v(prob.nodes());
            for (auto& x : v) x = U(rng);
            prob.pin(v);
            const auto [E, N] = prob.evaluate(v);
            const auto [Eo, No] = chain_integrals(prob, v);
            CHECK(E == doctest::Approx(Eo).epsilon(1e-13));
            CHECK(N == doctest::Approx(No).epsilon(1e-9));
        }
    }
}

TEST_CASE("pinning") {
    const PotentialProblem p1(2.0, 2.0, 1.0, WeightClass::P, 10, 5.0);
    CHECK(p1.pinned(0));
    CHECK_FALSE(p1.pinned(9));
    const PotentialProblem q1(2.0, 2.0, 1.0, WeightClass::Q, 10, 5.0);
    CHECK(q1.pinned(9));
    const PotentialProblem p2(2.0, 2.0, 1.0, WeightClass::P, 10, 5.0, 1.0, true);
    CHECK(p2.nodes() == 19);
    CHECK(p2.pinned(18));
    CHECK_FALSE(p2.pinned(9));
    CHECK_FALSE(p2.monotone_allowed());
    CHECK_THROWS_AS(PotentialProblem(1.0, 2.0, 1.0, WeightClass::P, 10, 5.0), DomainError);
}

TEST_CASE("monotone projection never increases the quotient") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    for (double p : {1.5, 2.0, 3.0}) {
        for (double q : {p, p + 1.0}) {
            const PotentialProblem prob(p, q, 2.0, WeightClass::P, 32, 12.0);
            for (int trial = 0; trial < 50; ++trial) {
                std::vector<double> v(prob.nodes());
                for (auto& x : v) x = U(rng);
                prob.pin(v);
                const double before = prob.quotient(v);
                prob.project_monotone(v);
                const double after = prob.quotient(v);
                CHECK(after <= before * (1.0 + 1e-12));
                for (std::size_t i = 1; i < v.size(); ++i) CHECK(v[i] >= v[i - 1]);
            }
        }
    }
}

TEST_CASE("discrete quotients respect the Hardy bound") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    const PotentialProblem prob(2.0, 2.0, 2.0, WeightClass::P, 40, 20.0);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> v(prob.nodes());
        for (auto& x : v) x = U(rng);
        prob.pin(v);
        CHECK(prob.quotient(v) >= 0.25 - 1e-3);
    }
}

TEST_CASE("best constant for p = q = 2 approaches 1/4 from above") {
    const auto spec = QuotientSpec::general(1, 2.0, 2.0, WeightSpec::polylog(1, 0.0, 10.0));
    const auto est = minimize_quotient(spec);
    CHECK(est.value >= 0.25 - 1e-3);
    CHECK(est.value <= 0.25 * 1.02);
    CHECK(est.lower_reference == doctest::Approx(0.25));
    CHECK(est.monotone_projection);
    CHECK(est.minimizer.non_increasing());
    for (std::size_t i = 1; i < est.trace.size(); ++i) CHECK(est.trace[i] <= est.trace[i - 1]);
}

TEST_CASE("best constant for p = q = 3 approaches 8/27") {
    const auto spec = QuotientSpec::general(1, 3.0, 3.0, WeightSpec::polylog(1, 0.0, 10.0));
    const auto est = minimize_quotient(spec);
    const double c = 8.0 / 27.0;
    CHECK(est.value >= c - 1e-3);
    CHECK(est.value <= c * 1.02);
}

TEST_CASE("super-log weight with alpha = 1 has the same constant") {
    const auto spec = QuotientSpec::general(2, 2.0, 2.0, WeightSpec::superlog(0, 1.0, 2.0));
    const auto est = minimize_quotient(spec);
    CHECK(est.value >= 0.25 - 1e-3);
    CHECK(est.value <= 0.25 * 1.02);
}

TEST_CASE("explicit forms scale by the explicit factor") {
    const auto w = WeightSpec::polylog(1, -1.0, 10.0);
    const auto g = minimize_quotient(QuotientSpec::general(1, 2.0, 2.0, w), quick());
    const auto e = minimize_quotient(QuotientSpec::explicit_form(1, 2.0, 2.0, w), quick());
    CHECK(e.value == doctest::Approx(4.0 * g.value).epsilon(1e-12));
    CHECK(e.lower_reference == doctest::Approx(1.0));
}

TEST_CASE("determinism per seed") {
    const auto spec = QuotientSpec::general(1, 2.0, 3.0, WeightSpec::polylog(1, 0.0, 10.0));
    const auto a = minimize_quotient(spec, quick());
    const auto b = minimize_quotient(spec, quick());
    CHECK(a.trace == b.trace);
    CHECK(a.value == b.value);
    CHECK(std::isnan(a.lower_reference));
}

TEST_CASE("budget exhaustion is flagged") {
    auto o = quick();
    o.max_sweeps = 2;
    const auto est = minimize_quotient(QuotientSpec::general(1, 2.0, 2.0, WeightSpec::polylog(1, 0.0, 10.0)), o);
    CHECK_FALSE(est.converged);
    CHECK(est.value > 0.25);
}

TEST_CASE("projection can be disabled") {
    auto o = quick();
    o.monotone = false;
    const auto est = minimize_quotient(QuotientSpec::general(1, 2.0, 2.0, WeightSpec::polylog(1, 0.0, 10.0)), o);
    CHECK_FALSE(est.monotone_projection);
    CHECK(est.value >= 0.25 - 1e-3);
}

TEST_CASE("Q-class problems are solved without projection") {
    const auto spec = QuotientSpec::general(1, 2.0, 2.0, WeightSpec::polylog(1, 2.0, 10.0));
    const auto est = minimize_quotient(spec, quick());
    CHECK_FALSE(est.monotone_projection);
    CHECK(est.value >= 0.25 - 1e-3);
}

TEST_CASE("starting from a profile in t") {
    const auto w = WeightSpec::polylog(1, 0.0, 10.0);
    const auto spec = QuotientSpec::general(1, 2.0, 2.0, w);
    const RadialProfile init({0.01, 0.1, 0.5}, {1.0, 0.5, 0.0});
    const auto est = minimize_quotient(spec, init, quick());
    CHECK(est.value >= 0.25 - 1e-3);
    CHECK(est.value <= quotient(spec, init).quotient + 1e-9);
}

TEST_CASE("near-extremal family") {
    const auto spec = QuotientSpec::general(1, 2.0, 2.0, WeightSpec::polylog(1, 0.0, 10.0));
    for (double delta : {0.3, 0.4, 0.49}) {
        const auto u = near_extremal(spec, delta, 1e-8, 1e-3);
        CHECK(u.values().front() == 0.0);
        CHECK(u.values().back() == 0.0);
        CHECK(u.radii().front() == doctest::Approx(1e-8));
        const double qa = quotient(spec, u).quotient;
        const double qb = quotient(spec, near_extremal(spec, delta, 1e-100, 1e-3)).quotient;
        CHECK(qa >= std::max(delta * delta, 0.25) - 1e-3);
        CHECK(qb < qa);
    }
    // moving delta toward 1/p' with a very wide cutoff lowers the quotient
    const double far = quotient(spec, near_extremal(spec, 0.3, 1e-300, 1e-3)).quotient;
    const double near = quotient(spec, near_extremal(spec, 0.49, 1e-300, 1e-3)).quotient;
    CHECK(near < far);
    // a fast-decaying weight stretches the potential range enough to get close
    const auto steep = QuotientSpec::general(1, 2.0, 2.0, WeightSpec::polylog(1, -10.0, 10.0));
    CHECK(quotient(steep, near_extremal(steep, 0.49, 1e-100, 1e-3)).quotient < 0.25 * 1.05);
    CHECK_THROWS_AS(near_extremal(spec, 0.5, 1e-8, 1e-3), DomainError);
    CHECK_THROWS_AS(near_extremal(spec, 0.0, 1e-8, 1e-3), DomainError);
    CHECK_THROWS_AS(near_extremal(spec, 0.4, 0.0, 1e-3), DomainError);
    const auto qspec = QuotientSpec::general(1, 2.0, 2.0, WeightSpec::polylog(1, 2.0, 10.0));
    CHECK_THROWS_AS(near_extremal(qspec, 0.4, 1e-8, 1e-3), ClassError);
}

TEST_CASE("constant relations") {
    const auto same = constant_relations(1, 2.0, 2.0, 0.26, 0.26);
    CHECK(same.factor == 1.0);
    CHECK(same.consistent);
    CHECK(same.gamma == 0.0);
    CHECK_FALSE(same.gamma_condition);
    CHECK_THROWS_AS(constant_relations(1, 2.0, 4.0, 0.8, std::nullopt), DomainError);
    const auto rep = constant_relations(3, 2.0, 2.0, std::nullopt, std::nullopt, 0.05, WeightSpec::superlog(0, 1.0, 3.0));
    CHECK(rep.gamma == doctest::Approx(1.0));
    CHECK(rep.inv_p_conj == doctest::Approx(0.5));
    CHECK(rep.gamma_condition);
    CHECK(rep.lemma_sufficiency);
    REQUIRE(rep.c0);
    CHECK(*rep.c0 == doctest::Approx(9.0));
    CHECK(rep.equal_constants_applicable);
}

TEST_CASE("even and unconstrained one-dimensional constants at (2, 4)") {
    const auto spec = QuotientSpec::general(1, 2.0, 4.0, WeightSpec::polylog(1, 0.0, 10.0));
    const auto rad = minimize_quotient(spec);
    const auto full = minimize_unconstrained_1d(spec);
    const auto rep = constant_relations(1, 2.0, 4.0, full.value, rad.value);
    CHECK(rep.factor == doctest::Approx(std::sqrt(0.5)));
    CHECK(rep.relative_gap <= 0.05);
    CHECK(rep.consistent);
}

}
