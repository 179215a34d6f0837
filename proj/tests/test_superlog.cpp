#include <doctest.h>

#include <cmath>
#include <numbers>
#include <thread>

#include "oracles.hpp"
#include "slhardy/errors.hpp"
#include "slhardy/superlog.hpp"

using namespace slhardy;

namespace {
SuperLog make(double a) {
    SuperLogParams p;
    p.a = a;
    return SuperLog(p);
}
}  // namespace

TEST_SUITE("superlog") {

TEST_CASE("poly_log and poly_exp") {
    const double e = std::numbers::e;
    CHECK(poly_log(0, 5.0) == 5.0);
    CHECK(poly_log(2, std::exp(e)) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(poly_log(3, poly_exp(3, 1.3)) == doctest::Approx(1.3).epsilon(1e-13));
    CHECK(poly_exp(0, 0.7) == 0.7);
    CHECK(poly_exp(2, 0.0) == doctest::Approx(e).epsilon(1e-15));
    CHECK(poly_exp(1, std::log(9.0)) == doctest::Approx(9.0).epsilon(1e-15));
    CHECK_THROWS_AS(poly_log(2, 0.5), DomainError);
    CHECK_THROWS_AS(poly_exp(3, 10.0), OverflowError);
}

TEST_CASE("params are validated") {
    SuperLogParams p;
    p.a = 1.0;
    CHECK_THROWS_AS(SuperLog{p}, DomainError);
    p.a = 2.0;
    p.product_tol = 0.0;
    CHECK_THROWS_AS(SuperLog{p}, DomainError);
    p.product_tol = 1e-13;
    p.max_tower_depth = 0;
    CHECK_THROWS_AS(SuperLog{p}, DomainError);
}

TEST_CASE("tower map") {
    const SuperLog sl = make(2.0);
    const double e = std::numbers::e;
    CHECK(sl.f_map(2.0) == 2.0);
    CHECK(sl.f_map(2.0 * e) == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(sl.f_iter(5, 2.0) == 2.0);
    CHECK(sl.f_iter(1, 2.0 * e) == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(sl.f_iter(2, 2.0 * e) == doctest::Approx(2.0 - std::log(2.0) + std::log(3.0)).epsilon(1e-15));
    CHECK(make(3.0).f_map(100.0) == doctest::Approx(3.0 - std::log(3.0) + std::log(100.0)).epsilon(1e-15));
    CHECK_THROWS_AS(sl.f_map(1.9), DomainError);
    CHECK_THROWS_AS(sl.f_iter(65, 3.0), DepthError);
    // non-increasing in k, bounded below by a
    double prev = 1e6;
    for (int k = 1; k < 20; ++k) {
        const double v = sl.f_iter(k, 1e6);
        CHECK(v <= prev);
        CHECK(v >= 2.0);
        prev = v;
    }
}

TEST_CASE("fixed points") {
    for (double a : {1.5, 2.0, 3.0, 5.0, 10.0}) {
        const SuperLog sl = make(a);
        CHECK(sl.f_tilde(a).value == doctest::Approx(a).epsilon(1e-15));
        CHECK(sl.phi(a) == a);
        CHECK(sl.super_log(1.0) == 0.0);
        CHECK(sl.v_form(a) == doctest::Approx(std::log(a)).epsilon(1e-15));
    }
}

TEST_CASE("product form against the integral form computed independently") {
    for (double a : {2.0, 3.0, 5.0}) {
        const SuperLog sl = make(a);
        const double bound = 2.0 * (sl.params().product_tol + sl.params().quad_tol);
        for (double u : {a * 1.001, 4.0, 17.0, 1e3, 1e6}) {
            if (u < a) continue;
            const TowerValue tv = sl.f_tilde(u);
            CHECK(tv.error_bound <= sl.params().product_tol);
            CHECK(std::abs(tv.value - std::exp(oracle::V(a, u))) / tv.value <= bound);
            CHECK(std::abs(tv.value - oracle::f_tilde(a, u)) / tv.value <= 1e-12);
        }
    }
}

TEST_CASE("phi matches direct quadrature of 1/Ftilde") {
    const SuperLog sl = make(2.0);
    for (double u : {3.0, 20.0, 500.0}) {
        const double ref = 2.0 + oracle::gl5_log([](double t) { return 1.0 / oracle::f_tilde(2.0, t); }, 2.0, u, 600);
        CHECK(sl.phi(u) == doctest::Approx(ref).epsilon(1e-11));
    }
    CHECK(sl.phi(6.0) < sl.phi(8.0));
    CHECK(sl.phi(20.0) > 2.0);
    CHECK(sl.phi(20.0) < 20.0);
}

TEST_CASE("super-log reflection, monotonicity and concavity across r = 1") {
    const SuperLog sl = make(2.0);
    CHECK(sl.super_log(0.5) == doctest::Approx(-sl.super_log(2.0)).epsilon(1e-15));
    CHECK_THROWS_AS(sl.super_log(0.0), DomainError);
    std::vector<double> rs;
    for (int i = 0; i <= 80; ++i) rs.push_back(std::pow(10.0, -2.0 + 0.05 * i));
    for (std::size_t i = 1; i + 1 < rs.size(); ++i) {
        const double l0 = sl.super_log(rs[i - 1]), l1 = sl.super_log(rs[i]), l2 = sl.super_log(rs[i + 1]);
        CHECK(l1 > l0);
        const double d1 = (l1 - l0) / (rs[i] - rs[i - 1]);
        const double d2 = (l2 - l1) / (rs[i + 1] - rs[i]);
        CHECK(d2 <= d1 + 1e-12);
    }
}

TEST_CASE("sandwich L(r) <= L(e^r) <= (1+a) L(r)") {
    const SuperLog sl = make(2.0);
    const double r = std::exp(2.0);
    const double lr = sl.super_log(r), le = sl.super_log(std::exp(r));
    CHECK(lr <= le);
    CHECK(le <= 3.0 * lr);
}

TEST_CASE("auxiliary families at r = 1") {
    for (double a : {2.0, 3.0}) {
        const SuperLog sl = make(a);
        CHECK(sl.a0(1, 1.0) == doctest::Approx(a).epsilon(1e-15));
        CHECK(sl.a0(3, 1.0) == doctest::Approx(a).epsilon(1e-15));
        CHECK(sl.a1(0, 1.0) == doctest::Approx(a).epsilon(1e-15));
        CHECK(sl.a1(2, 1.0) == doctest::Approx(a).epsilon(1e-15));
        CHECK(sl.b0(1.0).value == doctest::Approx(1.0).epsilon(1e-15));
    }
}

TEST_CASE("auxiliary families: definitions, growth and ordering") {
    const SuperLog sl = make(2.0);
    for (double r : {1.5, 10.0, 1e4}) {
        CHECK(sl.a0(2, r) == doctest::Approx(oracle::tower(2.0, 2, 2.0 * r)).epsilon(1e-14));
        CHECK(sl.a1(2, r) == doctest::Approx(oracle::tower(2.0, 2, sl.a1(0, r))).epsilon(1e-14));
        CHECK(sl.b0(r).value == doctest::Approx(oracle::f_tilde(2.0, 2.0 * r) / (2.0 * r)).epsilon(1e-12));
        CHECK(sl.b0(r).value >= 1.0);
        const auto chain = sl.a1_chain(3, r);
        REQUIRE(chain.size() == 4);
        for (int k = 0; k <= 3; ++k) CHECK(chain[k] == doctest::Approx(sl.a1(k, r)).epsilon(1e-14));
    }
    // A0_k(r) / log^k r decreases toward 1; A1_0 / A0_k decreases
    double prev_ratio = 1e300, prev_q = 1e300;
    for (int j = 0; j < 8; ++j) {
        const double r = std::pow(10.0, 10.0 * std::pow(2.0, j));
        if (!std::isfinite(r)) break;
        const double ratio = sl.a0(1, r) / std::log(r);
        const double q = sl.a1(0, r) / sl.a0(1, r);
        CHECK(ratio < prev_ratio);
        CHECK(ratio > 1.0);
        CHECK(q < prev_q);
        prev_ratio = ratio;
        prev_q = q;
    }
}

TEST_CASE("derivative identities against central differences") {
    const SuperLog sl = make(2.0);
    for (int k : {0, 1, 2}) {
        for (double r : {1.5, 2.0, 30.0}) {
            const double h = 1e-4 * r;
            const double fd = (sl.a1(k, r + h) - sl.a1(k, r - h)) / (2 * h);
            CHECK(sl.da1(k, r) == doctest::Approx(fd).epsilon(1e-7));
        }
        const double near = sl.da1(k, 1.0 + 1e-6);
        CHECK(near > 0.0);
        CHECK(near <= 1.0);
    }
    CHECK(sl.da1(0, 2.0) == doctest::Approx(1.0 / (2.0 * sl.b0(2.0).value)).epsilon(1e-13));
    for (double r : {1.1, 3.0, 100.0}) {
        const double h = 1e-4 * r;
        const double fd = (sl.b0(r + h).value - sl.b0(r - h).value) / (2 * h);
        CHECK(sl.db0(r) == doctest::Approx(fd).epsilon(1e-6));
        CHECK(sl.db0(r) <= sl.b0(r).value / (2.0 - 1.0));
    }
}

TEST_CASE("slow growth: L(r)/log^n r decreases along a squaring ladder") {
    const SuperLog sl = make(2.0);
    for (int n = 1; n <= 4; ++n) {
        double prev = 1e300;
        int seen = 0;
        for (int j = 1; j <= 10; ++j) {
            const double r = std::pow(2.0, std::ldexp(1.0, j));  // r_j = r_{j-1}^2
            if (r > 1e300) break;
            if (!(poly_log(n - 1 > 0 ? n - 1 : 0, r) > (n >= 2 ? 1.0 : 0.0))) continue;
            if (n >= 3 && !(poly_log(n - 2, r) > 1.0)) continue;
            const double ratio = sl.super_log(r) / poly_log(n, r);
            CHECK(ratio < prev);
            prev = ratio;
            ++seen;
        }
        CHECK(seen >= 3);
    }
}

TEST_CASE("shared cache is safe under concurrent readers") {
    const SuperLog sl = make(2.5);
    std::vector<double> serial;
    for (int i = 0; i < 64; ++i) serial.push_back(make(2.5).phi(2.5 + 7.3 * i));
    std::vector<double> out(64);
    std::vector<std::thread> threads;
    for (int w = 0; w < 4; ++w) {
        threads.emplace_back([&, w] {
            for (int i = w; i < 64; i += 4) out[i] = sl.phi(2.5 + 7.3 * i);
        });
    }
    for (auto& t : threads) t.join();
    for (int i = 0; i < 64; ++i) CHECK(out[i] == doctest::Approx(serial[i]).epsilon(1e-13));
}

TEST_CASE("tabulation rows") {
    const SuperLog sl = make(2.0);
    auto rows = tabulate_superlog(sl, 1, {1.0, 4.0});
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].L == 0.0);
    CHECK(rows[0].a0_k == doctest::Approx(2.0));
    CHECK(rows[1].a1_k == doctest::Approx(sl.a1(1, 4.0)));
}

}
