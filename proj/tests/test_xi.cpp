#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "doctest.h"
#include "gronwall/xi.hpp"

using namespace gronwall;

namespace {

long double power_sum_ld(std::uint64_t p, unsigned alpha) {
    long double s = 0, pw = 1;
    for (unsigned i = 0; i <= alpha; ++i) {
        pw *= static_cast<long double>(p);
        s += pw;
    }
    return s;
}

// Monotone working form whose unique positive zero is xi(p, alpha).
long double h_of(std::uint64_t p, unsigned alpha, long double x) {
    long double s = power_sum_ld(p, alpha);
    return logl(x) - s * log1pl(logl(static_cast<long double>(p)) / x);
}

// Independent oracle: plain bisection in extended precision, no reuse of the
// library solver. Brackets widened slightly to be safe.
long double xi_bisect(std::uint64_t p, unsigned alpha) {
    long double lo, hi;
    if (alpha == 0) {
        lo = static_cast<long double>(p) - logl(static_cast<long double>(p));
        hi = static_cast<long double>(p);
    } else {
        long double top = powl(static_cast<long double>(p), alpha + 1.0L);
        lo = top / (alpha + 1);
        hi = 3.0L * top / (alpha + 1);
    }
    for (int i = 0; i < 400 && (hi - lo) > 1e-13L * hi; ++i) {
        long double mid = 0.5L * (lo + hi);
        (h_of(p, alpha, mid) < 0 ? lo : hi) = mid;
    }
    return 0.5L * (lo + hi);
}

} // namespace

TEST_CASE("xi agrees with an independent bisection oracle") {
    XiTable xi;
    for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 97ull,
                            541ull, 997ull}) {
        for (unsigned a : {0u, 1u, 2u}) {
            double got = xi.root(p, a);
            long double want = xi_bisect(p, a);
            CHECK(std::abs(got - static_cast<double>(want)) <=
                  1e-10 * static_cast<double>(want));
        }
    }
}

TEST_CASE("xi reference values") {
    XiTable xi;
    struct Row { std::uint64_t p; unsigned a; double v; };
    const Row rows[] = {
        {2, 0, 1.8756618586717224},   {2, 1, 3.2205967154014739},
        {2, 2, 5.4090133466373634},   {2, 3, 9.0824863603773334},
        {3, 0, 2.7451678469800010},   {3, 1, 6.5051350849195535},
        {5, 0, 4.5483516969305919},   {5, 1, 16.449834010185160},
        {7, 0, 6.4049080977640785},   {11, 1, 72.661125284845329},
        {13, 2, 896.30077126909841},  {17, 0, 15.995398335292524},
        {19, 0, 17.942073922254572},  {23, 0, 21.849846290455272},
        {29, 0, 27.737096347033683},  {541, 0, 538.29122573165819},
        {547, 0, 544.28576534928747}, {997, 0, 993.98859451968081},
    };
    for (const Row& r : rows)
        CHECK(xi.root(r.p, r.a) == doctest::Approx(r.v).epsilon(5e-14));
    CHECK(xi.root(997, 10) == doctest::Approx(9.0871867091615138e31).epsilon(1e-13));
}

TEST_CASE("xi is strictly increasing in p and alpha") {
    XiTable xi;
    double prev = 0;
    for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 101ull, 997ull}) {
        double v = xi.root(p, 0);
        CHECK(v > prev);
        prev = v;
    }
    for (std::uint64_t p : {2ull, 5ull, 53ull}) {
        double last = xi.root(p, 0);
        for (unsigned a = 1; a <= 8; ++a) {
            double v = xi.root(p, a);
            CHECK(v > last);
            last = v;
        }
    }
}

TEST_CASE("xi lies strictly inside its bracket") {
    XiTable xi;
    for (std::uint64_t p : {2ull, 3ull, 31ull, 997ull}) {
        for (unsigned a : {0u, 1u, 3u, 10u}) {
            auto [lo, hi] = xi_bounds(p, a);
            XiValue v = xi.value(p, a);
            CHECK(lo < v.value);
            CHECK(v.value < hi);
            CHECK(v.bracket_lo == lo);
            CHECK(v.bracket_hi == hi);
            // The bracket endpoints straddle the root of the working form.
            CHECK(h_of(p, a, lo) < 0);
            CHECK(h_of(p, a, hi) > 0);
        }
    }
    auto [lo0, hi0] = xi_bounds(7, 0);
    CHECK(lo0 == doctest::Approx(7.0 - std::log(7.0)).epsilon(1e-15));
    CHECK(hi0 == 7.0);
    auto [lo2, hi2] = xi_bounds(5, 2);
    CHECK(lo2 == doctest::Approx(125.0 / 3.0).epsilon(1e-15));
    CHECK(hi2 == doctest::Approx(125.0).epsilon(1e-15));
    CHECK_THROWS_AS(xi_bounds(1, 0), std::domain_error);
    CHECK_THROWS_AS(xi_bounds(997, 200), std::range_error);
}

TEST_CASE("xi satisfies both forms of its defining equation") {
    XiTable xi;
    for (std::uint64_t p : {2ull, 3ull, 13ull, 101ull}) {
        for (unsigned a : {0u, 1u, 2u}) {
            long double x = xi.root_ld(p, a);
            double h_scale = std::max(1.0, std::log(static_cast<double>(x)));
            CHECK(std::abs(static_cast<double>(h_of(p, a, x))) < 1e-13 * h_scale);
            // xi^lambda = xi + log p, evaluated where lambda is representable.
            long double lam = 1.0L + 1.0L / power_sum_ld(p, a);
            long double lhs = powl(x, lam);
            long double rhs = x + logl(static_cast<long double>(p));
            CHECK(std::abs(static_cast<double>(lhs - rhs)) <=
                  1e-11 * static_cast<double>(rhs));
        }
    }
}

TEST_CASE("lambda exponent and inverse power sum") {
    CHECK(lambda_exponent(2, 0) == 1.5);
    CHECK(lambda_exponent(3, 1) == doctest::Approx(13.0 / 12.0).epsilon(1e-15));
    CHECK(inv_power_sum(2, 0) == 0.5);
    CHECK(inv_power_sum(3, 1) == doctest::Approx(1.0 / 12.0).epsilon(1e-15));
    CHECK(inv_power_sum(5, 1) == doctest::Approx(1.0 / 30.0).epsilon(1e-15));
    // Decreasing in both arguments, always in (1, 1.5].
    CHECK(lambda_exponent(2, 1) < lambda_exponent(2, 0));
    CHECK(lambda_exponent(3, 0) < lambda_exponent(2, 0));
    for (unsigned a : {0u, 3u, 8u}) {
        double l = lambda_exponent(7, a);
        CHECK(l > 1.0);
        CHECK(l <= 1.5);
    }
    // For large alpha the stored lambda saturates at 1 but the carried
    // difference stays meaningful.
    CHECK(lambda_exponent(2, 60) == 1.0);
    CHECK(inv_power_sum(2, 60) > 0.0);
    CHECK_THROWS_AS(lambda_exponent(1, 0), std::domain_error);
    CHECK_THROWS_AS(inv_power_sum(0, 0), std::domain_error);
}

TEST_CASE("tau_star solves tau = A + B sqrt(tau)") {
    CHECK(tau_star(2, 1) == doctest::Approx(4.0).epsilon(1e-15));
    for (double a : {0.3, 2.0, 19.223098700129182}) {
        for (double b : {0.0, 1.0, 2.0, 7.5}) {
            double t = tau_star(a, b);
            CHECK(t == doctest::Approx(a + b * std::sqrt(t)).epsilon(1e-14));
            CHECK(t >= a);
        }
    }
    CHECK(tau_star(19.223098700129182, 2) ==
          doctest::Approx(30.217118646766877).epsilon(1e-15));
    // Invariance: a_{n+1} = A + B sqrt(a_n) never escapes past tau*.
    double a = 2.0, b = 1.0, t = tau_star(a, b), x = 0.5;
    for (int i = 0; i < 200; ++i) {
        x = a + b * std::sqrt(x);
        CHECK(x <= t + 1e-12);
    }
    CHECK(x == doctest::Approx(t).epsilon(1e-12));
    CHECK_THROWS_AS(tau_star(0.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(tau_star(1.0, -0.5), std::domain_error);
}

TEST_CASE("solver diagnostics and memoization") {
    ToleranceConfig tol;
    XiTable xi(tol);
    CHECK(xi.size() == 0);
    XiValue v = xi.value(11, 1);
    CHECK(xi.size() == 1);
    CHECK(v.iterations > 0);
    CHECK(v.iterations <= tol.max_bisect);
    CHECK(std::abs(v.residual) < 1e-8);
    CHECK(static_cast<double>(v.value_ld) ==
          doctest::Approx(v.value).epsilon(1e-13));
    // Repeat lookups are served from the memo and bitwise identical.
    XiValue again = xi.value(11, 1);
    CHECK(xi.size() == 1);
    CHECK(again.value == v.value);
    CHECK(again.iterations == v.iterations);
    xi.root(13, 0);
    CHECK(xi.size() == 2);
}

TEST_CASE("tolerance validation") {
    ToleranceConfig ok;
    CHECK_NOTHROW(ok.validate());
    ToleranceConfig bad = ok;
    bad.cmp_guard = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = ok;
    bad.solver_tol = -1e-13;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = ok;
    bad.cmp_guard = 1e-15;  // below solver_tol
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = ok;
    bad.max_bisect = 4;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}
