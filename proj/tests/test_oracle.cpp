#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "gronwall/oracle.hpp"

using namespace gronwall;
using namespace gronwall::oracle;

namespace {

std::uint64_t sigma_naive(std::uint64_t n) {
    std::uint64_t s = 0;
    for (std::uint64_t d = 1; d <= n; ++d)
        if (n % d == 0) s += d;
    return s;
}

// sigma from the multiplicative formula over a trial-division factorization.
std::uint64_t sigma_factored(std::uint64_t n) {
    std::uint64_t s = 1;
    for (std::uint64_t p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        std::uint64_t ppow = 1, term = 1;
        while (n % p == 0) { n /= p; ppow *= p; term += ppow; }
        s *= term;
    }
    if (n > 1) s *= (1 + n);
    return s;
}

} // namespace

TEST_CASE("sigma sieve against direct and naive sums") {
    SigmaSieve sv = sigma_sieve(10000);
    CHECK(sv.limit == 10000);
    REQUIRE(sv.sigma.size() == 10001);
    CHECK(sv.sigma[0] == 0);
    CHECK(sv.sigma[1] == 1);
    CHECK(sv.sigma[6] == 12);
    CHECK(sv.sigma[9973] == 9974);  // prime
    for (std::uint64_t n = 1; n <= 10000; ++n) {
        REQUIRE(sv.sigma[n] == sigma_direct(n));
    }
    for (std::uint64_t n : {1ull, 12ull, 360ull, 5040ull, 9999ull})
        CHECK(sv.sigma[n] == sigma_naive(n));
    CHECK_THROWS_AS(sigma_sieve(0), std::domain_error);
    CHECK_THROWS_AS(sigma_sieve(300000000ull), std::domain_error);
}

TEST_CASE("segmented sigma matches the full table") {
    SigmaSieve sv = sigma_sieve(10000);
    std::vector<std::uint64_t> win = sigma_range(5000, 5100);
    REQUIRE(win.size() == 100);
    for (std::uint64_t n = 5000; n < 5100; ++n)
        CHECK(win[n - 5000] == sv.sigma[n]);
    std::vector<std::uint64_t> head = sigma_range(1, 50);
    for (std::uint64_t n = 1; n < 50; ++n)
        CHECK(head[n - 1] == sv.sigma[n]);
    CHECK_THROWS_AS(sigma_range(0, 5), std::domain_error);
    CHECK_THROWS_AS(sigma_range(7, 7), std::domain_error);
}

TEST_CASE("sigma at the reference point") {
    CHECK(sigma_direct(183783600) == 929940480);
    // Multiplicative build-up: 31 * 40 * 31 * 8 * 12 * 14 * 18.
    CHECK(929940480 ==
          31ull * 40 * 31 * 8 * 12 * 14 * 18);
    std::vector<std::uint64_t> one = sigma_range(183783600, 183783601);
    REQUIRE(one.size() == 1);
    CHECK(one[0] == 929940480);
}

TEST_CASE("randomized sigma cross-check") {
    std::mt19937 rng(271828);
    std::uniform_int_distribution<std::uint64_t> dist(2, 1000000);
    for (int i = 0; i < 2000; ++i) {
        std::uint64_t n = dist(rng);
        CAPTURE(n);
        REQUIRE(sigma_direct(n) == sigma_factored(n));
    }
    CHECK_THROWS_AS(sigma_direct(0), std::domain_error);
}

TEST_CASE("direct G values") {
    CHECK(g_of_sigma(183783600, 929940480) ==
          doctest::Approx(1.7175874398435455).epsilon(1e-14));
    CHECK(g_of_sigma(19ull * 183783600, 20ull * 929940480) ==
          doctest::Approx(1.7238039216844900).epsilon(1e-14));
    SigmaSieve sv = sigma_sieve(1000);
    CHECK(g_direct(360, sv) ==
          doctest::Approx(g_of_sigma(360, sigma_direct(360))).epsilon(1e-15));
    CHECK_THROWS_AS(g_of_sigma(2, 3), std::domain_error);
    CHECK_THROWS_AS(g_direct(2, sv), std::domain_error);
    CHECK_THROWS_AS(g_direct(1001, sv), std::range_error);
}

TEST_CASE("boundary tests match direct comparisons over a sweep") {
    XiTable xi;
    SigmaSieve sv = sigma_sieve(620000);
    SweepResult r = sweep_lemma_equivalence(20000, 31, sv, xi);
    CHECK(r.mult_checked == 19998 * 11);  // 11 primes up to 31
    CHECK(r.div_checked == 31288);
    CHECK(r.ambiguous == 0);
    CHECK(r.mismatches.empty());

    CHECK_THROWS_AS(sweep_lemma_equivalence(2, 31, sv, xi), std::domain_error);
    CHECK_THROWS_AS(sweep_lemma_equivalence(20000, 1, sv, xi), std::domain_error);
    // 620000 < 30000 * 31: the sieve cannot cover the products.
    CHECK_THROWS_AS(sweep_lemma_equivalence(30000, 31, sv, xi), std::domain_error);
}

TEST_CASE("no division-stable number below 50000") {
    CHECK(scan_division_stable(4) == 0);
    CHECK(scan_division_stable(1000) == 0);
    CHECK(scan_division_stable(50000) == 0);
    CHECK_THROWS_AS(scan_division_stable(5000000000ull), std::domain_error);

    // Independent confirmation of the same property by naive factoring.
    SigmaSieve sv = sigma_sieve(50000);
    auto g = [&](std::uint64_t n) {
        return static_cast<long double>(sv.sigma[n]) / n /
               logl(logl(static_cast<long double>(n)));
    };
    for (std::uint64_t n = 5; n <= 50000; ++n) {
        bool stable = true;
        std::uint64_t r = n;
        for (std::uint64_t p = 2; p * p <= r && stable; ++p) {
            if (r % p) continue;
            while (r % p == 0) r /= p;
            if (n / p < 3 || !(g(n / p) < g(n))) stable = false;
        }
        if (stable && r > 1) {
            if (n / r < 3 || !(g(n / r) < g(n))) stable = false;
        }
        CAPTURE(n);
        REQUIRE_FALSE(stable);
    }
}

TEST_CASE("reference-point verification report") {
    PrimeTable t = sieve_upto(600);
    XiTable xi;
    NuReport rep = verify_nu(nullptr, false, t, xi);
    CHECK(rep.ok);
    CHECK(to_decimal_string(rep.nu) == "183783600");
    CHECK(rep.g_nu == doctest::Approx(1.7175874398435455).epsilon(1e-14));
    CHECK(rep.g_19nu == doctest::Approx(1.7238039216844900).epsilon(1e-14));
    CHECK(rep.g_19nu > rep.g_nu);
    REQUIRE(rep.divisors.size() == 7);
    const std::uint64_t primes[] = {2, 3, 5, 7, 11, 13, 17};
    for (std::size_t i = 0; i < 7; ++i) {
        CHECK(rep.divisors[i].q == primes[i]);
        CHECK(rep.divisors[i].worse);
        CHECK(rep.divisors[i].g_without < rep.g_nu);
        CHECK(rep.divisors[i].predicate == Tri::False);
    }
    CHECK(rep.mult19_improves);
    CHECK(rep.mult19_predicate == Tri::True);
    CHECK(rep.membership.member.verdict == Tri::False);
    CHECK(rep.witness19);
    CHECK_FALSE(rep.sieve_checked);
    CHECK_FALSE(rep.scan_ran);
    CHECK(rep.scan_first_hit == 0);

    // A sieve below nu is ignored rather than misused.
    SigmaSieve small = sigma_sieve(1000);
    NuReport rep2 = verify_nu(&small, false, t, xi);
    CHECK(rep2.ok);
    CHECK_FALSE(rep2.sieve_checked);
}
