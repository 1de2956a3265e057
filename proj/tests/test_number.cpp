#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "gronwall/number.hpp"
#include "gronwall/primes.hpp"

using namespace gronwall;

namespace {

Factorization factorize_naive(std::uint64_t n) {
    Factorization f;
    for (std::uint64_t p = 2; p * p <= n; ++p) {
        std::uint32_t e = 0;
        while (n % p == 0) { n /= p; ++e; }
        if (e) f.factors.push_back({p, e});
    }
    if (n > 1) f.factors.push_back({n, 1});
    return f;
}

// Independent oracle: sigma(n)/n by full divisor enumeration.
double sigma_ratio_naive(std::uint64_t n) {
    std::uint64_t s = 0;
    for (std::uint64_t d = 1; d <= n; ++d)
        if (n % d == 0) s += d;
    return static_cast<double>(s) / static_cast<double>(n);
}

const Factorization kNu{{{2, 4}, {3, 3}, {5, 2}, {7, 1}, {11, 1}, {13, 1}, {17, 1}}};
const Factorization kV9{
    {{2, 5}, {3, 3}, {5, 2}, {7, 1}, {11, 1}, {13, 1}, {17, 1}, {19, 1}, {23, 1}}};
const Factorization kV11{{{2, 6}, {3, 3}, {5, 2}, {7, 2}, {11, 1}, {13, 1},
                          {17, 1}, {19, 1}, {23, 1}, {29, 1}, {31, 1}}};

} // namespace

TEST_CASE("sigma_over_n matches divisor enumeration") {
    for (std::uint64_t n : {2ull, 6ull, 12ull, 60ull, 97ull, 360ull, 2520ull,
                            4620ull, 4999ull}) {
        Factorization f = factorize_naive(n);
        CHECK(sigma_over_n(f) ==
              doctest::Approx(sigma_ratio_naive(n)).epsilon(1e-14));
    }
    CHECK(sigma_over_n(factorize_naive(6)) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(sigma_over_n(kNu) == doctest::Approx(5.0599753187988482).epsilon(1e-14));
    CHECK(sigma_over_n(kV9) == doctest::Approx(5.6475106532987809).epsilon(1e-14));
}

TEST_CASE("log_n and the extended-precision variant") {
    for (std::uint64_t n : {2ull, 720ull, 183783600ull}) {
        Factorization f = factorize_naive(n);
        CHECK(log_n(f) ==
              doctest::Approx(std::log(static_cast<double>(n))).epsilon(1e-14));
        CHECK(static_cast<double>(log_n_ld(f)) ==
              doctest::Approx(log_n(f)).epsilon(1e-15));
    }
    CHECK(log_n(kNu) == doctest::Approx(19.029269536483748).epsilon(1e-15));
    CHECK(log_n(kV9) == doctest::Approx(25.802349912139283).epsilon(1e-15));
    CHECK(log_n(kV11) == doctest::Approx(35.242690276226162).epsilon(1e-15));
}

TEST_CASE("gronwall_g values and internal consistency") {
    GronwallValue v = gronwall_g(kV9);
    CHECK(v.g == doctest::Approx(1.7374466925715810).epsilon(1e-14));
    CHECK(v.sigma_ratio == doctest::Approx(5.6475106532987809).epsilon(1e-14));
    CHECK(v.log_n == doctest::Approx(25.802349912139283).epsilon(1e-15));
    CHECK(v.g ==
          doctest::Approx(v.sigma_ratio / std::log(v.log_n)).epsilon(1e-15));

    CHECK(gronwall_g(kNu).g == doctest::Approx(1.7175874398435455).epsilon(1e-14));
    CHECK(gronwall_g(kV11).g == doctest::Approx(1.7368536159592326).epsilon(1e-14));
    CHECK(gronwall_g(factorize_naive(6)).g ==
          doctest::Approx(3.4293665667005872).epsilon(1e-14));

    // N = 2 has log N < 1, so log log N is not positive.
    CHECK_THROWS_AS(gronwall_g(factorize_naive(2)), std::domain_error);
    CHECK_NOTHROW(gronwall_g(factorize_naive(3)));
}

TEST_CASE("multiply_prime and divide_prime") {
    Factorization f = multiply_prime(kNu, 2);
    CHECK(f.exponent_of(2) == 5);
    f = multiply_prime(kNu, 19);
    CHECK(f.exponent_of(19) == 1);
    CHECK(f.largest_prime() == 19);
    f.validate();

    // Insertion keeps primes sorted in the middle too.
    Factorization g{{{2, 1}, {3, 1}, {7, 1}}};
    g = multiply_prime(g, 5);
    CHECK(g == Factorization{{{2, 1}, {3, 1}, {5, 1}, {7, 1}}});

    Factorization d = divide_prime(kNu, 2);
    CHECK(d.exponent_of(2) == 3);
    d = divide_prime(kNu, 17);
    CHECK(d.exponent_of(17) == 0);
    CHECK(d.largest_prime() == 13);
    d.validate();
    CHECK_THROWS_AS(divide_prime(kNu, 19), std::domain_error);

    // Round trip is the identity.
    CHECK(divide_prime(multiply_prime(kNu, 29), 29) == kNu);
    CHECK(multiply_prime(divide_prime(kNu, 5), 5) == kNu);
}

TEST_CASE("canonical-form validation") {
    CHECK_NOTHROW(kNu.validate());
    Factorization bad{{{3, 1}, {2, 1}}};  // out of order
    CHECK_THROWS_AS(bad.validate(), std::domain_error);
    Factorization dup{{{2, 1}, {2, 2}}};
    CHECK_THROWS_AS(dup.validate(), std::domain_error);
    Factorization zero{{{2, 0}}};
    CHECK_THROWS_AS(zero.validate(), std::domain_error);
    Factorization empty;
    CHECK_THROWS_AS(empty.largest_prime(), std::domain_error);
    CHECK(kNu.exponent_of(3) == 3);
    CHECK(kNu.exponent_of(19) == 0);
}

TEST_CASE("exact decimal rendering") {
    CHECK(to_decimal_string(kNu) == "183783600");
    CHECK(to_decimal_string(kV9) == "160626866400");
    CHECK(to_decimal_string(kV11) == "2021649740510400");
    CHECK(to_decimal_string(factorize_naive(2)) == "2");
    CHECK(to_decimal_string(Factorization{{{2, 10}}}) == "1024");
    // Crosses many base-1e9 limbs.
    CHECK(to_decimal_string(Factorization{{{2, 200}}}) ==
          "1606938044258990275541962092341162602522202993782792835301376");
    // Beyond the documented support cap.
    CHECK_THROWS_AS(to_decimal_string(Factorization{{{2, 1400}}}),
                    std::range_error);
}

TEST_CASE("scientific rendering truncates") {
    CHECK(to_scientific(kV9) == "1.60e11");
    CHECK(to_scientific(kV11) == "2.02e15");
    CHECK(to_scientific(kNu) == "1.83e8");
    CHECK(to_scientific(kV9, 5) == "1.6062e11");
    CHECK(to_scientific(kV9, 1) == "1e11");
    // 2^200 = 1.60693...e60; the fourth digit must not round the third up.
    CHECK(to_scientific(Factorization{{{2, 200}}}) == "1.60e60");
    CHECK(to_scientific(factorize_naive(7)) == "7.00e0");
    CHECK(to_scientific(factorize_naive(999)) == "9.99e2");
    CHECK_THROWS_AS(to_scientific(kV9, 0), std::domain_error);
}

TEST_CASE("parse_number accepts decimals and factor lists") {
    PrimeTable t = sieve_upto(600);
    CHECK(parse_number("183783600", t) == kNu);
    CHECK(parse_number("2^4*3^3*5^2*7*11*13*17", t) == kNu);
    CHECK(parse_number("2^4 3^3 5^2 7 11 13 17", t) == kNu);
    CHECK(parse_number("2^4,3^3,5^2,7,11,13,17", t) == kNu);
    CHECK(parse_number("2^4·3^3·5^2·7·11·13·17", t) == kNu);
    CHECK(parse_number("6", t) == Factorization{{{2, 1}, {3, 1}}});
    CHECK(parse_number("1048576", t) == Factorization{{{2, 20}}});
    // Repeated primes merge; order does not matter.
    CHECK(parse_number("3*2*2^3", t) == Factorization{{{2, 4}, {3, 1}}});
    // Beyond-64-bit values go through the factor-list form.
    CHECK(to_decimal_string(parse_number("2^200", t)) ==
          "1606938044258990275541962092341162602522202993782792835301376");
}

TEST_CASE("parse_number rejections") {
    PrimeTable t = sieve_upto(600);
    CHECK_THROWS_AS(parse_number("", t), std::invalid_argument);
    CHECK_THROWS_AS(parse_number("   ", t), std::invalid_argument);
    CHECK_THROWS_AS(parse_number("abc", t), std::invalid_argument);
    CHECK_THROWS_AS(parse_number("2^", t), std::invalid_argument);
    CHECK_THROWS_AS(parse_number("2^0", t), std::invalid_argument);
    CHECK_THROWS_AS(parse_number("1", t), std::domain_error);
    CHECK_THROWS_AS(parse_number("0", t), std::domain_error);
    CHECK_THROWS_AS(parse_number("9223372036854775808", t), std::range_error);
    CHECK_THROWS_AS(parse_number("4^2", t), std::invalid_argument);   // not prime
    CHECK_THROWS_AS(parse_number("1009^2", t), std::range_error);    // beyond table
    // 1009 * 1013: no factor within the table; the remainder is named.
    CHECK_THROWS_WITH_AS(parse_number("1022117", t),
                         doctest::Contains("1022117"), std::range_error);
}
