#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "gronwall/primes.hpp"

namespace gronwall {

struct PrimePower {
    std::uint64_t prime = 0;
    std::uint32_t exponent = 0;
    friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

// An integer > 1 held in fully factored form: ascending primes, exponents >= 1.
// Values routinely exceed 10^200, so nothing here ever materializes the
// integer except the decimal renderer.
struct Factorization {
    std::vector<PrimePower> factors;

    bool empty() const { return factors.empty(); }
    std::uint64_t largest_prime() const;       // P(N); throws on empty
    std::uint32_t exponent_of(std::uint64_t p) const;  // 0 when p does not divide
    void validate() const;                     // canonical-form check
    friend bool operator==(const Factorization&, const Factorization&) = default;
};

// sum of alpha_j * log p_j, compensated; and the extended-precision variant
// used when a comparison needs the second tier.
double log_n(const Factorization& f);
long double log_n_ld(const Factorization& f);

// sigma(N)/N = prod (1 - p^-(alpha+1)) / (1 - 1/p), accumulated
// largest-factor-first (i.e. ascending primes) to limit error drift.
double sigma_over_n(const Factorization& f);

struct GronwallValue {
    double g = 0;            // sigma(N) / (N log log N)
    double log_n = 0;
    double sigma_ratio = 0;  // sigma(N)/N
};

// G(N) = (sigma(N)/N) / log log N. Requires log N > 1 (i.e. N >= 3).
GronwallValue gronwall_g(const Factorization& f);

// N -> N*p and N -> N/q on the factored form. divide_prime requires q | N.
Factorization multiply_prime(Factorization f, std::uint64_t p);
Factorization divide_prime(Factorization f, std::uint64_t q);

// Exact decimal digits via an internal base-1e9 limb accumulator.
// Supported scale is capped at ~10^400.
std::string to_decimal_string(const Factorization& f);

// Leading digits in the form "d.dde<exp>", digits truncated (not rounded),
// e.g. 160626866400 -> "1.60e11".
std::string to_scientific(const Factorization& f, int significant = 3);

// Accepts either a plain decimal (< 2^63, factored by trial division over the
// table) or a factor list like "2^5·3^3·5^2·7" (separators: whitespace, ',',
// '*', or the middle dot; "p" alone means exponent 1). Primes are validated
// against the table; a remainder with no prime factor inside the table is an
// error naming the remainder.
Factorization parse_number(std::string_view text, const PrimeTable& table);

} // namespace gronwall
