#pragma once

#include <cstdint>
#include <vector>

namespace gronwall {

// Table of all primes up to a fixed limit, with prefix sums of log p
// (Chebyshev theta at each prime). Built once, read-only afterwards;
// safe for concurrent readers.
struct PrimeTable {
    std::uint64_t limit = 0;
    std::vector<std::uint64_t> primes;   // ascending
    std::vector<double> theta_prefix;    // theta_prefix[i] = sum_{j<=i} log primes[j]

    std::size_t count() const { return primes.size(); }
    bool contains(std::uint64_t p) const;      // primality for p <= limit
    std::size_t index_of(std::uint64_t p) const;  // 1-based rank; throws if not prime here
};

// Eratosthenes bit sieve. Limit is clamped to [2, 1e9]; out of range throws.
// The theta prefix sums are accumulated smallest-prime-first with compensated
// summation so each stored partial sum is correctly rounded.
PrimeTable sieve_upto(std::uint64_t limit);

// n-th prime, 1-based (nth_prime(table, 1) == 2). Throws std::range_error
// when n exceeds the table.
std::uint64_t nth_prime(const PrimeTable& table, std::size_t n);

// Chebyshev theta(x) = sum of log p over primes p <= x. Requires 2 <= x <= limit.
double theta(const PrimeTable& table, double x);

// Chebyshev psi(x) = sum over prime powers p^m <= x of log p
//                  = theta(x) + theta(x^(1/2)) + theta(x^(1/3)) + ...
double psi(const PrimeTable& table, double x);

// log of the product of the first k primes == theta(p_k).
double log_primorial(const PrimeTable& table, std::size_t k);

// Same sum re-accumulated in extended precision; used when a boundary
// comparison lands inside the guard band and needs a second opinion.
long double log_primorial_ld(const PrimeTable& table, std::size_t k);

} // namespace gronwall
