#include "gronwall/primes.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace gronwall {

bool PrimeTable::contains(std::uint64_t p) const {
    return std::binary_search(primes.begin(), primes.end(), p);
}

std::size_t PrimeTable::index_of(std::uint64_t p) const {
    auto it = std::lower_bound(primes.begin(), primes.end(), p);
    if (it == primes.end() || *it != p)
        throw std::domain_error("index_of: " + std::to_string(p) +
                                " is not a prime within the table");
    return static_cast<std::size_t>(it - primes.begin()) + 1;
}

PrimeTable sieve_upto(std::uint64_t limit) {
    if (limit < 2 || limit > 1'000'000'000ULL)
        throw std::range_error("sieve_upto: limit must be in [2, 1e9], got " +
                               std::to_string(limit));

    std::vector<bool> composite(limit + 1, false);
    for (std::uint64_t i = 2; i * i <= limit; ++i) {
        if (composite[i]) continue;
        for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
    }

    PrimeTable t;
    t.limit = limit;
    for (std::uint64_t i = 2; i <= limit; ++i)
        if (!composite[i]) t.primes.push_back(i);

    // Kahan-compensated prefix sums: each stored value is the correctly
    // rounded sum of the logs so far, so consecutive differences recover
    // individual log p to well under 1e-12 at this scale.
    t.theta_prefix.resize(t.primes.size());
    double sum = 0.0, comp = 0.0;
    for (std::size_t i = 0; i < t.primes.size(); ++i) {
        double term = std::log(static_cast<double>(t.primes[i])) - comp;
        double next = sum + term;
        comp = (next - sum) - term;
        sum = next;
        t.theta_prefix[i] = sum;
    }
    return t;
}

std::uint64_t nth_prime(const PrimeTable& table, std::size_t n) {
    if (n == 0 || n > table.primes.size())
        throw std::range_error("nth_prime: index " + std::to_string(n) +
                               " outside table of " + std::to_string(table.primes.size()) +
                               " primes");
    return table.primes[n - 1];
}

double theta(const PrimeTable& table, double x) {
    if (!(x >= 2.0))
        throw std::domain_error("theta: x must be >= 2");
    if (x > static_cast<double>(table.limit))
        throw std::range_error("theta: x exceeds table limit " + std::to_string(table.limit));
    // Index of the last prime <= x.
    auto it = std::upper_bound(table.primes.begin(), table.primes.end(),
                               static_cast<std::uint64_t>(x));
    std::size_t n = static_cast<std::size_t>(it - table.primes.begin());
    return n == 0 ? 0.0 : table.theta_prefix[n - 1];
}

double psi(const PrimeTable& table, double x) {
    if (!(x >= 2.0))
        throw std::domain_error("psi: x must be >= 2");
    if (x > static_cast<double>(table.limit))
        throw std::range_error("psi: x exceeds table limit " + std::to_string(table.limit));
    double total = 0.0;
    for (int m = 1;; ++m) {
        long double r = powl(static_cast<long double>(x), 1.0L / m);
        // Nudge up when floating error lands r just under an integer whose
        // m-th power still fits below x (theta jumps exactly at integers).
        auto next = static_cast<std::uint64_t>(floorl(r)) + 1;
        if (powl(static_cast<long double>(next), static_cast<long double>(m)) <=
            static_cast<long double>(x))
            r = static_cast<long double>(next);
        if (r < 2.0L) break;
        total += theta(table, static_cast<double>(r));
    }
    return total;
}

double log_primorial(const PrimeTable& table, std::size_t k) {
    if (k == 0 || k > table.primes.size())
        throw std::range_error("log_primorial: k outside table");
    return table.theta_prefix[k - 1];
}

long double log_primorial_ld(const PrimeTable& table, std::size_t k) {
    if (k == 0 || k > table.primes.size())
        throw std::range_error("log_primorial_ld: k outside table");
    long double sum = 0.0L;
    for (std::size_t i = 0; i < k; ++i)
        sum += logl(static_cast<long double>(table.primes[i]));
    return sum;
}

} // namespace gronwall
