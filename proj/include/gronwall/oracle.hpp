#pragma once

#include <cstdint>
#include <vector>

#include "gronwall/improvability.hpp"
#include "gronwall/number.hpp"
#include "gronwall/primes.hpp"
#include "gronwall/xi.hpp"

// Brute-force cross-checks for the analytic predicates: exact divisor sums,
// direct G comparisons, and range sweeps that must agree with the xi-based
// tests everywhere outside the guard band.
namespace gronwall::oracle {

struct SigmaSieve {
    std::uint64_t limit = 0;
    std::vector<std::uint64_t> sigma;  // sigma[n] for 0 <= n <= limit (sigma[0] = 0)
};

// Divisor-accumulation table of sigma(n) for all n <= limit. Memory is
// 8 bytes per integer; limits beyond 2*10^8 are rejected.
SigmaSieve sigma_sieve(std::uint64_t limit);

// Segmented variant: exact sigma(n) for lo <= n < hi without the full table.
std::vector<std::uint64_t> sigma_range(std::uint64_t lo, std::uint64_t hi);

// Exact sigma(n) by divisor-pair enumeration in O(sqrt n).
std::uint64_t sigma_direct(std::uint64_t n);

// G(n) = sigma(n) / (n log log n) from an exact sigma value (n >= 3).
double g_of_sigma(std::uint64_t n, std::uint64_t sigma_n);
double g_direct(std::uint64_t n, const SigmaSieve& sieve);

struct SweepMismatch {
    std::uint64_t n = 0;
    std::uint64_t p = 0;
    bool division = false;       // false: multiply-by-p check, true: divide-by-p
    Tri verdict = Tri::Ambiguous;  // the xi-based verdict
    bool direct_improves = false;  // the sigma-based truth
};

struct SweepResult {
    std::uint64_t mult_checked = 0;
    std::uint64_t div_checked = 0;
    std::uint64_t ambiguous = 0;   // guard-band verdicts, exempt from matching
    std::vector<SweepMismatch> mismatches;
};

// For every N in [3, n_max] and prime p <= p_max, compare the boundary tests
// (log N vs xi) against direct G comparisons from exact sigma values: the
// multiply test for every p, the divide test for prime divisors with
// N/p >= 3. Requires sieve.limit >= n_max * p_max.
SweepResult sweep_lemma_equivalence(std::uint64_t n_max, std::uint64_t p_max,
                                    const SigmaSieve& sieve, const XiTable& xi);

// First N in [5, n_hi] that no single prime divisor improves: G(N/q) < G(N)
// for every prime q | N, where a quotient N/q < 3 (outside G's domain)
// disqualifies N. Returns 0 when no such N exists in range. Exact sigma via
// a segmented factoring sieve; O(n_hi log log n_hi) work.
std::uint64_t scan_division_stable(std::uint64_t n_hi);

struct NuReport {
    Factorization nu;             // 2^4 3^3 5^2 7 11 13 17 = 183783600
    double g_nu = 0;              // direct value
    double g_19nu = 0;

    struct DivisorCheck {
        std::uint64_t q = 0;
        double g_without = 0;     // direct G(nu/q)
        bool worse = false;       // direct G(nu/q) < G(nu)
        Tri predicate = Tri::Ambiguous;  // xi-based div_improves verdict
    };
    std::vector<DivisorCheck> divisors;

    bool mult19_improves = false;          // direct G(19 nu) > G(nu)
    Tri mult19_predicate = Tri::Ambiguous; // xi-based mult_improves verdict

    U1Report membership;      // expected: not a member, witness prime 19
    bool witness19 = false;   // some recorded failure names the prime 19

    bool sieve_checked = false;  // sigma(nu) cross-checked against a sieve
    bool scan_ran = false;
    std::uint64_t scan_first_hit = 0;  // expected: nu itself

    bool ok = false;  // every expectation above held
};

// Remark-2 checks on nu = 183783600: removing any of its seven primes lowers
// G, multiplying by 19 raises it, and the membership test rejects it with 19
// as a witness. sigma values come from exact divisor-pair sums; a sieve, when
// supplied and large enough, cross-checks them. scan_min additionally runs
// scan_division_stable up to nu (minutes of work).
NuReport verify_nu(const SigmaSieve* sieve, bool scan_min, const PrimeTable& table,
                   const XiTable& xi);

} // namespace gronwall::oracle
