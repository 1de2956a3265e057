#include "gronwall/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gronwall/errors.hpp"

namespace gronwall::oracle {

namespace {

constexpr std::uint64_t kNu = 183783600;  // 2^4 3^3 5^2 7 11 13 17

long double loglog_ld(std::uint64_t n) {
    return logl(logl(static_cast<long double>(n)));
}

// G(n) in extended precision for tie-safe direct comparisons.
long double g_ld(std::uint64_t n, std::uint64_t sigma_n) {
    return static_cast<long double>(sigma_n) /
           (static_cast<long double>(n) * loglog_ld(n));
}

// sigma(q^a) = 1 + q + ... + q^a.
std::uint64_t sigma_prime_power(std::uint64_t q, std::uint32_t a) {
    std::uint64_t s = 1, pw = 1;
    for (std::uint32_t i = 0; i < a; ++i) {
        pw *= q;
        s += pw;
    }
    return s;
}

std::uint64_t sigma_from_factors(const Factorization& f) {
    std::uint64_t s = 1;
    for (const PrimePower& pp : f.factors) s *= sigma_prime_power(pp.prime, pp.exponent);
    return s;
}

std::vector<std::uint32_t> primes_upto_u32(std::uint32_t limit) {
    std::vector<bool> comp(static_cast<std::size_t>(limit) + 1, false);
    std::vector<std::uint32_t> out;
    for (std::uint32_t i = 2; i <= limit; ++i) {
        if (comp[i]) continue;
        out.push_back(i);
        for (std::uint64_t m = static_cast<std::uint64_t>(i) * i; m <= limit; m += i)
            comp[static_cast<std::size_t>(m)] = true;
    }
    return out;
}

} // namespace

SigmaSieve sigma_sieve(std::uint64_t limit) {
    if (limit < 1) throw std::domain_error("sigma_sieve: limit must be positive");
    if (limit > 200000000ull)
        throw std::domain_error("sigma_sieve: limit above 2e8 (1.6 GiB); use sigma_range");
    SigmaSieve sv;
    sv.limit = limit;
    sv.sigma.assign(limit + 1, 0);
    for (std::uint64_t d = 1; d <= limit; ++d)
        for (std::uint64_t m = d; m <= limit; m += d) sv.sigma[m] += d;
    return sv;
}

std::vector<std::uint64_t> sigma_range(std::uint64_t lo, std::uint64_t hi) {
    if (lo < 1 || hi <= lo) throw std::domain_error("sigma_range: need 1 <= lo < hi");
    std::vector<std::uint64_t> acc(hi - lo, 0);
    for (std::uint64_t d = 1; d < hi; ++d) {
        std::uint64_t m = std::max(d, (lo + d - 1) / d * d);
        for (; m < hi; m += d) acc[m - lo] += d;
    }
    return acc;
}

std::uint64_t sigma_direct(std::uint64_t n) {
    if (n == 0) throw std::domain_error("sigma_direct: n must be positive");
    std::uint64_t s = 0;
    for (std::uint64_t d = 1; d * d <= n; ++d) {
        if (n % d != 0) continue;
        s += d;
        if (d != n / d) s += n / d;
    }
    return s;
}

double g_of_sigma(std::uint64_t n, std::uint64_t sigma_n) {
    if (n < 3) throw std::domain_error("g_of_sigma: n must be at least 3");
    return static_cast<double>(g_ld(n, sigma_n));
}

double g_direct(std::uint64_t n, const SigmaSieve& sieve) {
    if (n < 3) throw std::domain_error("g_direct: n must be at least 3");
    if (n > sieve.limit) throw std::range_error("g_direct: n beyond sieve limit");
    return g_of_sigma(n, sieve.sigma[n]);
}

SweepResult sweep_lemma_equivalence(std::uint64_t n_max, std::uint64_t p_max,
                                    const SigmaSieve& sieve, const XiTable& xi) {
    if (n_max < 3 || p_max < 2)
        throw std::domain_error("sweep_lemma_equivalence: need n_max >= 3, p_max >= 2");
    if (p_max != 0 && n_max > sieve.limit / p_max)
        throw std::domain_error("sweep_lemma_equivalence: sieve limit below n_max * p_max");

    const std::vector<std::uint32_t> primes = primes_upto_u32(static_cast<std::uint32_t>(p_max));

    // Smallest-prime-factor table for fast factorization of every n.
    std::vector<std::uint32_t> spf(n_max + 1, 0);
    for (std::uint32_t i = 2; i <= n_max; ++i) {
        if (spf[i] != 0) continue;
        for (std::uint64_t m = i; m <= n_max; m += i)
            if (spf[m] == 0) spf[m] = i;
    }

    SweepResult res;
    Factorization f;
    for (std::uint64_t n = 3; n <= n_max; ++n) {
        f.factors.clear();
        for (std::uint64_t r = n; r > 1;) {
            const std::uint64_t q = spf[r];
            std::uint32_t a = 0;
            while (r % q == 0) {
                r /= q;
                ++a;
            }
            f.factors.push_back({q, a});
        }
        const long double gn = g_ld(n, sieve.sigma[n]);

        for (std::uint32_t p : primes) {
            const Tri verdict = mult_improves(f, p, xi).verdict;
            ++res.mult_checked;
            if (verdict == Tri::Ambiguous) {
                ++res.ambiguous;
                continue;
            }
            const std::uint64_t np = n * p;
            const bool direct = g_ld(np, sieve.sigma[np]) > gn;
            if ((verdict == Tri::True) != direct)
                res.mismatches.push_back({n, p, false, verdict, direct});
        }

        for (const PrimePower& pp : f.factors) {
            if (pp.prime > p_max) continue;
            const std::uint64_t m = n / pp.prime;
            if (m < 3) continue;  // boundary test valid only for quotients >= 3
            const Tri verdict = div_improves(f, pp.prime, xi).verdict;
            ++res.div_checked;
            if (verdict == Tri::Ambiguous) {
                ++res.ambiguous;
                continue;
            }
            const bool direct = g_ld(m, sieve.sigma[m]) > gn;
            if ((verdict == Tri::True) != direct)
                res.mismatches.push_back({n, pp.prime, true, verdict, direct});
        }
    }
    return res;
}

std::uint64_t scan_division_stable(std::uint64_t n_hi) {
    if (n_hi < 5) return 0;
    if (n_hi > 4000000000ull)
        throw std::domain_error("scan_division_stable: bound above 4e9 unsupported");

    const std::uint32_t root = static_cast<std::uint32_t>(std::sqrt(static_cast<double>(n_hi))) + 1;
    const std::vector<std::uint32_t> primes = primes_upto_u32(root);

    constexpr std::size_t kSeg = 1u << 20;
    constexpr std::size_t kMaxFac = 10;  // n <= 4e9 has at most 9 distinct primes
    std::vector<std::uint64_t> rem(kSeg), sig(kSeg), fact(kSeg * kMaxFac);
    std::vector<std::uint8_t> nf(kSeg);

    for (std::uint64_t lo = 2; lo <= n_hi; lo += kSeg) {
        const std::uint64_t hi = std::min(lo + kSeg, n_hi + 1);
        const std::size_t width = static_cast<std::size_t>(hi - lo);
        for (std::size_t i = 0; i < width; ++i) {
            rem[i] = lo + i;
            sig[i] = 1;
            nf[i] = 0;
        }
        for (std::uint32_t p : primes) {
            for (std::uint64_t m = (lo + p - 1) / p * p; m < hi; m += p) {
                const std::size_t i = static_cast<std::size_t>(m - lo);
                std::uint64_t s = 1, pw = 1;
                std::uint32_t a = 0;
                while (rem[i] % p == 0) {
                    rem[i] /= p;
                    pw *= p;
                    s += pw;
                    ++a;
                }
                sig[i] *= s;
                fact[i * kMaxFac + nf[i]++] = (static_cast<std::uint64_t>(p) << 8) | a;
            }
        }
        for (std::size_t i = 0; i < width; ++i) {
            if (rem[i] > 1) {
                sig[i] *= rem[i] + 1;
                fact[i * kMaxFac + nf[i]++] = (rem[i] << 8) | 1;
            }
            const std::uint64_t n = lo + i;
            if (n < 5) continue;
            const long double gn = g_ld(n, sig[i]);
            bool stable = true;
            // Largest prime first: its removal is the most likely improvement.
            for (int t = nf[i] - 1; t >= 0 && stable; --t) {
                const std::uint64_t packed = fact[i * kMaxFac + t];
                const std::uint64_t q = packed >> 8;
                const std::uint32_t a = static_cast<std::uint32_t>(packed & 0xff);
                const std::uint64_t m = n / q;
                if (m < 3) {
                    stable = false;  // quotient outside G's domain disqualifies n
                    break;
                }
                const std::uint64_t sm = sig[i] / sigma_prime_power(q, a) *
                                         sigma_prime_power(q, a - 1);
                if (!(g_ld(m, sm) < gn)) stable = false;
            }
            if (stable) return n;
        }
    }
    return 0;
}

NuReport verify_nu(const SigmaSieve* sieve, bool scan_min, const PrimeTable& table,
                   const XiTable& xi) {
    NuReport rep;
    rep.nu.factors = {{2, 4}, {3, 3}, {5, 2}, {7, 1}, {11, 1}, {13, 1}, {17, 1}};
    rep.nu.validate();

    std::uint64_t nu = 1;
    for (const PrimePower& pp : rep.nu.factors)
        for (std::uint32_t i = 0; i < pp.exponent; ++i) nu *= pp.prime;
    if (nu != kNu) throw numeric_error("verify_nu: internal value mismatch");

    const std::uint64_t sg = sigma_direct(nu);
    bool consistent = (sg == sigma_from_factors(rep.nu));
    if (sieve && sieve->limit >= nu) {
        rep.sieve_checked = true;
        consistent = consistent && (sieve->sigma[nu] == sg);
    }

    rep.g_nu = g_of_sigma(nu, sg);
    rep.g_19nu = g_of_sigma(19 * nu, 20 * sg);  // 19 is new, so sigma scales by 20
    const long double gn = g_ld(nu, sg);

    bool all_div_ok = true;
    for (const PrimePower& pp : rep.nu.factors) {
        NuReport::DivisorCheck dc;
        dc.q = pp.prime;
        const std::uint64_t m = nu / pp.prime;
        const std::uint64_t sm = sg / sigma_prime_power(pp.prime, pp.exponent) *
                                 sigma_prime_power(pp.prime, pp.exponent - 1);
        dc.g_without = g_of_sigma(m, sm);
        dc.worse = g_ld(m, sm) < gn;
        dc.predicate = div_improves(rep.nu, pp.prime, xi).verdict;
        all_div_ok = all_div_ok && dc.worse && dc.predicate == Tri::False;
        rep.divisors.push_back(dc);
    }

    rep.mult19_improves = g_ld(19 * nu, 20 * sg) > gn;
    rep.mult19_predicate = mult_improves(rep.nu, 19, xi).verdict;

    rep.membership = is_u1(rep.nu, table, xi);
    for (const U1Failure& fail : rep.membership.failures)
        if (fail.prime == 19) rep.witness19 = true;

    if (scan_min) {
        rep.scan_ran = true;
        rep.scan_first_hit = scan_division_stable(nu);
    }

    rep.ok = consistent && all_div_ok && rep.mult19_improves &&
             rep.mult19_predicate == Tri::True && rep.membership.member.verdict == Tri::False &&
             rep.witness19 && (!rep.scan_ran || rep.scan_first_hit == nu);
    return rep;
}

} // namespace gronwall::oracle
