#include "gronwall/improvability.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "gronwall/errors.hpp"

namespace gronwall {

const char* to_string(Tri t) {
    switch (t) {
        case Tri::True: return "TRUE";
        case Tri::False: return "FALSE";
        default: return "AMBIGUOUS";
    }
}

const char* to_string(FailTag t) {
    switch (t) {
        case FailTag::Div: return "DIV";
        case FailTag::Mult: return "MULT";
        default: return "MULT_NEXT";
    }
}

TriState classify_margin(double margin, const ToleranceConfig& tol,
                         const std::function<long double()>& refined) {
    if (margin > tol.cmp_guard) return {Tri::True, margin};
    if (margin < -tol.cmp_guard) return {Tri::False, margin};
    long double m2 = refined ? refined() : static_cast<long double>(margin);
    if (m2 > tol.escalated_guard) return {Tri::True, static_cast<double>(m2)};
    if (m2 < -tol.escalated_guard) return {Tri::False, static_cast<double>(m2)};
    return {Tri::Ambiguous, static_cast<double>(m2)};
}

TriState mult_improves(const Factorization& f, std::uint64_t p, const XiTable& xi) {
    f.validate();
    if (f.factors.empty()) throw std::domain_error("mult_improves: N must be > 1");
    unsigned alpha = f.exponent_of(p);
    double margin = log_n(f) - xi.root(p, alpha);
    return classify_margin(margin, xi.tolerance(), [&]() -> long double {
        return log_n_ld(f) - xi.root_ld(p, alpha);
    });
}

TriState div_improves(const Factorization& f, std::uint64_t q, const XiTable& xi) {
    f.validate();
    unsigned alpha = f.exponent_of(q);
    if (alpha == 0)
        throw std::domain_error("div_improves: " + std::to_string(q) + " does not divide N");
    double boundary = std::log(static_cast<double>(q)) + xi.root(q, alpha - 1);
    double margin = log_n(f) - boundary;
    TriState below = classify_margin(-margin, xi.tolerance(), [&]() -> long double {
        return -(log_n_ld(f) - (logl(static_cast<long double>(q)) + xi.root_ld(q, alpha - 1)));
    });
    // Normalize back to "distance of log N to the boundary".
    return {below.verdict, -below.margin};
}

std::pair<double, double> gp_interval(std::uint64_t p, unsigned alpha, const XiTable& xi) {
    if (alpha == 0) throw std::domain_error("gp_interval: alpha must be >= 1");
    double lo = xi.root(p, alpha - 1) + std::log(static_cast<double>(p));
    double hi = xi.root(p, alpha);
    if (!(lo < hi))
        throw numeric_error("gp_interval: empty segment for p=" + std::to_string(p) +
                            " alpha=" + std::to_string(alpha));
    return {lo, hi};
}

namespace {

bool value_at_most_5(const Factorization& f) {
    if (f.factors.size() != 1) return false;
    const auto& pp = f.factors[0];
    return (pp.exponent == 1 && pp.prime <= 5) || (pp.prime == 2 && pp.exponent == 2);
}

} // namespace

U1Report is_u1(const Factorization& f, const PrimeTable& table, const XiTable& xi) {
    f.validate();
    if (f.factors.empty() || value_at_most_5(f))
        throw std::domain_error("is_u1: N must be > 5");

    U1Report rep;
    rep.g_value = gronwall_g(f);
    rep.k = table.index_of(f.largest_prime());
    const std::uint64_t p_next = nth_prime(table, rep.k + 1);

    const double ln = log_n(f);
    const ToleranceConfig& tol = xi.tolerance();
    double worst = std::numeric_limits<double>::infinity();
    bool any_false = false, any_ambiguous = false;

    auto take = [&](FailTag tag, std::uint64_t prime, double margin,
                    const std::function<long double()>& refined) {
        TriState ts = classify_margin(margin, tol, refined);
        worst = std::min(worst, ts.margin);
        if (ts.verdict == Tri::False) {
            any_false = true;
            rep.failures.push_back({tag, prime, ts.margin});
        } else if (ts.verdict == Tri::Ambiguous) {
            any_ambiguous = true;
        }
    };

    for (std::size_t j = 1; j <= rep.k; ++j) {
        const std::uint64_t p = nth_prime(table, j);
        const unsigned alpha = f.exponent_of(p);
        const double logp = std::log(static_cast<double>(p));
        if (alpha > 0) {
            take(FailTag::Div, p, ln - (xi.root(p, alpha - 1) + logp), [&]() -> long double {
                return log_n_ld(f) -
                       (xi.root_ld(p, alpha - 1) + logl(static_cast<long double>(p)));
            });
        }
        take(FailTag::Mult, p, xi.root(p, alpha) - ln, [&]() -> long double {
            return xi.root_ld(p, alpha) - log_n_ld(f);
        });
    }
    take(FailTag::MultNext, p_next, xi.root(p_next, 0) - ln, [&]() -> long double {
        return xi.root_ld(p_next, 0) - log_n_ld(f);
    });

    rep.member.margin = worst;
    rep.member.verdict = any_false ? Tri::False : (any_ambiguous ? Tri::Ambiguous : Tri::True);
    return rep;
}

namespace {

bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    if (n % 2 == 0) return n == 2;
    if (n % 3 == 0) return n == 3;
    for (std::uint64_t d = 5; d * d <= n; d += 6) {
        if (n % d == 0 || n % (d + 2) == 0) return false;
    }
    return true;
}

std::uint64_t next_prime_after(std::uint64_t p) {
    for (std::uint64_t q = p + 1;; ++q)
        if (is_prime_u64(q)) return q;
}

} // namespace

bool check_b1(const Factorization& f) {
    f.validate();
    if (f.factors.empty()) return false;
    if (f.factors.front().prime != 2) return false;
    for (std::size_t i = 0; i + 1 < f.factors.size(); ++i) {
        if (next_prime_after(f.factors[i].prime) != f.factors[i + 1].prime)
            return false;  // a prime is skipped
        if (f.factors[i].exponent < f.factors[i + 1].exponent)
            return false;  // exponents must be non-increasing
    }
    return f.factors.back().exponent == 1;
}

} // namespace gronwall
