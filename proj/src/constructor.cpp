#include "gronwall/constructor.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "gronwall/errors.hpp"

namespace gronwall {

namespace {

Factorization make_factorization(const std::vector<std::uint32_t>& exponents,
                                 const PrimeTable& table) {
    Factorization f;
    f.factors.reserve(exponents.size());
    for (std::size_t j = 0; j < exponents.size(); ++j)
        if (exponents[j] > 0) f.factors.push_back({nth_prime(table, j + 1), exponents[j]});
    return f;
}

void require_primes(std::size_t needed, const PrimeTable& table, const char* what) {
    if (table.count() < needed)
        throw std::invalid_argument(std::string(what) + ": prime table holds " +
                                    std::to_string(table.count()) + " primes, need " +
                                    std::to_string(needed));
}

// True when xi(p, beta-1) + log p <= log_y, i.e. exponent beta is admitted.
// Ties inside the guard band count as admitted but are flagged.
bool exponent_admitted(std::uint64_t p, std::uint32_t beta, double log_y,
                       long double log_y_ld, const XiTable& xi, bool* guard_hit) {
    double margin = log_y - (xi.root(p, beta - 1) + std::log(static_cast<double>(p)));
    TriState ts = classify_margin(margin, xi.tolerance(), [&]() -> long double {
        return log_y_ld - (xi.root_ld(p, beta - 1) + logl(static_cast<long double>(p)));
    });
    if (ts.verdict == Tri::Ambiguous && guard_hit) *guard_hit = true;
    return ts.verdict != Tri::False;
}

// Strict test log_v > xi(p, beta); guard-band ties resolve to "not above".
bool strictly_above(double log_v, long double log_v_ld, std::uint64_t p, std::uint32_t beta,
                    const XiTable& xi, bool* guard_hit) {
    double margin = log_v - xi.root(p, beta);
    TriState ts = classify_margin(margin, xi.tolerance(), [&]() -> long double {
        return log_v_ld - xi.root_ld(p, beta);
    });
    if (ts.verdict == Tri::Ambiguous && guard_hit) *guard_hit = true;
    return ts.verdict == Tri::True;
}

// Two-sided exponent-window test at one index; returns the worst verdict.
TriState window_at(std::uint64_t p, std::uint32_t a, double log_v, long double log_v_ld,
                   const XiTable& xi) {
    double lp = std::log(static_cast<double>(p));
    TriState left = classify_margin(log_v - (xi.root(p, a - 1) + lp), xi.tolerance(),
                                    [&]() -> long double {
                                        return log_v_ld - (xi.root_ld(p, a - 1) +
                                                           logl(static_cast<long double>(p)));
                                    });
    TriState right = classify_margin(xi.root(p, a) - log_v, xi.tolerance(),
                                     [&]() -> long double {
                                         return xi.root_ld(p, a) - log_v_ld;
                                     });
    TriState worst = left.margin <= right.margin ? left : right;
    if (left.verdict == Tri::False || right.verdict == Tri::False)
        return {Tri::False, worst.margin};
    if (left.verdict == Tri::Ambiguous || right.verdict == Tri::Ambiguous)
        return {Tri::Ambiguous, worst.margin};
    return {Tri::True, worst.margin};
}

} // namespace

Factorization initial_y(std::size_t k, const PrimeTable& table) {
    if (k == 0) throw std::domain_error("initial_y: k must be positive");
    require_primes(k, table, "initial_y");
    std::vector<std::uint32_t> ones(k, 1);
    return make_factorization(ones, table);
}

std::vector<std::uint32_t> step_exponents(double log_y, std::size_t k,
                                          const std::vector<std::uint32_t>& prev,
                                          const PrimeTable& table, const XiTable& xi,
                                          bool* guard_hit) {
    if (prev.size() != k) throw std::invalid_argument("step_exponents: size mismatch");
    require_primes(k, table, "step_exponents");
    const long double log_y_ld = static_cast<long double>(log_y);
    std::vector<std::uint32_t> next(k, 1);
    for (std::size_t j = 0; j + 1 < k; ++j) {
        const std::uint64_t p = nth_prime(table, j + 1);
        std::uint32_t beta = std::max<std::uint32_t>(prev[j], 1);
        if (beta >= 2 && !exponent_admitted(p, beta, log_y, log_y_ld, xi, guard_hit))
            throw numeric_error("step_exponents: exponent regressed at p=" + std::to_string(p));
        while (exponent_admitted(p, beta + 1, log_y, log_y_ld, xi, guard_hit)) ++beta;
        next[j] = beta;
    }
    // The largest prime always enters with exponent one.
    next[k - 1] = 1;
    return next;
}

FixedPoint fixed_point_y(std::size_t k, const PrimeTable& table, const XiTable& xi) {
    if (k == 0) throw std::domain_error("fixed_point_y: k must be positive");
    require_primes(k, table, "fixed_point_y");
    FixedPoint fp;
    std::vector<std::uint32_t> cur(k, 1);
    fp.iterates.push_back({0, cur, log_primorial(table, k)});

    constexpr int kMaxSteps = 64;
    for (int s = 1; s <= kMaxSteps; ++s) {
        const YIterate& last = fp.iterates.back();
        std::vector<std::uint32_t> next =
            step_exponents(last.log_y, k, last.exponents, table, xi, &fp.guard_hit);
        for (std::size_t j = 0; j < k; ++j)
            if (next[j] < last.exponents[j])
                throw numeric_error("fixed_point_y: exponent decreased");
        if (next == last.exponents) {
            fp.s0 = last.s;
            fp.floored.assign(k, false);
            const double log_y = last.log_y;
            const long double log_y_ld = log_n_ld(make_factorization(next, table));
            for (std::size_t j = 0; j + 1 < k; ++j)
                if (next[j] == 1)
                    fp.floored[j] = !exponent_admitted(nth_prime(table, j + 1), 1, log_y,
                                                       log_y_ld, xi, nullptr);
            return fp;
        }
        fp.iterates.push_back({s, next, log_n(make_factorization(next, table))});
    }
    throw numeric_error("fixed_point_y: no fixed point within " + std::to_string(kMaxSteps) +
                        " iterations");
}

JunctionResult junction_correction(const FixedPoint& fixed, std::size_t k,
                                   const PrimeTable& table, const XiTable& xi) {
    if (fixed.iterates.empty() || fixed.iterates.back().exponents.size() != k)
        throw std::invalid_argument("junction_correction: malformed fixed point");
    JunctionResult jr;
    jr.guard_hit = fixed.guard_hit;
    const std::vector<std::uint32_t>& beta = fixed.iterates.back().exponents;
    jr.exponents = beta;
    Factorization f = make_factorization(jr.exponents, table);
    jr.log_v = log_n(f);
    long double log_v_ld = log_n_ld(f);

    std::vector<std::size_t> prev_set;
    const std::size_t max_rounds = k + 2;
    for (std::size_t round = 0; round < max_rounds; ++round) {
        std::vector<std::size_t> cur_set;
        for (std::size_t j = 0; j + 1 < k; ++j) {
            const std::uint64_t p = nth_prime(table, j + 1);
            if (strictly_above(jr.log_v, log_v_ld, p, beta[j], xi, &jr.guard_hit)) {
                // An already-bumped index must sit below its raised bound;
                // needing a second bump contradicts the correction argument.
                if (jr.exponents[j] > beta[j] &&
                    strictly_above(jr.log_v, log_v_ld, p, beta[j] + 1, xi, &jr.guard_hit))
                    throw numeric_error(
                        "junction_correction: index would be bumped twice at p=" +
                        std::to_string(p));
                cur_set.push_back(j);
            }
        }
        if (!std::includes(cur_set.begin(), cur_set.end(), prev_set.begin(), prev_set.end()))
            throw numeric_error("junction_correction: junction set lost an index");
        jr.e_sets.push_back(cur_set);
        if (cur_set == prev_set) {
            jr.s_star = static_cast<int>(jr.e_sets.size()) - 1;
            return jr;
        }
        for (std::size_t j : cur_set) jr.exponents[j] = beta[j] + 1;
        f = make_factorization(jr.exponents, table);
        jr.log_v = log_n(f);
        log_v_ld = log_n_ld(f);
        prev_set = std::move(cur_set);
    }
    throw numeric_error("junction_correction: junction set kept growing after " +
                        std::to_string(max_rounds) + " rounds");
}

ConstructionTrace construct_vk(std::size_t k, const PrimeTable& table, const XiTable& xi) {
    if (k < 4) throw std::domain_error("construct_vk: k must be at least 4");
    require_primes(k + 1, table, "construct_vk");

    ConstructionTrace tr;
    tr.k = k;
    tr.fixed = fixed_point_y(k, table, xi);
    tr.junction = junction_correction(tr.fixed, k, table, xi);
    tr.v = make_factorization(tr.junction.exponents, table);
    tr.log_v = log_n(tr.v);
    tr.guard_hit = tr.junction.guard_hit;

    // Final verification: the exponent window holds at every index but the
    // last (whose conditions are exactly the membership filter's), the
    // exponents never increase along the prime list, and the last one is 1.
    const long double log_v_ld = log_n_ld(tr.v);
    for (std::size_t j = 0; j + 1 < k; ++j) {
        const std::uint64_t p = nth_prime(table, j + 1);
        const std::uint32_t a = tr.junction.exponents[j];
        if (a < tr.junction.exponents[j + 1])
            throw numeric_error("construct_vk: exponent pattern not non-increasing");
        TriState w = window_at(p, a, tr.log_v, log_v_ld, xi);
        if (w.verdict == Tri::False)
            throw numeric_error("construct_vk: exponent window violated at p=" +
                                std::to_string(p) + " (margin " + std::to_string(w.margin) +
                                ")");
        if (w.verdict == Tri::Ambiguous) tr.guard_hit = true;
    }
    if (tr.junction.exponents[k - 1] != 1)
        throw numeric_error("construct_vk: largest prime exponent is not 1");
    if (!check_b1(tr.v)) throw numeric_error("construct_vk: consecutive-prime form violated");

    const double pk = static_cast<double>(nth_prime(table, k));
    tr.c = (tr.log_v - theta(table, pk)) / std::sqrt(pk);
    tr.g = gronwall_g(tr.v);
    tr.filter = prop2_filter(tr, table, xi);
    return tr;
}

bool minimality_probe(const ConstructionTrace& trace, const XiTable& xi) {
    const std::size_t k = trace.k;
    const std::vector<std::uint32_t>& a = trace.junction.exponents;
    for (std::size_t dec = 0; dec + 1 < k; ++dec) {
        // Removing a prime entirely leaves the admissible family.
        if (a[dec] == 1) continue;
        std::vector<std::uint32_t> b = a;
        b[dec] -= 1;
        const std::uint64_t pd = trace.v.factors[dec].prime;
        const double log_w = trace.log_v - std::log(static_cast<double>(pd));
        const long double log_w_ld =
            log_n_ld(trace.v) - logl(static_cast<long double>(pd));
        bool violated = false;
        for (std::size_t j = 0; j + 1 < k && !violated; ++j) {
            TriState w = window_at(trace.v.factors[j].prime, b[j], log_w, log_w_ld, xi);
            if (w.verdict == Tri::False) violated = true;
        }
        if (!violated) return false;
    }
    return true;
}

TriState prop2_filter(const ConstructionTrace& trace, const PrimeTable& table,
                      const XiTable& xi) {
    const std::uint64_t pk = nth_prime(table, trace.k);
    const std::uint64_t pk1 = nth_prime(table, trace.k + 1);
    const double lp = std::log(static_cast<double>(pk));
    TriState left = classify_margin(trace.log_v - (xi.root(pk, 0) + lp), xi.tolerance(),
                                    [&]() -> long double {
                                        return log_n_ld(trace.v) -
                                               (xi.root_ld(pk, 0) +
                                                logl(static_cast<long double>(pk)));
                                    });
    TriState right = classify_margin(xi.root(pk1, 0) - trace.log_v, xi.tolerance(),
                                     [&]() -> long double {
                                         return xi.root_ld(pk1, 0) - log_n_ld(trace.v);
                                     });
    TriState worst = left.margin <= right.margin ? left : right;
    if (left.verdict == Tri::False || right.verdict == Tri::False)
        return {Tri::False, worst.margin};
    if (left.verdict == Tri::Ambiguous || right.verdict == Tri::Ambiguous)
        return {Tri::Ambiguous, worst.margin};
    return {Tri::True, worst.margin};
}

bool prop3_mult(std::size_t n, const ConstructionTrace& trace_n, const PrimeTable& table) {
    if (trace_n.k != n) throw std::invalid_argument("prop3_mult: trace/index mismatch");
    require_primes(n + 1, table, "prop3_mult");
    const double pn = static_cast<double>(nth_prime(table, n));
    const double pn1 = static_cast<double>(nth_prime(table, n + 1));
    const bool fires = pn1 < theta(table, pn) + 0.5 * std::sqrt(pn);
    if (fires) {
        Factorization grown = multiply_prime(trace_n.v, nth_prime(table, n + 1));
        if (!(gronwall_g(grown).g > trace_n.g.g))
            throw numeric_error("prop3_mult: predicate fired but G did not improve");
    }
    return fires;
}

bool prop3_div(std::size_t m, const ConstructionTrace& trace_m, const PrimeTable& table) {
    if (trace_m.k != m) throw std::invalid_argument("prop3_div: trace/index mismatch");
    const double pm = static_cast<double>(nth_prime(table, m));
    const bool fires = pm > theta(table, pm) + 4.0 * std::sqrt(pm);
    if (fires) {
        Factorization shrunk = divide_prime(trace_m.v, nth_prime(table, m));
        if (!(gronwall_g(shrunk).g > trace_m.g.g))
            throw numeric_error("prop3_div: predicate fired but G did not improve");
    }
    return fires;
}

std::string render_value(const Factorization& f) {
    constexpr double kLog10 = 2.302585092994045684;
    const double digits = log_n(f) / kLog10;
    if (digits < 15.5) {
        std::string dec = to_decimal_string(f);
        if (dec.size() <= 15) return dec;
    }
    return to_scientific(f, 3);
}

U1Enumeration enumerate_u1(std::size_t k_max, const PrimeTable& table, const XiTable& xi) {
    if (k_max < 4) throw std::domain_error("enumerate_u1: k_max must be at least 4");
    require_primes(k_max + 1, table, "enumerate_u1");

    U1Enumeration out;
    out.argmax_g = -1.0;
    int ordinal = 0;
    for (std::size_t k = 4; k <= k_max; ++k) {
        ConstructionTrace tr = construct_vk(k, table, xi);
        if (tr.g.g > out.argmax_g) {
            out.argmax_g = tr.g.g;
            out.argmax_g_k = k;
        }

        // The window test must agree with the full membership test whenever
        // both are decisive.
        U1Report full = is_u1(tr.v, table, xi);
        if (tr.filter.verdict != Tri::Ambiguous && full.member.verdict != Tri::Ambiguous &&
            tr.filter.verdict != full.member.verdict)
            throw numeric_error("enumerate_u1: window test disagrees with membership at k=" +
                                std::to_string(k));

        // A guard-band hit anywhere in the final window checks taints the
        // record: it is flagged rather than silently kept or dropped.
        Tri verdict = tr.filter.verdict;
        if (verdict == Tri::True && tr.guard_hit) verdict = Tri::Ambiguous;
        if (verdict == Tri::False) continue;
        U1Record rec;
        rec.k = k;
        rec.v = tr.v;
        rec.decimal_or_sci = render_value(tr.v);
        rec.log_n = tr.log_v;
        rec.g = tr.g.g;
        rec.c = tr.c;
        rec.filter = verdict;
        if (verdict == Tri::True) {
            rec.m = ++ordinal;
            out.records.push_back(std::move(rec));
        } else {
            out.flagged.push_back(std::move(rec));
        }
    }
    return out;
}

} // namespace gronwall
