#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "gronwall/number.hpp"
#include "gronwall/primes.hpp"
#include "gronwall/xi.hpp"

namespace gronwall {

enum class Tri { True, False, Ambiguous };

const char* to_string(Tri t);

// A boundary comparison on the log N axis. margin is the signed distance of
// log N to the decision boundary (positive = above). Verdicts inside the
// guard band are AMBIGUOUS unless an extended-precision re-evaluation
// resolves them past the second-tier band.
struct TriState {
    Tri verdict = Tri::Ambiguous;
    double margin = 0;
};

// Classify a margin whose sign decides a predicate. `refined` recomputes the
// margin in extended precision and is invoked only on a guard-band hit.
TriState classify_margin(double margin, const ToleranceConfig& tol,
                         const std::function<long double()>& refined);

// Does multiplying by p increase G?  G(Np) > G(N) iff log N > xi(p, alpha),
// where p^alpha || N (alpha = 0 when p does not divide N).
// margin = log N - xi(p, alpha); TRUE for margin beyond +guard.
TriState mult_improves(const Factorization& f, std::uint64_t p, const XiTable& xi);

// Does dividing by q increase G?  For q^alpha || N, alpha >= 1:
// G(N/q) > G(N) iff log N < log q + xi(q, alpha-1).
// margin = log N - (log q + xi(q, alpha-1)); TRUE for margin beyond -guard.
// (The G reading assumes N/q >= 3; the boundary inequality itself is the contract.)
TriState div_improves(const Factorization& f, std::uint64_t q, const XiTable& xi);

// The closed segment of log N values for which N with p^alpha || N can be
// improved neither by another factor p nor by removing one:
// [xi(p, alpha-1) + log p, xi(p, alpha)]. alpha >= 1.
std::pair<double, double> gp_interval(std::uint64_t p, unsigned alpha, const XiTable& xi);

enum class FailTag { Div, Mult, MultNext };

const char* to_string(FailTag t);

struct U1Failure {
    FailTag tag;
    std::uint64_t prime;
    double margin;  // negative: the condition is violated by this distance
};

struct U1Report {
    TriState member;                // margin = worst condition margin
    std::size_t k = 0;              // rank of P(N)
    std::vector<U1Failure> failures;  // hard violations only
    GronwallValue g_value;
};

// One-step unimprovability: N (> 5) belongs to U1 iff
//   (i)   xi(p_j, alpha_j - 1) + log p_j <= log N   for every p_j | N,
//   (ii)  log N <= xi(p_i, alpha_i)                 for every i <= k,
//   (iii) log N <= xi(p_{k+1}, 0),
// where p_k = P(N) and alpha_i = 0 for primes not dividing N. Condition (iii)
// covers all larger primes since xi(p, 0) increases in p.
U1Report is_u1(const Factorization& f, const PrimeTable& table, const XiTable& xi);

// Structural exponent pattern: all primes up to P(N) present, exponents
// non-increasing, and the last exponent equal to 1.
bool check_b1(const Factorization& f);

} // namespace gronwall
