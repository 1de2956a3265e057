#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gronwall/improvability.hpp"
#include "gronwall/number.hpp"
#include "gronwall/primes.hpp"
#include "gronwall/xi.hpp"

namespace gronwall {

// One step of the exponent fixed-point iteration (0-based arrays; entry j
// corresponds to the (j+1)-th prime).
struct YIterate {
    int s = 0;
    std::vector<std::uint32_t> exponents;
    double log_y = 0;
};

struct FixedPoint {
    std::vector<YIterate> iterates;  // s = 0 (all-ones) through the repeated vector
    int s0 = 0;                      // first s whose vector equals all later ones
    std::vector<bool> floored;       // entries clamped to 1 with their bound unmet
    bool guard_hit = false;
};

struct JunctionResult {
    std::vector<std::vector<std::size_t>> e_sets;  // 0-based prime indices, per round
    std::vector<std::uint32_t> exponents;
    double log_v = 0;
    int s_star = 0;  // rounds until the junction set stops growing
    bool guard_hit = false;
};

// Full record of one construction.
struct ConstructionTrace {
    std::size_t k = 0;
    FixedPoint fixed;
    JunctionResult junction;
    Factorization v;
    double log_v = 0;
    double c = 0;  // (log V - theta(p_k)) / sqrt(p_k)
    GronwallValue g;
    TriState filter;  // the two-sided next-prime window test (see prop2_filter)
    bool guard_hit = false;
};

// Squarefree product of the first k primes; the iteration's starting point.
Factorization initial_y(std::size_t k, const PrimeTable& table);

// One application of the exponent rule: for each j < k (0-based), the largest
// beta with xi(p_j, beta-1) + log p_j <= log_y, floored at 1 when even beta=1
// fails; the last exponent is pinned to 1. Search resumes from `prev`
// (exponents never decrease as log_y grows). Sets *guard_hit when a
// comparison lands inside the guard band (resolved by extended precision,
// ties counted as satisfied).
std::vector<std::uint32_t> step_exponents(double log_y, std::size_t k,
                                          const std::vector<std::uint32_t>& prev,
                                          const PrimeTable& table, const XiTable& xi,
                                          bool* guard_hit);

// Iterate step_exponents from the squarefree start until the vector repeats.
// log Y and every exponent are non-decreasing across iterations; throws
// numeric_error if 64 iterations do not reach a fixed point.
FixedPoint fixed_point_y(std::size_t k, const PrimeTable& table, const XiTable& xi);

// Junction correction: indices whose log V exceeds xi(p_j, beta_j) sit in the
// open junction gap and get their exponent bumped by exactly one; the set may
// only grow, and the process stops when it stabilizes (at most k rounds).
JunctionResult junction_correction(const FixedPoint& fixed, std::size_t k,
                                   const PrimeTable& table, const XiTable& xi);

// The full pipeline for one k >= 4: fixed point, junction correction, final
// verification that every j < k satisfies
//   xi(p_j, a_j - 1) + log p_j <= log V <= xi(p_j, a_j)
// and that the exponent pattern is non-increasing with a_k = 1.
// Verification failure is a numeric_error (the construction guarantees it).
ConstructionTrace construct_vk(std::size_t k, const PrimeTable& table, const XiTable& xi);

// Local minimality: for every j < k, decrementing a_j by one must violate
// admissibility — either a two-sided inequality above at some index, or the
// pattern itself (decrementing an exponent of 1 removes a required prime).
// In practice the right-hand inequality at the decremented index fires,
// which is equivalent to strictness of the left inequality at V itself.
bool minimality_probe(const ConstructionTrace& trace, const XiTable& xi);

// Membership window for the constructed value:
//   xi(p_k, 0) + log p_k <= log V <= xi(p_{k+1}, 0).
// Exactly the U1 test specialized to constructed traces (their interior
// conditions hold by construction).
TriState prop2_filter(const ConstructionTrace& trace, const PrimeTable& table,
                      const XiTable& xi);

// Prime-gap sufficient conditions tying theta to one-step improvements:
//   mult: p_{n+1} < theta(p_n) + sqrt(p_n)/2  implies  G(V_n * p_{n+1}) > G(V_n);
//   div:  p_m     > theta(p_m) + 4 sqrt(p_m)  implies  G(V_m / p_m)     > G(V_m).
// Return the predicate; when it fires, the implied strict G inequality is
// checked on the actual value and a failure is a numeric_error.
bool prop3_mult(std::size_t n, const ConstructionTrace& trace_n, const PrimeTable& table);
bool prop3_div(std::size_t m, const ConstructionTrace& trace_m, const PrimeTable& table);

struct U1Record {
    int m = 0;  // ordinal among members
    std::size_t k = 0;
    Factorization v;
    std::string decimal_or_sci;  // exact digits up to 15 digits, else d.dde<exp>
    double log_n = 0;
    double g = 0;
    double c = 0;
    Tri filter = Tri::Ambiguous;
};

struct U1Enumeration {
    std::vector<U1Record> records;  // members, ordinal-numbered
    std::vector<U1Record> flagged;  // AMBIGUOUS filter verdicts, never dropped
    std::size_t argmax_g_k = 0;     // argmax of G(V_k) over every computed k
    double argmax_g = 0;
};

// Construct V_k for k = 4..k_max, keep members (window test TRUE); the window
// test and the full membership test must agree on every k (numeric_error
// otherwise, ambiguous verdicts exempt).
U1Enumeration enumerate_u1(std::size_t k_max, const PrimeTable& table, const XiTable& xi);

// Rendering rule shared by records and the CLI: exact decimal up to 15
// digits, 3-significant-digit scientific beyond.
std::string render_value(const Factorization& f);

} // namespace gronwall
