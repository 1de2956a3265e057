#pragma once

#include <cstdint>
#include <map>
#include <shared_mutex>
#include <utility>

namespace gronwall {

// Comparison and solver tolerances used throughout.
//   cmp_guard  - half-width of the band around a decision boundary inside
//                which a comparison is reported AMBIGUOUS instead of a verdict
//                (distances on the log N axis);
//   solver_tol - residual target for the xi root solver, and the relative
//                bisection-interval width it stops at;
//   escalated_guard - second-tier band used after extended-precision
//                re-evaluation of an AMBIGUOUS comparison;
//   max_bisect - hard cap on bisection iterations.
struct ToleranceConfig {
    double cmp_guard = 1e-9;
    double solver_tol = 1e-13;
    double escalated_guard = 1e-14;
    int max_bisect = 200;

    void validate() const;
};

// lambda(p, alpha) = 1 + 1/(p + p^2 + ... + p^(alpha+1)), the exponent in
// the characteristic equation xi^lambda = xi + log p. Decreasing in both
// arguments; always in (1, 1.5]. Computed from the geometric sum (exact
// integer arithmetic while p^(alpha+2) fits, real arithmetic beyond).
double lambda_exponent(std::uint64_t p, unsigned alpha);

// 1/(p + ... + p^(alpha+1)) = lambda - 1, carried separately because for
// large alpha the difference underflows inside a stored lambda.
double inv_power_sum(std::uint64_t p, unsigned alpha);

// Root brackets: alpha = 0 -> (p - log p, p);
// alpha >= 1 -> (p^(alpha+1)/(alpha+1), 3 p^(alpha+1)/(alpha+1)).
// The root is strictly interior. Throws std::range_error once the bracket
// exceeds double range.
std::pair<double, double> xi_bounds(std::uint64_t p, unsigned alpha);

// Positive root of tau = A + B*sqrt(tau):
// tau* = A + B(B + sqrt(B^2 + 4A))/2. Requires A > 0, B >= 0.
// Any sequence with a_{n+1} <= A + B sqrt(a_n) and a_0 <= tau* stays <= tau*.
double tau_star(double a, double b);

struct XiValue {
    double value = 0;          // the root xi(p, alpha)
    long double value_ld = 0;  // extended-precision refinement of the same root
    double bracket_lo = 0;
    double bracket_hi = 0;
    double residual = 0;       // |monotone working form| at value
    int iterations = 0;        // bisection steps taken
};

// Memoized solver for xi(p, alpha): the unique positive root of
//   log xi = (p + p^2 + ... + p^(alpha+1)) * log(1 + log p / xi),
// equivalently xi^lambda = xi + log p. Strictly increasing in p and alpha.
// Solved by bisection on the monotone form down to solver_tol relative
// interval width, polished by at most three bracket-guarded Newton steps on
// xi^lambda - xi - log p. Lookup is memoized; concurrent readers are safe and
// insertion is internally synchronized (recomputation races are harmless
// because the solve is deterministic).
class XiTable {
public:
    explicit XiTable(ToleranceConfig tol = {});

    const ToleranceConfig& tolerance() const { return tol_; }

    double root(std::uint64_t p, unsigned alpha) const;
    long double root_ld(std::uint64_t p, unsigned alpha) const;
    XiValue value(std::uint64_t p, unsigned alpha) const;

    std::size_t size() const;

private:
    const XiValue& lookup(std::uint64_t p, unsigned alpha) const;

    ToleranceConfig tol_;
    mutable std::map<std::pair<std::uint64_t, unsigned>, XiValue> memo_;
    mutable std::shared_mutex mutex_;
};

} // namespace gronwall
