#include "gronwall/xi.hpp"

#include <cassert>
#include <cmath>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <string>

namespace gronwall {

void ToleranceConfig::validate() const {
    if (!(cmp_guard > 0) || !(solver_tol > 0) || !(escalated_guard > 0))
        throw std::invalid_argument("tolerances must be positive");
    if (cmp_guard < solver_tol)
        throw std::invalid_argument("cmp_guard must be >= solver_tol");
    if (max_bisect < 8)
        throw std::invalid_argument("max_bisect too small");
}

namespace {

// p + p^2 + ... + p^(alpha+1), exact while it fits, else in doubles.
double power_sum(std::uint64_t p, unsigned alpha) {
    const std::uint64_t cap = std::uint64_t(1) << 62;
    std::uint64_t pw = p;
    std::uint64_t sum = 0;
    bool exact = true;
    for (unsigned i = 0; i <= alpha; ++i) {
        if (pw >= cap - sum) { exact = false; break; }
        sum += pw;
        if (i < alpha && pw > cap / p) { exact = false; break; }
        if (i < alpha) pw *= p;
    }
    if (exact) return static_cast<double>(sum);
    double dp = static_cast<double>(p);
    double top = std::pow(dp, static_cast<double>(alpha) + 1.0);
    if (!std::isfinite(top))
        throw std::range_error("power sum exceeds double range");
    // p (p^(a+1) - 1)/(p - 1); the -1 is below double resolution here.
    return dp * top / (dp - 1.0);
}

} // namespace

double lambda_exponent(std::uint64_t p, unsigned alpha) {
    if (p < 2) throw std::domain_error("lambda_exponent: p must be prime >= 2");
    return 1.0 + 1.0 / power_sum(p, alpha);
}

double inv_power_sum(std::uint64_t p, unsigned alpha) {
    if (p < 2) throw std::domain_error("inv_power_sum: p must be prime >= 2");
    return 1.0 / power_sum(p, alpha);
}

std::pair<double, double> xi_bounds(std::uint64_t p, unsigned alpha) {
    if (p < 2) throw std::domain_error("xi_bounds: p must be prime >= 2");
    double dp = static_cast<double>(p);
    if (alpha == 0) return {dp - std::log(dp), dp};
    double top = std::pow(dp, static_cast<double>(alpha) + 1.0);
    double lo = top / (alpha + 1.0);
    double hi = 3.0 * top / (alpha + 1.0);
    if (!std::isfinite(hi))
        throw std::range_error("xi_bounds: bracket exceeds double range for p=" +
                               std::to_string(p) + " alpha=" + std::to_string(alpha));
    return {lo, hi};
}

double tau_star(double a, double b) {
    if (!(a > 0)) throw std::domain_error("tau_star: A must be positive");
    if (!(b >= 0)) throw std::domain_error("tau_star: B must be nonnegative");
    return a + 0.5 * b * (b + std::sqrt(b * b + 4.0 * a));
}

namespace {

// Monotone working form, common to both branches:
//   h(x) = log x - S * log1p(log p / x),  S = p + ... + p^(alpha+1).
// Strictly increasing, negative left of the root, positive right of it.
double mono_form(double x, double s, double logp) {
    return std::log(x) - s * std::log1p(logp / x);
}

// xi^lambda - xi - log p and its derivative, in the cancellation-free form
//   xi * expm1(u) - log p,  u = (lambda - 1) log xi.
struct CharEq {
    double inv_s;  // lambda - 1
    double logp;
    double f(double x) const {
        double u = inv_s * std::log(x);
        return x * std::expm1(u) - logp;
    }
    double df(double x) const {
        double u = inv_s * std::log(x);
        return std::expm1(u) + inv_s * std::exp(u);
    }
};

} // namespace

XiTable::XiTable(ToleranceConfig tol) : tol_(tol) { tol_.validate(); }

std::size_t XiTable::size() const {
    std::shared_lock lk(mutex_);
    return memo_.size();
}

const XiValue& XiTable::lookup(std::uint64_t p, unsigned alpha) const {
    const auto key = std::make_pair(p, alpha);
    {
        std::shared_lock lk(mutex_);
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
    }

    const double logp = std::log(static_cast<double>(p));
    const double s = power_sum(p, alpha);
    auto [lo, hi] = xi_bounds(p, alpha);

    XiValue xv;
    xv.bracket_lo = lo;
    xv.bracket_hi = hi;

    // Bisection until the interval is narrower than solver_tol * max(1, xi).
    int iters = 0;
    while (hi - lo > tol_.solver_tol * std::max(1.0, lo) && iters < tol_.max_bisect) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;  // interval at double resolution
        (mono_form(mid, s, logp) < 0.0 ? lo : hi) = mid;
        ++iters;
    }
    xv.iterations = iters;

    // Up to three Newton polish steps on the characteristic equation,
    // rejected if they would leave the bracket.
    CharEq eq{inv_power_sum(p, alpha), logp};
    double x = 0.5 * (lo + hi);
    for (int i = 0; i < 3; ++i) {
        double d = eq.df(x);
        if (d <= 0) break;
        double nx = x - eq.f(x) / d;
        if (!(nx > lo && nx < hi)) break;
        x = nx;
    }
    xv.value = x;
    xv.residual = std::fabs(mono_form(x, s, logp));
    if (alpha == 0) xv.residual /= static_cast<double>(p);

    // Extended-precision refinement for the escalation tier: two Newton
    // steps in long double starting from the double root.
    {
        long double xl = x;
        long double inv_sl = static_cast<long double>(eq.inv_s);
        long double logpl = logl(static_cast<long double>(p));
        for (int i = 0; i < 2; ++i) {
            long double u = inv_sl * logl(xl);
            long double f = xl * expm1l(u) - logpl;
            long double d = expm1l(u) + inv_sl * expl(u);
            if (d <= 0) break;
            long double nx = xl - f / d;
            if (!(nx > xv.bracket_lo && nx < xv.bracket_hi)) break;
            xl = nx;
        }
        xv.value_ld = xl;
    }

    std::unique_lock lk(mutex_);
    return memo_.try_emplace(key, xv).first->second;
}

double XiTable::root(std::uint64_t p, unsigned alpha) const {
    return lookup(p, alpha).value;
}

long double XiTable::root_ld(std::uint64_t p, unsigned alpha) const {
    return lookup(p, alpha).value_ld;
}

XiValue XiTable::value(std::uint64_t p, unsigned alpha) const {
    return lookup(p, alpha);
}

} // namespace gronwall
