#include "gronwall/number.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace gronwall {

std::uint64_t Factorization::largest_prime() const {
    if (factors.empty()) throw std::domain_error("largest_prime: empty factorization");
    return factors.back().prime;
}

std::uint32_t Factorization::exponent_of(std::uint64_t p) const {
    for (const auto& pp : factors)
        if (pp.prime == p) return pp.exponent;
    return 0;
}

void Factorization::validate() const {
    std::uint64_t last = 1;
    for (const auto& pp : factors) {
        if (pp.prime <= last)
            throw std::domain_error("factorization primes must be ascending and distinct");
        if (pp.exponent == 0)
            throw std::domain_error("factorization exponents must be >= 1");
        last = pp.prime;
    }
}

double log_n(const Factorization& f) {
    double sum = 0.0, comp = 0.0;
    for (const auto& pp : f.factors) {
        double term = pp.exponent * std::log(static_cast<double>(pp.prime)) - comp;
        double next = sum + term;
        comp = (next - sum) - term;
        sum = next;
    }
    return sum;
}

long double log_n_ld(const Factorization& f) {
    long double sum = 0.0L;
    for (const auto& pp : f.factors)
        sum += static_cast<long double>(pp.exponent) * logl(static_cast<long double>(pp.prime));
    return sum;
}

double sigma_over_n(const Factorization& f) {
    double prod = 1.0;
    // Ascending primes puts the largest factors first.
    for (const auto& pp : f.factors) {
        double dp = static_cast<double>(pp.prime);
        double top = std::pow(dp, static_cast<double>(pp.exponent) + 1.0);
        if (top < 9.2e18) {
            // exact integers: (p^(a+1) - 1) / (p^a (p - 1))
            std::uint64_t t = 1;
            for (std::uint32_t i = 0; i <= pp.exponent; ++i) t *= pp.prime;
            prod *= static_cast<double>(t - 1) /
                    (static_cast<double>(t / pp.prime) * static_cast<double>(pp.prime - 1));
        } else {
            prod *= (1.0 - 1.0 / top) / (1.0 - 1.0 / dp);
        }
    }
    return prod;
}

GronwallValue gronwall_g(const Factorization& f) {
    f.validate();
    GronwallValue v;
    v.log_n = log_n(f);
    if (!(v.log_n > 1.0))
        throw std::domain_error("G undefined for N <= e (log log N <= 0)");
    v.sigma_ratio = sigma_over_n(f);
    v.g = v.sigma_ratio / std::log(v.log_n);
    return v;
}

Factorization multiply_prime(Factorization f, std::uint64_t p) {
    auto it = std::lower_bound(f.factors.begin(), f.factors.end(), p,
                               [](const PrimePower& pp, std::uint64_t q) { return pp.prime < q; });
    if (it != f.factors.end() && it->prime == p)
        ++it->exponent;
    else
        f.factors.insert(it, PrimePower{p, 1});
    return f;
}

Factorization divide_prime(Factorization f, std::uint64_t q) {
    auto it = std::lower_bound(f.factors.begin(), f.factors.end(), q,
                               [](const PrimePower& pp, std::uint64_t p) { return pp.prime < p; });
    if (it == f.factors.end() || it->prime != q)
        throw std::domain_error("divide_prime: " + std::to_string(q) + " does not divide N");
    if (--it->exponent == 0) f.factors.erase(it);
    return f;
}

namespace {

// Little-endian base-1e9 accumulator; only needs multiply-by-word.
struct DecimalAcc {
    static constexpr std::uint64_t kBase = 1'000'000'000ULL;
    std::vector<std::uint64_t> limbs{1};

    void mul_word(std::uint64_t m) {
        std::uint64_t carry = 0;
        for (auto& limb : limbs) {
            std::uint64_t v = limb * m + carry;  // m <= 1e9 keeps this under 2^64
            limb = v % kBase;
            carry = v / kBase;
        }
        while (carry) {
            limbs.push_back(carry % kBase);
            carry /= kBase;
        }
    }

    void mul_power(std::uint64_t p, std::uint32_t e) {
        // Group factors into words <= 1e9 to cut passes over the limbs.
        std::uint64_t word = 1;
        for (std::uint32_t i = 0; i < e; ++i) {
            if (word > (kBase - 1) / p) { mul_word(word); word = 1; }
            word *= p;
        }
        if (word > 1) mul_word(word);
    }

    std::string str() const {
        std::string out = std::to_string(limbs.back());
        char buf[10];
        for (auto i = limbs.size() - 1; i-- > 0;) {
            std::snprintf(buf, sizeof buf, "%09llu",
                          static_cast<unsigned long long>(limbs[i]));
            out += buf;
        }
        return out;
    }
};

double log10_estimate(const Factorization& f) {
    double s = 0;
    for (const auto& pp : f.factors)
        s += pp.exponent * std::log10(static_cast<double>(pp.prime));
    return s;
}

} // namespace

std::string to_decimal_string(const Factorization& f) {
    f.validate();
    if (log10_estimate(f) > 420.0)
        throw std::range_error("to_decimal_string: value beyond the 10^400 support cap");
    DecimalAcc acc;
    for (const auto& pp : f.factors) acc.mul_power(pp.prime, pp.exponent);
    return acc.str();
}

std::string to_scientific(const Factorization& f, int significant) {
    if (significant < 1) throw std::domain_error("to_scientific: need >= 1 digit");
    std::string digits = to_decimal_string(f);
    std::string lead = digits.substr(0, static_cast<std::size_t>(significant));
    while (lead.size() < static_cast<std::size_t>(significant)) lead += '0';
    std::string out;
    out += lead[0];
    if (significant > 1) {
        out += '.';
        out += lead.substr(1);
    }
    out += 'e';
    out += std::to_string(digits.size() - 1);
    return out;
}

namespace {

Factorization factor_u64(std::uint64_t n, const PrimeTable& table) {
    Factorization f;
    for (std::uint64_t p : table.primes) {
        if (p * p > n) break;
        if (n % p) continue;
        std::uint32_t e = 0;
        while (n % p == 0) { n /= p; ++e; }
        f.factors.push_back({p, e});
    }
    if (n > 1) {
        if (n > table.limit)
            throw std::range_error("parse_number: remainder " + std::to_string(n) +
                                   " has no prime factor within the table (limit " +
                                   std::to_string(table.limit) + "); raise the sieve limit");
        f.factors.push_back({n, 1});
    }
    return f;
}

} // namespace

Factorization parse_number(std::string_view text, const PrimeTable& table) {
    // Tokenize on whitespace, ',', '*', and the UTF-8 middle dot.
    std::vector<std::string> tokens;
    std::string cur;
    for (std::size_t i = 0; i < text.size(); ++i) {
        unsigned char c = text[i];
        bool sep = std::isspace(c) || c == ',' || c == '*';
        if (c == 0xC2 && i + 1 < text.size() &&
            static_cast<unsigned char>(text[i + 1]) == 0xB7) {
            sep = true;
            ++i;
        }
        if (sep) {
            if (!cur.empty()) tokens.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += static_cast<char>(c);
        }
    }
    if (!cur.empty()) tokens.push_back(std::move(cur));
    if (tokens.empty())
        throw std::invalid_argument("parse_number: empty input");

    auto parse_u64 = [](std::string_view s, const char* what) {
        std::uint64_t v = 0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || ptr != s.data() + s.size())
            throw std::invalid_argument(std::string("parse_number: bad ") + what + " '" +
                                        std::string(s) + "'");
        return v;
    };

    if (tokens.size() == 1 && tokens[0].find('^') == std::string::npos) {
        // Plain decimal.
        std::uint64_t n = parse_u64(tokens[0], "integer");
        if (n < 2) throw std::domain_error("parse_number: need an integer >= 2");
        if (n > 9223372036854775807ULL)
            throw std::range_error("parse_number: decimals must be < 2^63; "
                                   "use the factor-list form for larger values");
        return factor_u64(n, table);
    }

    Factorization f;
    for (const auto& tok : tokens) {
        auto caret = tok.find('^');
        std::uint64_t p = parse_u64(std::string_view(tok).substr(0, caret), "prime");
        std::uint64_t e = 1;
        if (caret != std::string::npos) {
            e = parse_u64(std::string_view(tok).substr(caret + 1), "exponent");
            if (e == 0 || e > 0xFFFFFFFFULL)
                throw std::invalid_argument("parse_number: exponent out of range in '" + tok + "'");
        }
        if (p > table.limit)
            throw std::range_error("parse_number: prime " + std::to_string(p) +
                                   " beyond table limit " + std::to_string(table.limit));
        if (!table.contains(p))
            throw std::invalid_argument("parse_number: " + std::to_string(p) + " is not prime");
        f.factors.push_back({p, static_cast<std::uint32_t>(e)});
    }
    std::sort(f.factors.begin(), f.factors.end(),
              [](const PrimePower& a, const PrimePower& b) { return a.prime < b.prime; });
    // Merge duplicates.
    std::vector<PrimePower> merged;
    for (const auto& pp : f.factors) {
        if (!merged.empty() && merged.back().prime == pp.prime)
            merged.back().exponent += pp.exponent;
        else
            merged.push_back(pp);
    }
    f.factors = std::move(merged);
    f.validate();
    return f;
}

} // namespace gronwall
