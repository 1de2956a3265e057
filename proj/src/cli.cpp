#include "gronwall/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "json.hpp"

#include "gronwall/constructor.hpp"
#include "gronwall/errors.hpp"
#include "gronwall/improvability.hpp"
#include "gronwall/number.hpp"
#include "gronwall/oracle.hpp"
#include "gronwall/primes.hpp"
#include "gronwall/xi.hpp"

namespace gronwall::cli {

namespace {

using nlohmann::json;

constexpr const char* kSchemaVersion = "1.0";

struct GlobalOpts {
    std::string format = "json";
    std::uint64_t sieve_limit = 2000000;
    double guard = 1e-9;
    double tol = 1e-13;

    ToleranceConfig tolerance() const {
        ToleranceConfig t;
        t.cmp_guard = guard;
        t.solver_tol = tol;
        t.validate();
        return t;
    }
};

json tolerances_json(const ToleranceConfig& t) {
    return {{"cmp_guard", t.cmp_guard},
            {"solver_tol", t.solver_tol},
            {"escalated_guard", t.escalated_guard},
            {"max_bisect", t.max_bisect}};
}

json factors_json(const Factorization& f) {
    json arr = json::array();
    for (const PrimePower& pp : f.factors) arr.push_back({pp.prime, pp.exponent});
    return arr;
}

// Truncation toward zero to a fixed number of decimals ("1.7374.." style).
std::string trunc_decimals(double v, int decimals) {
    long double scale = powl(10.0L, decimals);
    long double t = truncl(static_cast<long double>(v) * scale) / scale;
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(decimals);
    os << static_cast<double>(t);
    return os.str();
}

// ---- output formatting ----------------------------------------------------

std::string csv_escape(std::string s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string csv_cell(const json& v) {
    if (v.is_string()) return csv_escape(v.get<std::string>());
    return csv_escape(v.dump());
}

void emit_csv(std::ostream& out, const json& payload) {
    json rows = payload.is_array() ? payload : json::array({payload});
    if (rows.empty()) return;
    // Union of keys across rows, alphabetical, keeps every record well-formed.
    std::vector<std::string> keys;
    for (const json& row : rows)
        for (auto it = row.begin(); it != row.end(); ++it)
            if (std::find(keys.begin(), keys.end(), it.key()) == keys.end())
                keys.push_back(it.key());
    std::sort(keys.begin(), keys.end());
    for (std::size_t i = 0; i < keys.size(); ++i) out << (i ? "," : "") << csv_escape(keys[i]);
    out << '\n';
    for (const json& row : rows) {
        for (std::size_t i = 0; i < keys.size(); ++i) {
            if (i) out << ',';
            if (row.contains(keys[i])) out << csv_cell(row.at(keys[i]));
        }
        out << '\n';
    }
}

void emit_text(std::ostream& out, const json& payload, int indent = 0) {
    const std::string pad(static_cast<std::size_t>(indent), ' ');
    if (payload.is_object()) {
        for (auto it = payload.begin(); it != payload.end(); ++it) {
            if (it.value().is_object() || it.value().is_array()) {
                out << pad << it.key() << ":\n";
                emit_text(out, it.value(), indent + 2);
            } else {
                out << pad << it.key() << " = "
                    << (it.value().is_string() ? it.value().get<std::string>()
                                               : it.value().dump())
                    << '\n';
            }
        }
    } else if (payload.is_array()) {
        for (const json& item : payload) {
            if (item.is_object() || item.is_array()) {
                out << pad << "-\n";
                emit_text(out, item, indent + 2);
            } else {
                out << pad << "- "
                    << (item.is_string() ? item.get<std::string>() : item.dump()) << '\n';
            }
        }
    } else {
        out << pad << payload.dump() << '\n';
    }
}

void emit(std::ostream& out, const GlobalOpts& g, const ToleranceConfig& tol,
          const std::string& command, const json& payload) {
    if (g.format == "csv") {
        emit_csv(out, payload);
        return;
    }
    if (g.format == "text") {
        out << "command: " << command << '\n';
        emit_text(out, payload);
        return;
    }
    json doc = {{"schema_version", kSchemaVersion},
                {"command", command},
                {"tolerances", tolerances_json(tol)},
                {"payload", payload}};
    out << doc.dump(2) << '\n';
}

// ---- shared record builders ------------------------------------------------

json record_json(const U1Record& rec, bool mark_unverified) {
    json r = {{"m", rec.m},
              {"k", rec.k},
              {"factors", factors_json(rec.v)},
              {"decimal_or_sci", rec.decimal_or_sci},
              {"log_n", rec.log_n},
              {"g", rec.g},
              {"c", rec.c},
              {"filter", to_string(rec.filter)}};
    if (mark_unverified) r["unverified"] = true;
    return r;
}

json failures_json(const U1Report& rep) {
    json arr = json::array();
    for (const U1Failure& f : rep.failures)
        arr.push_back({{"tag", to_string(f.tag)}, {"prime", f.prime}, {"margin", f.margin}});
    return arr;
}

// ---- reference table of the six smallest members ---------------------------

struct GoldenRow {
    std::size_t k;
    std::vector<std::uint32_t> head;  // leading exponents; tail is all ones
    const char* g_trunc;
    int g_decimals;
    const char* c_trunc;
    const char* rendering;
};

const std::vector<GoldenRow>& golden_rows() {
    static const std::vector<GoldenRow> rows = {
        {9, {5, 3, 2}, "1.7374", 4, "1.37", "160626866400"},
        {11, {6, 3, 2, 2}, "1.7368", 4, "1.65", "2.02e15"},
        {16, {7, 4, 2, 2}, "1.7434", 4, "1.51", "1.97e24"},
        {34, {9, 5, 3, 2, 2, 2}, "1.7582", 4, "1.70", "5.19e63"},
        {99, {11, 6, 4, 3, 2, 2, 2, 2, 2, 2}, "1.770728", 6, "1.67", "4.08e233"},
        {101, {11, 6, 4, 3, 2, 2, 2, 2, 2, 2, 2}, "1.770765", 6, "1.78", "3.75e240"},
    };
    return rows;
}

std::vector<std::uint32_t> golden_exponents(const GoldenRow& row) {
    std::vector<std::uint32_t> e(row.k, 1);
    std::copy(row.head.begin(), row.head.end(), e.begin());
    return e;
}

// ---- command actions --------------------------------------------------------

struct Context {
    const GlobalOpts& g;
    std::ostream& out;
    std::ostream& err;

    PrimeTable make_table(std::uint64_t limit = 0) const {
        return sieve_upto(limit ? limit : g.sieve_limit);
    }
    XiTable make_xi() const { return XiTable(g.tolerance()); }
};

int do_xi(const Context& ctx, std::uint64_t p, unsigned alpha) {
    XiTable xi = ctx.make_xi();
    XiValue v = xi.value(p, alpha);
    json payload = {{"p", p},
                    {"alpha", alpha},
                    {"lambda", lambda_exponent(p, alpha)},
                    {"value", v.value},
                    {"bracket_lo", v.bracket_lo},
                    {"bracket_hi", v.bracket_hi},
                    {"residual", v.residual},
                    {"iterations", v.iterations}};
    emit(ctx.out, ctx.g, xi.tolerance(), "xi", payload);
    return 0;
}

int do_check(const Context& ctx, const std::string& input) {
    PrimeTable table = ctx.make_table();
    XiTable xi = ctx.make_xi();
    Factorization f = parse_number(input, table);
    GronwallValue gv = gronwall_g(f);
    U1Report rep = is_u1(f, table, xi);
    json payload = {{"input", input},
                    {"n", render_value(f)},
                    {"factors", factors_json(f)},
                    {"log_n", gv.log_n},
                    {"sigma_ratio", gv.sigma_ratio},
                    {"g", gv.g},
                    {"member", to_string(rep.member.verdict)},
                    {"margin", rep.member.margin},
                    {"k", rep.k},
                    {"failures", failures_json(rep)}};
    emit(ctx.out, ctx.g, xi.tolerance(), "check", payload);
    return 0;
}

json construct_payload(const ConstructionTrace& tr, bool with_trace) {
    json payload = {{"k", tr.k},
                    {"factors", factors_json(tr.v)},
                    {"decimal_or_sci", render_value(tr.v)},
                    {"log_n", tr.log_v},
                    {"g", tr.g.g},
                    {"c", tr.c},
                    {"filter", to_string(tr.filter.verdict)},
                    {"filter_margin", tr.filter.margin},
                    {"s0", tr.fixed.s0},
                    {"s_star", tr.junction.s_star},
                    {"guard_hit", tr.guard_hit}};
    if (with_trace) {
        json iterates = json::array();
        for (const YIterate& it : tr.fixed.iterates)
            iterates.push_back({{"s", it.s}, {"exponents", it.exponents}, {"log_y", it.log_y}});
        json esets = json::array();
        for (const auto& e : tr.junction.e_sets) esets.push_back(e);
        payload["trace"] = {{"iterates", iterates},
                            {"junction_sets", esets},
                            {"floored", tr.fixed.floored}};
    }
    return payload;
}

int do_construct(const Context& ctx, std::size_t k, bool with_trace) {
    PrimeTable table = ctx.make_table();
    XiTable xi = ctx.make_xi();
    ConstructionTrace tr = construct_vk(k, table, xi);
    emit(ctx.out, ctx.g, xi.tolerance(), "construct", construct_payload(tr, with_trace));
    return 0;
}

int do_enumerate(const Context& ctx, std::size_t k_max) {
    PrimeTable table = ctx.make_table();
    XiTable xi = ctx.make_xi();
    U1Enumeration en = enumerate_u1(k_max, table, xi);

    // Members and flagged records merged in k order; entries beyond the
    // built-in reference table (k > 101) are marked unverified.
    std::vector<const U1Record*> rows;
    for (const U1Record& r : en.records) rows.push_back(&r);
    for (const U1Record& r : en.flagged) rows.push_back(&r);
    std::sort(rows.begin(), rows.end(),
              [](const U1Record* a, const U1Record* b) { return a->k < b->k; });
    json payload = json::array();
    for (const U1Record* r : rows) payload.push_back(record_json(*r, r->k > 101));

    ctx.err << "argmax G(V_k) over k in [4, " << k_max << "]: k=" << en.argmax_g_k
            << ", G=" << en.argmax_g << '\n';
    emit(ctx.out, ctx.g, xi.tolerance(), "enumerate", payload);
    return 0;
}

int do_table1(const Context& ctx, bool check) {
    PrimeTable table = ctx.make_table();
    XiTable xi = ctx.make_xi();
    json payload = json::array();
    bool all_match = true;
    int m = 0;
    for (const GoldenRow& gold : golden_rows()) {
        ConstructionTrace tr = construct_vk(gold.k, table, xi);
        ++m;
        json row = {{"m", m},
                    {"k", gold.k},
                    {"factors", factors_json(tr.v)},
                    {"decimal_or_sci", render_value(tr.v)},
                    {"log_n", tr.log_v},
                    {"g", tr.g.g},
                    {"g_truncated", trunc_decimals(tr.g.g, gold.g_decimals)},
                    {"c", tr.c},
                    {"c_truncated", trunc_decimals(tr.c, 2)},
                    {"filter", to_string(tr.filter.verdict)}};
        if (check) {
            std::vector<std::uint32_t> expected = golden_exponents(gold);
            bool match = tr.junction.exponents == expected &&
                         row["g_truncated"] == gold.g_trunc &&
                         row["c_truncated"] == gold.c_trunc &&
                         row["decimal_or_sci"] == gold.rendering &&
                         tr.filter.verdict == Tri::True;
            row["expected"] = {{"g_truncated", gold.g_trunc},
                               {"c_truncated", gold.c_trunc},
                               {"decimal_or_sci", gold.rendering}};
            row["match"] = match;
            all_match = all_match && match;
        }
        payload.push_back(row);
    }
    emit(ctx.out, ctx.g, xi.tolerance(), "table1", payload);
    if (check && !all_match) {
        ctx.err << "table1: computed rows deviate from the reference table\n";
        return 3;
    }
    return 0;
}

int do_theta(const Context& ctx, double x) {
    PrimeTable table = ctx.make_table();
    json payload = {{"x", x}, {"theta", theta(table, x)}, {"psi", psi(table, x)}};
    emit(ctx.out, ctx.g, ctx.g.tolerance(), "theta", payload);
    return 0;
}

int do_sweep(const Context& ctx, std::uint64_t n_max, std::uint64_t p_max) {
    PrimeTable table = ctx.make_table();
    XiTable xi = ctx.make_xi();
    oracle::SigmaSieve sieve = oracle::sigma_sieve(n_max * p_max);
    oracle::SweepResult res = oracle::sweep_lemma_equivalence(n_max, p_max, sieve, xi);
    json mism = json::array();
    for (std::size_t i = 0; i < res.mismatches.size() && i < 100; ++i) {
        const oracle::SweepMismatch& mm = res.mismatches[i];
        mism.push_back({{"n", mm.n},
                        {"p", mm.p},
                        {"kind", mm.division ? "divide" : "multiply"},
                        {"verdict", to_string(mm.verdict)},
                        {"direct_improves", mm.direct_improves}});
    }
    json payload = {{"n_max", n_max},
                    {"p_max", p_max},
                    {"mult_checked", res.mult_checked},
                    {"div_checked", res.div_checked},
                    {"ambiguous", res.ambiguous},
                    {"mismatch_count", res.mismatches.size()},
                    {"mismatches", mism}};
    emit(ctx.out, ctx.g, xi.tolerance(), "oracle sweep", payload);
    if (!res.mismatches.empty()) {
        ctx.err << "oracle sweep: " << res.mismatches.size()
                << " disagreement(s) between boundary tests and direct G\n";
        return 3;
    }
    return 0;
}

int do_nu(const Context& ctx, bool scan_min) {
    PrimeTable table = ctx.make_table();
    XiTable xi = ctx.make_xi();
    oracle::NuReport rep = oracle::verify_nu(nullptr, scan_min, table, xi);
    json divisors = json::array();
    for (const auto& dc : rep.divisors)
        divisors.push_back({{"q", dc.q},
                            {"g_without", dc.g_without},
                            {"worse", dc.worse},
                            {"predicate", to_string(dc.predicate)}});
    json payload = {{"nu", to_decimal_string(rep.nu)},
                    {"factors", factors_json(rep.nu)},
                    {"g_nu", rep.g_nu},
                    {"g_19nu", rep.g_19nu},
                    {"divisors", divisors},
                    {"mult19_improves", rep.mult19_improves},
                    {"mult19_predicate", to_string(rep.mult19_predicate)},
                    {"member", to_string(rep.membership.member.verdict)},
                    {"witness19", rep.witness19},
                    {"failures", failures_json(rep.membership)},
                    {"scan_ran", rep.scan_ran},
                    {"scan_first_hit", rep.scan_first_hit},
                    {"ok", rep.ok}};
    emit(ctx.out, ctx.g, xi.tolerance(), "oracle nu", payload);
    if (!rep.ok) {
        ctx.err << "oracle nu: expectations not met\n";
        return 3;
    }
    return 0;
}

int do_prop3(const Context& ctx, std::size_t from, std::size_t to) {
    if (from < 5 || to < from)
        throw std::invalid_argument("prop3: need 5 <= from <= to");
    PrimeTable table = ctx.make_table();
    XiTable xi = ctx.make_xi();
    json payload = json::array();
    for (std::size_t n = from; n <= to; ++n) {
        ConstructionTrace tr = construct_vk(n, table, xi);
        const double pn = static_cast<double>(nth_prime(table, n));
        const bool mult = prop3_mult(n, tr, table);
        const bool div = prop3_div(n, tr, table);
        payload.push_back({{"n", n},
                           {"p_n", nth_prime(table, n)},
                           {"p_next", nth_prime(table, n + 1)},
                           {"theta_p_n", theta(table, pn)},
                           {"mult_threshold", theta(table, pn) + 0.5 * std::sqrt(pn)},
                           {"mult_fires", mult},
                           {"div_threshold", theta(table, pn) + 4.0 * std::sqrt(pn)},
                           {"div_fires", div}});
    }
    emit(ctx.out, ctx.g, xi.tolerance(), "prop3", payload);
    return 0;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    GlobalOpts g;
    CLI::App app{"one-step unimprovable numbers: boundary roots, membership tests, "
                 "constructions, and brute-force cross-checks"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand
    app.add_option("--format", g.format, "output format")
        ->check(CLI::IsMember({"json", "csv", "text"}))
        ->capture_default_str();
    app.add_option("--sieve-limit", g.sieve_limit, "prime table upper bound")
        ->capture_default_str();
    app.add_option("--guard", g.guard, "comparison guard band")->capture_default_str();
    app.add_option("--tol", g.tol, "root solver tolerance")->capture_default_str();

    std::function<int(const Context&)> action;

    auto xi_p = std::make_shared<std::uint64_t>(2);
    auto xi_alpha = std::make_shared<unsigned>(0);
    CLI::App* xi_cmd = app.add_subcommand("xi", "solve the boundary equation for xi(p, alpha)");
    xi_cmd->add_option("--p", *xi_p, "prime")->required();
    xi_cmd->add_option("--alpha", *xi_alpha, "exponent of p in N");
    xi_cmd->callback([&action, xi_p, xi_alpha] {
        action = [xi_p, xi_alpha](const Context& c) { return do_xi(c, *xi_p, *xi_alpha); };
    });

    auto check_pos = std::make_shared<std::string>();
    auto check_fac = std::make_shared<std::string>();
    CLI::App* check_cmd =
        app.add_subcommand("check", "one-step unimprovability report for a number");
    check_cmd->add_option("number", *check_pos, "decimal value or factor list");
    check_cmd->add_option("--factors", *check_fac, "factor list, e.g. \"2^4*3^3*5^2*7\"");
    check_cmd->callback([&action, check_pos, check_fac] {
        action = [check_pos, check_fac](const Context& c) {
            if (check_pos->empty() == check_fac->empty())
                throw std::invalid_argument(
                    "check: provide exactly one of <number> or --factors");
            return do_check(c, check_pos->empty() ? *check_fac : *check_pos);
        };
    });

    auto con_k = std::make_shared<std::size_t>(0);
    auto con_trace = std::make_shared<bool>(false);
    CLI::App* con_cmd = app.add_subcommand("construct", "build the candidate V_k");
    con_cmd->add_option("--k", *con_k, "number of primes")->required();
    con_cmd->add_flag("--trace", *con_trace, "include iterates and junction sets");
    con_cmd->callback([&action, con_k, con_trace] {
        action = [con_k, con_trace](const Context& c) {
            return do_construct(c, *con_k, *con_trace);
        };
    });

    auto enum_kmax = std::make_shared<std::size_t>(101);
    CLI::App* enum_cmd = app.add_subcommand("enumerate", "members among V_4..V_kmax");
    enum_cmd->add_option("--kmax", *enum_kmax, "largest k to construct")
        ->capture_default_str();
    enum_cmd->callback([&action, enum_kmax] {
        action = [enum_kmax](const Context& c) { return do_enumerate(c, *enum_kmax); };
    });

    auto t1_check = std::make_shared<bool>(false);
    CLI::App* t1_cmd =
        app.add_subcommand("table1", "the six smallest members (built-in reference table)");
    t1_cmd->add_flag("--check", *t1_check, "compare against golden data; exit 3 on mismatch");
    t1_cmd->callback([&action, t1_check] {
        action = [t1_check](const Context& c) { return do_table1(c, *t1_check); };
    });

    auto theta_x = std::make_shared<double>(0);
    CLI::App* theta_cmd = app.add_subcommand("theta", "Chebyshev theta and psi at x");
    theta_cmd->add_option("--x", *theta_x, "evaluation point")->required();
    theta_cmd->callback([&action, theta_x] {
        action = [theta_x](const Context& c) { return do_theta(c, *theta_x); };
    });

    CLI::App* oracle_cmd = app.add_subcommand("oracle", "brute-force cross-checks");
    oracle_cmd->require_subcommand(1);
    auto sw_nmax = std::make_shared<std::uint64_t>(100000);
    auto sw_pmax = std::make_shared<std::uint64_t>(31);
    CLI::App* sweep_cmd =
        oracle_cmd->add_subcommand("sweep", "boundary tests vs direct G comparisons");
    sweep_cmd->add_option("--nmax", *sw_nmax, "largest N")->capture_default_str();
    sweep_cmd->add_option("--pmax", *sw_pmax, "largest prime")->capture_default_str();
    sweep_cmd->callback([&action, sw_nmax, sw_pmax] {
        action = [sw_nmax, sw_pmax](const Context& c) {
            return do_sweep(c, *sw_nmax, *sw_pmax);
        };
    });
    auto nu_scan = std::make_shared<bool>(false);
    CLI::App* nu_cmd = oracle_cmd->add_subcommand("nu", "checks on nu = 183783600");
    nu_cmd->add_flag("--scan-min", *nu_scan, "scan [5, nu] for an earlier instance (minutes)");
    nu_cmd->callback([&action, nu_scan] {
        action = [nu_scan](const Context& c) { return do_nu(c, *nu_scan); };
    });

    auto p3_from = std::make_shared<std::size_t>(5);
    auto p3_to = std::make_shared<std::size_t>(200);
    CLI::App* p3_cmd = app.add_subcommand("prop3", "prime-gap predicates along V_n");
    p3_cmd->add_option("--from", *p3_from, "first index")->capture_default_str();
    p3_cmd->add_option("--to", *p3_to, "last index")->capture_default_str();
    p3_cmd->callback([&action, p3_from, p3_to] {
        action = [p3_from, p3_to](const Context& c) { return do_prop3(c, *p3_from, *p3_to); };
    });

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            // --help and --version print to stdout and succeed.
            return app.exit(e, out, err);
        }
        err << "usage error: " << e.what() << '\n';
        return 1;
    }

    try {
        Context ctx{g, out, err};
        return action ? action(ctx) : 1;
    } catch (const numeric_error& e) {
        err << "numeric error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        err << "usage error: " << e.what() << '\n';
        return 1;
    } catch (const std::domain_error& e) {
        err << "usage error: " << e.what() << '\n';
        return 1;
    } catch (const std::range_error& e) {
        err << "usage error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return 2;
    }
}

} // namespace gronwall::cli
