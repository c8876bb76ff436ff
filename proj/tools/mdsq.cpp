// mdsq: experiment driver.  Every mode writes a CSV (archival format, RFC
// 4180 body with a `# key=value` header block) and a JSON summary next to it.
// Exit codes: 0 ok, 2 bad config, 3 budget exceeded, 4 I/O failure.

#include <omp.h>

#include <CLI11.hpp>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "mdsq/betasieve.hpp"
#include "mdsq/digitset.hpp"
#include "mdsq/expsums.hpp"
#include "mdsq/localfactors.hpp"
#include "mdsq/primes.hpp"
#include "mdsq/repcount.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace mdsq;

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string fmt(double v) {
    std::ostringstream os;
    os << std::setprecision(12) << v;
    return os.str();
}

struct Report {
    fs::path base;  // without extension
    std::vector<std::pair<std::string, std::string>> header;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    json summary;

    void add(std::initializer_list<std::string> row) { rows.emplace_back(row); }

    void write() const {
        fs::path dir = base.parent_path();
        std::error_code ec;
        if (!dir.empty()) fs::create_directories(dir, ec);
        std::ofstream csv(base.string() + ".csv");
        if (!csv) throw std::ios_base::failure("cannot open " + base.string() + ".csv");
        for (auto& [k, v] : header) csv << "# " << k << "=" << v << "\n";
        for (size_t i = 0; i < columns.size(); ++i)
            csv << columns[i] << (i + 1 < columns.size() ? "," : "\n");
        for (auto& row : rows)
            for (size_t i = 0; i < row.size(); ++i)
                csv << row[i] << (i + 1 < row.size() ? "," : "\n");
        if (!csv.good()) throw std::ios_base::failure("write failed: " + base.string() + ".csv");

        json j = summary;
        for (auto& [k, v] : header) j["config"][k] = v;
        j["columns"] = columns;
        j["rows"] = rows;
        std::ofstream js(base.string() + ".json");
        if (!js) throw std::ios_base::failure("cannot open " + base.string() + ".json");
        js << j.dump(2) << "\n";
        if (!js.good()) throw std::ios_base::failure("write failed: " + base.string() + ".json");
    }
};

fs::path out_base(const std::string& out, const std::string& mode) {
    if (!out.empty()) return fs::path(out);
    const char* env = std::getenv("MDSQ_OUT_DIR");
    fs::path dir = env ? fs::path(env) : fs::path(".");
    return dir / mode;
}

std::vector<unsigned> parse_digits(const std::string& text) {
    std::vector<unsigned> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ','))
        if (!tok.empty()) out.push_back(static_cast<unsigned>(std::stoul(tok)));
    return out;
}

std::pair<unsigned, unsigned> parse_k_range(const std::string& text) {
    auto dots = text.find("..");
    if (dots == std::string::npos) {
        unsigned k = static_cast<unsigned>(std::stoul(text));
        return {k, k};
    }
    return {static_cast<unsigned>(std::stoul(text.substr(0, dots))),
            static_cast<unsigned>(std::stoul(text.substr(dots + 2)))};
}

u64 pow_u64(u64 b, unsigned e) {
    u64 r = 1;
    while (e--) {
        if (r > std::numeric_limits<u64>::max() / b) throw BudgetExceeded("g^k overflows");
        r *= b;
    }
    return r;
}

void stamp(Report& rep, const std::string& mode) {
    auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::ostringstream os;
    os << std::put_time(std::gmtime(&t), "%Y-%m-%dT%H:%M:%SZ");
    rep.header.emplace_back("mode", mode);
    rep.header.emplace_back("generated", os.str());
}

int run_avg_r2(unsigned g, const std::vector<unsigned>& forb, unsigned klo, unsigned khi,
               const std::string& out) {
    auto ds = DigitSet::make(g, forb);
    auto S = singular_series_limit(ds).value.convert_to<double>();
    Report rep;
    rep.base = out_base(out, "avg-r2");
    stamp(rep, "avg-r2");
    rep.header.emplace_back("digitset", ds.text());
    rep.columns = {"k", "X", "r2_sum", "member_count", "predicted", "ratio"};
    for (unsigned k = klo; k <= khi; ++k) {
        u64 X = pow_u64(g, k);
        auto led = build_ledger(X, ds);
        double pred = kPi / 4.0 * S * static_cast<double>(led.member_count);
        rep.add({std::to_string(k), std::to_string(X), fmt(led.r2_sum),
                 std::to_string(led.member_count), fmt(pred),
                 fmt(pred != 0 ? led.r2_sum / pred : 0)});
    }
    rep.summary["singular_series"] = S;
    rep.write();
    return 0;
}

int run_bias_table(unsigned g, unsigned k, const std::string& out) {
    u64 X = pow_u64(g, k);
    auto rows = bias_table(X, g);
    Report rep;
    rep.base = out_base(out, "bias-table");
    stamp(rep, "bias-table");
    rep.header.emplace_back("g", std::to_string(g));
    rep.header.emplace_back("k", std::to_string(k));
    rep.columns = {"b", "r2_sum", "member_count", "empirical", "predicted", "ratio"};
    for (auto& row : rows) {
        auto S = singular_series_limit(DigitSet::make(g, {row.b})).value.convert_to<double>();
        double emp = row.r2_sum / static_cast<double>(row.member_count);
        double pred = kPi / 4.0 * S;
        rep.add({std::to_string(row.b), fmt(row.r2_sum), std::to_string(row.member_count),
                 fmt(emp), fmt(pred), fmt(pred != 0 ? emp / pred : 0)});
    }
    rep.write();
    return 0;
}

int run_offdiag(unsigned g, const std::vector<unsigned>& forb, unsigned k,
                const std::string& out) {
    auto ds = DigitSet::make(g, forb);
    u64 X = pow_u64(g, k);
    auto led = build_ledger(X, ds);
    Report rep;
    rep.base = out_base(out, "offdiag");
    stamp(rep, "offdiag");
    rep.header.emplace_back("digitset", ds.text());
    rep.columns = {"X", "member_count", "quadruple_count", "defect_sum", "per_member"};
    rep.add({std::to_string(X), std::to_string(led.member_count),
             std::to_string(led.quadruple_count), std::to_string(led.defect_sum),
             fmt(static_cast<double>(led.quadruple_count) / static_cast<double>(led.member_count))});
    rep.write();
    return 0;
}

int run_nonzero(unsigned g, const std::vector<unsigned>& forb, unsigned k,
                const std::string& out) {
    auto ds = DigitSet::make(g, forb);
    u64 X = pow_u64(g, k);
    auto led = build_ledger(X, ds);
    Report rep;
    rep.base = out_base(out, "nonzero");
    stamp(rep, "nonzero");
    rep.header.emplace_back("digitset", ds.text());
    rep.header.emplace_back("X", std::to_string(X));
    rep.columns = {"rstar", "count"};
    for (auto& [v, c] : led.histogram) rep.add({std::to_string(v), std::to_string(c)});
    rep.summary["nonzero_count"] = led.nonzero_count;
    rep.summary["gt2_count"] = led.gt2_count;
    rep.summary["member_count"] = led.member_count;
    rep.write();
    return 0;
}

int run_arcs(unsigned g, const std::vector<unsigned>& forb, unsigned k, double B,
             const std::string& out) {
    auto ds = DigitSet::make(g, forb);
    auto mt = reconstruct_main_term(k, ds, B);
    Report rep;
    rep.base = out_base(out, "arcs");
    stamp(rep, "arcs");
    rep.header.emplace_back("digitset", ds.text());
    rep.header.emplace_back("B", fmt(B));
    rep.columns = {"kind", "r", "s", "S", "D", "abs_contribution"};
    for (auto& a : mt.arcs)
        rep.add({a.major ? "major" : "minor", std::to_string(a.r), std::to_string(a.s),
                 std::to_string(a.S), std::to_string(a.D), fmt(a.abs_contribution)});
    rep.summary["exact"] = mt.exact;
    rep.summary["total"] = mt.total;
    rep.summary["major"] = mt.major;
    rep.summary["minor"] = mt.minor;
    rep.write();
    return 0;
}

int run_fourier(unsigned g, const std::vector<unsigned>& forb, unsigned k, unsigned samples,
                u64 seed, const std::string& out) {
    auto ds = DigitSet::make(g, forb);
    StringModel sm{ds, k};
    auto dec = measure_l1_constant(sm, samples);
    Report rep;
    rep.base = out_base(out, "fourier");
    stamp(rep, "fourier");
    rep.header.emplace_back("digitset", ds.text());
    rep.header.emplace_back("k", std::to_string(k));
    rep.header.emplace_back("seed", std::to_string(seed));
    rep.columns = {"theta", "grid_sum"};
    for (auto& [t, m] : dec.samples) rep.add({fmt(t), fmt(m)});
    rep.summary["C_g_estimate"] = dec.C_g_estimate;
    rep.summary["alpha_g"] = dec.alpha_g;
    rep.summary["c_g_estimate"] = dec.c_g_estimate;
    rep.summary["max_grid_sum"] = dec.max_grid_sum;
    rep.write();
    return 0;
}

int run_sieve_check(u64 z, double s, double kappa, u64 nmax, const std::string& out) {
    auto cfg = SieveConfig::make(z, s, kappa);
    auto w = build_weights(cfg);
    u64 bad = count_violations(w, nmax);
    Report rep;
    rep.base = out_base(out, "sieve-check");
    stamp(rep, "sieve-check");
    rep.header.emplace_back("z", std::to_string(z));
    rep.header.emplace_back("s", fmt(s));
    rep.header.emplace_back("kappa", fmt(kappa));
    rep.header.emplace_back("beta", std::to_string(cfg.beta));
    rep.header.emplace_back("guarantee", cfg.guarantee ? "yes" : "no");
    rep.columns = {"a", "b", "density_sum", "product", "ratio"};
    for (u64 a : {1ull, 2ull, 3ull})
        for (u64 b : {1ull, 5ull, 7ull}) {
            auto d = weighted_density_sum_quad(w, a, b);
            rep.add({std::to_string(a), std::to_string(b), fmt(d.value), fmt(d.product),
                     fmt(d.ratio)});
        }
    rep.summary["violations"] = bad;
    rep.summary["n_max"] = nmax;
    rep.write();
    return 0;
}

int run_localfactors(unsigned g, u64 qmax, const std::string& out) {
    Report rep;
    rep.base = out_base(out, "localfactors");
    stamp(rep, "localfactors");
    rep.columns = {"kind", "q", "a", "value"};
    for (u64 q = 1; q <= qmax; ++q)
        for (u64 a = 0; a < q; ++a) {
            rep.add({"rho", std::to_string(q), std::to_string(a), std::to_string(rho(a, q))});
            rep.add({"rho_tilde", std::to_string(q), std::to_string(a),
                     std::to_string(rho_tilde(a, q))});
            rep.add({"r", std::to_string(q), std::to_string(a),
                     std::to_string(r_unrestricted(a, q))});
        }
    if (g >= 2) {
        json st = json::array();
        for (unsigned b = 0; b < g; ++b) {
            auto S = singular_series(DigitSet::make(g, {b}));
            std::ostringstream frac;
            frac << S.value;
            st.push_back({{"b", b},
                          {"exact", frac.str()},
                          {"decimal", S.value.convert_to<double>()}});
        }
        rep.summary["singular_series"] = st;
        rep.header.emplace_back("g", std::to_string(g));
    }
    rep.write();
    return 0;
}

int run_primes_count(u64 upto, const std::string& out) {
    auto pt = sieve(2, upto);
    Report rep;
    rep.base = out_base(out, "primes");
    stamp(rep, "primes");
    rep.columns = {"upto", "pi", "psi"};
    rep.add({std::to_string(upto), std::to_string(pt.primes.size()), fmt(pt.psi())});
    rep.write();
    return 0;
}

int run_expsum(const std::string& kind, double alpha, u64 x, const std::string& out) {
    Report rep;
    rep.base = out_base(out, "expsum");
    stamp(rep, "expsum");
    rep.header.emplace_back("kind", kind);
    rep.columns = {"alpha", "x", "re", "im", "abs", "terms", "trivial_bound"};
    ExpSumValue v;
    if (kind == "prime-square") {
        auto ps = prime_square_sum(alpha, x);
        v = ps.value;
        rep.summary["envelope"] = ps.envelope;
        rep.summary["fitted_const"] = ps.fitted_const;
    } else if (kind == "r2") {
        v = r2_exp_sum(alpha, x);
    } else {
        throw ConfigError("unknown expsum kind: " + kind);
    }
    rep.add({fmt(alpha), std::to_string(x), fmt(v.value.real()), fmt(v.value.imag()),
             fmt(std::abs(v.value)), std::to_string(v.terms), fmt(v.trivial_bound)});
    rep.write();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"missing-digit sums of two prime squares: desk-scale experiments"};
    app.require_subcommand(1);

    unsigned g = 10, k = 4, samples = 16;
    std::string forbidden = "7", krange, out, kind = "r2";
    int workers = 0;
    u64 budget = 0, seed = 1, z = 30, nmax = 1000000, upto = 1000000, qmax = 20;
    double B = 2.0, s_exp = 3.0, kappa = 4.0, alpha = 0.0;

    auto add_common = [&](CLI::App* sub, bool with_forbidden = true) {
        sub->add_option("--g", g, "base");
        if (with_forbidden) sub->add_option("--forbidden", forbidden, "comma list of digits");
        sub->add_option("--out", out, "output path prefix (no extension)");
        sub->add_option("--workers", workers, "OpenMP worker count (0 = default)");
        sub->add_option("--budget", budget, "override enumeration budget (elements)");
        sub->add_option("--seed", seed, "sampling seed");
    };

    auto* c_avg = app.add_subcommand("avg-r2", "weighted representation sum vs prediction");
    add_common(c_avg);
    c_avg->add_option("--k", k, "digit count, X = g^k");
    c_avg->add_option("--k-range", krange, "k range lo..hi");

    auto* c_bias = app.add_subcommand("bias-table", "per-digit bias table");
    add_common(c_bias, false);
    c_bias->add_option("--k", k, "digit count, X = g^k");

    auto* c_off = app.add_subcommand("offdiag", "off-diagonal collision counts");
    add_common(c_off);
    c_off->add_option("--k", k, "digit count");

    auto* c_nz = app.add_subcommand("nonzero", "nonzero r-star counts and histogram");
    add_common(c_nz);
    c_nz->add_option("--k", k, "digit count");

    auto* c_arcs = app.add_subcommand("arcs", "major/minor arc split of the main term");
    add_common(c_arcs);
    c_arcs->add_option("--k", k, "digit count");
    c_arcs->add_option("--B", B, "major-arc width exponent");

    auto* c_four = app.add_subcommand("fourier", "transform decay measurements");
    add_common(c_four);
    c_four->add_option("--k", k, "digit count");
    c_four->add_option("--samples", samples, "theta samples");

    auto* c_sieve = app.add_subcommand("sieve-check", "beta-sieve property scan");
    c_sieve->add_option("--z", z, "sifting limit");
    c_sieve->add_option("--s", s_exp, "level exponent, D = z^s");
    c_sieve->add_option("--kappa", kappa, "sieve dimension");
    c_sieve->add_option("--nmax", nmax, "exhaustive check bound");
    c_sieve->add_option("--out", out, "output path prefix");
    c_sieve->add_option("--workers", workers, "OpenMP worker count");

    auto* c_local = app.add_subcommand("localfactors", "density tables and singular series");
    c_local->add_option("--g", g, "base for singular series table");
    c_local->add_option("--qmax", qmax, "emit tables for q <= qmax");
    c_local->add_option("--out", out, "output path prefix");

    auto* c_primes = app.add_subcommand("primes", "prime table smoke tests");
    auto* c_count = c_primes->add_subcommand("count", "count primes up to a bound");
    c_count->add_option("--upto", upto, "bound");
    c_count->add_option("--out", out, "output path prefix");

    auto* c_exp = app.add_subcommand("expsum", "direct exponential-sum evaluation");
    c_exp->add_option("--kind", kind, "prime-square | r2");
    c_exp->add_option("--alpha", alpha, "phase");
    c_exp->add_option("--x", upto, "summation bound");
    c_exp->add_option("--out", out, "output path prefix");

    CLI11_PARSE(app, argc, argv);

    try {
        if (workers > 0) omp_set_num_threads(workers);
        if (c_avg->parsed()) {
            auto [lo, hi] = krange.empty() ? std::make_pair(k, k) : parse_k_range(krange);
            return run_avg_r2(g, parse_digits(forbidden), lo, hi, out);
        }
        if (c_bias->parsed()) return run_bias_table(g, k, out);
        if (c_off->parsed()) return run_offdiag(g, parse_digits(forbidden), k, out);
        if (c_nz->parsed()) return run_nonzero(g, parse_digits(forbidden), k, out);
        if (c_arcs->parsed()) return run_arcs(g, parse_digits(forbidden), k, B, out);
        if (c_four->parsed())
            return run_fourier(g, parse_digits(forbidden), k, samples, seed, out);
        if (c_sieve->parsed()) return run_sieve_check(z, s_exp, kappa, nmax, out);
        if (c_local->parsed()) return run_localfactors(g, qmax, out);
        if (c_primes->parsed()) return run_primes_count(upto, out);
        if (c_exp->parsed()) return run_expsum(kind, alpha, upto, out);
        throw ConfigError("no subcommand");
    } catch (const ConfigError& e) {
        std::cerr << "{\"error\":\"config\",\"what\":\"" << e.what() << "\"}\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "{\"error\":\"config\",\"what\":\"" << e.what() << "\"}\n";
        return 2;
    } catch (const BudgetExceeded& e) {
        std::cerr << "{\"error\":\"budget\",\"what\":\"" << e.what() << "\"}\n";
        return 3;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "{\"error\":\"io\",\"what\":\"" << e.what() << "\"}\n";
        return 4;
    }
}
