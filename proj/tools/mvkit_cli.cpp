// mvkit command-line front door: load and verify families, run the exact
// search, drive and audit reductions, evaluate bounds, and exercise the code.
//
// Exit codes: 0 success / check passed, 1 verification or audit failure,
// 2 usage or input-format error. All randomized subcommands take a --seed
// (default 1) and are reproducible from it. The only environment variable
// consulted is MVKIT_OUT_DIR, which prefixes relative output paths.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "mvkit/clique.hpp"
#include "mvkit/io.hpp"
#include "mvkit/ldc.hpp"
#include "mvkit/reduction.hpp"

namespace {

constexpr std::uint64_t kDefaultSeed = 1;

std::string out_path(const std::string& path) {
    const char* dir = std::getenv("MVKIT_OUT_DIR");
    if (dir == nullptr || path.empty() || std::filesystem::path(path).is_absolute()) return path;
    return (std::filesystem::path(dir) / path).string();
}

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

mvkit::Mode parse_mode(const std::string& s) {
    if (s == "strict") return mvkit::Mode::Strict;
    if (s == "best-effort") return mvkit::Mode::BestEffort;
    throw std::invalid_argument("mode must be strict or best-effort");
}

mvkit::Variant parse_variant(const std::string& s) {
    if (s == "general") return mvkit::Variant::General;
    if (s == "distinct-prime") return mvkit::Variant::DistinctPrime;
    throw std::invalid_argument("variant must be general or distinct-prime");
}

std::vector<std::int64_t> parse_bits(const std::string& bits) {
    std::vector<std::int64_t> x;
    for (char c : bits) {
        if (c != '0' && c != '1') throw std::invalid_argument("--bits must be a 0/1 string");
        x.push_back(c - '0');
    }
    return x;
}

struct Options {
    std::string family_path;
    std::string dist_path;
    std::string trace_path;
    std::string codeword_path;
    std::string out_family;
    std::string out_round;
    std::string out_trace;
    std::string out_codeword;
    std::string report_path;
    std::string csv_path;
    std::string f_spec = "power:1.735";
    std::string audit_f_spec = "from-trace";
    std::string mode = "best-effort";
    std::string variant = "general";
    std::string bits;
    std::string message_path;
    std::int64_t m = 0, n = 0, m_to = 0, n_to = 0;
    std::int64_t r1 = 0, r2 = 0, r3 = 0;
    std::int64_t t = 0;
    std::int64_t index = 0;
    std::int64_t trials = 1000;
    std::uint64_t seed = kDefaultSeed;
    std::uint64_t max_nodes = 50'000'000;
    double delta = 0.0;
    bool diagnostic = false;
    bool with_oracle = false;
};

int cmd_verify(const Options& opt) {
    mvkit::MvFamily f = mvkit::family_from_json(mvkit::read_json_file(opt.family_path));
    mvkit::VerifyReport r = mvkit::verify_mv(f);
    std::cout << "family m=" << f.m << " n=" << f.n << " t=" << f.size() << ": " << r.describe()
              << "\n";
    return r.pass ? 0 : 1;
}

int cmd_search(const Options& opt) {
    mvkit::MvSearchResult r = mvkit::brute_force_mv(opt.m, opt.n, mvkit::SearchBudget{opt.max_nodes});
    if (r.optimal)
        std::cout << "MV(" << opt.m << "," << opt.n << ") = " << r.value << "\n";
    else
        std::cout << "MV(" << opt.m << "," << opt.n << ") >= " << r.value
                  << " (budget exceeded, lower bound)\n";
    if (!opt.out_family.empty())
        mvkit::write_json_file(out_path(opt.out_family), mvkit::family_to_json(r.witness));
    if (!opt.report_path.empty())
        mvkit::write_json_file(out_path(opt.report_path), mvkit::search_to_json(r));
    return 0;
}

int cmd_bias(const Options& opt) {
    mvkit::ResidueDistribution mu =
        mvkit::distribution_from_json(mvkit::read_json_file(opt.dist_path));
    mvkit::FBudget f = mvkit::parse_fbudget_spec(opt.f_spec);
    mvkit::json report;
    if (opt.diagnostic) {
        mvkit::CharacterScan scan = mvkit::scan_characters(mu, f);
        report = mvkit::certificate_to_json(scan.best, scan.met_threshold);
    } else {
        mvkit::BiasCertificate cert = mvkit::find_biased_character(mu, f);
        report = mvkit::certificate_to_json(cert, true);
    }
    std::cout << report.dump(2) << "\n";
    if (!opt.report_path.empty()) mvkit::write_json_file(out_path(opt.report_path), report);
    return 0;
}

int cmd_reduce(const Options& opt) {
    mvkit::MvFamily f = mvkit::family_from_json(mvkit::read_json_file(opt.family_path));
    mvkit::Partition p = opt.r3 == 0 ? mvkit::Partition::base(f.m)
                                     : mvkit::validate_partition(opt.r1, opt.r2, opt.r3, f.m);
    auto w = mvkit::respects(f, p);
    if (!w) {
        std::cerr << "family does not respect the given partition\n";
        return 1;
    }
    mvkit::FBudget fb = mvkit::parse_fbudget_spec(opt.f_spec);
    mvkit::ReduceResult res = parse_variant(opt.variant) == mvkit::Variant::General
                                  ? mvkit::reduce_once(f, p, *w, fb, parse_mode(opt.mode))
                                  : mvkit::reduce_once_distinct_primes(f, p, *w, fb, parse_mode(opt.mode));
    std::cout << mvkit::round_to_json(res.round).dump(2) << "\n";
    if (!opt.out_family.empty())
        mvkit::write_json_file(out_path(opt.out_family), mvkit::family_to_json(res.family));
    if (!opt.out_round.empty())
        mvkit::write_json_file(out_path(opt.out_round), mvkit::round_to_json(res.round));
    return 0;
}

int cmd_drive(const Options& opt) {
    mvkit::MvFamily f = mvkit::family_from_json(mvkit::read_json_file(opt.family_path));
    mvkit::FBudget fb = mvkit::parse_fbudget_spec(opt.f_spec);
    mvkit::ReductionTrace t = mvkit::drive(f, fb, parse_variant(opt.variant), parse_mode(opt.mode));
    std::cout << "drive: t0=" << t.t0 << " rounds=" << t.rounds.size()
              << " final=" << t.final_size << " terminal=" << mvkit::to_string(t.terminal) << "\n";
    if (!opt.out_trace.empty())
        mvkit::write_json_file(out_path(opt.out_trace), mvkit::trace_to_json(t));
    return 0;
}

int cmd_audit(const Options& opt) {
    mvkit::ReductionTrace t = mvkit::trace_from_json(mvkit::read_json_file(opt.trace_path));
    mvkit::FBudget fb =
        opt.audit_f_spec == "from-trace" ? t.f : mvkit::parse_fbudget_spec(opt.audit_f_spec);
    mvkit::AuditReport r = mvkit::audit_trace(t, fb);
    std::cout << mvkit::audit_to_json(r).dump(2) << "\n";
    if (!opt.report_path.empty())
        mvkit::write_json_file(out_path(opt.report_path), mvkit::audit_to_json(r));
    return r.pass ? 0 : 1;
}

int cmd_bound(const Options& opt) {
    const std::int64_t m_hi = opt.m_to == 0 ? opt.m : opt.m_to;
    const std::int64_t n_hi = opt.n_to == 0 ? opt.n : opt.n_to;
    mvkit::Variant variant = parse_variant(opt.variant);

    mvkit::ReductionTrace trace;
    bool have_trace = !opt.trace_path.empty();
    if (have_trace) trace = mvkit::trace_from_json(mvkit::read_json_file(opt.trace_path));

    mvkit::json rows = mvkit::json::array();
    std::string csv = "m,n,log10_bound_general,oracle_value\n";
    for (std::int64_t m = opt.m; m <= m_hi; ++m) {
        for (std::int64_t n = opt.n; n <= n_hi; ++n) {
            mvkit::BoundReport b =
                mvkit::bound_eval(m, n, variant, have_trace ? &trace : nullptr);
            mvkit::json row = mvkit::bound_to_json(b);
            csv += std::to_string(m) + "," + std::to_string(n) + "," + fmt17(b.log10_general) + ",";
            if (opt.with_oracle) {
                mvkit::MvSearchResult oracle =
                    mvkit::brute_force_mv(m, n, mvkit::SearchBudget{opt.max_nodes});
                row["oracle_value"] = oracle.value;
                row["oracle_exact"] = oracle.optimal;
                csv += std::to_string(oracle.value);
            }
            csv += "\n";
            rows.push_back(row);
            std::cout << "m=" << m << " n=" << n << " log10(bound) = " << b.log10_general << "\n";
        }
    }
    if (!opt.csv_path.empty()) {
        std::ofstream out(out_path(opt.csv_path), std::ios::binary);
        if (!out) throw std::invalid_argument("cannot write " + opt.csv_path);
        out << csv;
    }
    if (!opt.report_path.empty()) mvkit::write_json_file(out_path(opt.report_path), rows);
    return 0;
}

int cmd_rate(const Options& opt) {
    mvkit::RateReport r = mvkit::rate_check(opt.t, opt.m, opt.n);
    std::cout << mvkit::rate_to_json(r).dump(2) << "\n";
    if (!opt.report_path.empty())
        mvkit::write_json_file(out_path(opt.report_path), mvkit::rate_to_json(r));
    return 0;
}

int cmd_ldc_setup(const Options& opt) {
    mvkit::MvFamily f = mvkit::family_from_json(mvkit::read_json_file(opt.family_path));
    mvkit::CodeParams params = mvkit::ldc_setup(f);
    double bits_per_symbol = std::ceil(std::log2(static_cast<double>(params.p)));
    mvkit::json report{{"m", f.m},
                       {"n", f.n},
                       {"p", params.p},
                       {"gamma", params.gamma},
                       {"K", params.K()},
                       {"N", params.N},
                       {"queries", params.queries()},
                       {"codeword_bits", static_cast<std::uint64_t>(bits_per_symbol) * params.N}};
    std::cout << report.dump(2) << "\n";
    if (!opt.report_path.empty()) mvkit::write_json_file(out_path(opt.report_path), report);
    return 0;
}

std::vector<std::int64_t> load_message(const Options& opt, std::int64_t t) {
    if (!opt.bits.empty()) {
        std::vector<std::int64_t> x = parse_bits(opt.bits);
        if (static_cast<std::int64_t>(x.size()) != t)
            throw std::invalid_argument("--bits length != family size");
        return x;
    }
    if (!opt.message_path.empty())
        return mvkit::read_json_file(opt.message_path).at("x").get<std::vector<std::int64_t>>();
    throw std::invalid_argument("need --bits or --message");
}

int cmd_ldc_encode(const Options& opt) {
    mvkit::MvFamily f = mvkit::family_from_json(mvkit::read_json_file(opt.family_path));
    mvkit::CodeParams params = mvkit::ldc_setup(f);
    mvkit::Codeword c = mvkit::encode(params, load_message(opt, f.size()));
    mvkit::write_codeword(out_path(opt.out_codeword), c);
    std::cout << "encoded t=" << c.t << " into N=" << c.values.size() << " symbols over Z_" << c.p
              << "\n";
    return 0;
}

int cmd_ldc_decode(const Options& opt) {
    mvkit::MvFamily f = mvkit::family_from_json(mvkit::read_json_file(opt.family_path));
    mvkit::CodeParams params = mvkit::ldc_setup(f);
    mvkit::Codeword c = mvkit::read_codeword(opt.codeword_path);
    if (c.m != f.m || c.n != f.n || c.p != params.p || c.t != f.size())
        throw std::invalid_argument("codeword header does not match the family");
    std::mt19937_64 rng(opt.seed);
    mvkit::DecodeResult d = mvkit::decode_bit(params, c, opt.index, rng);
    mvkit::json report{{"index", opt.index},
                       {"symbol", d.symbol},
                       {"in_alphabet", d.in_alphabet},
                       {"seed", opt.seed}};
    std::cout << report.dump(2) << "\n";
    if (!opt.report_path.empty()) mvkit::write_json_file(out_path(opt.report_path), report);
    return 0;
}

int cmd_ldc_sim(const Options& opt) {
    mvkit::MvFamily f = mvkit::family_from_json(mvkit::read_json_file(opt.family_path));
    mvkit::CodeParams params = mvkit::ldc_setup(f);
    std::vector<std::int64_t> x;
    if (opt.bits.empty() && opt.message_path.empty()) {
        // default message: alternating bits, reproducible without extra input
        x.resize(static_cast<std::size_t>(f.size()));
        for (std::size_t k = 0; k < x.size(); ++k) x[k] = static_cast<std::int64_t>(k % 2);
    } else {
        x = load_message(opt, f.size());
    }
    mvkit::SimulationReport r = mvkit::simulate(params, x, opt.delta, opt.trials, opt.seed);
    mvkit::json report = mvkit::simulation_to_json(r);
    std::cout << report.dump(2) << "\n";
    if (!opt.report_path.empty()) mvkit::write_json_file(out_path(opt.report_path), report);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mvkit: matching-vector families over Z_m^n, their reductions, and the code built on them"};
    app.require_subcommand(1);
    Options opt;

    CLI::App* verify = app.add_subcommand("verify", "check the matching-vector property of a family file");
    verify->add_option("family", opt.family_path, "family JSON")->required();

    CLI::App* search = app.add_subcommand("search", "exact MV(m,n) by branch-and-bound clique search");
    search->add_option("--m", opt.m, "modulus")->required();
    search->add_option("--n", opt.n, "dimension")->required();
    search->add_option("--max-nodes", opt.max_nodes, "node budget");
    search->add_option("--out", opt.out_family, "witness family JSON");
    search->add_option("--report", opt.report_path, "search report JSON");

    CLI::App* bias = app.add_subcommand("bias", "find a biased character of a distribution file");
    bias->add_option("distribution", opt.dist_path, "distribution JSON")->required();
    bias->add_option("--f", opt.f_spec, "budget (power:<alpha> or loglaw)");
    bias->add_flag("--diagnostic", opt.diagnostic, "scan even when the mass precondition fails");
    bias->add_option("--report", opt.report_path, "certificate JSON");

    CLI::App* reduce = app.add_subcommand("reduce", "run one reduction round");
    reduce->add_option("family", opt.family_path, "family JSON")->required();
    reduce->add_option("--r1", opt.r1, "partition r1 (default base partition)");
    reduce->add_option("--r2", opt.r2, "partition r2");
    reduce->add_option("--r3", opt.r3, "partition r3");
    reduce->add_option("--f", opt.f_spec, "budget");
    reduce->add_option("--mode", opt.mode, "strict or best-effort");
    reduce->add_option("--variant", opt.variant, "general or distinct-prime");
    reduce->add_option("--out-family", opt.out_family, "reduced family JSON");
    reduce->add_option("--out-round", opt.out_round, "round record JSON");

    CLI::App* drv = app.add_subcommand("drive", "iterate rounds until r3 = 1 or the size floor");
    drv->add_option("family", opt.family_path, "family JSON")->required();
    drv->add_option("--f", opt.f_spec, "budget");
    drv->add_option("--mode", opt.mode, "strict or best-effort");
    drv->add_option("--variant", opt.variant, "general or distinct-prime");
    drv->add_option("--out-trace", opt.out_trace, "trace JSON");

    CLI::App* audit = app.add_subcommand("audit", "recheck every inequality a trace claims");
    audit->add_option("trace", opt.trace_path, "trace JSON")->required();
    audit->add_option("--f", opt.audit_f_spec, "budget override (default: the trace's)");
    audit->add_option("--report", opt.report_path, "audit report JSON");

    CLI::App* bound = app.add_subcommand("bound", "evaluate the size bounds, optionally vs the oracle");
    bound->add_option("--m", opt.m, "modulus (or sweep start)")->required();
    bound->add_option("--n", opt.n, "dimension (or sweep start)")->required();
    bound->add_option("--m-to", opt.m_to, "sweep end for m (inclusive)");
    bound->add_option("--n-to", opt.n_to, "sweep end for n (inclusive)");
    bound->add_option("--variant", opt.variant, "general or distinct-prime");
    bound->add_option("--trace", opt.trace_path, "trace JSON for the audited distinct-prime product");
    bound->add_flag("--with-oracle", opt.with_oracle, "run the exact search per row");
    bound->add_option("--max-nodes", opt.max_nodes, "oracle node budget");
    bound->add_option("--csv", opt.csv_path, "CSV output (m,n,log10_bound_general,oracle_value)");
    bound->add_option("--report", opt.report_path, "JSON output");

    CLI::App* rate = app.add_subcommand("rate", "rate accounting N vs K^(19/18) for K = t, N = m^n");
    rate->add_option("--t", opt.t, "family size")->required();
    rate->add_option("--m", opt.m, "modulus")->required();
    rate->add_option("--n", opt.n, "dimension")->required();
    rate->add_option("--report", opt.report_path, "rate report JSON");

    CLI::App* lsetup = app.add_subcommand("ldc-setup", "field parameters of the code for a family");
    lsetup->add_option("family", opt.family_path, "family JSON")->required();
    lsetup->add_option("--report", opt.report_path, "parameter JSON");

    CLI::App* lenc = app.add_subcommand("ldc-encode", "encode a message into a codeword file");
    lenc->add_option("family", opt.family_path, "family JSON")->required();
    lenc->add_option("--bits", opt.bits, "message as a 0/1 string");
    lenc->add_option("--message", opt.message_path, "message JSON {\"x\": [..]}");
    lenc->add_option("--out", opt.out_codeword, "codeword output path")->required();

    CLI::App* ldec = app.add_subcommand("ldc-decode", "recover one message symbol with m queries");
    ldec->add_option("codeword", opt.codeword_path, "codeword file")->required();
    ldec->add_option("family", opt.family_path, "family JSON")->required();
    ldec->add_option("--i", opt.index, "message index (0-based)")->required();
    ldec->add_option("--seed", opt.seed, "decoder randomness seed");
    ldec->add_option("--report", opt.report_path, "decode report JSON");

    CLI::App* lsim = app.add_subcommand("ldc-sim", "empirical decoding success under corruption");
    lsim->add_option("family", opt.family_path, "family JSON")->required();
    lsim->add_option("--delta", opt.delta, "corruption fraction")->required();
    lsim->add_option("--trials", opt.trials, "number of trials");
    lsim->add_option("--seed", opt.seed, "channel/decoder seed");
    lsim->add_option("--bits", opt.bits, "message as a 0/1 string (default alternating)");
    lsim->add_option("--message", opt.message_path, "message JSON");
    lsim->add_option("--report", opt.report_path, "simulation report JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (verify->parsed()) return cmd_verify(opt);
        if (search->parsed()) return cmd_search(opt);
        if (bias->parsed()) return cmd_bias(opt);
        if (reduce->parsed()) return cmd_reduce(opt);
        if (drv->parsed()) return cmd_drive(opt);
        if (audit->parsed()) return cmd_audit(opt);
        if (bound->parsed()) return cmd_bound(opt);
        if (rate->parsed()) return cmd_rate(opt);
        if (lsetup->parsed()) return cmd_ldc_setup(opt);
        if (lenc->parsed()) return cmd_ldc_encode(opt);
        if (ldec->parsed()) return cmd_ldc_decode(opt);
        if (lsim->parsed()) return cmd_ldc_sim(opt);
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "input format error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::out_of_range& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
