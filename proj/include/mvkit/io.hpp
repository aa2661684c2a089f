#pragma once

// Serialization for every on-disk artifact:
//   family JSON       {"m": .., "n": .., "pairs": [{"u": [..], "v": [..]}, ..]}
//   distribution JSON {"r": .., "counts": [..], "total": ..}
//   trace JSON        header + ordered round records
//   codeword binary   "MVCW" magic, u32 version, u64 m,n,p,t, u32 LE values
// plus JSON report builders for search/bound/rate/audit/simulation results.
// Serialization is canonical: loading and re-saving reproduces files byte for
// byte (keys are emitted sorted, floats in shortest round-trip form).

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "mvkit/clique.hpp"
#include "mvkit/family.hpp"
#include "mvkit/fourier.hpp"
#include "mvkit/ldc.hpp"
#include "mvkit/reduction.hpp"

namespace mvkit {

using nlohmann::json;

// ---------------------------------------------------------------- families

inline json family_to_json(const MvFamily& f) {
    json pairs = json::array();
    for (std::int64_t i = 0; i < f.size(); ++i)
        pairs.push_back(json{{"u", f.U[i]}, {"v", f.V[i]}});
    return json{{"m", f.m}, {"n", f.n}, {"pairs", pairs}};
}

inline MvFamily family_from_json(const json& j) {
    MvFamily f;
    f.m = j.at("m").get<std::int64_t>();
    f.n = j.at("n").get<std::int64_t>();
    for (const json& pair : j.at("pairs")) {
        f.U.push_back(pair.at("u").get<ModVec>());
        f.V.push_back(pair.at("v").get<ModVec>());
    }
    f.check_structure();  // rejects out-of-range entries and bad lengths
    return f;
}

// ----------------------------------------------------------- distributions

inline json distribution_to_json(const ResidueDistribution& d) {
    return json{{"r", d.r}, {"counts", d.counts}, {"total", d.total}};
}

inline ResidueDistribution distribution_from_json(const json& j) {
    auto d = ResidueDistribution::from_counts(j.at("r").get<std::int64_t>(),
                                              j.at("counts").get<std::vector<std::uint64_t>>());
    if (j.contains("total") && j.at("total").get<std::uint64_t>() != d.total)
        throw std::invalid_argument("distribution: stored total does not match counts");
    return d;
}

// ---------------------------------------------------------------- budgets

inline json fbudget_to_json(const FBudget& f) {
    switch (f.kind) {
        case FBudget::Kind::Power: return json{{"kind", "power"}, {"alpha", f.alpha}};
        case FBudget::Kind::LogLaw: return json{{"kind", "loglaw"}};
        case FBudget::Kind::Custom:
            return json{{"kind", "custom"}, {"table", f.table}, {"tail_bound", f.custom_tail}};
    }
    throw std::logic_error("fbudget_to_json: unreachable");
}

inline FBudget fbudget_from_json(const json& j) {
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "power") return FBudget::power(j.at("alpha").get<double>());
    if (kind == "loglaw") return FBudget::loglaw();
    if (kind == "custom")
        return FBudget::custom(j.at("table").get<std::vector<double>>(), j.at("tail_bound").get<double>());
    throw std::invalid_argument("fbudget: unknown kind '" + kind + "'");
}

/// Command-line form: "power:<alpha>" or "loglaw".
inline FBudget parse_fbudget_spec(const std::string& spec) {
    if (spec == "loglaw") return FBudget::loglaw();
    if (spec.rfind("power:", 0) == 0) {
        std::size_t used = 0;
        double alpha = std::stod(spec.substr(6), &used);
        if (used != spec.size() - 6) throw std::invalid_argument("bad f spec: " + spec);
        return FBudget::power(alpha);
    }
    throw std::invalid_argument("bad f spec (expected power:<alpha> or loglaw): " + spec);
}

// ----------------------------------------------------------------- traces

inline json partition_to_json(const Partition& p) { return json::array({p.r1, p.r2, p.r3}); }

inline Partition partition_from_json(const json& j, std::int64_t m) {
    if (!j.is_array() || j.size() != 3) throw std::invalid_argument("partition: expected [r1,r2,r3]");
    return validate_partition(j[0].get<std::int64_t>(), j[1].get<std::int64_t>(),
                              j[2].get<std::int64_t>(), m);
}

inline json round_to_json(const ReductionRound& r) {
    json label{{"n", r.bucket_label.n}, {"nonzero", json::array()}};
    for (const auto& [coord, value] : r.bucket_label.nonzero)
        label["nonzero"].push_back(json::array({coord, value}));
    return json{{"j", r.j},
                {"s", r.s},
                {"bias", r.bias},
                {"shifted_bias", r.shifted_bias},
                {"u_tilde_index", r.u_tilde_index},
                {"branch", to_string(r.branch)},
                {"bucket_label", label},
                {"c1", r.c1},
                {"c2", r.c2},
                {"tau1", r.tau1},
                {"tau2", r.tau2},
                {"size_before", r.size_before},
                {"size_after", r.size_after},
                {"guarantee_met", r.guarantee_met},
                {"partition_before", partition_to_json(r.partition_before)},
                {"partition_after", partition_to_json(r.partition_after)}};
}

inline ReductionRound round_from_json(const json& j, std::int64_t m) {
    ReductionRound r;
    r.j = j.at("j").get<std::int64_t>();
    r.s = j.at("s").get<std::int64_t>();
    r.bias = j.at("bias").get<double>();
    r.shifted_bias = j.at("shifted_bias").get<double>();
    r.u_tilde_index = j.at("u_tilde_index").get<std::int64_t>();
    std::string branch = j.at("branch").get<std::string>();
    if (branch != "U" && branch != "V") throw std::invalid_argument("round: bad branch " + branch);
    r.branch = branch == "U" ? Branch::U : Branch::V;
    const json& label = j.at("bucket_label");
    r.bucket_label.n = label.at("n").get<std::int64_t>();
    for (const json& nz : label.at("nonzero"))
        r.bucket_label.nonzero.emplace_back(nz[0].get<std::int64_t>(), nz[1].get<std::int64_t>());
    r.c1 = j.at("c1").get<std::int64_t>();
    r.c2 = j.at("c2").get<std::int64_t>();
    r.tau1 = j.at("tau1").get<std::int64_t>();
    r.tau2 = j.at("tau2").get<std::int64_t>();
    r.size_before = j.at("size_before").get<std::int64_t>();
    r.size_after = j.at("size_after").get<std::int64_t>();
    r.guarantee_met = j.at("guarantee_met").get<bool>();
    r.partition_before = partition_from_json(j.at("partition_before"), m);
    r.partition_after = partition_from_json(j.at("partition_after"), m);
    return r;
}

inline json trace_to_json(const ReductionTrace& t) {
    json rounds = json::array();
    for (const ReductionRound& r : t.rounds) rounds.push_back(round_to_json(r));
    return json{{"m", t.m},
                {"n", t.n},
                {"t0", t.t0},
                {"variant", to_string(t.variant)},
                {"mode", to_string(t.mode)},
                {"f", fbudget_to_json(t.f)},
                {"rounds", rounds},
                {"terminal", to_string(t.terminal)},
                {"final_size", t.final_size}};
}

inline ReductionTrace trace_from_json(const json& j) {
    ReductionTrace t;
    t.m = j.at("m").get<std::int64_t>();
    t.n = j.at("n").get<std::int64_t>();
    t.t0 = j.at("t0").get<std::int64_t>();
    std::string variant = j.at("variant").get<std::string>();
    if (variant == "general") t.variant = Variant::General;
    else if (variant == "distinct-prime") t.variant = Variant::DistinctPrime;
    else throw std::invalid_argument("trace: bad variant " + variant);
    std::string mode = j.at("mode").get<std::string>();
    if (mode == "strict") t.mode = Mode::Strict;
    else if (mode == "best-effort") t.mode = Mode::BestEffort;
    else throw std::invalid_argument("trace: bad mode " + mode);
    t.f = fbudget_from_json(j.at("f"));
    for (const json& r : j.at("rounds")) t.rounds.push_back(round_from_json(r, t.m));
    std::string terminal = j.at("terminal").get<std::string>();
    if (terminal == "r3-is-one") t.terminal = TerminalReason::R3IsOne;
    else if (terminal == "strict-size-floor") t.terminal = TerminalReason::StrictSizeFloor;
    else if (terminal == "best-effort-size-floor") t.terminal = TerminalReason::BestEffortSizeFloor;
    else throw std::invalid_argument("trace: bad terminal reason " + terminal);
    t.final_size = j.at("final_size").get<std::int64_t>();
    return t;
}

// ---------------------------------------------------------------- reports

inline json audit_to_json(const AuditReport& a) {
    json rounds = json::array();
    for (const RoundAudit& r : a.rounds)
        rounds.push_back(json{{"index", r.index},
                              {"structure_ok", r.structure_ok},
                              {"guarantee_applicable", r.guarantee_applicable},
                              {"size_bound_ok", r.size_bound_ok},
                              {"slack_log", r.slack_log},
                              {"message", r.message}});
    return json{{"pass", a.pass},
                {"chain_ok", a.chain_ok},
                {"product_bound_ok", a.product_bound_ok},
                {"global_applicable", a.global_applicable},
                {"global_bound_ok", a.global_bound_ok},
                {"global_slack_log", a.global_slack_log},
                {"rounds", rounds},
                {"errors", a.errors}};
}

inline json bound_to_json(const BoundReport& b) {
    json out{{"m", b.m},
             {"n", b.n},
             {"log10_bound_general", b.log10_general},
             {"log10_bound_distinct_headline", b.log10_distinct_headline}};
    if (b.has_audited) out["log10_bound_distinct_audited"] = b.log10_distinct_audited;
    return out;
}

inline json rate_to_json(const RateReport& r) {
    return json{{"K", r.K},
                {"m", r.m},
                {"n", r.n},
                {"log10_N", r.log10_N},
                {"log10_K", r.log10_K},
                {"ratio", r.log10_K > 0.0 ? json(r.ratio) : json()},
                {"exceeds_19_18", r.exceeds_threshold},
                {"branch", r.theorem_branch ? "n>=19" : "n<=18"}};
}

inline json certificate_to_json(const BiasCertificate& c, bool met_threshold) {
    return json{{"j", c.j},
                {"s", c.s},
                {"magnitude", c.magnitude},
                {"threshold", c.threshold},
                {"met_threshold", met_threshold}};
}

inline json search_to_json(const MvSearchResult& r) {
    return json{{"value", r.value},
                {"optimal", r.optimal},
                {"nodes", r.nodes},
                {"vertices", r.vertex_count}};
}

inline json simulation_to_json(const SimulationReport& s) {
    return json{{"trials", s.trials},
                {"delta", s.delta},
                {"seed", s.seed},
                {"per_bit_success", s.per_bit},
                {"mean_success", s.mean},
                {"union_floor", s.union_floor},
                {"floor_vacuous", s.floor_vacuous}};
}

// ------------------------------------------------------------------ files

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path);
    json j;
    in >> j;
    return j;
}

inline void write_json_file(const std::string& path, const json& j) {
    std::ofstream out(path, std::ios::binary);  // binary: LF line endings everywhere
    if (!out) throw std::invalid_argument("cannot write " + path);
    out << j.dump(2) << "\n";
}

// --------------------------------------------------------- codeword binary

inline constexpr char kCodewordMagic[4] = {'M', 'V', 'C', 'W'};
inline constexpr std::uint32_t kCodewordVersion = 1;

namespace detail {

inline void put_u32(std::ostream& out, std::uint32_t v) {
    char b[4] = {static_cast<char>(v), static_cast<char>(v >> 8), static_cast<char>(v >> 16),
                 static_cast<char>(v >> 24)};
    out.write(b, 4);
}

inline void put_u64(std::ostream& out, std::uint64_t v) {
    put_u32(out, static_cast<std::uint32_t>(v));
    put_u32(out, static_cast<std::uint32_t>(v >> 32));
}

inline std::uint32_t get_u32(std::istream& in) {
    unsigned char b[4];
    in.read(reinterpret_cast<char*>(b), 4);
    if (!in) throw std::invalid_argument("codeword file truncated");
    return static_cast<std::uint32_t>(b[0]) | static_cast<std::uint32_t>(b[1]) << 8 |
           static_cast<std::uint32_t>(b[2]) << 16 | static_cast<std::uint32_t>(b[3]) << 24;
}

inline std::uint64_t get_u64(std::istream& in) {
    std::uint64_t lo = get_u32(in);
    std::uint64_t hi = get_u32(in);
    return lo | hi << 32;
}

}  // namespace detail

inline void write_codeword(const std::string& path, const Codeword& c) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot write " + path);
    out.write(kCodewordMagic, 4);
    detail::put_u32(out, kCodewordVersion);
    detail::put_u64(out, static_cast<std::uint64_t>(c.m));
    detail::put_u64(out, static_cast<std::uint64_t>(c.n));
    detail::put_u64(out, static_cast<std::uint64_t>(c.p));
    detail::put_u64(out, static_cast<std::uint64_t>(c.t));
    for (std::int64_t v : c.values) detail::put_u32(out, static_cast<std::uint32_t>(v));
}

inline Codeword read_codeword(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::string(magic, 4) != std::string(kCodewordMagic, 4))
        throw std::invalid_argument("not a codeword file: " + path);
    if (detail::get_u32(in) != kCodewordVersion)
        throw std::invalid_argument("unsupported codeword version");
    Codeword c;
    c.m = static_cast<std::int64_t>(detail::get_u64(in));
    c.n = static_cast<std::int64_t>(detail::get_u64(in));
    c.p = static_cast<std::int64_t>(detail::get_u64(in));
    c.t = static_cast<std::int64_t>(detail::get_u64(in));
    if (c.m < 2 || c.n < 1 || c.p < 3) throw std::invalid_argument("codeword header out of range");
    std::uint64_t N = 1;
    for (std::int64_t k = 0; k < c.n; ++k) {
        N *= static_cast<std::uint64_t>(c.m);
        if (N > kCodewordCap) throw std::invalid_argument("codeword header exceeds size cap");
    }
    c.values.resize(N);
    for (std::uint64_t k = 0; k < N; ++k) c.values[k] = detail::get_u32(in);
    return c;
}

}  // namespace mvkit
