#pragma once

// The reduction engine: one round extracts from a family respecting
// (r1, r2, r3) a large subfamily respecting (r1*s, r2, r3/s) or
// (r1, r2*s, r3/s) for some s | r3, s >= 2, using a biased character of the
// pair-product distribution. Iterating until r3 = 1 collapses the family to a
// single pair, which is what drives the MV(m,n) <= 100 m^(n/2+8.47) bound
// (exponent n/2+4 up to a vanishing term when m is squarefree).
//
// Each round runs four steps:
//   1. find a biased character (j, s) of (<u,v>/(r1 r2)) mod r3 and, in the
//      general variant, a shift vector u~ maximizing the squared-bias proxy;
//   2. bucket U and V by the quotient vectors mod s;
//   3. keep the densest bucket on the denser side;
//   4. pin the two cross statistics to their most frequent residues.
//
// Strict mode enforces the t >= 100m entry guarantee and the per-round size
// bound; best-effort mode runs the same structure on families too small for
// the guarantee, with guarantee_met flagged off.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <numbers>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "mvkit/family.hpp"
#include "mvkit/fourier.hpp"
#include "mvkit/modular.hpp"

namespace mvkit {

enum class Branch { U, V };
enum class Variant { General, DistinctPrime };
enum class Mode { Strict, BestEffort };
enum class TerminalReason { R3IsOne, StrictSizeFloor, BestEffortSizeFloor };

inline const char* to_string(Branch b) { return b == Branch::U ? "U" : "V"; }
inline const char* to_string(Variant v) { return v == Variant::General ? "general" : "distinct-prime"; }
inline const char* to_string(Mode m) { return m == Mode::Strict ? "strict" : "best-effort"; }
inline const char* to_string(TerminalReason t) {
    switch (t) {
        case TerminalReason::R3IsOne: return "r3-is-one";
        case TerminalReason::StrictSizeFloor: return "strict-size-floor";
        case TerminalReason::BestEffortSizeFloor: return "best-effort-size-floor";
    }
    return "?";
}

/// Sparse vector in Z_s^n (bucket labels are almost always mostly zero).
struct BucketLabel {
    std::int64_t n = 0;
    std::vector<std::pair<std::int64_t, std::int64_t>> nonzero;  // (coordinate, value)

    static BucketLabel from_dense(const std::vector<std::int64_t>& w) {
        BucketLabel out;
        out.n = static_cast<std::int64_t>(w.size());
        for (std::size_t k = 0; k < w.size(); ++k)
            if (w[k] != 0) out.nonzero.emplace_back(static_cast<std::int64_t>(k), w[k]);
        return out;
    }

    bool operator==(const BucketLabel&) const = default;
};

struct ReductionRound {
    std::int64_t j = 0;              // chosen character index in [1, r3-1]
    std::int64_t s = 0;              // its order, divides r3, >= 2
    double bias = 0.0;               // |E[w_r3^(j x)]| over the pair distribution
    double shifted_bias = 0.0;       // squared-bias proxy B after the u~ shift
                                     // (equals bias in the distinct-prime variant)
    std::int64_t u_tilde_index = -1; // index of u~ in U; -1 in the distinct-prime variant
    Branch branch = Branch::U;
    BucketLabel bucket_label;        // label w0 of the winning bucket
    std::int64_t c1 = 0;             // kept residue of the first cross statistic
    std::int64_t c2 = 0;             // kept residue of the second cross statistic
    std::int64_t tau1 = 0;           // r1^-1 mod s (distinct-prime variant only)
    std::int64_t tau2 = 0;           // r2^-1 mod s (distinct-prime variant only)
    std::int64_t size_before = 0;
    std::int64_t size_after = 0;
    bool guarantee_met = false;      // t >= 100m held on entry
    Partition partition_before;
    Partition partition_after;
};

struct ReductionTrace {
    std::int64_t m = 0;
    std::int64_t n = 0;
    std::int64_t t0 = 0;
    Variant variant = Variant::General;
    Mode mode = Mode::BestEffort;
    FBudget f;
    std::vector<ReductionRound> rounds;
    TerminalReason terminal = TerminalReason::BestEffortSizeFloor;
    std::int64_t final_size = 0;
};

struct ReduceResult {
    MvFamily family;
    Partition partition;
    RespectWitness witness;
    ReductionRound round;
};

namespace detail {

inline constexpr double kLogRelTol = 1e-12;

// a >= b in log space with relative tolerance.
inline bool log_ge(double a, double b) {
    return a >= b - kLogRelTol * (1.0 + std::abs(a) + std::abs(b));
}

// Loss exponents per round: size_after >= size_before / (s^e * f(s)^k).
inline void loss_exponents(Variant variant, std::int64_t n, double& e, double& k) {
    if (variant == Variant::General) {
        e = static_cast<double>(n) / 2.0 + 4.0;
        k = 2.0;
    } else {
        e = static_cast<double>(n) / 2.0 + 2.0;
        k = 1.0;
    }
}

inline std::int64_t most_frequent(const std::vector<std::int64_t>& values) {
    std::map<std::int64_t, std::int64_t> freq;
    for (std::int64_t v : values) ++freq[v];
    std::int64_t best = values.front(), best_count = 0;
    for (const auto& [v, c] : freq)
        if (c > best_count) { best = v; best_count = c; }  // map order: ties -> smallest value
    return best;
}

inline std::size_t distinct_count(const std::vector<std::int64_t>& values) {
    std::vector<std::int64_t> tmp = values;
    std::sort(tmp.begin(), tmp.end());
    return static_cast<std::size_t>(std::unique(tmp.begin(), tmp.end()) - tmp.begin());
}

// Group indices 0..t-1 by label; std::map iteration makes every downstream
// tie-break (densest bucket, then lexicographically smallest label) deterministic.
using BucketMap = std::map<std::vector<std::int64_t>, std::vector<std::int64_t>>;

inline BucketMap group_by(const std::vector<std::vector<std::int64_t>>& labels) {
    BucketMap buckets;
    for (std::size_t i = 0; i < labels.size(); ++i)
        buckets[labels[i]].push_back(static_cast<std::int64_t>(i));
    return buckets;
}

inline double sum_density_squares(const BucketMap& buckets, std::int64_t t) {
    double acc = 0.0;
    for (const auto& [label, members] : buckets) {
        double d = static_cast<double>(members.size()) / static_cast<double>(t);
        acc += d * d;
    }
    return acc;
}

inline BucketMap::const_iterator densest(const BucketMap& buckets) {
    auto best = buckets.begin();
    for (auto it = buckets.begin(); it != buckets.end(); ++it)
        if (it->second.size() > best->second.size()) best = it;
    return best;
}

// (sum p^2)(sum q^2) s^n >= b^2, compared in log space so s^n cannot overflow.
inline void check_cauchy_schwarz(double sp2, double sq2, std::int64_t s, std::int64_t n, double b) {
    double b2 = b * b;
    if (b2 <= kBiasTolerance) return;
    double lhs = std::log(sp2) + std::log(sq2) +
                 static_cast<double>(n) * std::log(static_cast<double>(s));
    if (!log_ge(lhs, std::log(b2 - kBiasTolerance)))
        throw std::runtime_error("reduce: Cauchy-Schwarz bucket diagnostic failed");
}

inline std::vector<std::int64_t> filter_by_value(const std::vector<std::int64_t>& keep,
                                                 const std::vector<std::int64_t>& stats,
                                                 std::int64_t wanted) {
    std::vector<std::int64_t> out;
    for (std::size_t k = 0; k < keep.size(); ++k)
        if (stats[k] == wanted) out.push_back(keep[k]);
    return out;
}

}  // namespace detail

inline ReduceResult reduce_round_impl(const MvFamily& f, const Partition& p, const RespectWitness& w,
                                      const FBudget& fb, Mode mode, Variant variant) {
    f.check_structure();
    if (p.m != f.m) throw std::invalid_argument("reduce: partition modulus mismatch");
    validate_partition(p.r1, p.r2, p.r3, p.m);
    if (p.r3 < 2) throw std::invalid_argument("reduce: r3 must be >= 2");
    const std::int64_t t = f.size();
    const std::int64_t n = f.n;
    const std::int64_t m = f.m;
    if (t < 1) throw std::domain_error("reduce: empty family");
    if (mode == Mode::Strict && t < 100 * m)
        throw std::domain_error("reduce: strict mode requires t >= 100m (t=" + std::to_string(t) + ")");
    if (variant == Variant::DistinctPrime && !is_squarefree(m))
        throw std::domain_error("reduce: distinct-prime variant requires squarefree m");
    auto wit = respects(f, p);
    if (!wit || !(*wit == w))
        throw std::invalid_argument("reduce: witness does not match the family and partition");

    // Pair products, reduced: x(i,k) = (<u_i, v_k> / (r1 r2)) mod r3. The
    // divisibility is a consequence of respecting the partition; the diagonal
    // must land on 0 and the off-diagonal must not (the MV property seen
    // through the partition), so the family is re-verified for free here.
    const WideUInt block = static_cast<WideUInt>(p.r1) * static_cast<WideUInt>(p.r2);
    std::vector<std::int64_t> x(static_cast<std::size_t>(t) * static_cast<std::size_t>(t));
    std::vector<std::uint64_t> counts(static_cast<std::size_t>(p.r3), 0);
    for (std::int64_t i = 0; i < t; ++i) {
        for (std::int64_t k = 0; k < t; ++k) {
            WideUInt ip = inner_product(f.U[i], f.V[k]);
            if (ip % block != 0) throw std::runtime_error("reduce: <u,v> not divisible by r1*r2");
            std::int64_t xv = static_cast<std::int64_t>((ip / block) % static_cast<WideUInt>(p.r3));
            if ((i == k) != (xv == 0))
                throw std::invalid_argument("reduce: input is not a verified MV family");
            x[static_cast<std::size_t>(i) * t + k] = xv;
            counts[static_cast<std::size_t>(xv)]++;
        }
    }
    ResidueDistribution mu = ResidueDistribution::from_counts(p.r3, std::move(counts));

    BiasCertificate cert;
    if (mode == Mode::Strict) {
        cert = find_biased_character(mu, fb);
    } else {
        cert = scan_characters(mu, fb).best;  // best margin even below threshold
    }
    const std::int64_t s = cert.s;
    const std::int64_t j = cert.j;

    ReductionRound round;
    round.j = j;
    round.s = s;
    round.bias = cert.magnitude;
    round.size_before = t;
    round.guarantee_met = t >= 100 * m;
    round.partition_before = p;

    std::vector<std::vector<std::int64_t>> labels_u(t), labels_v(t);
    std::vector<ModVec> uq(t), vq(t);
    for (std::int64_t i = 0; i < t; ++i) uq[i] = vdiv(f.U[i], p.r1);
    for (std::int64_t k = 0; k < t; ++k) vq[k] = vdiv(f.V[k], p.r2);

    if (variant == Variant::General) {
        // Step 1b: the shift u~ that maximizes
        //   B(u~) = |E_{u,v}[ w^(j (x(u,v) - x(u~,v))) ]|.
        // Averaging over u~ shows max B >= bias^2, so the argmax satisfies it.
        std::vector<std::complex<double>> root(static_cast<std::size_t>(p.r3));
        for (std::int64_t k = 0; k < p.r3; ++k)
            root[static_cast<std::size_t>(k)] =
                std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(p.r3));
        auto z = [&](std::int64_t i, std::int64_t k) {
            return root[static_cast<std::size_t>((j * x[static_cast<std::size_t>(i) * t + k]) % p.r3)];
        };
        std::vector<std::complex<double>> colmean(t);
        for (std::int64_t k = 0; k < t; ++k) {
            std::complex<double> acc = 0.0;
            for (std::int64_t i = 0; i < t; ++i) acc += z(i, k);
            colmean[k] = acc / static_cast<double>(t);
        }
        std::int64_t u_tilde = 0;
        double best_b = -1.0;
        for (std::int64_t i = 0; i < t; ++i) {
            std::complex<double> acc = 0.0;
            for (std::int64_t k = 0; k < t; ++k) acc += colmean[k] * std::conj(z(i, k));
            double b = std::abs(acc) / static_cast<double>(t);
            if (b > best_b) { best_b = b; u_tilde = i; }  // ties -> smallest index
        }
        if (best_b < cert.magnitude * cert.magnitude - kBiasTolerance)
            throw std::runtime_error("reduce: shifted bias fell below bias^2");
        round.u_tilde_index = u_tilde;
        round.shifted_bias = best_b;

        for (std::int64_t i = 0; i < t; ++i) {
            labels_u[i].resize(n);
            for (std::int64_t c = 0; c < n; ++c)
                labels_u[i][c] = detail::floor_mod(uq[i][c] - uq[u_tilde][c], s);
        }
        for (std::int64_t k = 0; k < t; ++k) {
            labels_v[k].resize(n);
            for (std::int64_t c = 0; c < n; ++c) labels_v[k][c] = vq[k][c] % s;
        }
    } else {
        if (std::gcd(s, p.r1) != 1 || std::gcd(s, p.r2) != 1)
            throw std::runtime_error("reduce: s shares a factor with r1 or r2 despite squarefree m");
        round.tau1 = mod_inverse(p.r1 % s, s);
        round.tau2 = mod_inverse(p.r2 % s, s);
        round.shifted_bias = cert.magnitude;
        for (std::int64_t i = 0; i < t; ++i) {
            labels_u[i].resize(n);
            for (std::int64_t c = 0; c < n; ++c) labels_u[i][c] = f.U[i][c] % s;
        }
        for (std::int64_t k = 0; k < t; ++k) {
            labels_v[k].resize(n);
            for (std::int64_t c = 0; c < n; ++c) labels_v[k][c] = f.V[k][c] % s;
        }
    }

    // Steps 2 and 3: bucket both sides, take the densest bucket overall.
    detail::BucketMap buckets_u = detail::group_by(labels_u);
    detail::BucketMap buckets_v = detail::group_by(labels_v);
    double sp2 = detail::sum_density_squares(buckets_u, t);
    double sq2 = detail::sum_density_squares(buckets_v, t);
    detail::check_cauchy_schwarz(sp2, sq2, s, n, round.shifted_bias);

    auto best_u = detail::densest(buckets_u);
    auto best_v = detail::densest(buckets_v);
    round.branch = best_u->second.size() >= best_v->second.size() ? Branch::U : Branch::V;
    const auto& win = round.branch == Branch::U ? best_u : best_v;
    round.bucket_label = BucketLabel::from_dense(win->first);
    std::vector<std::int64_t> keep = win->second;
    const std::vector<std::int64_t>& w0 = win->first;

    // Step 4: pin the two cross statistics. The counts of distinct values are
    // bounded by gcd(s, r2) and s respectively (mirrored on the V branch);
    // both bounds are asserted before filtering.
    std::vector<std::int64_t> stat(keep.size());
    if (round.branch == Branch::U) {
        const std::int64_t filter1_mod = p.r2;
        for (std::size_t k = 0; k < keep.size(); ++k) {
            WideInt acc = 0;
            const std::int64_t i = keep[k];
            for (std::int64_t c = 0; c < n; ++c) {
                std::int64_t shifted = variant == Variant::General
                                           ? (uq[i][c] - uq[round.u_tilde_index][c] - w0[c]) / s
                                           : vdiv(f.U[i][c], p.r1 * s);
                acc += static_cast<WideInt>(shifted) * w.v0[static_cast<std::size_t>(c)];
            }
            stat[k] = detail::floor_mod_wide(acc, filter1_mod);
        }
        if (detail::distinct_count(stat) > static_cast<std::size_t>(std::gcd(s, p.r2)))
            throw std::runtime_error("reduce: first filter exceeds gcd(s, r2) distinct residues");
        round.c1 = detail::most_frequent(stat);
        keep = detail::filter_by_value(keep, stat, round.c1);

        stat.resize(keep.size());
        for (std::size_t k = 0; k < keep.size(); ++k)
            stat[k] = inner_product_mod(w.u0, vq[keep[k]], s * p.r1);
        if (detail::distinct_count(stat) > static_cast<std::size_t>(s))
            throw std::runtime_error("reduce: second filter exceeds s distinct residues");
        round.c2 = detail::most_frequent(stat);
        keep = detail::filter_by_value(keep, stat, round.c2);
        round.partition_after = validate_partition(p.r1 * s, p.r2, p.r3 / s, p.m);
    } else {
        for (std::size_t k = 0; k < keep.size(); ++k) {
            WideInt acc = 0;
            const std::int64_t i = keep[k];
            for (std::int64_t c = 0; c < n; ++c) {
                std::int64_t shifted = variant == Variant::General ? (vq[i][c] - w0[c]) / s
                                                                   : vdiv(f.V[i][c], p.r2 * s);
                acc += static_cast<WideInt>(w.u0[static_cast<std::size_t>(c)]) * shifted;
            }
            stat[k] = detail::floor_mod_wide(acc, p.r1);
        }
        if (detail::distinct_count(stat) > static_cast<std::size_t>(std::gcd(s, p.r1)))
            throw std::runtime_error("reduce: first filter exceeds gcd(s, r1) distinct residues");
        round.c1 = detail::most_frequent(stat);
        keep = detail::filter_by_value(keep, stat, round.c1);

        stat.resize(keep.size());
        for (std::size_t k = 0; k < keep.size(); ++k)
            stat[k] = inner_product_mod(uq[keep[k]], w.v0, s * p.r2);
        if (detail::distinct_count(stat) > static_cast<std::size_t>(s))
            throw std::runtime_error("reduce: second filter exceeds s distinct residues");
        round.c2 = detail::most_frequent(stat);
        keep = detail::filter_by_value(keep, stat, round.c2);
        round.partition_after = validate_partition(p.r1, p.r2 * s, p.r3 / s, p.m);
    }

    ReduceResult res;
    res.family = subfamily(f, SubfamilyIndex{keep});
    res.partition = round.partition_after;
    auto w2 = respects(res.family, res.partition);
    if (!w2) throw std::runtime_error("reduce: output does not respect the refined partition");
    res.witness = *w2;
    round.size_after = res.family.size();

    if (round.guarantee_met) {
        double e, kexp;
        detail::loss_exponents(variant, n, e, kexp);
        double lhs = std::log(static_cast<double>(round.size_after));
        double rhs = std::log(static_cast<double>(t)) - e * std::log(static_cast<double>(s)) -
                     kexp * std::log(fb.eval(s));
        if (!detail::log_ge(lhs, rhs))
            throw std::runtime_error("reduce: size guarantee violated despite t >= 100m");
    }
    res.round = round;
    return res;
}

/// One round of the general reduction.
inline ReduceResult reduce_once(const MvFamily& f, const Partition& p, const RespectWitness& w,
                                const FBudget& fb, Mode mode = Mode::Strict) {
    return reduce_round_impl(f, p, w, fb, mode, Variant::General);
}

/// One round of the squarefree-modulus variant. Buckets directly by the
/// vectors mod s (valid because r1 and r2 are invertible mod s), which
/// improves the per-round loss to s^(n/2+2) f(s).
inline ReduceResult reduce_once_distinct_primes(const MvFamily& f, const Partition& p,
                                                const RespectWitness& w, const FBudget& fb,
                                                Mode mode = Mode::Strict) {
    return reduce_round_impl(f, p, w, fb, mode, Variant::DistinctPrime);
}

/// Iterate rounds from the base partition (1, 1, m) until r3 = 1 or the size
/// floor (100m strict, 2 best-effort) is hit. Every family respects the base
/// partition with the zero witness, so the loop always starts.
inline ReductionTrace drive(const MvFamily& f, const FBudget& fb, Variant variant = Variant::General,
                            Mode mode = Mode::BestEffort) {
    VerifyReport vr = verify_mv(f);
    if (!vr.pass) throw std::invalid_argument("drive: family fails verification: " + vr.describe());

    ReductionTrace trace;
    trace.m = f.m;
    trace.n = f.n;
    trace.t0 = f.size();
    trace.variant = variant;
    trace.mode = mode;
    trace.f = fb;

    const std::int64_t floor = mode == Mode::Strict ? 100 * f.m : 2;
    MvFamily cur = f;
    Partition p = Partition::base(f.m);

    while (true) {
        if (p.r3 == 1) {
            trace.terminal = TerminalReason::R3IsOne;
            break;
        }
        if (cur.size() < floor) {
            trace.terminal = mode == Mode::Strict ? TerminalReason::StrictSizeFloor
                                                  : TerminalReason::BestEffortSizeFloor;
            break;
        }
        RespectWitness w = *respects(cur, p);
        ReduceResult res = reduce_round_impl(cur, p, w, fb, mode, variant);
        trace.rounds.push_back(res.round);
        cur = std::move(res.family);
        p = res.partition;
    }
    trace.final_size = cur.size();

    // r3 halves at least each round, so the count is bounded by log2(m).
    if (static_cast<double>(trace.rounds.size()) > std::log2(static_cast<double>(f.m)) + 1e-9)
        throw std::runtime_error("drive: more rounds than log2(m)");
    // A family respecting (r1, r2, 1) has size exactly 1.
    if (trace.terminal == TerminalReason::R3IsOne && trace.final_size != 1)
        throw std::runtime_error("drive: r3 reached 1 with family size != 1");
    return trace;
}

struct RoundAudit {
    std::size_t index = 0;
    bool structure_ok = true;
    bool guarantee_applicable = false;
    bool size_bound_ok = true;       // true when not applicable
    double slack_log = 0.0;          // ln(t') - lower bound in log space
    std::string message;
};

struct AuditReport {
    bool pass = true;
    bool chain_ok = true;
    bool product_bound_ok = true;    // s_1 ... s_k <= m
    bool global_applicable = false;  // all rounds carried the guarantee
    bool global_bound_ok = true;     // t0 <= t_final * prod s^e f(s)^k
    double global_slack_log = 0.0;
    std::vector<RoundAudit> rounds;
    std::vector<std::string> errors;
};

/// Re-derive every inequality a trace claims: partition chaining, divisor
/// structure, the per-round and whole-chain size accounting in log space.
inline AuditReport audit_trace(const ReductionTrace& trace, const FBudget& fb) {
    AuditReport report;
    auto fail = [&](std::string msg) {
        report.pass = false;
        report.errors.push_back(std::move(msg));
    };

    if (trace.m < 2 || trace.n < 1 || trace.t0 < 0) fail("malformed trace header");
    Partition expect = Partition::base(trace.m);
    std::int64_t expect_size = trace.t0;
    WideUInt s_product = 1;
    double e, k;
    detail::loss_exponents(trace.variant, trace.n, e, k);
    double loss_log_total = 0.0;
    bool all_guaranteed = true;

    for (std::size_t idx = 0; idx < trace.rounds.size(); ++idx) {
        const ReductionRound& r = trace.rounds[idx];
        RoundAudit ra;
        ra.index = idx;
        auto bad = [&](const std::string& msg) {
            ra.structure_ok = false;
            ra.message = msg;
            fail("round " + std::to_string(idx) + ": " + msg);
        };
        if (!(r.partition_before == expect)) bad("partition does not chain from the previous round");
        else if (r.s < 2) bad("s < 2");
        else if (r.partition_before.r3 % r.s != 0) bad("s does not divide r3");
        else if (r.j < 1 || r.j >= r.partition_before.r3) bad("character index out of range");
        else if (character_order(r.j, r.partition_before.r3) != r.s) bad("s != order of the character");
        else {
            Partition want = r.branch == Branch::U
                                 ? Partition{r.partition_before.r1 * r.s, r.partition_before.r2,
                                             r.partition_before.r3 / r.s, trace.m}
                                 : Partition{r.partition_before.r1, r.partition_before.r2 * r.s,
                                             r.partition_before.r3 / r.s, trace.m};
            if (!(r.partition_after == want)) bad("refined partition does not match the branch");
            else if (r.size_before != expect_size) bad("size does not chain from the previous round");
            else if (r.size_after < 1 || r.size_after > r.size_before) bad("sizes are not shrinking");
        }
        if (ra.structure_ok) {
            ra.guarantee_applicable = r.guarantee_met;
            if (r.guarantee_met) {
                double lhs = std::log(static_cast<double>(r.size_after));
                double rhs = std::log(static_cast<double>(r.size_before)) -
                             e * std::log(static_cast<double>(r.s)) - k * std::log(fb.eval(r.s));
                ra.slack_log = lhs - rhs;
                ra.size_bound_ok = detail::log_ge(lhs, rhs);
                if (!ra.size_bound_ok) fail("round " + std::to_string(idx) + ": size bound violated");
            } else {
                all_guaranteed = false;
            }
            loss_log_total += e * std::log(static_cast<double>(r.s)) + k * std::log(fb.eval(r.s));
            s_product *= static_cast<WideUInt>(r.s);
            expect = r.partition_after;
            expect_size = r.size_after;
        } else {
            report.chain_ok = false;
            report.rounds.push_back(ra);
            return report;  // structure failure: stop at the first bad round
        }
        report.rounds.push_back(ra);
    }

    if (expect_size != trace.final_size) {
        report.chain_ok = false;
        fail("final size does not match the last round");
    }
    report.product_bound_ok = s_product <= static_cast<WideUInt>(trace.m);
    if (!report.product_bound_ok) fail("product of s values exceeds m");

    report.global_applicable = all_guaranteed && !trace.rounds.empty();
    if (report.global_applicable) {
        double lhs = std::log(static_cast<double>(trace.final_size)) + loss_log_total;
        double rhs = std::log(static_cast<double>(trace.t0));
        report.global_slack_log = lhs - rhs;
        report.global_bound_ok = detail::log_ge(lhs, rhs);
        if (!report.global_bound_ok) fail("whole-chain size accounting violated");
    }
    return report;
}

struct BoundReport {
    std::int64_t m = 0;
    std::int64_t n = 0;
    double log10_general = 0.0;            // log10 of 100 m^(n/2 + 8.47)
    double log10_distinct_headline = 0.0;  // log10 of 100 m^(n/2 + 4)
    bool has_audited = false;
    double log10_distinct_audited = 0.0;   // log10 of 100 m^(n/2+4) prod 3 ln^2 s_i

    double log10_for(Variant v) const {
        return v == Variant::General ? log10_general : log10_distinct_headline;
    }
};

/// Size bounds in log10. The distinct-prime form gains an audited finite
/// product 100 m^(n/2+4) prod_i 3 ln^2(s_i) when a trace supplies the s_i.
inline BoundReport bound_eval(std::int64_t m, std::int64_t n, Variant variant = Variant::General,
                              const ReductionTrace* trace = nullptr) {
    if (m < 2 || n < 1) throw std::invalid_argument("bound_eval: need m >= 2, n >= 1");
    BoundReport r;
    r.m = m;
    r.n = n;
    const double lg_m = std::log10(static_cast<double>(m));
    r.log10_general = 2.0 + (static_cast<double>(n) / 2.0 + 8.47) * lg_m;
    r.log10_distinct_headline = 2.0 + (static_cast<double>(n) / 2.0 + 4.0) * lg_m;
    if (variant == Variant::DistinctPrime && trace != nullptr) {
        r.has_audited = true;
        r.log10_distinct_audited = r.log10_distinct_headline;
        for (const ReductionRound& round : trace->rounds) {
            double ls = std::log(static_cast<double>(round.s));
            r.log10_distinct_audited += std::log10(3.0 * ls * ls);
        }
    }
    return r;
}

struct RateReport {
    std::int64_t K = 0;   // message symbols = family size
    std::int64_t m = 0;
    std::int64_t n = 0;
    double log10_N = 0.0;  // N = m^n
    double log10_K = 0.0;
    double ratio = 0.0;    // log N / log K, +inf at K = 1
    bool exceeds_threshold = false;  // N > K^(19/18)
    bool theorem_branch = false;     // n >= 19 uses the MV bound, n <= 18 the prime one
};

/// Rate accounting of the K = t, N = m^n code built on a family of size t:
/// any such code has N > K^(19/18).
inline RateReport rate_check(std::int64_t t, std::int64_t m, std::int64_t n) {
    if (t < 1) throw std::domain_error("rate_check: family size must be >= 1");
    if (m < 2 || n < 1) throw std::invalid_argument("rate_check: need m >= 2, n >= 1");
    RateReport r;
    r.K = t;
    r.m = m;
    r.n = n;
    const double lg_m = std::log10(static_cast<double>(m));
    r.log10_N = static_cast<double>(n) * lg_m;
    r.log10_K = std::log10(static_cast<double>(t));
    r.ratio = r.log10_K > 0.0 ? r.log10_N / r.log10_K : std::numeric_limits<double>::infinity();
    r.exceeds_threshold = 18.0 * r.log10_N > 19.0 * r.log10_K;
    r.theorem_branch = n >= 19;
    return r;
}

}  // namespace mvkit
