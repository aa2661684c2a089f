#pragma once

// Distributions over Z_r, character sums, and the biased-character finder.
//
// A distribution mu with mu(0) <= 1/(100r) always has some character
// x -> w_r^(jx) of order s = r/gcd(j,r) with |E[w_r^(jx)]| >= 1/(s*f(s)),
// provided the budget sum_{s>=2} 1/f(s) <= 0.99 holds. Distributions are
// kept as exact integer counts so that the mass precondition is an exact
// integer comparison; floating point appears only inside the character sums.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "mvkit/family.hpp"
#include "mvkit/modular.hpp"

namespace mvkit {

inline constexpr double kBiasTolerance = 1e-9;

/// Counts-backed probability distribution over Z_r.
struct ResidueDistribution {
    std::int64_t r = 1;
    std::vector<std::uint64_t> counts;  // length r
    std::uint64_t total = 0;            // = sum(counts), > 0

    static ResidueDistribution from_counts(std::int64_t r, std::vector<std::uint64_t> counts) {
        if (r < 1) throw std::invalid_argument("distribution: modulus must be >= 1");
        if (static_cast<std::int64_t>(counts.size()) != r)
            throw std::invalid_argument("distribution: counts length != r");
        std::uint64_t total = 0;
        for (std::uint64_t c : counts) total += c;
        if (total == 0) throw std::invalid_argument("distribution: total mass is zero");
        return {r, std::move(counts), total};
    }

    double weight(std::int64_t x) const {
        return static_cast<double>(counts.at(static_cast<std::size_t>(x))) / static_cast<double>(total);
    }

    /// Exact integer test for mu(0) <= 1/(100 r).
    bool zero_mass_small() const {
        return static_cast<WideUInt>(counts[0]) * 100u * static_cast<WideUInt>(r) <=
               static_cast<WideUInt>(total);
    }
};

/// E_{x~mu}[ w_r^(jx) ] with w_r = exp(2 pi i / r), in double precision.
inline std::complex<double> bias_at(const ResidueDistribution& mu, std::int64_t j) {
    if (j < 0 || j >= mu.r) throw std::out_of_range("bias_at: j out of [0, r)");
    const double step = 2.0 * std::numbers::pi / static_cast<double>(mu.r);
    std::complex<double> acc = 0.0;
    for (std::int64_t x = 0; x < mu.r; ++x) {
        if (mu.counts[x] == 0) continue;
        std::int64_t e = (j * x) % mu.r;
        acc += static_cast<double>(mu.counts[x]) * std::polar(1.0, step * static_cast<double>(e));
    }
    return acc / static_cast<double>(mu.total);
}

/// Per-round loss budget f: accepted only if sum_{s=2..inf} 1/f(s) <= 0.99.
struct FBudget {
    enum class Kind { Power, LogLaw, Custom };
    Kind kind = Kind::Power;
    double alpha = 1.735;               // Power: f(s) = s^alpha
    std::vector<double> table;          // Custom: f(2), f(3), ... in order
    double custom_tail = std::numeric_limits<double>::quiet_NaN();  // declared tail bound

    static FBudget power(double alpha) { return {Kind::Power, alpha, {}, 0.0}; }
    /// f(s) = 3 s ln^2 s.
    static FBudget loglaw() { return {Kind::LogLaw, 0.0, {}, 0.0}; }
    static FBudget custom(std::vector<double> table, double tail_bound) {
        return {Kind::Custom, 0.0, std::move(table), tail_bound};
    }

    double eval(std::int64_t s) const {
        if (s < 2) throw std::invalid_argument("FBudget: f is defined for s >= 2");
        switch (kind) {
            case Kind::Power:
                return std::pow(static_cast<double>(s), alpha);
            case Kind::LogLaw: {
                double ls = std::log(static_cast<double>(s));
                return 3.0 * static_cast<double>(s) * ls * ls;
            }
            case Kind::Custom: {
                std::size_t idx = static_cast<std::size_t>(s - 2);
                if (idx >= table.size())
                    throw std::out_of_range("FBudget: custom table has no value for s=" + std::to_string(s));
                return table[idx];
            }
        }
        throw std::logic_error("FBudget: unreachable");
    }

    std::string describe() const {
        switch (kind) {
            case Kind::Power: return "power:" + std::to_string(alpha);
            case Kind::LogLaw: return "loglaw";
            case Kind::Custom: return "custom[" + std::to_string(table.size()) + "]";
        }
        return "?";
    }
};

struct BudgetCheck {
    bool accepted = false;
    double partial_sum = 0.0;  // sum_{s=2}^{s_max} 1/f(s)
    double tail_bound = 0.0;   // upper bound on the rest
    double total() const { return partial_sum + tail_bound; }
};

/// Partial sum to s_max plus an integral bound on the tail. The built-in
/// shapes have closed-form tails; a custom table needs a caller-declared tail
/// bound, otherwise the check cannot bound the series and errors out.
inline BudgetCheck check_f_budget(const FBudget& f, std::int64_t s_max) {
    if (s_max < 2) throw std::invalid_argument("check_f_budget: s_max must be >= 2");
    BudgetCheck out;
    std::int64_t hi = s_max;
    if (f.kind == FBudget::Kind::Custom)
        hi = std::min<std::int64_t>(s_max, static_cast<std::int64_t>(f.table.size()) + 1);
    for (std::int64_t s = 2; s <= hi; ++s) {
        double fs = f.eval(s);
        if (!(fs > 0.0)) throw std::runtime_error("check_f_budget: f must be positive");
        out.partial_sum += 1.0 / fs;
    }
    switch (f.kind) {
        case FBudget::Kind::Power:
            // integral of s^-alpha from s_max to infinity
            out.tail_bound = f.alpha > 1.0
                                 ? std::pow(static_cast<double>(s_max), 1.0 - f.alpha) / (f.alpha - 1.0)
                                 : std::numeric_limits<double>::infinity();
            break;
        case FBudget::Kind::LogLaw:
            // integral of 1/(3 s ln^2 s) from s_max to infinity
            out.tail_bound = 1.0 / (3.0 * std::log(static_cast<double>(s_max)));
            break;
        case FBudget::Kind::Custom:
            if (!std::isfinite(f.custom_tail) || f.custom_tail < 0.0)
                throw std::runtime_error("check_f_budget: custom budget without a tail bound");
            out.tail_bound = f.custom_tail;
            break;
    }
    out.accepted = out.total() <= 0.99;
    return out;
}

/// A character certified to be biased: |E[w_r^(jx)]| >= 1/(s f(s)).
struct BiasCertificate {
    std::int64_t j = 0;
    std::int64_t s = 0;          // character_order(j, r)
    double magnitude = 0.0;      // |E[w_r^(jx)]|
    double threshold = 0.0;      // 1/(s f(s))

    double margin() const { return threshold > 0.0 ? magnitude / threshold : 0.0; }
};

struct CharacterScan {
    BiasCertificate best;
    bool met_threshold = false;
};

/// Scan all j in [1, r-1]. Among the characters meeting their threshold
/// (within tolerance) pick the one with the largest normalized margin
/// magnitude*s*f(s), ties to the smallest j; if none meets it, report the
/// best margin found with met_threshold = false.
inline CharacterScan scan_characters(const ResidueDistribution& mu, const FBudget& f) {
    if (mu.r < 2) throw std::invalid_argument("scan_characters: modulus must be >= 2");
    CharacterScan out;
    bool have_any = false;
    for (std::int64_t j = 1; j < mu.r; ++j) {
        BiasCertificate c;
        c.j = j;
        c.s = character_order(j, mu.r);
        c.magnitude = std::abs(bias_at(mu, j));
        c.threshold = 1.0 / (static_cast<double>(c.s) * f.eval(c.s));
        bool met = c.magnitude >= c.threshold - kBiasTolerance;
        if (met && !out.met_threshold) {
            // first above-threshold hit displaces any below-threshold best
            out.best = c;
            out.met_threshold = true;
            have_any = true;
            continue;
        }
        if (met == out.met_threshold && (!have_any || c.margin() > out.best.margin())) {
            out.best = c;
            have_any = true;
        }
    }
    return out;
}

/// The guaranteed finder: requires mu(0) <= 1/(100 r) (exact integer check)
/// and an accepted budget; a failed scan then signals a bug, not an input
/// problem.
inline BiasCertificate find_biased_character(const ResidueDistribution& mu, const FBudget& f) {
    if (mu.r < 2) throw std::invalid_argument("find_biased_character: modulus must be >= 2");
    if (!mu.zero_mass_small())
        throw std::domain_error("find_biased_character: mu(0) > 1/(100 r)");
    CharacterScan scan = scan_characters(mu, f);
    if (!scan.met_threshold)
        throw std::runtime_error("find_biased_character: no character met its threshold");
    return scan.best;
}

/// Distribution of (<u, v> / (r1 r2)) mod r3 over all t^2 ordered pairs.
/// Every inner product must be divisible by r1*r2 (which holds whenever the
/// family respects the partition); a non-divisible pair is an error.
inline ResidueDistribution inner_residue_distribution(const MvFamily& f, const Partition& p) {
    f.check_structure();
    if (p.m != f.m) throw std::invalid_argument("inner_residue_distribution: partition modulus mismatch");
    if (f.size() == 0) throw std::domain_error("inner_residue_distribution: empty family");
    const WideUInt block = static_cast<WideUInt>(p.r1) * static_cast<WideUInt>(p.r2);
    std::vector<std::uint64_t> counts(static_cast<std::size_t>(p.r3), 0);
    for (const ModVec& u : f.U) {
        for (const ModVec& v : f.V) {
            WideUInt ip = inner_product(u, v);
            if (ip % block != 0)
                throw std::runtime_error("inner_residue_distribution: <u,v> not divisible by r1*r2");
            counts[static_cast<std::size_t>((ip / block) % static_cast<WideUInt>(p.r3))]++;
        }
    }
    return ResidueDistribution::from_counts(p.r3, std::move(counts));
}

}  // namespace mvkit
