#pragma once

// Matching-vector families over Z_m^n: the MvFamily value type, its
// verification and structural predicates, and canonical small constructions.
//
// (U, V) with |U| = |V| = t is a matching-vector family when
//   <u_i, v_i> == 0 (mod m)   for every i, and
//   <u_i, v_j> != 0 (mod m)   for every i != j.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "mvkit/modular.hpp"

namespace mvkit {

struct MvFamily {
    std::int64_t m = 2;          // modulus, >= 2
    std::int64_t n = 1;          // dimension, >= 1
    std::vector<ModVec> U;       // t vectors, entries in {0,...,m-1}
    std::vector<ModVec> V;       // t vectors, entries in {0,...,m-1}

    std::int64_t size() const { return static_cast<std::int64_t>(U.size()); }

    /// Shape invariants only (the MV property itself is checked by verify_mv).
    void check_structure() const {
        if (m < 2) throw std::invalid_argument("family: modulus must be >= 2");
        if (n < 1) throw std::invalid_argument("family: dimension must be >= 1");
        if (U.size() != V.size()) throw std::invalid_argument("family: |U| != |V|");
        for (const auto* side : {&U, &V}) {
            for (const ModVec& w : *side) {
                if (static_cast<std::int64_t>(w.size()) != n)
                    throw std::invalid_argument("family: vector length != n");
                for (std::int64_t e : w)
                    if (e < 0 || e >= m)
                        throw std::invalid_argument("family: entry " + std::to_string(e) +
                                                    " out of range [0," + std::to_string(m) + ")");
            }
        }
    }
};

struct VerifyReport {
    bool pass = true;
    // First violation in lexicographic (i, j) order; kind distinguishes a
    // nonzero diagonal from a vanishing cross product.
    enum class Kind { None, DiagonalNonzero, CrossZero } kind = Kind::None;
    std::int64_t i = -1;
    std::int64_t j = -1;

    std::string describe() const {
        if (pass) return "pass";
        const char* what = kind == Kind::DiagonalNonzero ? "<u_i,v_i> != 0" : "<u_i,v_j> == 0";
        return std::string(what) + " (mod m) at i=" + std::to_string(i) + " j=" + std::to_string(j);
    }
};

/// Check the matching-vector property; reports the first violating pair.
/// Families of size <= 1 pass vacuously.
inline VerifyReport verify_mv(const MvFamily& f) {
    f.check_structure();
    const std::int64_t t = f.size();
    for (std::int64_t i = 0; i < t; ++i) {
        for (std::int64_t j = 0; j < t; ++j) {
            std::int64_t ip = inner_product_mod(f.U[i], f.V[j], f.m);
            if (i == j && ip != 0)
                return {false, VerifyReport::Kind::DiagonalNonzero, i, j};
            if (i != j && ip == 0)
                return {false, VerifyReport::Kind::CrossZero, i, j};
        }
    }
    return {};
}

/// Witness that a family respects a partition (r1, r2, r3):
///   u0 = common residue of all u_i mod r1,
///   v0 = common residue of all v_i mod r2,
///   cU = common value of <u_i div r1, v0> mod r2,
///   cV = common value of <u0, v_i div r2> mod r1.
struct RespectWitness {
    ModVec u0;
    ModVec v0;
    std::int64_t cU = 0;
    std::int64_t cV = 0;

    bool operator==(const RespectWitness&) const = default;
};

/// The four-condition structural predicate. Returns the witness when all u_i
/// agree mod r1, all v_i agree mod r2, and the two cross statistics are
/// constant; nullopt otherwise. Requires a nonempty family (the witness is
/// ill-defined at t = 0).
inline std::optional<RespectWitness> respects(const MvFamily& f, const Partition& p) {
    f.check_structure();
    if (p.m != f.m)
        throw std::invalid_argument("respects: partition modulus " + std::to_string(p.m) +
                                    " does not match family modulus " + std::to_string(f.m));
    const std::int64_t t = f.size();
    if (t == 0) throw std::domain_error("respects: witness undefined for empty family");

    RespectWitness w;
    w.u0 = vmod(f.U[0], p.r1);
    w.v0 = vmod(f.V[0], p.r2);
    for (std::int64_t i = 1; i < t; ++i) {
        if (vmod(f.U[i], p.r1) != w.u0) return std::nullopt;
        if (vmod(f.V[i], p.r2) != w.v0) return std::nullopt;
    }
    w.cU = inner_product_mod(vdiv(f.U[0], p.r1), w.v0, p.r2);
    w.cV = inner_product_mod(w.u0, vdiv(f.V[0], p.r2), p.r1);
    for (std::int64_t i = 1; i < t; ++i) {
        if (inner_product_mod(vdiv(f.U[i], p.r1), w.v0, p.r2) != w.cU) return std::nullopt;
        if (inner_product_mod(w.u0, vdiv(f.V[i], p.r2), p.r1) != w.cV) return std::nullopt;
    }
    return w;
}

/// True iff every ordered pair, diagonal and cross, has <u_i, v_j> == 0
/// (mod r1*r2). Holds whenever the family respects (r1, r2, r3).
inline bool zero_block_check(const MvFamily& f, const Partition& p) {
    f.check_structure();
    const std::int64_t block = p.r1 * p.r2;
    for (const ModVec& u : f.U)
        for (const ModVec& v : f.V)
            if (inner_product_mod(u, v, block) != 0) return false;
    return true;
}

/// Strictly increasing positions into [0, t).
struct SubfamilyIndex {
    std::vector<std::int64_t> indices;
};

inline MvFamily subfamily(const MvFamily& f, const SubfamilyIndex& sel) {
    if (sel.indices.empty()) throw std::invalid_argument("subfamily: empty selection");
    MvFamily out;
    out.m = f.m;
    out.n = f.n;
    std::int64_t prev = -1;
    for (std::int64_t idx : sel.indices) {
        if (idx < 0 || idx >= f.size())
            throw std::out_of_range("subfamily: index " + std::to_string(idx) + " out of range");
        if (idx <= prev)
            throw std::out_of_range("subfamily: indices must be strictly increasing");
        prev = idx;
        out.U.push_back(f.U[idx]);
        out.V.push_back(f.V[idx]);
    }
    return out;
}

/// u_i = e_i, v_j = all-ones minus e_j, so <u_i, v_j> = 1 - [i == j].
/// Dimension equals the size; handy for making t as large as needed.
inline MvFamily unit_family(std::int64_t m, std::int64_t t) {
    if (m < 2) throw std::invalid_argument("unit_family: m must be >= 2");
    if (t < 1) throw std::invalid_argument("unit_family: t must be >= 1");
    MvFamily f;
    f.m = m;
    f.n = t;
    f.U.assign(t, ModVec(t, 0));
    f.V.assign(t, ModVec(t, 1));
    for (std::int64_t i = 0; i < t; ++i) {
        f.U[i][i] = 1;
        f.V[i][i] = 0;
    }
    return f;
}

/// The classical size-m family in Z_m^2: u_i = (i, 1), v_j = (1, (m-j) mod m),
/// so <u_i, v_j> == i - j (mod m).
inline MvFamily canonical_family(std::int64_t m) {
    if (m < 2) throw std::invalid_argument("canonical_family: m must be >= 2");
    MvFamily f;
    f.m = m;
    f.n = 2;
    for (std::int64_t i = 0; i < m; ++i) {
        f.U.push_back({i, 1});
        f.V.push_back({1, (m - i) % m});
    }
    return f;
}

/// Randomized greedy growth: sample pairs with a vanishing diagonal product
/// and keep those compatible with everything chosen so far. Deterministic
/// given the seed; the result always passes verify_mv.
inline MvFamily random_greedy_family(std::int64_t m, std::int64_t n, std::int64_t attempts,
                                     std::uint64_t seed) {
    if (m < 2) throw std::invalid_argument("random_greedy_family: m must be >= 2");
    if (n < 1) throw std::invalid_argument("random_greedy_family: n must be >= 1");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::int64_t> entry(0, m - 1);
    MvFamily f;
    f.m = m;
    f.n = n;
    for (std::int64_t a = 0; a < attempts; ++a) {
        ModVec u(n), v(n);
        for (auto& e : u) e = entry(rng);
        for (auto& e : v) e = entry(rng);
        if (inner_product_mod(u, v, m) != 0) continue;
        bool ok = true;
        for (std::int64_t i = 0; i < f.size() && ok; ++i) {
            if (inner_product_mod(f.U[i], v, m) == 0) ok = false;
            if (ok && inner_product_mod(u, f.V[i], m) == 0) ok = false;
        }
        if (ok) {
            f.U.push_back(std::move(u));
            f.V.push_back(std::move(v));
        }
    }
    return f;
}

}  // namespace mvkit
