#pragma once

// The locally decodable code built on a matching-vector family: t message
// symbols go into m^n codeword symbols and any single symbol is recovered
// from m queries.
//
// The field is Z_p for the smallest prime p == 1 (mod m), where a fixed
// element gamma of exact multiplicative order m plays the role of an m-th
// root of unity:
//   C(w)      = sum_j x_j gamma^<u_j, w>           for w in Z_m^n,
//   decode(i) = gamma^-<u_i, w> m^-1 sum_l C(w + l v_i)   for random w.
// On a clean codeword the cross terms vanish (sum_l gamma^(l c) = 0 for
// c != 0 mod m), so decoding is exact whenever all m queried cells are clean.

#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <vector>

#include "mvkit/family.hpp"
#include "mvkit/modular.hpp"

namespace mvkit {

namespace detail {

inline std::int64_t pow_mod(std::int64_t base, std::int64_t exp, std::int64_t mod) {
    std::int64_t r = 1 % mod;
    base = floor_mod(base, mod);
    while (exp > 0) {
        if (exp & 1) r = static_cast<std::int64_t>(static_cast<WideInt>(r) * base % mod);
        base = static_cast<std::int64_t>(static_cast<WideInt>(base) * base % mod);
        exp >>= 1;
    }
    return r;
}

inline bool is_prime(std::int64_t p) {
    if (p < 2) return false;
    for (std::int64_t d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

inline std::vector<std::int64_t> prime_factors(std::int64_t v) {
    std::vector<std::int64_t> out;
    for (std::int64_t d = 2; d * d <= v; ++d) {
        if (v % d == 0) {
            out.push_back(d);
            while (v % d == 0) v /= d;
        }
    }
    if (v > 1) out.push_back(v);
    return out;
}

// Counter-derived per-trial seeds (splitmix64), independent of scheduling.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t counter) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (counter + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

}  // namespace detail

struct CodeParams {
    MvFamily family;         // verified, t >= 1
    std::int64_t p = 0;      // smallest prime == 1 (mod m), p >= m+1
    std::int64_t gamma = 0;  // element of exact order m mod p
    std::uint64_t N = 0;     // m^n codeword symbols

    std::int64_t K() const { return family.size(); }
    std::int64_t queries() const { return family.m; }
};

inline constexpr std::int64_t kPrimeSearchCap = 1'000'000'000;
inline constexpr std::uint64_t kCodewordCap = 10'000'000;

/// Field setup: smallest prime p == 1 (mod m) by trial, gamma = g^((p-1)/m)
/// for the smallest primitive root g mod p; the exact order of gamma is
/// verified before returning.
inline CodeParams ldc_setup(const MvFamily& f) {
    VerifyReport vr = verify_mv(f);
    if (!vr.pass) throw std::invalid_argument("ldc_setup: family fails verification: " + vr.describe());
    if (f.size() < 1) throw std::invalid_argument("ldc_setup: need a nonempty family");

    CodeParams params;
    params.family = f;
    std::int64_t p = 0;
    for (std::int64_t cand = f.m + 1; cand <= kPrimeSearchCap; cand += f.m) {
        if (detail::is_prime(cand)) { p = cand; break; }
    }
    if (p == 0) throw std::runtime_error("ldc_setup: no prime == 1 (mod m) below the cap");
    params.p = p;

    auto pm1_factors = detail::prime_factors(p - 1);
    std::int64_t g = 0;
    for (std::int64_t cand = 2; cand < p; ++cand) {
        bool primitive = true;
        for (std::int64_t q : pm1_factors)
            if (detail::pow_mod(cand, (p - 1) / q, p) == 1) { primitive = false; break; }
        if (primitive) { g = cand; break; }
    }
    if (g == 0) throw std::runtime_error("ldc_setup: no primitive root found");
    params.gamma = detail::pow_mod(g, (p - 1) / f.m, p);

    if (detail::pow_mod(params.gamma, f.m, p) != 1)
        throw std::runtime_error("ldc_setup: gamma^m != 1");
    for (std::int64_t q : detail::prime_factors(f.m))
        if (detail::pow_mod(params.gamma, f.m / q, p) == 1)
            throw std::runtime_error("ldc_setup: gamma has order below m");

    std::uint64_t N = 1;
    for (std::int64_t k = 0; k < f.n; ++k) {
        N *= static_cast<std::uint64_t>(f.m);
        if (N > kCodewordCap) throw std::invalid_argument("ldc_setup: m^n exceeds the codeword cap");
    }
    params.N = N;
    return params;
}

/// Dense codeword: N = m^n field elements indexed by w in Z_m^n in
/// mixed-radix row-major order (first coordinate most significant):
///   index(w) = w_0 m^(n-1) + w_1 m^(n-2) + ... + w_(n-1).
struct Codeword {
    std::int64_t m = 0;
    std::int64_t n = 0;
    std::int64_t p = 0;
    std::int64_t t = 0;
    std::vector<std::int64_t> values;
};

inline std::uint64_t position_of(const ModVec& w, std::int64_t m) {
    std::uint64_t idx = 0;
    for (std::int64_t e : w) idx = idx * static_cast<std::uint64_t>(m) + static_cast<std::uint64_t>(e);
    return idx;
}

inline ModVec coords_of(std::uint64_t idx, std::int64_t m, std::int64_t n) {
    ModVec w(static_cast<std::size_t>(n));
    for (std::int64_t k = n; k-- > 0;) {
        w[static_cast<std::size_t>(k)] = static_cast<std::int64_t>(idx % static_cast<std::uint64_t>(m));
        idx /= static_cast<std::uint64_t>(m);
    }
    return w;
}

/// C(w) = sum_j x_j gamma^(<u_j, w> mod m) in Z_p, for every w.
inline Codeword encode(const CodeParams& params, const std::vector<std::int64_t>& x) {
    const MvFamily& f = params.family;
    if (static_cast<std::int64_t>(x.size()) != f.size())
        throw std::invalid_argument("encode: message length != family size");
    for (std::int64_t e : x)
        if (e < 0 || e >= params.p) throw std::invalid_argument("encode: message symbol out of Z_p");

    Codeword c;
    c.m = f.m;
    c.n = f.n;
    c.p = params.p;
    c.t = f.size();
    c.values.assign(params.N, 0);

    // gamma powers cycle with period m
    std::vector<std::int64_t> gpow(static_cast<std::size_t>(f.m));
    for (std::int64_t e = 0; e < f.m; ++e) gpow[static_cast<std::size_t>(e)] = detail::pow_mod(params.gamma, e, params.p);

    ModVec w(static_cast<std::size_t>(f.n), 0);
    for (std::uint64_t idx = 0; idx < params.N; ++idx) {
        std::int64_t acc = 0;
        for (std::int64_t jj = 0; jj < f.size(); ++jj) {
            std::int64_t e = inner_product_mod(f.U[jj], w, f.m);
            acc = static_cast<std::int64_t>(
                (static_cast<WideInt>(acc) + static_cast<WideInt>(x[jj]) * gpow[static_cast<std::size_t>(e)]) %
                params.p);
        }
        c.values[idx] = acc;
        // advance w in row-major order
        for (std::size_t k = w.size(); k-- > 0;) {
            if (++w[k] < f.m) break;
            w[k] = 0;
        }
    }
    return c;
}

/// Position-indexed access to a (possibly corrupted) codeword.
using CodewordOracle = std::function<std::int64_t(std::uint64_t)>;

inline CodewordOracle oracle_of(const Codeword& c) {
    return [&c](std::uint64_t idx) { return c.values.at(idx); };
}

struct DecodeResult {
    std::int64_t symbol = 0;
    bool in_alphabet = false;  // symbol in {0, 1}
    ModVec start;              // the sampled w, kept for auditability
};

/// Recover message symbol i with exactly m queries at w + l*v_i, l = 0..m-1.
/// Exact on a clean codeword; under corruption errors surface either as an
/// out-of-alphabet flag or as a silent symbol error, as with any such code.
inline DecodeResult decode_bit(const CodeParams& params, const CodewordOracle& oracle, std::int64_t i,
                               std::mt19937_64& rng) {
    const MvFamily& f = params.family;
    if (i < 0 || i >= f.size()) throw std::out_of_range("decode_bit: message index out of range");

    std::uniform_int_distribution<std::int64_t> entry(0, f.m - 1);
    ModVec w(static_cast<std::size_t>(f.n));
    for (auto& e : w) e = entry(rng);

    std::int64_t sum = 0;
    ModVec pos(static_cast<std::size_t>(f.n));
    for (std::int64_t l = 0; l < f.m; ++l) {
        for (std::int64_t c = 0; c < f.n; ++c)
            pos[static_cast<std::size_t>(c)] =
                (w[static_cast<std::size_t>(c)] + l * f.V[i][static_cast<std::size_t>(c)]) % f.m;
        sum = (sum + oracle(position_of(pos, f.m))) % params.p;
    }
    std::int64_t e = inner_product_mod(f.U[i], w, f.m);
    std::int64_t gamma_neg = detail::pow_mod(params.gamma, (f.m - e) % f.m, params.p);
    std::int64_t m_inv = detail::pow_mod(f.m % params.p, params.p - 2, params.p);
    std::int64_t r = static_cast<std::int64_t>(static_cast<WideInt>(sum) * gamma_neg % params.p);
    r = static_cast<std::int64_t>(static_cast<WideInt>(r) * m_inv % params.p);

    DecodeResult out;
    out.symbol = r;
    out.in_alphabet = r == 0 || r == 1;
    out.start = std::move(w);
    return out;
}

inline DecodeResult decode_bit(const CodeParams& params, const Codeword& c, std::int64_t i,
                               std::mt19937_64& rng) {
    return decode_bit(params, oracle_of(c), i, rng);
}

struct ChannelSpec {
    double delta = 0.0;        // corruption fraction in [0, 1]
    std::uint64_t seed = 1;
};

/// Replace exactly floor(delta*N) distinct positions with uniformly random
/// different field elements. Deterministic given the seed.
inline Codeword corrupt(const Codeword& c, const ChannelSpec& ch) {
    if (ch.delta < 0.0 || ch.delta > 1.0) throw std::invalid_argument("corrupt: delta out of [0,1]");
    Codeword out = c;
    const std::uint64_t N = c.values.size();
    const std::uint64_t hits = static_cast<std::uint64_t>(ch.delta * static_cast<double>(N));
    if (hits == 0) return out;

    std::mt19937_64 rng(ch.seed);
    std::vector<std::uint64_t> idx(N);
    for (std::uint64_t k = 0; k < N; ++k) idx[k] = k;
    for (std::uint64_t k = 0; k < hits; ++k) {  // partial Fisher-Yates
        std::uniform_int_distribution<std::uint64_t> pick(k, N - 1);
        std::swap(idx[k], idx[pick(rng)]);
        std::uniform_int_distribution<std::int64_t> shift(1, c.p - 1);
        std::uint64_t pos = idx[k];
        out.values[pos] = (out.values[pos] + shift(rng)) % c.p;
    }
    return out;
}

struct SimulationReport {
    std::int64_t trials = 0;
    double delta = 0.0;
    std::uint64_t seed = 1;
    std::vector<double> per_bit;   // exact-recovery rate per message index
    double mean = 0.0;
    double union_floor = 0.0;      // 1 - m*delta
    bool floor_vacuous = false;    // the floor is negative in this regime
};

/// Empirical exact-recovery rates: per trial, corrupt with a derived seed and
/// decode every symbol with fresh derived randomness. Deterministic given
/// (seed, trials).
inline SimulationReport simulate(const CodeParams& params, const std::vector<std::int64_t>& x,
                                 double delta, std::int64_t trials, std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("simulate: trials must be >= 1");
    Codeword clean = encode(params, x);
    const std::int64_t t = params.family.size();

    SimulationReport rep;
    rep.trials = trials;
    rep.delta = delta;
    rep.seed = seed;
    rep.per_bit.assign(static_cast<std::size_t>(t), 0.0);
    rep.union_floor = 1.0 - static_cast<double>(params.family.m) * delta;
    rep.floor_vacuous = rep.union_floor < 0.0;

    for (std::int64_t trial = 0; trial < trials; ++trial) {
        Codeword noisy = corrupt(clean, ChannelSpec{delta, detail::derive_seed(seed, static_cast<std::uint64_t>(trial))});
        for (std::int64_t i = 0; i < t; ++i) {
            std::mt19937_64 rng(detail::derive_seed(seed, static_cast<std::uint64_t>(trial) * static_cast<std::uint64_t>(t) +
                                                              static_cast<std::uint64_t>(i) + 0x100000000ull));
            DecodeResult d = decode_bit(params, noisy, i, rng);
            if (d.symbol == x[static_cast<std::size_t>(i)]) rep.per_bit[static_cast<std::size_t>(i)] += 1.0;
        }
    }
    for (double& v : rep.per_bit) v /= static_cast<double>(trials);
    for (double v : rep.per_bit) rep.mean += v;
    rep.mean /= static_cast<double>(t);
    return rep;
}

}  // namespace mvkit
