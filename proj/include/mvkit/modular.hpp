#pragma once

// Exact integer / modular arithmetic primitives shared by the whole toolkit:
// componentwise mod / quotient decomposition, overflow-checked inner products,
// partitions of a modulus and root-of-unity orders.
//
// All values live in Z (represented as nonnegative int64), never in a wrapped
// machine ring: every predicate downstream is an exact congruence, so inner
// products are accumulated in 128 bits and overflow is an error, not a wrap.

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace mvkit {

/// Vector over Z with nonnegative entries; entries are residue-class
/// representatives for whatever radix the context declares.
using ModVec = std::vector<std::int64_t>;

using WideInt = __int128;
using WideUInt = unsigned __int128;

namespace detail {

inline void require_radix(std::int64_t r) {
    if (r < 1) throw std::invalid_argument("invalid radix: " + std::to_string(r));
}

inline void require_nonnegative(std::int64_t v) {
    if (v < 0) throw std::invalid_argument("negative value rejected: " + std::to_string(v));
}

// Floor-convention mod/div for signed intermediates (bucket shifts produce
// negative differences); the public vmod/vdiv reject negatives instead.
inline std::int64_t floor_mod(std::int64_t v, std::int64_t r) {
    std::int64_t x = v % r;
    return x < 0 ? x + r : x;
}

inline std::int64_t floor_div(std::int64_t v, std::int64_t r) {
    return (v - floor_mod(v, r)) / r;
}

inline std::int64_t floor_mod_wide(WideInt v, std::int64_t r) {
    WideInt x = v % r;
    if (x < 0) x += r;
    return static_cast<std::int64_t>(x);
}

}  // namespace detail

/// v modulo r, result in {0,...,r-1}. By convention a mod 1 = 0.
inline std::int64_t vmod(std::int64_t v, std::int64_t r) {
    detail::require_radix(r);
    detail::require_nonnegative(v);
    return v % r;
}

/// (v - vmod(v,r)) / r, so that v = r*vdiv(v,r) + vmod(v,r).
inline std::int64_t vdiv(std::int64_t v, std::int64_t r) {
    detail::require_radix(r);
    detail::require_nonnegative(v);
    return v / r;
}

inline ModVec vmod(const ModVec& v, std::int64_t r) {
    ModVec out(v.size());
    for (std::size_t k = 0; k < v.size(); ++k) out[k] = vmod(v[k], r);
    return out;
}

inline ModVec vdiv(const ModVec& v, std::int64_t r) {
    ModVec out(v.size());
    for (std::size_t k = 0; k < v.size(); ++k) out[k] = vdiv(v[k], r);
    return out;
}

/// Exact inner product over Z. Entries must be nonnegative and < 2^62 with at
/// most 2^32 coordinates; any accumulator overflow throws instead of wrapping.
inline WideUInt inner_product(const ModVec& u, const ModVec& v) {
    if (u.size() != v.size())
        throw std::invalid_argument("inner_product: dimension mismatch (" +
                                    std::to_string(u.size()) + " vs " + std::to_string(v.size()) + ")");
    constexpr std::int64_t kEntryCap = std::int64_t{1} << 62;
    WideUInt acc = 0;
    for (std::size_t k = 0; k < u.size(); ++k) {
        detail::require_nonnegative(u[k]);
        detail::require_nonnegative(v[k]);
        if (u[k] >= kEntryCap || v[k] >= kEntryCap)
            throw std::overflow_error("inner_product: entry exceeds 2^62 contract");
        WideUInt term = static_cast<WideUInt>(u[k]) * static_cast<WideUInt>(v[k]);
        WideUInt next = acc + term;
        if (next < acc) throw std::overflow_error("inner_product: 128-bit accumulator overflow");
        acc = next;
    }
    return acc;
}

/// inner_product reduced mod r (r >= 1).
inline std::int64_t inner_product_mod(const ModVec& u, const ModVec& v, std::int64_t r) {
    detail::require_radix(r);
    return static_cast<std::int64_t>(inner_product(u, v) % static_cast<WideUInt>(r));
}

/// A factorization m = r1*r2*r3 tracking the state of the reduction;
/// components need not be coprime.
struct Partition {
    std::int64_t r1 = 1;
    std::int64_t r2 = 1;
    std::int64_t r3 = 1;
    std::int64_t m = 1;

    static Partition base(std::int64_t m) { return Partition{1, 1, m, m}; }

    bool operator==(const Partition&) const = default;
};

inline Partition validate_partition(std::int64_t r1, std::int64_t r2, std::int64_t r3, std::int64_t m) {
    if (r1 < 1 || r2 < 1 || r3 < 1 || m < 1)
        throw std::invalid_argument("partition components must be positive");
    WideUInt prod = static_cast<WideUInt>(r1) * static_cast<WideUInt>(r2);
    prod *= static_cast<WideUInt>(r3);
    if (prod != static_cast<WideUInt>(m))
        throw std::invalid_argument("invalid partition: " + std::to_string(r1) + "*" + std::to_string(r2) +
                                    "*" + std::to_string(r3) + " != " + std::to_string(m));
    return Partition{r1, r2, r3, m};
}

/// Multiplicative order of the character x -> exp(2*pi*i*j*x/r3), i.e.
/// r3 / gcd(j, r3). Defined for 1 <= j <= r3-1, so the order is always >= 2.
inline std::int64_t character_order(std::int64_t j, std::int64_t r3) {
    detail::require_radix(r3);
    if (j < 1 || j > r3 - 1)
        throw std::out_of_range("character_order: j=" + std::to_string(j) + " out of [1," +
                                std::to_string(r3 - 1) + "]");
    return r3 / std::gcd(j, r3);
}

/// Modular inverse of a mod r (gcd(a,r) must be 1).
inline std::int64_t mod_inverse(std::int64_t a, std::int64_t r) {
    detail::require_radix(r);
    a = detail::floor_mod(a, r);
    std::int64_t t = 0, new_t = 1, rr = r, new_r = a;
    while (new_r != 0) {
        std::int64_t q = rr / new_r;
        std::int64_t tmp = t - q * new_t;
        t = new_t;
        new_t = tmp;
        tmp = rr - q * new_r;
        rr = new_r;
        new_r = tmp;
    }
    if (rr != 1)
        throw std::domain_error("mod_inverse: " + std::to_string(a) + " not invertible mod " + std::to_string(r));
    return detail::floor_mod(t, r);
}

inline bool is_squarefree(std::int64_t m) {
    detail::require_radix(m);
    for (std::int64_t d = 2; d * d <= m; ++d) {
        if (m % d == 0) {
            m /= d;
            if (m % d == 0) return false;
        }
    }
    return true;
}

}  // namespace mvkit
