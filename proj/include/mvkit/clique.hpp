#pragma once

// Exact value of MV(m, n) at desk scale via maximum clique.
//
// Vertices are the pairs (u, v) in Z_m^n x Z_m^n with <u, v> == 0 (mod m);
// two vertices are adjacent when both cross products are nonzero mod m, so a
// clique is exactly a matching-vector family. The search is a deterministic
// branch-and-bound with greedy-coloring upper bounds over a degeneracy order.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "mvkit/family.hpp"

namespace mvkit {

struct SearchBudget {
    std::uint64_t max_nodes = 50'000'000;  // branch nodes before giving up
};

struct MvSearchResult {
    std::int64_t value = 0;      // exact MV(m,n) when optimal, else a lower bound
    MvFamily witness;            // verified family of that size
    bool optimal = true;
    std::uint64_t nodes = 0;
    std::size_t vertex_count = 0;
};

namespace detail {

// Dense undirected graph on adjacency bitsets.
class CliqueGraph {
public:
    explicit CliqueGraph(std::size_t n) : n_(n), words_((n + 63) / 64), adj_(n * words_, 0) {}

    void add_edge(std::size_t a, std::size_t b) {
        adj_[a * words_ + b / 64] |= std::uint64_t{1} << (b % 64);
        adj_[b * words_ + a / 64] |= std::uint64_t{1} << (a % 64);
    }

    bool adjacent(std::size_t a, std::size_t b) const {
        return (adj_[a * words_ + b / 64] >> (b % 64)) & 1u;
    }

    std::size_t size() const { return n_; }

    std::size_t degree(std::size_t a) const {
        std::size_t d = 0;
        for (std::size_t w = 0; w < words_; ++w) d += std::popcount(adj_[a * words_ + w]);
        return d;
    }

    const std::uint64_t* row(std::size_t a) const { return adj_.data() + a * words_; }
    std::size_t words() const { return words_; }

private:
    std::size_t n_;
    std::size_t words_;
    std::vector<std::uint64_t> adj_;
};

class BranchAndBound {
public:
    BranchAndBound(const CliqueGraph& g, std::uint64_t max_nodes)
        : g_(g), max_nodes_(max_nodes) {}

    // Returns true when the search completed within budget.
    bool run(std::vector<std::size_t>& best) {
        std::vector<std::size_t> order = degeneracy_order();
        std::vector<std::size_t> cand(order.rbegin(), order.rend());
        current_.clear();
        best_.clear();
        budget_hit_ = false;
        expand(cand);
        best = best_;
        return !budget_hit_;
    }

    std::uint64_t nodes() const { return nodes_; }

private:
    // Smallest-degree-last ordering; classic preprocessing for clique search.
    std::vector<std::size_t> degeneracy_order() const {
        const std::size_t n = g_.size();
        std::vector<std::size_t> deg(n), order;
        std::vector<bool> removed(n, false);
        for (std::size_t v = 0; v < n; ++v) deg[v] = g_.degree(v);
        order.reserve(n);
        for (std::size_t step = 0; step < n; ++step) {
            std::size_t pick = n;
            for (std::size_t v = 0; v < n; ++v)
                if (!removed[v] && (pick == n || deg[v] < deg[pick])) pick = v;
            removed[pick] = true;
            order.push_back(pick);
            for (std::size_t v = 0; v < n; ++v)
                if (!removed[v] && g_.adjacent(pick, v)) --deg[v];
        }
        return order;
    }

    // Greedy coloring of cand; returns vertices reordered by color with their
    // color numbers (1-based), so color is an upper bound on any clique inside.
    void color_sort(const std::vector<std::size_t>& cand, std::vector<std::size_t>& ordered,
                    std::vector<std::size_t>& colors) const {
        ordered.clear();
        colors.clear();
        std::vector<std::vector<std::size_t>> classes;
        for (std::size_t v : cand) {
            std::size_t c = 0;
            for (; c < classes.size(); ++c) {
                bool clash = false;
                for (std::size_t u : classes[c])
                    if (g_.adjacent(u, v)) { clash = true; break; }
                if (!clash) break;
            }
            if (c == classes.size()) classes.emplace_back();
            classes[c].push_back(v);
        }
        for (std::size_t c = 0; c < classes.size(); ++c)
            for (std::size_t v : classes[c]) {
                ordered.push_back(v);
                colors.push_back(c + 1);
            }
    }

    void expand(const std::vector<std::size_t>& cand) {
        if (budget_hit_) return;
        if (++nodes_ > max_nodes_) { budget_hit_ = true; return; }
        if (cand.empty()) {
            if (current_.size() > best_.size()) best_ = current_;
            return;
        }
        std::vector<std::size_t> ordered, colors;
        color_sort(cand, ordered, colors);
        for (std::size_t idx = ordered.size(); idx-- > 0;) {
            if (current_.size() + colors[idx] <= best_.size()) return;  // bound
            std::size_t v = ordered[idx];
            current_.push_back(v);
            std::vector<std::size_t> next;
            for (std::size_t k = 0; k < idx; ++k)
                if (g_.adjacent(ordered[k], v)) next.push_back(ordered[k]);
            expand(next);
            current_.pop_back();
            if (budget_hit_) return;
        }
    }

    const CliqueGraph& g_;
    std::uint64_t max_nodes_;
    std::uint64_t nodes_ = 0;
    bool budget_hit_ = false;
    std::vector<std::size_t> current_;
    std::vector<std::size_t> best_;
};

inline bool next_vector(ModVec& w, std::int64_t m) {
    for (std::size_t k = w.size(); k-- > 0;) {
        if (++w[k] < m) return true;
        w[k] = 0;
    }
    return false;
}

}  // namespace detail

/// Exact MV(m, n) with a witness family, or the best lower bound found when
/// the node budget runs out (flagged non-optimal). Deterministic.
inline MvSearchResult brute_force_mv(std::int64_t m, std::int64_t n,
                                     const SearchBudget& budget = {}) {
    if (m < 2 || n < 1) throw std::invalid_argument("brute_force_mv: need m >= 2, n >= 1");
    double pair_checks = 1.0;
    for (std::int64_t k = 0; k < 2 * n; ++k) pair_checks *= static_cast<double>(m);
    if (pair_checks > 1e8)
        throw std::invalid_argument("brute_force_mv: m^(2n) too large for the dense search");

    // Candidate vertices: all (u, v) with a vanishing inner product mod m.
    // Mixed-radix enumeration yields each pair once, so no deduplication pass
    // is needed.
    std::vector<std::pair<ModVec, ModVec>> verts;
    ModVec u(n, 0);
    do {
        ModVec v(n, 0);
        do {
            if (inner_product_mod(u, v, m) == 0) verts.emplace_back(u, v);
        } while (detail::next_vector(v, m));
    } while (detail::next_vector(u, m));

    detail::CliqueGraph g(verts.size());
    for (std::size_t a = 0; a < verts.size(); ++a)
        for (std::size_t b = a + 1; b < verts.size(); ++b)
            if (inner_product_mod(verts[a].first, verts[b].second, m) != 0 &&
                inner_product_mod(verts[b].first, verts[a].second, m) != 0)
                g.add_edge(a, b);

    detail::BranchAndBound bb(g, budget.max_nodes);
    std::vector<std::size_t> best;
    bool complete = bb.run(best);
    std::sort(best.begin(), best.end());

    MvSearchResult res;
    res.optimal = complete;
    res.nodes = bb.nodes();
    res.vertex_count = verts.size();
    res.value = static_cast<std::int64_t>(best.size());
    res.witness.m = m;
    res.witness.n = n;
    for (std::size_t v : best) {
        res.witness.U.push_back(verts[v].first);
        res.witness.V.push_back(verts[v].second);
    }
    if (!verify_mv(res.witness).pass)
        throw std::runtime_error("brute_force_mv: internal error, witness fails verification");
    return res;
}

}  // namespace mvkit
