#include <gtest/gtest.h>

#include "mvkit/clique.hpp"

using namespace mvkit;

namespace {

// Independent oracle: plain depth-first extension over the candidate pairs,
// no ordering or coloring tricks. Only for tiny instances.
struct NaiveSearch {
    std::vector<std::pair<ModVec, ModVec>> verts;
    std::int64_t m;
    std::size_t best = 0;

    bool compatible(std::size_t a, std::size_t b) const {
        return inner_product_mod(verts[a].first, verts[b].second, m) != 0 &&
               inner_product_mod(verts[b].first, verts[a].second, m) != 0;
    }

    void extend(std::vector<std::size_t>& cur, std::size_t from) {
        best = std::max(best, cur.size());
        for (std::size_t v = from; v < verts.size(); ++v) {
            bool ok = true;
            for (std::size_t u : cur)
                if (!compatible(u, v)) { ok = false; break; }
            if (ok) {
                cur.push_back(v);
                extend(cur, v + 1);
                cur.pop_back();
            }
        }
    }
};

std::size_t naive_mv(std::int64_t m, std::int64_t n) {
    NaiveSearch s;
    s.m = m;
    ModVec u(n, 0);
    bool more_u = true;
    while (more_u) {
        ModVec v(n, 0);
        bool more_v = true;
        while (more_v) {
            if (inner_product_mod(u, v, m) == 0) s.verts.emplace_back(u, v);
            more_v = false;
            for (std::size_t k = v.size(); k-- > 0;) {
                if (++v[k] < m) { more_v = true; break; }
                v[k] = 0;
            }
        }
        more_u = false;
        for (std::size_t k = u.size(); k-- > 0;) {
            if (++u[k] < m) { more_u = true; break; }
            u[k] = 0;
        }
    }
    std::vector<std::size_t> cur;
    s.extend(cur, 0);
    return s.best;
}

}  // namespace

// Frozen values, computed by the naive oracle above:
//   MV(2,1) = 1   (the three candidate pairs are pairwise incompatible)
//   MV(3,1) = 1, MV(4,1) = 1
//   MV(2,2) = 3, MV(2,3) = 3, MV(3,2) = 4
TEST(BruteForce, AgreesWithNaiveOracle) {
    struct Case { std::int64_t m, n; };
    for (Case c : {Case{2, 1}, Case{3, 1}, Case{4, 1}, Case{2, 2}, Case{2, 3}, Case{3, 2}, Case{4, 2},
                   Case{12, 1}}) {
        MvSearchResult r = brute_force_mv(c.m, c.n);
        ASSERT_TRUE(r.optimal);
        EXPECT_EQ(static_cast<std::size_t>(r.value), naive_mv(c.m, c.n))
            << "m=" << c.m << " n=" << c.n;
        EXPECT_TRUE(verify_mv(r.witness).pass);
        EXPECT_EQ(r.witness.size(), r.value);
    }
}

TEST(BruteForce, KnownSmallValues) {
    EXPECT_EQ(brute_force_mv(2, 1).value, 1);
    EXPECT_EQ(brute_force_mv(3, 1).value, 1);
    EXPECT_EQ(brute_force_mv(4, 1).value, 1);
    EXPECT_EQ(brute_force_mv(2, 2).value, 3);
    EXPECT_EQ(brute_force_mv(2, 3).value, 3);
    EXPECT_EQ(brute_force_mv(3, 2).value, 4);
    EXPECT_EQ(brute_force_mv(5, 2).value, 6);   // beats the canonical witness 5
    EXPECT_EQ(brute_force_mv(6, 2).value, 12);  // composite m: double the canonical witness
    EXPECT_EQ(brute_force_mv(8, 1).value, 1);
    EXPECT_EQ(brute_force_mv(12, 1).value, 2);  // e.g. (3,4) and (4,3)
}

TEST(BruteForce, InstanceSizes) {
    EXPECT_EQ(brute_force_mv(3, 2).vertex_count, 33u);  // 9 pairs for u=0, 3 for each other u
    EXPECT_EQ(brute_force_mv(2, 1).vertex_count, 3u);
}

TEST(BruteForce, DominatesGenerators) {
    // every generated family is a lower-bound witness for the same (m, n)
    for (std::int64_t m : {2, 3, 4}) {
        MvSearchResult r = brute_force_mv(m, 2);
        ASSERT_TRUE(r.optimal);
        EXPECT_GE(r.value, canonical_family(m).size()) << "MV(m,2) >= m failed at m=" << m;
    }
    EXPECT_GE(brute_force_mv(2, 2).value, unit_family(2, 2).size());
}

TEST(BruteForce, MonotoneInDimension) {
    for (std::int64_t m : {2, 3}) {
        std::int64_t prev = 0;
        for (std::int64_t n = 1; n <= (m == 2 ? 3 : 2); ++n) {
            std::int64_t v = brute_force_mv(m, n).value;
            EXPECT_GE(v, prev);
            prev = v;
        }
    }
}

TEST(BruteForce, BudgetReturnsLowerBound) {
    SearchBudget tiny{3};
    MvSearchResult r = brute_force_mv(3, 2, tiny);
    EXPECT_FALSE(r.optimal);
    EXPECT_TRUE(verify_mv(r.witness).pass);
    EXPECT_LE(static_cast<std::size_t>(r.value), naive_mv(3, 2));  // never exceeds the true value
}

TEST(BruteForce, Determinism) {
    MvSearchResult a = brute_force_mv(3, 2);
    MvSearchResult b = brute_force_mv(3, 2);
    EXPECT_EQ(a.value, b.value);
    EXPECT_EQ(a.nodes, b.nodes);
    EXPECT_EQ(a.witness.U, b.witness.U);
    EXPECT_EQ(a.witness.V, b.witness.V);
}

TEST(BruteForce, RejectsOversizedInstances) {
    EXPECT_THROW(brute_force_mv(10, 5), std::invalid_argument);
}
