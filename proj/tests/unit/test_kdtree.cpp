#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <random>

#include "intentlab/error.hpp"
#include "intentlab/kdtree.hpp"

using intentlab::KdTree;

namespace {

struct Model {
    std::map<std::uint64_t, std::pair<std::vector<double>, double>> points;

    std::vector<std::uint64_t> nearest(const std::vector<double>& q, std::size_t n) const {
        struct Row {
            double d2, w;
            std::uint64_t id;
        };
        std::vector<Row> rows;
        for (const auto& [id, pw] : points) {
            double d2 = 0.0;
            for (std::size_t i = 0; i < q.size(); ++i) d2 += (q[i] - pw.first[i]) * (q[i] - pw.first[i]);
            rows.push_back({d2, pw.second, id});
        }
        std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
            if (a.d2 != b.d2) return a.d2 < b.d2;
            if (a.w != b.w) return a.w > b.w;
            return a.id < b.id;
        });
        std::vector<std::uint64_t> out;
        for (std::size_t i = 0; i < rows.size() && i < n; ++i) out.push_back(rows[i].id);
        return out;
    }
};

std::vector<std::uint64_t> ids_of(const std::vector<KdTree::Neighbor>& hits) {
    std::vector<std::uint64_t> out;
    for (const auto& h : hits) out.push_back(h.id);
    return out;
}

}  // namespace

TEST(KdTree, EmptyAndErrors) {
    KdTree tree(3);
    const std::vector<double> q{0, 0, 0};
    EXPECT_TRUE(tree.nearest(q, 5).empty());
    EXPECT_TRUE(tree.within(q, 10.0).empty());
    EXPECT_THROW(tree.nearest(std::vector<double>{0, 0}, 1), intentlab::DimensionError);
    tree.insert(1, q, 1.0);
    EXPECT_THROW(tree.insert(1, q, 1.0), intentlab::ValidationError);
    EXPECT_THROW(tree.relocate(2, q), intentlab::ValidationError);
    EXPECT_FALSE(tree.erase(2));
    EXPECT_TRUE(tree.erase(1));
    EXPECT_EQ(tree.size(), 0u);
    EXPECT_THROW(KdTree(0), intentlab::ValidationError);
}

TEST(KdTree, TieBreaksByWeightThenId) {
    KdTree tree(2);
    const std::vector<double> p{1.0, 1.0};
    tree.insert(5, p, 1.0);
    tree.insert(3, p, 2.0);
    tree.insert(4, p, 1.0);
    const auto hits = ids_of(tree.nearest(std::vector<double>{0.0, 0.0}, 3));
    EXPECT_EQ(hits, (std::vector<std::uint64_t>{3, 4, 5}));
}

TEST(KdTree, WithinIsInclusiveAndSorted) {
    KdTree tree(1);
    tree.insert(1, std::vector<double>{0.0}, 1.0);
    tree.insert(2, std::vector<double>{0.5}, 1.0);
    tree.insert(3, std::vector<double>{0.25}, 1.0);
    tree.insert(4, std::vector<double>{0.75}, 1.0);
    const auto hits = tree.within(std::vector<double>{0.0}, 0.5);
    EXPECT_EQ(ids_of(hits), (std::vector<std::uint64_t>{1, 3, 2}));
    EXPECT_DOUBLE_EQ(hits.back().distance, 0.5);
}

TEST(KdTree, MatchesLinearScanUnderChurn) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> coord(-1.0, 1.0);
    std::uniform_int_distribution<int> op(0, 9);
    KdTree tree(4, 0.25);
    Model model;
    std::uint64_t next = 1;
    auto random_point = [&] {
        std::vector<double> p(4);
        // Coarse grid so exact distance ties actually happen.
        for (auto& x : p) x = std::round(coord(rng) * 4.0) / 4.0;
        return p;
    };
    for (int step = 0; step < 3000; ++step) {
        const int o = op(rng);
        if (o < 5 || model.points.empty()) {
            const auto p = random_point();
            const double w = static_cast<double>(1 + rng() % 3);
            tree.insert(next, p, w);
            model.points[next] = {p, w};
            ++next;
        } else {
            auto it = model.points.begin();
            std::advance(it, static_cast<long>(rng() % model.points.size()));
            if (o < 7) {
                ASSERT_TRUE(tree.erase(it->first));
                model.points.erase(it);
            } else if (o < 9) {
                const auto p = random_point();
                tree.relocate(it->first, p);
                it->second.first = p;
            } else {
                const double w = static_cast<double>(1 + rng() % 3);
                tree.set_weight(it->first, w);
                it->second.second = w;
            }
        }
        const auto q = random_point();
        const std::size_t n = 1 + rng() % 6;
        ASSERT_EQ(ids_of(tree.nearest(q, n)), model.nearest(q, n)) << "step " << step;
        ASSERT_EQ(tree.size(), model.points.size());
    }
}

TEST(KdTree, RebuildClearsTombstones) {
    KdTree tree(2, 0.5);
    for (std::uint64_t i = 1; i <= 100; ++i) {
        tree.insert(i, std::vector<double>{static_cast<double>(i), 0.0}, 1.0);
    }
    for (std::uint64_t i = 1; i <= 40; ++i) tree.erase(i);
    EXPECT_GT(tree.tombstones(), 0u);
    tree.rebuild();
    EXPECT_EQ(tree.tombstones(), 0u);
    EXPECT_EQ(tree.size(), 60u);
    EXPECT_EQ(tree.nearest(std::vector<double>{0.0, 0.0}, 1).front().id, 41u);
}

TEST(KdTree, VisitsGrowSublinearly) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> coord(0.0, 1.0);
    auto mean_visits = [&](std::size_t count) {
        KdTree tree(6);
        for (std::uint64_t i = 1; i <= count; ++i) {
            std::vector<double> p(6);
            for (auto& x : p) x = coord(rng);
            tree.insert(i, p, 1.0);
        }
        tree.rebuild();
        double total = 0.0;
        for (int q = 0; q < 200; ++q) {
            std::vector<double> p(6);
            for (auto& x : p) x = coord(rng);
            KdTree::SearchStats stats;
            tree.nearest(p, 5, &stats);
            total += static_cast<double>(stats.visited);
        }
        return total / 200.0;
    };
    const double small = mean_visits(1000);
    const double large = mean_visits(10000);
    EXPECT_LT(large / small, 10.0);
}
