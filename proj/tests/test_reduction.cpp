#include <gtest/gtest.h>

#include <algorithm>

#include "circuits.hpp"
#include "photonet/reduction.hpp"
#include "test_support.hpp"

using namespace photonet;
using photonet::testkit::Rng;

namespace {
// 1-based (row, col) positions of the ones in an explicit selector.
std::vector<std::pair<std::size_t, std::size_t>> ones_of(const ComplexMatrix& a) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t c = 0; c < a.cols(); ++c) {
            if (a(r, c) == complex(1.0)) out.emplace_back(r + 1, c + 1);
            else EXPECT_EQ(a(r, c), complex{});
        }
    return out;
}
}  // namespace

TEST(Selector, FirstPortLayout) {
    for (int m : {1, 3, 6}) {
        const auto a = selector_for_ports({1}, m).matrix();
        ASSERT_EQ(a.rows(), 2u);
        ASSERT_EQ(a.cols(), static_cast<std::size_t>(2 * m));
        const std::vector<std::pair<std::size_t, std::size_t>> want = {{1, 1}, {2, 2}};
        EXPECT_EQ(ones_of(a), want);
    }
}

TEST(Selector, SecondPortLayout) {
    const auto a = selector_for_ports({2}, 4).matrix();
    const std::vector<std::pair<std::size_t, std::size_t>> want = {{1, 3}, {2, 4}};
    EXPECT_EQ(ones_of(a), want);
}

TEST(Selector, AllPortsIsIdentity) {
    EXPECT_EQ(selector_for_ports({1, 2, 3, 4, 5}, 5).matrix(), ComplexMatrix::identity(10));
}

TEST(Selector, RowsAreOrthonormal) {
    Rng rng(41);
    for (int trial = 0; trial < 30; ++trial) {
        const int m = 1 + static_cast<int>(rng() % 8);
        std::vector<int> all(static_cast<std::size_t>(m));
        for (int i = 0; i < m; ++i) all[static_cast<std::size_t>(i)] = i + 1;
        std::shuffle(all.begin(), all.end(), rng);
        all.resize(1 + rng() % static_cast<std::size_t>(m));
        const auto a = selector_for_ports(all, m).matrix();
        EXPECT_EQ(testkit::naive_product(a, a.transpose()), ComplexMatrix::identity(a.rows()));
        for (std::size_t r = 0; r < a.rows(); ++r) {
            int count = 0;
            for (std::size_t c = 0; c < a.cols(); ++c) count += a(r, c) == complex(1.0);
            EXPECT_EQ(count, 1);
        }
    }
}

TEST(Selector, ErrorPaths) {
    EXPECT_THROW(selector_for_ports({1, 1}, 3), TopologyError);
    EXPECT_THROW(selector_for_ports({4}, 3), TopologyError);
    EXPECT_THROW(selector_for_ports({0}, 3), TopologyError);
    const auto sel = selector_for_ports({1}, 2);
    EXPECT_THROW(sel.embed(ComplexVector(4)), DimensionError);
    EXPECT_THROW(sel.restrict(ComplexVector(2)), DimensionError);
}

TEST(Selector, EmbedRestrictRoundTrip) {
    Rng rng(42);
    const auto sel = selector_for_ports({3, 1}, 4);
    const auto v = testkit::random_vector(rng, 4);
    const auto full = sel.embed(v);
    EXPECT_EQ(sel.restrict(full), v);
    EXPECT_EQ(full[4], v[0]);
    EXPECT_EQ(full[1], v[3]);
    EXPECT_EQ(full[2], complex{});
    EXPECT_EQ(full, sel.matrix().transpose() * v);
}

TEST(ReduceTransfer, FullSelectorIsIdentityMap) {
    Rng rng(43);
    const auto h = testkit::random_matrix(rng, 8, 8);
    EXPECT_EQ(reduce_transfer(selector_for_ports({1, 2, 3, 4}, 4), h), h);
}

TEST(ReduceTransfer, EqualsExplicitSandwich) {
    Rng rng(44);
    const auto h = testkit::random_matrix(rng, 10, 10);
    const auto sel = selector_for_ports({4, 2}, 5);
    const auto a = sel.matrix();
    EXPECT_EQ(reduce_transfer(sel, h), testkit::naive_product(testkit::naive_product(a, h), a.transpose()));
}

TEST(ReduceTransfer, ReorderingSwapsBlocks) {
    Rng rng(45);
    const auto h = testkit::random_matrix(rng, 6, 6);
    const auto h12 = reduce_transfer(selector_for_ports({1, 2}, 3), h);
    const auto h21 = reduce_transfer(selector_for_ports({2, 1}, 3), h);
    ComplexMatrix swap(4, 4);
    swap.set_block(0, 2, ComplexMatrix::identity(2));
    swap.set_block(2, 0, ComplexMatrix::identity(2));
    EXPECT_EQ(h21, testkit::naive_product(testkit::naive_product(swap, h12), swap));
}

TEST(ReduceTransfer, MziAsTwoPortIsDirectIndexing) {
    const auto h = testkit::mzi(0.4, 1.3).transfer();
    const auto r = reduce_transfer(selector_for_ports({testkit::Mzi::input, testkit::Mzi::cross}, 12), h);
    ASSERT_EQ(r.rows(), 4u);
    const std::size_t coords[] = {0, 1, 22, 23};
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) EXPECT_EQ(r(i, j), h(coords[i], coords[j]));
    EXPECT_THROW(reduce_transfer(selector_for_ports({1}, 3), h), DimensionError);
}

TEST(ExtractJones, IdentityAndSubBlock) {
    EXPECT_EQ(extract_jones(3, 3, ComplexMatrix::identity(8)), ComplexMatrix::identity(2));
    Rng rng(46);
    const auto h = testkit::random_matrix(rng, 8, 8);
    for (int k = 1; k <= 4; ++k)
        for (int j = 1; j <= 4; ++j) {
            if (k == j) continue;
            const auto r = reduce_transfer(selector_for_ports({k, j}, 4), h);
            EXPECT_EQ(extract_jones(k, j, h), r.block(0, 2, 2, 2));
            const auto a_k = selector_for_ports({k}, 4).matrix();
            const auto a_j = selector_for_ports({j}, 4).matrix();
            EXPECT_EQ(extract_jones(k, j, h), testkit::naive_product(testkit::naive_product(a_k, h), a_j.transpose()));
        }
    EXPECT_THROW(extract_jones(5, 1, h), TopologyError);
    EXPECT_THROW(extract_jones(1, 1, ComplexMatrix(3, 3)), DimensionError);
}

TEST(ExtractJones, AppliedToLaunchGivesOutputField) {
    Rng rng(47);
    const auto h = testkit::mzi(0.2, 2.1).transfer();
    const ComplexVector e_in{testkit::random_complex(rng), testkit::random_complex(rng)};
    const auto full = propagate(h, launch_vector(12, 1, e_in[0], e_in[1]));
    const auto out = extract_jones(12, 1, h) * e_in;
    EXPECT_LT(std::abs(out[0] - full[22]), 1e-14);
    EXPECT_LT(std::abs(out[1] - full[23]), 1e-14);
}
