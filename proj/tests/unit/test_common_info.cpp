// Copyright 2026 The remgen Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "remgen/common_info.hpp"
#include "remgen/oracles.hpp"
#include "test_support.hpp"

namespace remgen {
namespace {

using testing::Rng;

JointPmf three_by_three() {
  return JointPmf(Alphabet({"a", "b", "c"}), Alphabet({"d", "e", "f"}),
                  {0.2, 0.2, 0.0, 0.1, 0.1, 0.0, 0.0, 0.0, 0.4});
}

std::vector<BlockLabel> labels(const Partition& p) { return {p.labels().begin(), p.labels().end()}; }

// Random joint: product blocks on a planted partition, optionally with some
// within-block cells zeroed (blocks stay connected through a spanning row/col).
JointPmf planted(Rng& rng, std::size_t rows, std::size_t cols, bool sparse) {
  const std::size_t blocks = 1 + rng() % std::min(rows, cols);
  auto assign = [&](std::size_t n) {
    std::vector<BlockLabel> l(n);
    for (std::size_t i = 0; i < n; ++i) l[i] = i < blocks ? i : rng() % blocks;
    std::shuffle(l.begin(), l.end(), rng);
    return l;
  };
  const auto lr = assign(rows), lc = assign(cols);
  const auto mass = testing::random_simplex(rng, blocks);
  std::vector<double> cells(rows * cols, 0.0);
  for (BlockLabel c = 0; c < blocks; ++c) {
    std::vector<std::size_t> rs, cs;
    for (std::size_t i = 0; i < rows; ++i) if (lr[i] == c) rs.push_back(i);
    for (std::size_t j = 0; j < cols; ++j) if (lc[j] == c) cs.push_back(j);
    for (std::size_t a = 0; a < rs.size(); ++a) {
      for (std::size_t b = 0; b < cs.size(); ++b) {
        const bool keep = !sparse || a == 0 || b == 0 || rng() % 2 == 0;
        if (keep) cells[rs[a] * cols + cs[b]] = 0.1 + static_cast<double>(rng() % 100) / 100.0;
      }
    }
    double s = 0.0;
    for (auto r : rs) for (auto col : cs) s += cells[r * cols + col];
    for (auto r : rs) for (auto col : cs) cells[r * cols + col] *= mass[c] / s;
  }
  return JointPmf(Alphabet::indexed(rows, "y"), Alphabet::indexed(cols, "z"), cells);
}

TEST(GkDecompose, ProductJointIsOneBlock) {
  const JointPmf j = product(Pmf(Alphabet({"a", "b"}), {0.3, 0.7}), Pmf(Alphabet({"x", "y", "z"}), {0.2, 0.3, 0.5}));
  const GkDecomposition dec = gk_decompose(j);
  EXPECT_EQ(dec.block_count, 1u);
  EXPECT_EQ(dec.cgk_nats, 0.0);
}

TEST(GkDecompose, DiagonalJointIsSingletons) {
  const GkDecomposition dec = gk_decompose(JointPmf({{0.5, 0.0}, {0.0, 0.5}}));
  EXPECT_EQ(dec.block_count, 2u);
  EXPECT_NEAR(dec.cgk_nats, std::log(2.0), 1e-15);
}

TEST(GkDecompose, ThreeByThreeExample) {
  const GkDecomposition dec = gk_decompose(three_by_three());
  EXPECT_EQ(dec.block_count, 2u);
  EXPECT_EQ(labels(dec.partition1), (std::vector<BlockLabel>{0, 0, 1}));
  EXPECT_EQ(labels(dec.partition2), (std::vector<BlockLabel>{0, 0, 1}));
  EXPECT_NEAR(dec.p_c[0], 0.6, 1e-15);
  EXPECT_NEAR(dec.p_c[1], 0.4, 1e-15);
  EXPECT_NEAR(dec.cgk_nats, 0.6730116670092565, 1e-14);
}

TEST(GkDecompose, LabelsFollowFirstAppearanceOnFirstSide) {
  // Rows c, a share a block; b is on its own. Row a is scanned first.
  const JointPmf j({{0.2, 0.0, 0.1}, {0.0, 0.4, 0.0}, {0.2, 0.0, 0.1}});
  const GkDecomposition dec = gk_decompose(j);
  EXPECT_EQ(labels(dec.partition1), (std::vector<BlockLabel>{0, 1, 0}));
  EXPECT_EQ(labels(dec.partition2), (std::vector<BlockLabel>{0, 1, 0}));
}

TEST(GkDecompose, ZeroMarginalSymbolKeepsALabel) {
  const JointPmf j({{0.5, 0.0, 0.0}, {0.0, 0.5, 0.0}, {0.0, 0.0, 0.0}});
  const GkDecomposition dec = gk_decompose(j);
  EXPECT_EQ(dec.block_count, 2u);
  EXPECT_EQ(dec.p_c.size(), 2u);
  EXPECT_TRUE(dec.has_null_block());
  EXPECT_EQ(dec.partition1.labels().size(), 3u);
}

TEST(GkDecompose, AtolDropsSmallCells) {
  const JointPmf j({{0.5 - 1e-7, 1e-7}, {0.0, 0.5}});
  EXPECT_EQ(gk_decompose(j).block_count, 1u);
  EXPECT_EQ(gk_decompose(j, 1e-6).block_count, 2u);
}

TEST(VerifyCommonVariable, CoarseningFailsMaximality) {
  const JointPmf j = three_by_three();
  const Alphabet& a = j.first();
  const Alphabet& b = j.second();
  const GkDecomposition merged =
      decomposition_from_partitions(j, Partition::single_block(a), Partition::single_block(b));
  const CommonVariableReport rep = verify_common_variable(j, merged);
  EXPECT_TRUE(rep.agreement_ok);
  EXPECT_FALSE(rep.maximal);
  EXPECT_FALSE(rep.all_ok());
}

TEST(VerifyCommonVariable, MisalignedSidesFailAgreement) {
  const JointPmf j = three_by_three();
  const GkDecomposition bad =
      decomposition_from_partitions(j, Partition(j.first(), {1, 1, 0}), Partition(j.second(), {0, 0, 1}));
  const CommonVariableReport rep = verify_common_variable(j, bad);
  EXPECT_GT(rep.disagreement_probability, 0.0);
  EXPECT_FALSE(rep.agreement_ok);
}

TEST(ConditionalJoint, Examples) {
  const JointPmf j = three_by_three();
  const GkDecomposition dec = gk_decompose(j);
  const JointPmf c0 = conditional_joint(j, dec, 0);
  EXPECT_NEAR(c0.at(0, 0), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(c0.at(0, 1), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(c0.at(1, 0), 1.0 / 6.0, 1e-15);
  EXPECT_NEAR(c0.at(1, 1), 1.0 / 6.0, 1e-15);
  const GkDecomposition diag = gk_decompose(JointPmf({{0.5, 0.0}, {0.0, 0.5}}));
  EXPECT_EQ(conditional_joint(JointPmf({{0.5, 0.0}, {0.0, 0.5}}), diag, 1).at(1, 1), 1.0);
}

// ---- properties -------------------------------------------------------------

TEST(GkProperty, RecompositionAndOrdering) {
  Rng rng(21);
  for (int trial = 0; trial < 300; ++trial) {
    const JointPmf j = planted(rng, 1 + rng() % 5, 1 + rng() % 5, trial % 2 == 1);
    const GkDecomposition dec = gk_decompose(j);
    std::vector<double> sum(j.rows() * j.cols(), 0.0);
    for (BlockLabel c = 0; c < dec.block_count; ++c) {
      const JointPmf cj = conditional_joint(j, dec, c);
      for (std::size_t r = 0; r < j.rows(); ++r) {
        for (std::size_t col = 0; col < j.cols(); ++col) sum[r * j.cols() + col] += dec.p_c[c] * cj.at(r, col);
      }
    }
    for (std::size_t i = 0; i < sum.size(); ++i) ASSERT_NEAR(sum[i], j.masses()[i], 1e-12);
    const auto [m1, m2] = marginals(j);
    EXPECT_LE(dec.cgk_nats, std::min(entropy(m1), entropy(m2)) + 1e-12);
    EXPECT_LE(dec.cgk_nats, mutual_information(j) + 1e-12);
  }
}

TEST(GkProperty, MatchesBruteForceOnSparseBlocks) {
  Rng rng(22);
  for (int trial = 0; trial < 300; ++trial) {
    const JointPmf j = planted(rng, 1 + rng() % 5, 1 + rng() % 5, true);
    const GkDecomposition dec = gk_decompose(j);
    const auto [b1, b2] = brute_force_gk(j);
    ASSERT_EQ(labels(dec.partition1), labels(b1)) << "trial " << trial;
    ASSERT_EQ(labels(dec.partition2), labels(b2)) << "trial " << trial;
    EXPECT_TRUE(verify_common_variable(j, dec).agreement_ok);
    EXPECT_TRUE(verify_common_variable(j, dec).maximal);
  }
}

TEST(GkProperty, IdempotentOnEachBlock) {
  Rng rng(23);
  for (int trial = 0; trial < 200; ++trial) {
    const JointPmf j = planted(rng, 1 + rng() % 5, 1 + rng() % 5, trial % 2 == 0);
    const GkDecomposition dec = gk_decompose(j);
    for (BlockLabel c = 0; c < dec.block_count; ++c) {
      const GkDecomposition inner = gk_decompose(conditional_joint(j, dec, c));
      EXPECT_EQ(inner.block_count, 1u);
      EXPECT_EQ(inner.cgk_nats, 0.0);
    }
  }
}

TEST(GkProperty, BlockCountInvariantUnderPermutation) {
  Rng rng(24);
  for (int trial = 0; trial < 200; ++trial) {
    const JointPmf j = planted(rng, 1 + rng() % 5, 1 + rng() % 5, true);
    std::vector<std::size_t> pr(j.rows()), pc(j.cols());
    std::iota(pr.begin(), pr.end(), 0);
    std::iota(pc.begin(), pc.end(), 0);
    std::shuffle(pr.begin(), pr.end(), rng);
    std::shuffle(pc.begin(), pc.end(), rng);
    std::vector<double> cells(j.rows() * j.cols());
    for (std::size_t r = 0; r < j.rows(); ++r) {
      for (std::size_t c = 0; c < j.cols(); ++c) cells[r * j.cols() + c] = j.at(pr[r], pc[c]);
    }
    const JointPmf permuted(j.first(), j.second(), cells);
    EXPECT_EQ(gk_decompose(j).block_count, gk_decompose(permuted).block_count);
    EXPECT_NEAR(gk_decompose(j).cgk_nats, gk_decompose(permuted).cgk_nats, 1e-12);
  }
}

}  // namespace
}  // namespace remgen
