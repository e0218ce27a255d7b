// Copyright 2026 The remgen Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include <gtest/gtest.h>

#include "remgen/oracles.hpp"
#include "remgen/protocol.hpp"
#include "remgen/scenario_io.hpp"
#include "test_support.hpp"

namespace remgen {
namespace {

using testing::data_path;
using testing::kind_of;

Scenario fixture(const std::string& name) { return load_scenario(data_path(name)); }

std::string rule_of(const Scenario& sc) {
  try {
    validate_scenario(sc);
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidScenario);
    const std::string what = e.what();
    const auto start = what.find(": ") == std::string::npos ? 0 : what.find(": ") + 2;
    return what.substr(start, what.find(':', start) - start);
  }
  return "";
}

TEST(SampleSizes, ZeroSlackTargetEqualsPrior) {
  Scenario sc = fixture("product.json");
  sc.targets = {Pmf(sc.joint.first(), {0.5, 0.5}), Pmf(sc.joint.second(), {0.5, 0.5})};
  sc.params.t = sc.params.t_c = 0.0;
  const SampleSizes s = choose_sample_sizes(sc);
  EXPECT_EQ(s.n_c, 1u);
  EXPECT_EQ(s.naive, (std::vector<std::size_t>{1, 1}));
  EXPECT_EQ(s.n_ref, (std::vector<std::vector<std::size_t>>{{1}, {1}}));
}

TEST(SampleSizes, ThreeByThree) {
  const Scenario sc = fixture("three_by_three.json");
  const SampleSizes s = choose_sample_sizes(sc);
  // n_c = ceil(exp(kl((0.2,0.8),(0.6,0.4)) + 2))
  const double kl_c = 0.2 * std::log(0.2 / 0.6) + 0.8 * std::log(0.8 / 0.4);
  EXPECT_EQ(s.n_c, static_cast<std::size_t>(std::ceil(std::exp(kl_c + 2.0))));
  EXPECT_EQ(s.n_c, 11u);
  EXPECT_EQ(s.n_ref[0][1], 1u);  // singleton block
  EXPECT_EQ(s.n_ref[1][1], 1u);
}

TEST(SampleSizes, OverridesWin) {
  const Scenario sc = fixture("mrc_two_symbol.json");
  const SampleSizes s = choose_sample_sizes(sc);
  EXPECT_EQ(s.naive, (std::vector<std::size_t>{2, 1}));
  EXPECT_EQ(s.n_c, 1u);
  EXPECT_EQ(s.n_ref, (std::vector<std::vector<std::size_t>>{{2}, {1}}));
}

TEST(NaiveUnicast, EmptyRun) {
  Scenario sc = fixture("three_by_three.json");
  sc.params.K = 0;
  const RunReport r = run_naive_unicast(sc);
  EXPECT_EQ(r.ledger.total_bits(), 0.0);
  EXPECT_TRUE(r.ledger.per_k.empty());
  EXPECT_FALSE(r.decoders[0].estimate.has_value());
  EXPECT_FALSE(r.decoders[0].abs_bias.has_value());
  const RunReport h = run_hierarchical_broadcast(sc);
  EXPECT_EQ(h.ledger.total_bits(), 0.0);
}

TEST(NaiveUnicast, IdenticalDecodersPayTheSameListSize) {
  Scenario sc = fixture("diagonal.json");
  const RunReport r = run_naive_unicast(sc);
  EXPECT_EQ(r.sizes.naive[0], r.sizes.naive[1]);
  EXPECT_EQ(r.ledger.unicast_bits[0], r.ledger.unicast_bits[1]);
  EXPECT_EQ(r.ledger.broadcast_bits, 0.0);
  // each decoder selects under its own stream, so the indices may differ
  for (const auto& e : r.ledger.per_k) EXPECT_EQ(e.raw_draws, r.sizes.naive[0]);
}

TEST(NaiveUnicast, MatchesTheSingleDecoderLaw) {
  const Scenario sc = fixture("mrc_two_symbol.json");
  Scenario big = sc;
  big.params.K = 20000;
  const RunReport r = run_naive_unicast(big);
  ASSERT_TRUE(r.decoders[0].tv_exact.has_value());
  EXPECT_NEAR(*r.decoders[0].tv_exact, 0.2, 1e-15);
  EXPECT_LE(testing::worst_z(r.decoders[0].counts, {0.7, 0.3}, big.params.K), 3.0);
}

TEST(HierarchicalBroadcast, DiagonalNeedsNoUnicast) {
  const RunReport r = run_hierarchical_broadcast(fixture("diagonal.json"));
  EXPECT_EQ(r.ledger.unicast_bits, (std::vector<double>{0.0, 0.0}));
  EXPECT_GT(r.ledger.broadcast_bits, 0.0);
  EXPECT_TRUE(r.blocks_agree);
}

TEST(HierarchicalBroadcast, ProductJointNeedsNoBroadcast) {
  const RunReport r = run_hierarchical_broadcast(fixture("product.json"));
  EXPECT_EQ(r.ledger.broadcast_bits, 0.0);
  EXPECT_EQ(r.ledger.broadcast_wire, 0u);
  EXPECT_GT(r.ledger.unicast_bits[0], 0.0);
}

TEST(HierarchicalBroadcast, OneBlockLawEqualsNaiveLaw) {
  Scenario sc = fixture("product.json");
  sc.params.K = 20000;
  sc.params.group_size = 1;  // fresh lists per repetition, so the counts are i.i.d.
  const RunReport h = run_hierarchical_broadcast(sc);
  const ExactLaw naive = exact_selected_distribution_mrc(sc.targets[0], Pmf(sc.joint.first(), {0.5, 0.5}),
                                                         choose_sample_sizes(sc).naive[0]);
  ASSERT_TRUE(h.decoders[0].tv_exact.has_value());
  EXPECT_NEAR(*h.decoders[0].tv_exact, tv(naive.pmf, sc.targets[0]), 1e-12);
  EXPECT_LE(testing::worst_z(h.decoders[0].counts, testing::to_vec(naive.pmf), sc.params.K), 3.0);
}

TEST(HierarchicalBroadcast, LedgerAddsUp) {
  const Scenario sc = fixture("three_by_three.json");
  const RunReport r = run_hierarchical_broadcast(sc);
  const SampleSizes& s = r.sizes;
  double bcast = 0.0, uni0 = 0.0, uni1 = 0.0;
  std::uint64_t draws = 0;
  for (const auto& e : r.ledger.per_k) {
    EXPECT_EQ(e.broadcast_bits, std::log2(static_cast<double>(s.n_c)));
    bcast += e.broadcast_bits;
    uni0 += e.unicast_bits[0];
    uni1 += e.unicast_bits[1];
    draws += e.raw_draws;
  }
  EXPECT_DOUBLE_EQ(r.ledger.broadcast_bits, bcast);
  EXPECT_DOUBLE_EQ(r.ledger.total_bits(), bcast + uni0 + uni1);
  EXPECT_EQ(r.ledger.raw_prior_draws, draws);
  EXPECT_TRUE(r.blocks_agree);
  EXPECT_EQ(r.block_sequences[0], r.block_sequences[1]);
}

TEST(HierarchicalBroadcast, ReplaysExactly) {
  const Scenario sc = fixture("three_by_three.json");
  const RunReport a = run_hierarchical_broadcast(sc);
  const RunReport b = run_hierarchical_broadcast(sc);
  EXPECT_EQ(a.decoders[0].decoded, b.decoders[0].decoded);
  EXPECT_EQ(a.decoders[1].decoded, b.decoders[1].decoded);
  EXPECT_EQ(a.ledger.total_bits(), b.ledger.total_bits());
  Scenario other = sc;
  other.params.seed += 1;
  EXPECT_NE(run_hierarchical_broadcast(other).decoders[0].decoded, a.decoders[0].decoded);
}

TEST(HierarchicalBroadcast, TinyRejectionCapFails) {
  Scenario sc = fixture("three_by_three.json");
  sc.params.rejection_cap = 1;  // below n_ref
  EXPECT_EQ(kind_of([&] { run_hierarchical_broadcast(sc); }), ErrorKind::InvalidArgument);
  // Block 0 has mass 0.6; nine accepts within nine draws is rare over many fresh lists.
  sc.params.rejection_cap = 9;
  sc.params.group_size = 1;
  EXPECT_EQ(kind_of([&] { run_hierarchical_broadcast(sc); }), ErrorKind::RejectionCapExceeded);
}

TEST(CostCompare, SelfComparisonIsZero) {
  const Scenario sc = fixture("three_by_three.json");
  const RunReport n = run_naive_unicast(sc);
  const SavingsSummary s = cost_compare(n, n, sc);
  EXPECT_EQ(s.absolute, 0.0);
  EXPECT_EQ(s.relative, 0.0);
  EXPECT_FALSE(s.predicted_bits_per_k.has_value());
}

TEST(CostCompare, HierarchicalSavesOnThreeByThree) {
  const Scenario sc = fixture("three_by_three.json");
  const RunReport n = run_naive_unicast(sc);
  const RunReport h = run_hierarchical_broadcast(sc);
  const SavingsSummary s = cost_compare(n, h, sc);
  EXPECT_GT(s.absolute, 0.0);
  EXPECT_DOUBLE_EQ(s.absolute, n.ledger.total_bits() - h.ledger.total_bits());
  EXPECT_NEAR(s.relative, s.absolute / n.ledger.total_bits(), 1e-15);
  EXPECT_NEAR(s.candidate_avg_bits_per_k, h.ledger.total_bits() / sc.params.K, 1e-12);
  EXPECT_TRUE(s.predicted_bits_per_k.has_value());
}

TEST(CostCompare, MismatchedScenarios) {
  const Scenario sc = fixture("three_by_three.json");
  Scenario shorter = sc;
  shorter.params.K = 10;
  EXPECT_EQ(kind_of([&] { cost_compare(run_naive_unicast(sc), run_naive_unicast(shorter), sc); }),
            ErrorKind::MismatchedScenario);
  EXPECT_EQ(kind_of([&] { cost_compare(run_naive_unicast(sc), run_naive_unicast(fixture("diagonal.json")), sc); }),
            ErrorKind::MismatchedScenario);
}

TEST(Validation, RuleNames) {
  const Scenario base = fixture("three_by_three.json");
  EXPECT_EQ(rule_of(base), "");

  Scenario sc = base;
  sc.targets.pop_back();
  EXPECT_EQ(rule_of(sc), "decoder-count");

  sc = base;
  sc.params.t = -1.0;
  EXPECT_EQ(rule_of(sc), "slack");

  sc = base;
  sc.functions[0].pop_back();
  EXPECT_EQ(rule_of(sc), "function-size");

  sc = base;
  sc.functions[1][0] = NAN;
  EXPECT_EQ(rule_of(sc), "function-finite");

  sc = fixture("target_prior.json");
  sc.joint = JointPmf(sc.joint.first(), sc.joint.second(), {0.5, 0.5, 0.0, 0.0});
  EXPECT_EQ(rule_of(sc), "target-support");

  sc = base;
  sc.targets[1] = Pmf(base.joint.second(), {0.3, 0.3, 0.4});
  EXPECT_EQ(rule_of(sc), "block-marginal-agreement");

  sc = base;
  sc.partitions.emplace(Partition(base.joint.first(), {0, 0, 1}), Partition(base.joint.second(), {0, 1, 1}));
  EXPECT_EQ(rule_of(sc), "partition-agreement");

  sc = base;
  sc.params.n_overrides.n_c = 0;
  EXPECT_EQ(rule_of(sc), "n-overrides");

  sc = base;
  sc.params.atol = 1.0;
  EXPECT_EQ(rule_of(sc), "atol");

  sc = base;
  sc.params.rejection_cap = 0;
  EXPECT_EQ(rule_of(sc), "rejection-cap");
}

TEST(EffectiveJoint, ThresholdRenormalizes) {
  Scenario sc = fixture("three_by_three.json");
  sc.joint = JointPmf(sc.joint.first(), sc.joint.second(), {0.2, 0.2, 1e-9, 0.1, 0.1, 0.0, 0.0, 0.0, 0.4 - 1e-9});
  sc.params.atol = 1e-6;
  const JointPmf j = effective_joint(sc);
  EXPECT_EQ(j.at(0, 2), 0.0);
  EXPECT_NEAR(j.at(2, 2), (0.4 - 1e-9) / (1.0 - 1e-9), 1e-15);
  EXPECT_EQ(scenario_decomposition(sc).block_count, 2u);
}

TEST(Mode, Names) {
  EXPECT_EQ(mode_from_string("naive"), Mode::Naive);
  EXPECT_EQ(mode_from_string("hierarchical"), Mode::Hierarchical);
  EXPECT_EQ(to_string(Mode::Both), "both");
  EXPECT_EQ(kind_of([] { mode_from_string("fast"); }), ErrorKind::InvalidScenario);
}

}  // namespace
}  // namespace remgen
