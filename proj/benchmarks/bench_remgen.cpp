// Copyright 2026 The remgen Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "remgen/common_info.hpp"
#include "remgen/hier.hpp"
#include "remgen/mrc.hpp"
#include "remgen/oracles.hpp"

namespace {

using namespace remgen;

// Block-diagonal joint with `blocks` square blocks of side `side`.
JointPmf block_joint(std::size_t blocks, std::size_t side) {
  const std::size_t n = blocks * side;
  std::vector<std::vector<double>> rows(n, std::vector<double>(n, 0.0));
  const double cell = 1.0 / static_cast<double>(blocks * side * side);
  for (std::size_t b = 0; b < blocks; ++b) {
    for (std::size_t r = 0; r < side; ++r) {
      for (std::size_t c = 0; c < side; ++c) rows[b * side + r][b * side + c] = cell;
    }
  }
  return JointPmf(rows);
}

void BM_GkDecompose(benchmark::State& state) {
  const JointPmf joint = block_joint(static_cast<std::size_t>(state.range(0)), 4);
  for (auto _ : state) benchmark::DoNotOptimize(gk_decompose(joint));
}
BENCHMARK(BM_GkDecompose)->Arg(2)->Arg(8)->Arg(32);

void BM_MrcEncode(benchmark::State& state) {
  const Alphabet a = Alphabet::indexed(8);
  const Pmf prior(a, {0.2, 0.2, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1});
  const Pmf target(a, {0.05, 0.05, 0.1, 0.1, 0.1, 0.1, 0.2, 0.3});
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  std::uint64_t k = 0;
  for (auto _ : state) {
    const StreamSeed seed{1, "bench/" + std::to_string(k++)};
    const auto ys = draw_proposals(seed, prior, n);
    SharedStream select(seed.child("select"));
    benchmark::DoNotOptimize(encode_index(select, aux_distribution(target, prior, ys)));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_MrcEncode)->Arg(16)->Arg(256)->Arg(4096);

void BM_HierEncode(benchmark::State& state) {
  const Alphabet a = Alphabet::indexed(6);
  const Pmf prior(a, {0.3, 0.1, 0.1, 0.2, 0.2, 0.1});
  const Pmf target(a, {0.1, 0.1, 0.2, 0.1, 0.1, 0.4});
  const HierProblem problem = HierProblem::point_to_point(target, prior, Partition(a, {0, 0, 0, 1, 1, 1}));
  HierConfig cfg = HierConfig::from_slack(problem, 2.0, 2.0);
  cfg.group_size = static_cast<std::size_t>(state.range(0));
  const std::size_t K = 1000;
  for (auto _ : state) benchmark::DoNotOptimize(hier_encode(StreamSeed{2, "bench"}, problem, cfg, K));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(K));
}
BENCHMARK(BM_HierEncode)->Arg(0)->Arg(1)->Arg(32);

void BM_ExactLaw(benchmark::State& state) {
  const Alphabet a = Alphabet::indexed(4);
  const Pmf prior(a, {0.1, 0.2, 0.3, 0.4});
  const Pmf target(a, {0.4, 0.3, 0.2, 0.1});
  const auto method = state.range(0) == 0 ? EnumerationMethod::Ordered : EnumerationMethod::Grouped;
  for (auto _ : state) benchmark::DoNotOptimize(exact_selected_distribution_mrc(target, prior, 8, method));
}
BENCHMARK(BM_ExactLaw)->Arg(0)->Arg(1);

}  // namespace

BENCHMARK_MAIN();
