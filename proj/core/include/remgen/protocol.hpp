// Copyright 2026 The remgen Authors
// SPDX-License-Identifier: Apache-2.0

// Two-decoder orchestration: a joint prior p(y1, y2) known to everyone, a
// target q_i and a function f_i per decoder. The naive scheme runs one MRC
// per decoder; the hierarchical scheme broadcasts a block index once per
// repetition and unicasts a refinement index per decoder.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "remgen/bounds.hpp"
#include "remgen/common_info.hpp"
#include "remgen/dist.hpp"
#include "remgen/hier.hpp"
#include "remgen/randomness.hpp"

namespace remgen {

enum class Mode { Naive, Hierarchical, Both };

std::string to_string(Mode mode);
Mode mode_from_string(const std::string& name);

struct SizeOverrides {
  std::optional<std::size_t> n_c;
  std::optional<std::vector<std::vector<std::size_t>>> n_ref;  // [decoder][block]
  std::optional<std::vector<std::size_t>> naive;               // [decoder]

  friend bool operator==(const SizeOverrides&, const SizeOverrides&) = default;
};

struct ScenarioParams {
  double t = 4.0;
  double t_c = 4.0;
  std::size_t K = 1000;
  std::uint64_t seed = 0;
  std::string label = "run";
  SizeOverrides n_overrides;
  std::optional<std::uint64_t> rejection_cap;  // same cap for every block
  double atol = 0.0;                           // support threshold for the decomposition
  std::size_t group_size = 0;                  // see HierConfig::group_size

  friend bool operator==(const ScenarioParams&, const ScenarioParams&) = default;
};

struct Scenario {
  JointPmf joint;
  std::vector<Pmf> targets;                     // one per decoder
  std::vector<std::vector<double>> functions;   // one per decoder
  std::optional<std::pair<Partition, Partition>> partitions;  // explicit; else Gacs-Korner blocks
  ScenarioParams params;
  Mode mode = Mode::Both;

  StreamSeed seed() const { return {params.seed, params.label}; }
};

/// Throws InvalidScenario naming the first violated rule, e.g.
/// "target-support: decoder 1 puts mass 0.2 on 'y3' outside the prior".
void validate_scenario(const Scenario& sc);

/// Joint the samplers draw from: entries at or below params.atol are
/// zeroed and the rest renormalized (the joint itself when atol = 0).
JointPmf effective_joint(const Scenario& sc);

/// Block structure used by the hierarchical scheme.
GkDecomposition scenario_decomposition(const Scenario& sc);

HierProblem scenario_problem(const Scenario& sc);

struct SampleSizes {
  std::size_t n_c = 1;
  std::vector<std::vector<std::size_t>> n_ref;  // [decoder][block]
  std::vector<std::size_t> naive;               // [decoder]
};

/// n_c = ceil(exp(kl(q_C,p_C) + t_c)), n_ref_i(c) = ceil(exp(kl(q_i|c,p_i|c) + t)),
/// naive n_i = ceil(exp(kl(q_i,p_i) + t)); a stage whose prior has a single
/// supported outcome gets 1; explicit overrides win.
SampleSizes choose_sample_sizes(const Scenario& sc);

struct CostEntry {
  std::size_t k = 0;
  std::optional<std::size_t> block_index;    // hierarchical only
  double broadcast_bits = 0.0;
  std::uint32_t broadcast_wire = 0;
  std::vector<std::size_t> unicast_index;    // per decoder
  std::vector<double> unicast_bits;          // per decoder
  std::vector<std::uint32_t> unicast_wire;   // per decoder
  std::uint64_t raw_draws = 0;               // prior draws the encoder made for this k
};

struct CostLedger {
  double broadcast_bits = 0.0;
  std::uint64_t broadcast_wire = 0;
  std::vector<double> unicast_bits;
  std::vector<std::uint64_t> unicast_wire;
  std::uint64_t raw_prior_draws = 0;
  std::vector<CostEntry> per_k;

  double total_bits() const;
  std::uint64_t total_wire() const;
};

struct DecoderResult {
  std::optional<double> estimate;  // empty when K = 0
  double true_value = 0.0;
  std::optional<double> abs_bias;
  std::vector<std::uint64_t> counts;  // decoded-symbol histogram
  std::optional<double> tv_empirical;
  std::optional<double> tv_exact;     // when the exact law is within enumeration limits
  std::vector<SymbolIndex> decoded;
};

struct RunReport {
  std::string scheme;  // "naive" or "hierarchical"
  StreamSeed seed;
  std::size_t K = 0;
  std::string scenario_fingerprint;
  SampleSizes sizes;
  std::vector<DecoderResult> decoders;
  CostLedger ledger;
  std::vector<BoundReport> bounds;                    // per decoder
  std::vector<std::vector<BlockLabel>> block_sequences;  // hierarchical: per decoder
  bool blocks_agree = true;
};

RunReport run_naive_unicast(const Scenario& sc);
RunReport run_hierarchical_broadcast(const Scenario& sc);

struct SavingsSummary {
  double baseline_bits = 0.0;
  double candidate_bits = 0.0;
  double absolute = 0.0;  // baseline - candidate
  double relative = 0.0;  // absolute / baseline (0 when baseline is 0)
  double broadcast_delta = 0.0;
  std::vector<double> unicast_delta;
  std::uint64_t baseline_wire = 0;
  std::uint64_t candidate_wire = 0;
  double candidate_avg_bits_per_k = 0.0;
  std::optional<double> predicted_bits_per_k;  // when the candidate is hierarchical with n_c >= 2
};

/// Throws MismatchedScenario unless both reports come from the same scenario
/// and K.
SavingsSummary cost_compare(const RunReport& baseline, const RunReport& candidate, const Scenario& sc);

}  // namespace remgen
