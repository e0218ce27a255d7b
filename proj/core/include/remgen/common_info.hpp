// Copyright 2026 The remgen Authors
// SPDX-License-Identifier: Apache-2.0

// Gács-Körner common part of a two-decoder joint prior.
//
// The common variable C = g1(Y1) = g2(Y2) with maximal entropy labels the
// connected components of the bipartite support graph of the joint. Blocks
// are labelled in order of first appearance when scanning the first alphabet.
// Symbols with zero marginal mass (no support edge) are parked in one extra
// label `block_count` that is excluded from p_C.

#pragma once

#include <optional>
#include <vector>

#include "remgen/dist.hpp"

namespace remgen {

struct GkDecomposition {
  Partition partition1;
  Partition partition2;
  std::size_t block_count = 0;  // blocks with positive mass
  Pmf p_c;                      // law of C over block_count labels
  std::vector<Pmf> cond1;       // p(Y1 | C = c), over the first alphabet
  std::vector<Pmf> cond2;       // p(Y2 | C = c), over the second alphabet
  double cgk_nats = 0.0;

  /// True when some symbol sits in the extra zero-mass label.
  bool has_null_block() const noexcept {
    return partition1.block_count() > block_count || partition2.block_count() > block_count;
  }
};

/// Entries with mass <= atol do not count as support edges.
GkDecomposition gk_decompose(const JointPmf& joint, double atol = 0.0);

/// Builds the decomposition data (p_C, conditionals) for an externally
/// supplied pair of partitions. Blocks are taken as given; the labels must
/// share one space. Blocks with zero Y1-mass are dropped from p_C only if
/// they are the trailing labels.
GkDecomposition decomposition_from_partitions(const JointPmf& joint, Partition first, Partition second);

struct CommonVariableReport {
  double disagreement_probability = 0.0;  // P[g1(Y1) != g2(Y2)]
  double max_independence_residual = 0.0; // max_c ||p(.,.|c) - cond1(c) x cond2(c)||_inf
  bool agreement_ok = false;
  bool independence_ok = false;
  /// No block can be split further into a valid common variable.
  bool maximal = false;
  std::optional<BlockLabel> splittable_block;

  bool all_ok() const noexcept { return agreement_ok && independence_ok && maximal; }
};

CommonVariableReport verify_common_variable(const JointPmf& joint, const GkDecomposition& dec,
                                            double tolerance = 1e-12);

/// Restriction of the joint to block c, renormalized (zero outside the block).
JointPmf conditional_joint(const JointPmf& joint, const GkDecomposition& dec, BlockLabel c);

}  // namespace remgen
