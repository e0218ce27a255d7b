// Copyright 2026 The remgen Authors
// SPDX-License-Identifier: Apache-2.0

// Two-stage (hierarchical) MRC.
//
// Stage one runs MRC over the block variable C = g(Y): the encoder draws n_c
// prior samples, maps them through g and picks a position m with probability
// proportional to q_C(C_m)/p_C(C_m). Stage two draws prior samples until
// n_ref(c) of them fall in the chosen block c and runs MRC on those against
// q(.|c)/p(.|c).
//
// The engine is written over a PriorModel so that one proposal stream can
// serve several decoders (each seeing its own coordinate of a joint draw).

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "remgen/dist.hpp"
#include "remgen/mrc.hpp"
#include "remgen/randomness.hpp"

namespace remgen {

/// Everything the sampler needs to know about priors, targets and blocks.
/// Index i ranges over decoders (views); point-to-point problems have one.
class HierProblem {
 public:
  /// Single prior/target pair with an arbitrary partition of its alphabet.
  static HierProblem point_to_point(const Pmf& target, const Pmf& prior, const Partition& part);

  /// Joint prior shared by two decoders. The partitions must agree on every
  /// supported pair; the targets must induce the same block marginal within
  /// `block_tol` (else BlockTargetMismatch).
  static HierProblem broadcast(const JointPmf& joint, const Partition& first, const Partition& second,
                               const std::vector<Pmf>& targets, double block_tol = 1e-9);

  const PriorModel& model() const noexcept { return model_; }
  std::size_t decoders() const noexcept { return partitions_.size(); }
  std::size_t block_count() const noexcept { return p_c_.size(); }
  const Partition& partition(std::size_t i) const { return partitions_[i]; }
  const Pmf& prior(std::size_t i) const { return priors_[i]; }
  const Pmf& target(std::size_t i) const { return targets_[i]; }
  const Pmf& p_c() const noexcept { return p_c_; }
  const Pmf& q_c() const noexcept { return q_c_; }

  /// Conditionals of decoder i inside block c. Only defined when the block
  /// has positive prior mass (target: positive target mass).
  const Pmf& prior_cond(std::size_t i, BlockLabel c) const;
  const Pmf& target_cond(std::size_t i, BlockLabel c) const;
  bool has_target_cond(BlockLabel c) const { return q_c_[c] > 0.0; }

  /// Block of a prior outcome, read through decoder i's partition.
  BlockLabel block_of_outcome(std::size_t outcome, std::size_t i = 0) const {
    return partitions_[i].block_of(model_.view(outcome, i));
  }

  const std::vector<double>& block_ratio() const noexcept { return block_ratio_; }
  const std::vector<double>& cond_ratio(std::size_t i, BlockLabel c) const { return cond_ratio_[i][c]; }

 private:
  HierProblem(PriorModel model, std::vector<Partition> parts, std::vector<Pmf> priors, std::vector<Pmf> targets);

  PriorModel model_;
  std::vector<Partition> partitions_;
  std::vector<Pmf> priors_;
  std::vector<Pmf> targets_;
  Pmf p_c_;
  Pmf q_c_;
  std::vector<std::vector<std::optional<Pmf>>> prior_cond_;
  std::vector<std::vector<std::optional<Pmf>>> target_cond_;
  std::vector<double> block_ratio_;
  std::vector<std::vector<std::vector<double>>> cond_ratio_;
};

struct HierConfig {
  std::size_t n_c = 1;
  std::vector<std::vector<std::size_t>> n_ref;  // [decoder][block]
  std::vector<std::uint64_t> rejection_cap;     // per block; 0 selects the default
  double t = 0.0;                               // slack used to size n_ref (informational)
  double t_c = 0.0;                             // slack used to size n_c (informational)
  /// Repetitions sharing one block pool and one set of refinement lists.
  /// 0 means all K repetitions share a single pool.
  std::size_t group_size = 0;

  /// n_c = ceil(exp(kl(q_C,p_C) + t_c)), n_ref_i(c) = ceil(exp(kl(q_i|c, p_i|c) + t)).
  /// A stage with a single supported outcome gets size 1.
  static HierConfig from_slack(const HierProblem& problem, double t_c, double t);

  std::size_t refinements(std::size_t decoder, BlockLabel c) const { return n_ref.at(decoder).at(c); }
  std::uint64_t cap_for(const HierProblem& problem, BlockLabel c) const;
  std::size_t group_of(std::size_t k) const noexcept { return group_size == 0 ? 0 : k / group_size; }

  /// Throws InvalidArgument when shapes or counts are inconsistent.
  void validate(const HierProblem& problem) const;
};

/// ceil(50 * n / mass), the default bound on raw draws for one refinement list.
std::uint64_t default_rejection_cap(std::size_t n_target, double block_mass);

struct HierMessage {
  std::size_t k = 0;
  std::size_t group = 0;
  IndexMessage block;                 // m_k, broadcast
  BlockLabel block_label = 0;         // C_{m_k}; recoverable by every decoder
  std::vector<IndexMessage> refine;   // l_{i,k}, one per decoder
  std::vector<std::uint64_t> raw_draws;  // prior draws until decoder i's list was complete
};

/// C_j = g(Y_j) for n_c prior draws from `seed`.
std::vector<BlockLabel> block_proposals(const StreamSeed& seed, const Pmf& prior, const Partition& part,
                                        std::size_t n_c);
std::vector<BlockLabel> block_proposals(const StreamSeed& seed, const HierProblem& problem, std::size_t n_c,
                                        std::size_t decoder = 0);

/// Normalized q_C(C_j)/p_C(C_j).
AuxDistribution block_aux(const Pmf& target_c, const Pmf& p_c, std::span<const BlockLabel> c_samples);

struct RejectionDraws {
  std::vector<std::size_t> outcomes;       // accepted prior outcomes, in order
  std::vector<std::uint64_t> draws_until;  // draws_until[j]: raw draws when outcome j was accepted
  std::uint64_t raw_draws() const noexcept { return draws_until.empty() ? 0 : draws_until.back(); }
};

/// Draws from the prior model until `n_target` outcomes fall in block c.
/// Throws RejectionCapExceeded after `cap` raw draws.
RejectionDraws rejection_draws(const StreamSeed& seed, const HierProblem& problem, BlockLabel c,
                               std::size_t n_target, std::uint64_t cap, std::size_t decoder = 0);

struct ConditionalProposals {
  std::vector<SymbolIndex> symbols;
  std::uint64_t raw_draws = 0;
};

ConditionalProposals conditional_proposals(const StreamSeed& seed, const Pmf& prior, const Partition& part,
                                           BlockLabel c, std::size_t n_target, std::uint64_t cap);

/// Normalized q(Y_j|c)/p(Y_j|c).
AuxDistribution conditional_aux(const Pmf& target_cond, const Pmf& prior_cond,
                                std::span<const SymbolIndex> proposals);

struct HierEncoding {
  std::vector<HierMessage> messages;
  std::vector<std::vector<SymbolIndex>> selected;  // [k][decoder], encoder side
  std::uint64_t raw_prior_draws = 0;               // all prior draws the encoder made
  std::vector<std::uint64_t> draws_at;             // [k] draws first made for repetition k
};

/// Stream labels, all under `seed`:
///   g/<g>/block                 block pool of group g
///   g/<g>/refine/<c>            refinement draws for block c in group g
///   g/<g>/select/<k>            block index choice of repetition k
///   g/<g>/select/<k>/refine/<i> refinement index choice for decoder i
/// Refinement lists are built once per (group, block label) and reused by
/// every repetition of the group that lands on that block.
HierEncoding hier_encode(const StreamSeed& seed, const HierProblem& problem, const HierConfig& cfg, std::size_t K);

/// Decoder i's reconstruction from the broadcast and its own refinement index.
SymbolIndex hier_decode(const StreamSeed& seed, const HierProblem& problem, const HierConfig& cfg,
                        const HierMessage& msg, std::size_t decoder = 0);

/// Decoder i's reconstruction once it knows the block label c.
SymbolIndex hier_decode_refinement(const StreamSeed& seed, const HierProblem& problem, const HierConfig& cfg,
                                   const HierMessage& msg, std::size_t decoder, BlockLabel c);

/// Block label decoder i reads from the broadcast index alone.
BlockLabel hier_decode_block(const StreamSeed& seed, const HierProblem& problem, const HierConfig& cfg,
                             const HierMessage& msg, std::size_t decoder = 0);

}  // namespace remgen
