// Copyright 2026 The remgen Authors
// SPDX-License-Identifier: Apache-2.0

// Brute-force ground truth for tiny instances. Nothing here samples; every
// result is a finite sum and either exact (to rounding) or an error.

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>

#include "remgen/dist.hpp"
#include "remgen/hier.hpp"

namespace remgen {

inline constexpr std::uint64_t kEnumerationCeiling = 10'000'000;
inline constexpr std::uint64_t kGroupedTermCeiling = 200'000'000;

enum class EnumerationMethod {
  Ordered,  // every ordered proposal tuple with its i.i.d. product probability
  Grouped,  // multinomial count vectors, terms below 1e-300 of the mode dropped
};

struct ExactLaw {
  Pmf pmf;                            // decoded-symbol law, given non-degenerate weights
  std::uint64_t enumeration_size = 0;
  std::string method;
  /// Probability that every proposal has zero weight (the sampler raises
  /// DegenerateWeights there). pmf is conditioned on the complement.
  double degenerate_mass = 0.0;
};

/// Law of the decoded symbol of one MRC round with n proposals.
/// Ordered: |support(prior)|^n must not exceed `ceiling`.
/// Grouped: the number of count vectors visited must not exceed `ceiling`.
ExactLaw exact_selected_distribution_mrc(const Pmf& target, const Pmf& prior, std::size_t n,
                                         EnumerationMethod method = EnumerationMethod::Ordered,
                                         std::uint64_t ceiling = kEnumerationCeiling);

/// Law of the decoded symbol of one two-stage round. Since the refinement
/// lists depend on the block stage only through the chosen label, the law
/// is sum_c P[block stage picks c] * (conditional MRC law in block c).
/// Ordered feasibility: |supp p_C|^{n_c} * max_c |supp block c|^{n_ref(c)}
/// must not exceed `ceiling`; that product is reported as enumeration_size.
ExactLaw exact_selected_distribution_hier(const Pmf& target, const Pmf& prior, const Partition& part,
                                          std::size_t n_c, std::span<const std::size_t> n_ref,
                                          EnumerationMethod method = EnumerationMethod::Ordered,
                                          std::uint64_t ceiling = kEnumerationCeiling);

/// Decoder i's law under a (possibly broadcast) problem and config.
ExactLaw exact_selected_distribution_hier(const HierProblem& problem, const HierConfig& cfg, std::size_t decoder,
                                          EnumerationMethod method = EnumerationMethod::Ordered,
                                          std::uint64_t ceiling = kEnumerationCeiling);

/// Law of the block label chosen by the block stage.
ExactLaw exact_block_law(const Pmf& q_c, const Pmf& p_c, std::size_t n_c,
                         EnumerationMethod method = EnumerationMethod::Ordered,
                         std::uint64_t ceiling = kEnumerationCeiling);

/// |sum_x f(x) (law(x) - target(x))|.
double exact_bias(std::span<const double> f, const ExactLaw& law, const Pmf& target);

/// sum_c P[chosen block = c] * n_ref(c) / p_C(c).
double expected_refinement_draws(const Pmf& prior, const Partition& part, std::span<const std::size_t> n_ref,
                                 const Pmf& block_law);

/// Exhaustive search over all pairs of set partitions of the supported
/// symbols for the highest-entropy pair that agrees almost surely. Labels
/// follow the same convention as gk_decompose (first appearance over the
/// first alphabet; zero-marginal symbols in an extra trailing label).
/// Throws InfeasibleEnumeration when Bell(|X1|) * Bell(|X2|) > 10^6.
std::pair<Partition, Partition> brute_force_gk(const JointPmf& joint);

}  // namespace remgen
