// Copyright 2026 The remgen Authors
// SPDX-License-Identifier: Apache-2.0

// Minimal random coding (MRC).
//
// Encoder and decoder draw the same n proposals from the prior. The encoder
// picks index j with probability proportional to q(Y_j)/p(Y_j) and sends it
// with log2(n) bits; the decoder returns proposal j.

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "remgen/dist.hpp"
#include "remgen/randomness.hpp"

namespace remgen {

/// Categorical distribution over proposal positions 0..n-1.
struct AuxDistribution {
  std::vector<double> weights;
  double normalizer = 0.0;  // sum of the raw importance ratios

  std::size_t size() const noexcept { return weights.size(); }
};

struct IndexMessage {
  std::size_t index = 1;  // 1-based, in [1, n]
  std::size_t n = 1;
  double bit_cost = 0.0;       // log2(n)
  std::uint32_t wire_bits = 0; // ceil(log2(n))
};

double index_bits(std::size_t n) noexcept;
std::uint32_t index_wire_bits(std::size_t n) noexcept;

/// ceil(exp(divergence + slack)), both in nats. Values within 1e-9
/// (relative) of an integer round to it, so exp(0) gives exactly 1.
/// Throws InvalidArgument if the result does not fit in 2^62.
std::size_t sample_size_for(double divergence, double slack);

/// q(x)/p(x) per symbol (zero where q vanishes). Throws SupportViolation if
/// the target has mass outside the prior's support.
std::vector<double> importance_ratios(const Pmf& target, const Pmf& prior);

/// Normalizes ratio[proposal_j] over the proposals. Throws DegenerateWeights
/// when every ratio is zero.
AuxDistribution aux_from_ratios(std::span<const double> ratio, std::span<const SymbolIndex> proposals);

std::vector<SymbolIndex> draw_proposals(const StreamSeed& seed, const Pmf& prior, std::size_t n);

AuxDistribution aux_distribution(const Pmf& target, const Pmf& prior, std::span<const SymbolIndex> proposals);

/// Inverse-CDF draw of one position from `aux`. Consumes one stream value.
std::size_t sample_position(SharedStream& stream, const AuxDistribution& aux);

IndexMessage encode_index(SharedStream& stream, const AuxDistribution& aux);

SymbolIndex decode_sample(const StreamSeed& seed, const Pmf& prior, const IndexMessage& msg);

/// E_{m ~ aux}[f(Y_m)] given the drawn proposals (the conditional mean of one
/// selection).
double expected_selection_value(const AuxDistribution& aux, std::span<const SymbolIndex> proposals,
                                std::span<const double> f);

struct MrcRun {
  std::optional<double> estimate;  // empty when K == 0
  std::vector<IndexMessage> messages;
  std::vector<SymbolIndex> symbols;  // decoder-side reconstructions
};

/// Proposal stream of repetition k: "<label>/k/<k>".
StreamSeed mrc_repetition_seed(const StreamSeed& seed, std::size_t k);

/// K independent MRC rounds; round k draws fresh proposals from
/// mrc_repetition_seed(seed, k) and selects with "<...>/k/<k>/select".
MrcRun mrc_estimate(const StreamSeed& seed, const Pmf& target, const Pmf& prior, std::span<const double> f,
                    std::size_t n, std::size_t K);

}  // namespace remgen
