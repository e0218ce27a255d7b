// Copyright 2026 The remgen Authors
// SPDX-License-Identifier: Apache-2.0

#include "remgen/mrc.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "remgen/error.hpp"

namespace remgen {

double index_bits(std::size_t n) noexcept { return n <= 1 ? 0.0 : std::log2(static_cast<double>(n)); }

std::uint32_t index_wire_bits(std::size_t n) noexcept {
  if (n <= 1) return 0;
  return static_cast<std::uint32_t>(std::bit_width(n - 1));
}

std::size_t sample_size_for(double divergence, double slack) {
  const double x = divergence + slack;
  if (!std::isfinite(x)) throw Error(ErrorKind::InvalidArgument, "sample size exponent is not finite");
  if (x > 62.0 * std::log(2.0)) {
    throw Error(ErrorKind::InvalidArgument, "sample size exp(" + std::to_string(x) + ") is too large");
  }
  const double v = std::exp(x);
  const double nearest = std::round(v);
  const double n = std::abs(v - nearest) <= 1e-9 * v ? nearest : std::ceil(v);
  return std::max<std::size_t>(1, static_cast<std::size_t>(n));
}

std::vector<double> importance_ratios(const Pmf& target, const Pmf& prior) {
  require_same_alphabet(target.alphabet(), prior.alphabet(), "importance_ratios");
  std::vector<double> ratio(target.size(), 0.0);
  for (std::size_t i = 0; i < target.size(); ++i) {
    if (target[i] == 0.0) continue;
    if (prior[i] == 0.0) {
      throw Error(ErrorKind::SupportViolation,
                  "target puts mass on '" + target.alphabet().symbol(i) + "' outside the prior support");
    }
    ratio[i] = target[i] / prior[i];
  }
  return ratio;
}

AuxDistribution aux_from_ratios(std::span<const double> ratio, std::span<const SymbolIndex> proposals) {
  AuxDistribution aux;
  aux.weights.resize(proposals.size());
  double tau = 0.0;
  for (std::size_t j = 0; j < proposals.size(); ++j) {
    const double r = ratio[proposals[j]];
    aux.weights[j] = r;
    tau += r;
  }
  if (!(tau > 0.0)) {
    throw Error(ErrorKind::DegenerateWeights, "all " + std::to_string(proposals.size()) +
                                                  " proposals fall outside the target support");
  }
  for (auto& w : aux.weights) w /= tau;
  aux.normalizer = tau;
  return aux;
}

std::vector<SymbolIndex> draw_proposals(const StreamSeed& seed, const Pmf& prior, std::size_t n) {
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "proposal count must be at least 1");
  SharedStream stream(seed);
  const InverseCdf cdf(prior.masses());
  std::vector<SymbolIndex> out(n);
  for (auto& s : out) s = cdf.draw(stream);
  return out;
}

AuxDistribution aux_distribution(const Pmf& target, const Pmf& prior, std::span<const SymbolIndex> proposals) {
  const auto ratio = importance_ratios(target, prior);
  for (auto s : proposals) {
    if (s >= prior.size() || prior[s] == 0.0) {
      throw Error(ErrorKind::SupportViolation, "proposal outside the prior support");
    }
  }
  return aux_from_ratios(ratio, proposals);
}

std::size_t sample_position(SharedStream& stream, const AuxDistribution& aux) {
  const double u = stream.next_unit();
  double acc = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t j = 0; j < aux.weights.size(); ++j) {
    const double w = aux.weights[j];
    acc += w;
    if (acc > u) return j;
    if (w > 0.0) last_positive = j;
  }
  return last_positive;
}

IndexMessage encode_index(SharedStream& stream, const AuxDistribution& aux) {
  const std::size_t n = aux.size();
  return {sample_position(stream, aux) + 1, n, index_bits(n), index_wire_bits(n)};
}

SymbolIndex decode_sample(const StreamSeed& seed, const Pmf& prior, const IndexMessage& msg) {
  if (msg.index < 1 || msg.index > msg.n) {
    throw Error(ErrorKind::IndexOutOfRange,
                "index " + std::to_string(msg.index) + " outside [1, " + std::to_string(msg.n) + "]");
  }
  // Only the prefix up to the index is needed.
  SharedStream stream(seed);
  const InverseCdf cdf(prior.masses());
  SymbolIndex s = 0;
  for (std::size_t j = 0; j < msg.index; ++j) s = cdf.draw(stream);
  return s;
}

double expected_selection_value(const AuxDistribution& aux, std::span<const SymbolIndex> proposals,
                                std::span<const double> f) {
  if (proposals.size() != aux.size()) throw Error(ErrorKind::InvalidArgument, "proposal/aux size mismatch");
  double v = 0.0;
  for (std::size_t j = 0; j < proposals.size(); ++j) v += aux.weights[j] * f[proposals[j]];
  return v;
}

StreamSeed mrc_repetition_seed(const StreamSeed& seed, std::size_t k) {
  return seed.child("k/" + std::to_string(k));
}

MrcRun mrc_estimate(const StreamSeed& seed, const Pmf& target, const Pmf& prior, std::span<const double> f,
                    std::size_t n, std::size_t K) {
  if (f.size() != prior.size()) throw Error(ErrorKind::InvalidArgument, "function table size mismatch");
  const auto ratio = importance_ratios(target, prior);
  MrcRun run;
  run.messages.reserve(K);
  run.symbols.reserve(K);
  double sum = 0.0;
  for (std::size_t k = 0; k < K; ++k) {
    const StreamSeed rep = mrc_repetition_seed(seed, k);
    const auto proposals = draw_proposals(rep, prior, n);
    const auto aux = aux_from_ratios(ratio, proposals);
    SharedStream select(rep.child("select"));
    const IndexMessage msg = encode_index(select, aux);
    const SymbolIndex decoded = decode_sample(rep, prior, msg);
    run.messages.push_back(msg);
    run.symbols.push_back(decoded);
    sum += f[decoded];
  }
  if (K > 0) run.estimate = sum / static_cast<double>(K);
  return run;
}

}  // namespace remgen
