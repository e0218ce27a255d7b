// Copyright 2026 The remgen Authors
// SPDX-License-Identifier: Apache-2.0

#include "remgen/randomness.hpp"

#include <algorithm>

#include "remgen/error.hpp"

namespace remgen {

StreamSeed StreamSeed::child(std::string_view part) const {
  std::string next = label;
  next += '/';
  next += part;
  return {seed, std::move(next)};
}

std::uint64_t fnv1a64(std::string_view bytes) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t splitmix64_mix(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

SharedStream::SharedStream(const StreamSeed& seed)
    : state_(splitmix64_mix(seed.seed ^ fnv1a64(seed.label))), position_(0) {}

SharedStream SharedStream::from_state(std::uint64_t state) noexcept {
  SharedStream s;
  s.state_ = state;
  return s;
}

InverseCdf::InverseCdf(std::span<const double> mass) : cumulative_(mass.size()) {
  if (mass.empty()) throw Error(ErrorKind::InvalidArgument, "inverse CDF over an empty alphabet");
  double acc = 0.0;
  for (std::size_t i = 0; i < mass.size(); ++i) {
    acc += mass[i];
    cumulative_[i] = acc;
    if (mass[i] > 0.0) fallback_ = i;
  }
}

std::size_t InverseCdf::pick(double u) const noexcept {
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  if (it == cumulative_.end()) return fallback_;
  return static_cast<std::size_t>(it - cumulative_.begin());
}

SymbolIndex sample_categorical(SharedStream& stream, const Pmf& p) {
  return InverseCdf(p.masses()).draw(stream);
}

std::vector<std::pair<SymbolIndex, SymbolIndex>> sample_joint_sequence(SharedStream& stream, const JointPmf& joint,
                                                                      std::size_t count) {
  const InverseCdf cdf(joint.masses());
  std::vector<std::pair<SymbolIndex, SymbolIndex>> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const std::size_t cell = cdf.draw(stream);
    out.emplace_back(cell / joint.cols(), cell % joint.cols());
  }
  return out;
}

PriorModel::PriorModel(std::vector<double> mass, std::vector<std::vector<SymbolIndex>> views)
    : mass_(std::move(mass)), views_(std::move(views)), cdf_(mass_) {}

PriorModel PriorModel::marginal(const Pmf& prior) {
  std::vector<SymbolIndex> identity(prior.size());
  for (std::size_t i = 0; i < identity.size(); ++i) identity[i] = i;
  return PriorModel({prior.masses().begin(), prior.masses().end()}, {std::move(identity)});
}

PriorModel PriorModel::joint(const JointPmf& joint) {
  const std::size_t cells = joint.rows() * joint.cols();
  std::vector<SymbolIndex> rows(cells), cols(cells);
  for (std::size_t i = 0; i < cells; ++i) {
    rows[i] = i / joint.cols();
    cols[i] = i % joint.cols();
  }
  return PriorModel({joint.masses().begin(), joint.masses().end()}, {std::move(rows), std::move(cols)});
}

}  // namespace remgen
