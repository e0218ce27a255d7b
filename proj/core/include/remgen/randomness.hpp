// Copyright 2026 The remgen Authors
// SPDX-License-Identifier: Apache-2.0

// Shared randomness. Encoder and decoders each rebuild a SharedStream from
// the same StreamSeed and therefore see bit-identical draws.
//
//   state_0   = mix(seed XOR fnv1a64(label))
//   next_u64  : state += 0x9E3779B97F4A7C15; return mix(state)
//   next_unit : (next_u64 >> 11) * 2^-53
//
// where mix is the SplitMix64 finalizer.

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "remgen/dist.hpp"

namespace remgen {

struct StreamSeed {
  std::uint64_t seed = 0;
  std::string label;

  /// Seed for a sub-purpose: same seed, label "<label>/<part>".
  StreamSeed child(std::string_view part) const;

  friend bool operator==(const StreamSeed&, const StreamSeed&) = default;
};

std::uint64_t fnv1a64(std::string_view bytes) noexcept;
std::uint64_t splitmix64_mix(std::uint64_t z) noexcept;
inline double unit_from_bits(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

class SharedStream {
 public:
  explicit SharedStream(const StreamSeed& seed);
  static SharedStream from_state(std::uint64_t state) noexcept;

  std::uint64_t next_u64() noexcept {
    state_ += 0x9E3779B97F4A7C15ULL;
    ++position_;
    return splitmix64_mix(state_);
  }
  double next_unit() noexcept { return unit_from_bits(next_u64()); }

  std::uint64_t state() const noexcept { return state_; }
  std::uint64_t position() const noexcept { return position_; }

 private:
  SharedStream() = default;
  std::uint64_t state_ = 0;
  std::uint64_t position_ = 0;
};

inline SharedStream derive(const StreamSeed& seed) { return SharedStream(seed); }

/// Inverse-CDF table built by left-to-right accumulation. pick(u) returns the
/// first index whose cumulative mass strictly exceeds u; if rounding leaves
/// the total below u, the last positive-mass index is returned.
class InverseCdf {
 public:
  explicit InverseCdf(std::span<const double> mass);

  std::size_t pick(double u) const noexcept;
  std::size_t draw(SharedStream& stream) const noexcept { return pick(stream.next_unit()); }
  std::size_t size() const noexcept { return cumulative_.size(); }

 private:
  std::vector<double> cumulative_;
  std::size_t fallback_ = 0;
};

/// One draw from p (consumes exactly one value of the stream).
SymbolIndex sample_categorical(SharedStream& stream, const Pmf& p);

/// `count` pairs by inverse-CDF over the row-major pair alphabet.
std::vector<std::pair<SymbolIndex, SymbolIndex>> sample_joint_sequence(SharedStream& stream, const JointPmf& joint,
                                                                      std::size_t count);

/// Outcome space a proposal stream is drawn over, together with each
/// decoder's view of an outcome. A marginal prior has one view (identity);
/// a two-decoder joint has two views (row, column).
class PriorModel {
 public:
  static PriorModel marginal(const Pmf& prior);
  static PriorModel joint(const JointPmf& joint);

  std::size_t views() const noexcept { return views_.size(); }
  std::size_t outcomes() const noexcept { return mass_.size(); }
  double mass(std::size_t outcome) const { return mass_[outcome]; }
  SymbolIndex view(std::size_t outcome, std::size_t decoder) const { return views_[decoder][outcome]; }
  std::size_t draw(SharedStream& stream) const noexcept { return cdf_.draw(stream); }

 private:
  PriorModel(std::vector<double> mass, std::vector<std::vector<SymbolIndex>> views);

  std::vector<double> mass_;
  std::vector<std::vector<SymbolIndex>> views_;
  InverseCdf cdf_;
};

}  // namespace remgen
