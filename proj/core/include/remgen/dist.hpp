// Copyright 2026 The remgen Authors
// SPDX-License-Identifier: Apache-2.0

// Finite discrete probability types and the information-theoretic
// functionals computed over them. All divergences and entropies are in nats;
// use nats_to_bits() when a report needs bits.

#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace remgen {

using SymbolIndex = std::size_t;
using BlockLabel = std::size_t;

/// Tolerance on the total mass of a Pmf / JointPmf at construction.
inline constexpr double kMassTolerance = 1e-9;

/// Ordered list of distinct symbol names. Order is part of identity:
/// inverse-CDF sampling walks symbols in this order.
/// Copies share the underlying storage.
class Alphabet {
 public:
  explicit Alphabet(std::vector<std::string> symbols);

  /// Alphabet of `n` symbols named `<prefix>0 .. <prefix>{n-1}`.
  static Alphabet indexed(std::size_t n, std::string_view prefix = "s");

  std::size_t size() const noexcept { return symbols_->size(); }
  const std::string& symbol(SymbolIndex i) const;
  const std::vector<std::string>& symbols() const noexcept { return *symbols_; }
  std::optional<SymbolIndex> find(std::string_view name) const;

  friend bool operator==(const Alphabet& a, const Alphabet& b) {
    return a.symbols_ == b.symbols_ || *a.symbols_ == *b.symbols_;
  }

 private:
  std::shared_ptr<const std::vector<std::string>> symbols_;
};

/// Probability mass function over a finite alphabet. Immutable.
class Pmf {
 public:
  Pmf(Alphabet alphabet, std::vector<double> mass);
  /// Convenience: masses over an indexed alphabet (s0, s1, ...).
  explicit Pmf(std::vector<double> mass);

  static Pmf point(Alphabet alphabet, SymbolIndex atom);
  static Pmf uniform(Alphabet alphabet);

  const Alphabet& alphabet() const noexcept { return alphabet_; }
  std::size_t size() const noexcept { return mass_.size(); }
  double operator[](SymbolIndex i) const { return mass_[i]; }
  std::span<const double> masses() const noexcept { return mass_; }
  bool in_support(SymbolIndex i) const { return mass_[i] > 0.0; }
  std::size_t support_size() const noexcept;

 private:
  Alphabet alphabet_;
  std::vector<double> mass_;
};

/// Joint pmf over a pair of alphabets, stored row-major (rows index the
/// first alphabet).
class JointPmf {
 public:
  JointPmf(Alphabet first, Alphabet second, std::vector<double> row_major);
  explicit JointPmf(const std::vector<std::vector<double>>& rows);

  const Alphabet& first() const noexcept { return first_; }
  const Alphabet& second() const noexcept { return second_; }
  std::size_t rows() const noexcept { return first_.size(); }
  std::size_t cols() const noexcept { return second_.size(); }
  double at(SymbolIndex row, SymbolIndex col) const { return mass_[row * cols() + col]; }
  std::span<const double> masses() const noexcept { return mass_; }

 private:
  Alphabet first_;
  Alphabet second_;
  std::vector<double> mass_;
};

/// Deterministic map g from an alphabet onto block labels 0..block_count-1.
class Partition {
 public:
  /// `block_count` defaults to max(label)+1. A larger explicit count is
  /// allowed so that a pair of partitions can share one label space.
  Partition(Alphabet alphabet, std::vector<BlockLabel> block_of,
            std::optional<std::size_t> block_count = std::nullopt);

  static Partition single_block(Alphabet alphabet);
  static Partition singletons(Alphabet alphabet);

  const Alphabet& alphabet() const noexcept { return alphabet_; }
  std::size_t block_count() const noexcept { return block_count_; }
  BlockLabel block_of(SymbolIndex i) const { return block_of_[i]; }
  std::span<const BlockLabel> labels() const noexcept { return block_of_; }
  std::vector<SymbolIndex> members(BlockLabel c) const;

  /// Alphabet of block names b0 .. b{count-1}.
  Alphabet block_alphabet() const;

 private:
  Alphabet alphabet_;
  std::vector<BlockLabel> block_of_;
  std::size_t block_count_ = 0;
};

double entropy(const Pmf& p);
double kl(const Pmf& q, const Pmf& p);
double tv(const Pmf& p, const Pmf& q);
double chi_square(const Pmf& p, const Pmf& q);
double mutual_information(const JointPmf& joint);
std::pair<Pmf, Pmf> marginals(const JointPmf& joint);
JointPmf product(const Pmf& first, const Pmf& second);

Pmf block_marginal(const Pmf& p, const Partition& part);
Pmf condition_on_block(const Pmf& p, const Partition& part, BlockLabel c);

/// E_p[f].
double expectation(const Pmf& p, std::span<const double> f);

inline double nats_to_bits(double nats) noexcept { return nats / 0.69314718055994530942; }

/// Throws InvalidArgument unless the alphabets are equal.
void require_same_alphabet(const Alphabet& a, const Alphabet& b, std::string_view what);

}  // namespace remgen
