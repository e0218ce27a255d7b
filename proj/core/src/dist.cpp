// Copyright 2026 The remgen Authors
// SPDX-License-Identifier: Apache-2.0

#include "remgen/dist.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "remgen/error.hpp"

namespace remgen {

namespace {

void validate_masses(std::span<const double> mass, std::string_view what) {
  double total = 0.0;
  for (std::size_t i = 0; i < mass.size(); ++i) {
    const double m = mass[i];
    if (!std::isfinite(m) || m < 0.0) {
      throw Error(ErrorKind::InvalidDistribution,
                  std::string(what) + " entry " + std::to_string(i) + " is negative or not finite");
    }
    total += m;
  }
  if (std::abs(total - 1.0) > kMassTolerance) {
    throw Error(ErrorKind::InvalidDistribution,
                std::string(what) + " sums to " + std::to_string(total) + ", expected 1");
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Alphabet

Alphabet::Alphabet(std::vector<std::string> symbols) {
  if (symbols.empty()) throw Error(ErrorKind::InvalidArgument, "alphabet must not be empty");
  std::unordered_set<std::string_view> seen;
  for (const auto& s : symbols) {
    if (!seen.insert(s).second) {
      throw Error(ErrorKind::InvalidArgument, "duplicate symbol '" + s + "' in alphabet");
    }
  }
  symbols_ = std::make_shared<const std::vector<std::string>>(std::move(symbols));
}

Alphabet Alphabet::indexed(std::size_t n, std::string_view prefix) {
  std::vector<std::string> names;
  names.reserve(n);
  for (std::size_t i = 0; i < n; ++i) names.push_back(std::string(prefix) + std::to_string(i));
  return Alphabet(std::move(names));
}

const std::string& Alphabet::symbol(SymbolIndex i) const {
  if (i >= size()) throw Error(ErrorKind::IndexOutOfRange, "symbol index " + std::to_string(i));
  return (*symbols_)[i];
}

std::optional<SymbolIndex> Alphabet::find(std::string_view name) const {
  const auto& s = *symbols_;
  const auto it = std::find(s.begin(), s.end(), name);
  if (it == s.end()) return std::nullopt;
  return static_cast<SymbolIndex>(it - s.begin());
}

void require_same_alphabet(const Alphabet& a, const Alphabet& b, std::string_view what) {
  if (!(a == b)) throw Error(ErrorKind::InvalidArgument, std::string(what) + ": alphabets differ");
}

// ---------------------------------------------------------------------------
// Pmf

Pmf::Pmf(Alphabet alphabet, std::vector<double> mass)
    : alphabet_(std::move(alphabet)), mass_(std::move(mass)) {
  if (mass_.size() != alphabet_.size()) {
    throw Error(ErrorKind::InvalidDistribution, "pmf has " + std::to_string(mass_.size()) +
                                                    " masses for " + std::to_string(alphabet_.size()) +
                                                    " symbols");
  }
  validate_masses(mass_, "pmf");
}

Pmf::Pmf(std::vector<double> mass) : Pmf(Alphabet::indexed(mass.size()), std::move(mass)) {}

Pmf Pmf::point(Alphabet alphabet, SymbolIndex atom) {
  std::vector<double> mass(alphabet.size(), 0.0);
  if (atom >= mass.size()) throw Error(ErrorKind::IndexOutOfRange, "point mass atom out of range");
  mass[atom] = 1.0;
  return Pmf(std::move(alphabet), std::move(mass));
}

Pmf Pmf::uniform(Alphabet alphabet) {
  const std::size_t n = alphabet.size();
  return Pmf(std::move(alphabet), std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

std::size_t Pmf::support_size() const noexcept {
  return static_cast<std::size_t>(std::count_if(mass_.begin(), mass_.end(), [](double m) { return m > 0.0; }));
}

// ---------------------------------------------------------------------------
// JointPmf

JointPmf::JointPmf(Alphabet first, Alphabet second, std::vector<double> row_major)
    : first_(std::move(first)), second_(std::move(second)), mass_(std::move(row_major)) {
  if (mass_.size() != first_.size() * second_.size()) {
    throw Error(ErrorKind::InvalidDistribution, "joint pmf matrix does not match alphabet sizes");
  }
  validate_masses(mass_, "joint pmf");
}

namespace {

std::vector<double> flatten(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw Error(ErrorKind::InvalidDistribution, "joint pmf has no rows");
  std::vector<double> out;
  for (const auto& r : rows) {
    if (r.size() != rows.front().size()) {
      throw Error(ErrorKind::InvalidDistribution, "joint pmf rows have unequal lengths");
    }
    out.insert(out.end(), r.begin(), r.end());
  }
  return out;
}

}  // namespace

JointPmf::JointPmf(const std::vector<std::vector<double>>& rows)
    : JointPmf(Alphabet::indexed(rows.size(), "a"),
               Alphabet::indexed(rows.empty() ? 0 : rows.front().size(), "b"), flatten(rows)) {}

// ---------------------------------------------------------------------------
// Partition

Partition::Partition(Alphabet alphabet, std::vector<BlockLabel> block_of,
                     std::optional<std::size_t> block_count)
    : alphabet_(std::move(alphabet)), block_of_(std::move(block_of)) {
  if (block_of_.size() != alphabet_.size()) {
    throw Error(ErrorKind::InvalidArgument, "partition must map every symbol");
  }
  const std::size_t used = *std::max_element(block_of_.begin(), block_of_.end()) + 1;
  block_count_ = block_count.value_or(used);
  if (block_count_ < used) {
    throw Error(ErrorKind::InvalidArgument, "partition label exceeds declared block count");
  }
  if (!block_count) {
    // Without an explicit label space the labels must be contiguous.
    std::vector<bool> hit(block_count_, false);
    for (auto c : block_of_) hit[c] = true;
    if (std::find(hit.begin(), hit.end(), false) != hit.end()) {
      throw Error(ErrorKind::InvalidArgument, "partition block labels are not contiguous");
    }
  }
}

Partition Partition::single_block(Alphabet alphabet) {
  const std::size_t n = alphabet.size();
  return Partition(std::move(alphabet), std::vector<BlockLabel>(n, 0));
}

Partition Partition::singletons(Alphabet alphabet) {
  std::vector<BlockLabel> labels(alphabet.size());
  for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = i;
  return Partition(std::move(alphabet), std::move(labels));
}

std::vector<SymbolIndex> Partition::members(BlockLabel c) const {
  std::vector<SymbolIndex> out;
  for (std::size_t i = 0; i < block_of_.size(); ++i) {
    if (block_of_[i] == c) out.push_back(i);
  }
  return out;
}

Alphabet Partition::block_alphabet() const { return Alphabet::indexed(block_count_, "b"); }

// ---------------------------------------------------------------------------
// Functionals

double entropy(const Pmf& p) {
  double h = 0.0;
  for (double m : p.masses()) {
    if (m > 0.0) h -= m * std::log(m);
  }
  return std::max(h, 0.0);
}

double kl(const Pmf& q, const Pmf& p) {
  require_same_alphabet(q.alphabet(), p.alphabet(), "kl");
  double d = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (q[i] == 0.0) continue;
    if (p[i] == 0.0) {
      throw Error(ErrorKind::SupportViolation,
                  "target puts mass on '" + q.alphabet().symbol(i) + "' where the prior has none");
    }
    d += q[i] * std::log(q[i] / p[i]);
  }
  return std::max(d, 0.0);
}

double tv(const Pmf& p, const Pmf& q) {
  require_same_alphabet(p.alphabet(), q.alphabet(), "tv");
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - q[i]);
  return 0.5 * s;
}

double chi_square(const Pmf& p, const Pmf& q) {
  require_same_alphabet(p.alphabet(), q.alphabet(), "chi_square");
  // Summed as (p - q)^2 / q so equal inputs give exactly zero.
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (q[i] == 0.0) {
      if (p[i] == 0.0) continue;
      throw Error(ErrorKind::SupportViolation,
                  "chi-square numerator has mass on '" + p.alphabet().symbol(i) + "' where the reference has none");
    }
    const double d = p[i] - q[i];
    s += d * d / q[i];
  }
  return s;
}

std::pair<Pmf, Pmf> marginals(const JointPmf& joint) {
  std::vector<double> first(joint.rows(), 0.0);
  std::vector<double> second(joint.cols(), 0.0);
  for (std::size_t r = 0; r < joint.rows(); ++r) {
    for (std::size_t c = 0; c < joint.cols(); ++c) {
      first[r] += joint.at(r, c);
      second[c] += joint.at(r, c);
    }
  }
  return {Pmf(joint.first(), std::move(first)), Pmf(joint.second(), std::move(second))};
}

double mutual_information(const JointPmf& joint) {
  const auto [p1, p2] = marginals(joint);
  double mi = 0.0;
  for (std::size_t r = 0; r < joint.rows(); ++r) {
    for (std::size_t c = 0; c < joint.cols(); ++c) {
      const double m = joint.at(r, c);
      if (m > 0.0) mi += m * std::log(m / (p1[r] * p2[c]));
    }
  }
  return std::max(mi, 0.0);
}

JointPmf product(const Pmf& first, const Pmf& second) {
  std::vector<double> mass;
  mass.reserve(first.size() * second.size());
  for (double a : first.masses()) {
    for (double b : second.masses()) mass.push_back(a * b);
  }
  return JointPmf(first.alphabet(), second.alphabet(), std::move(mass));
}

Pmf block_marginal(const Pmf& p, const Partition& part) {
  require_same_alphabet(p.alphabet(), part.alphabet(), "block_marginal");
  std::vector<double> mass(part.block_count(), 0.0);
  for (std::size_t i = 0; i < p.size(); ++i) mass[part.block_of(i)] += p[i];
  return Pmf(part.block_alphabet(), std::move(mass));
}

Pmf condition_on_block(const Pmf& p, const Partition& part, BlockLabel c) {
  require_same_alphabet(p.alphabet(), part.alphabet(), "condition_on_block");
  if (c >= part.block_count()) throw Error(ErrorKind::IndexOutOfRange, "block label out of range");
  double block_mass = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (part.block_of(i) == c) block_mass += p[i];
  }
  if (block_mass <= 0.0) {
    throw Error(ErrorKind::ZeroBlockMass, "block " + std::to_string(c) + " has zero mass");
  }
  std::vector<double> mass(p.size(), 0.0);
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (part.block_of(i) == c) mass[i] = p[i] / block_mass;
  }
  return Pmf(p.alphabet(), std::move(mass));
}

double expectation(const Pmf& p, std::span<const double> f) {
  if (f.size() != p.size()) throw Error(ErrorKind::InvalidArgument, "function table size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += p[i] * f[i];
  return s;
}

}  // namespace remgen
