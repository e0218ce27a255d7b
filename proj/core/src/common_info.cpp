// Copyright 2026 The remgen Authors
// SPDX-License-Identifier: Apache-2.0

#include "remgen/common_info.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "remgen/error.hpp"

namespace remgen {

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

// Connected components of the bipartite graph rows+cols with an edge wherever
// the predicate holds. Nodes 0..rows-1 are rows, rows..rows+cols-1 columns.
template <class Edge>
DisjointSets bipartite_components(std::size_t rows, std::size_t cols, Edge edge) {
  DisjointSets sets(rows + cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      if (edge(r, c)) sets.unite(r, rows + c);
    }
  }
  return sets;
}

std::vector<Pmf> conditionals(const Pmf& marginal, const Partition& part, std::size_t blocks) {
  std::vector<Pmf> out;
  out.reserve(blocks);
  for (BlockLabel c = 0; c < blocks; ++c) out.push_back(condition_on_block(marginal, part, c));
  return out;
}

}  // namespace

GkDecomposition gk_decompose(const JointPmf& joint, double atol) {
  if (!(atol >= 0.0)) throw Error(ErrorKind::InvalidArgument, "atol must be non-negative");
  const std::size_t rows = joint.rows();
  const std::size_t cols = joint.cols();
  auto sets = bipartite_components(rows, cols, [&](std::size_t r, std::size_t c) { return joint.at(r, c) > atol; });

  std::vector<bool> has_edge(rows + cols, false);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      if (joint.at(r, c) > atol) has_edge[r] = has_edge[rows + c] = true;
    }
  }

  // Label components by first appearance scanning the first alphabet.
  constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> label_of_root(rows + cols, kUnset);
  std::size_t next = 0;
  for (std::size_t r = 0; r < rows; ++r) {
    if (!has_edge[r]) continue;
    auto& slot = label_of_root[sets.find(r)];
    if (slot == kUnset) slot = next++;
  }
  const std::size_t blocks = next;
  if (blocks == 0) throw Error(ErrorKind::InvalidArgument, "joint has no entry above the support threshold");
  const bool any_null = std::find(has_edge.begin(), has_edge.end(), false) != has_edge.end();
  const std::size_t label_space = std::max<std::size_t>(blocks + (any_null ? 1 : 0), 1);

  std::vector<BlockLabel> g1(rows), g2(cols);
  for (std::size_t r = 0; r < rows; ++r) g1[r] = has_edge[r] ? label_of_root[sets.find(r)] : blocks;
  for (std::size_t c = 0; c < cols; ++c) g2[c] = has_edge[rows + c] ? label_of_root[sets.find(rows + c)] : blocks;

  Partition part1(joint.first(), std::move(g1), label_space);
  Partition part2(joint.second(), std::move(g2), label_space);

  const auto [p1, p2] = marginals(joint);
  std::vector<double> pc(blocks, 0.0);
  double retained = 0.0;
  for (std::size_t r = 0; r < rows; ++r) {
    if (part1.block_of(r) < blocks) {
      pc[part1.block_of(r)] += p1[r];
      retained += p1[r];
    }
  }
  // With atol > 0 some mass may sit on edge-less symbols; renormalize.
  for (auto& m : pc) m /= retained;

  GkDecomposition dec{part1, part2, blocks, Pmf(Alphabet::indexed(blocks, "b"), std::move(pc)), {}, {}, 0.0};
  dec.cond1 = conditionals(p1, part1, blocks);
  dec.cond2 = conditionals(p2, part2, blocks);
  dec.cgk_nats = entropy(dec.p_c);
  return dec;
}

GkDecomposition decomposition_from_partitions(const JointPmf& joint, Partition first, Partition second) {
  require_same_alphabet(first.alphabet(), joint.first(), "decomposition_from_partitions");
  require_same_alphabet(second.alphabet(), joint.second(), "decomposition_from_partitions");
  const std::size_t space = std::max(first.block_count(), second.block_count());
  Partition part1(first.alphabet(), {first.labels().begin(), first.labels().end()}, space);
  Partition part2(second.alphabet(), {second.labels().begin(), second.labels().end()}, space);

  const auto [p1, p2] = marginals(joint);
  const Pmf block_mass = block_marginal(p1, part1);
  std::size_t blocks = 0;
  for (std::size_t c = 0; c < space; ++c) {
    if (block_mass[c] > 0.0) blocks = c + 1;
  }
  for (std::size_t c = 0; c < blocks; ++c) {
    if (block_mass[c] <= 0.0) {
      throw Error(ErrorKind::ZeroBlockMass, "partition block " + std::to_string(c) +
                                                " has zero mass but is followed by non-empty blocks");
    }
  }
  std::vector<double> pc(block_mass.masses().begin(), block_mass.masses().begin() + static_cast<std::ptrdiff_t>(blocks));
  GkDecomposition dec{part1, part2, blocks, Pmf(Alphabet::indexed(blocks, "b"), std::move(pc)), {}, {}, 0.0};
  dec.cond1 = conditionals(p1, part1, blocks);
  dec.cond2 = conditionals(p2, part2, blocks);
  dec.cgk_nats = entropy(dec.p_c);
  return dec;
}

CommonVariableReport verify_common_variable(const JointPmf& joint, const GkDecomposition& dec, double tolerance) {
  require_same_alphabet(dec.partition1.alphabet(), joint.first(), "verify_common_variable");
  require_same_alphabet(dec.partition2.alphabet(), joint.second(), "verify_common_variable");
  const std::size_t rows = joint.rows();
  const std::size_t cols = joint.cols();
  CommonVariableReport report;

  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      if (dec.partition1.block_of(r) != dec.partition2.block_of(c)) {
        report.disagreement_probability += joint.at(r, c);
      }
    }
  }
  report.agreement_ok = report.disagreement_probability <= tolerance;

  for (BlockLabel b = 0; b < dec.block_count; ++b) {
    const double mass = dec.p_c[b];
    for (std::size_t r = 0; r < rows; ++r) {
      if (dec.partition1.block_of(r) != b) continue;
      for (std::size_t c = 0; c < cols; ++c) {
        if (dec.partition2.block_of(c) != b) continue;
        const double residual = std::abs(joint.at(r, c) / mass - dec.cond1[b][r] * dec.cond2[b][c]);
        report.max_independence_residual = std::max(report.max_independence_residual, residual);
      }
    }
  }
  report.independence_ok = report.max_independence_residual <= tolerance;

  // A block can be split iff its support graph has more than one component.
  auto sets = bipartite_components(rows, cols, [&](std::size_t r, std::size_t c) {
    return joint.at(r, c) > 0.0 && dec.partition1.block_of(r) == dec.partition2.block_of(c);
  });
  const auto [p1, p2] = marginals(joint);
  report.maximal = true;
  for (BlockLabel b = 0; b < dec.block_count && report.maximal; ++b) {
    std::optional<std::size_t> root;
    auto visit = [&](std::size_t node) {
      const std::size_t rt = sets.find(node);
      if (!root) root = rt;
      else if (*root != rt) {
        report.maximal = false;
        report.splittable_block = b;
      }
    };
    for (std::size_t r = 0; r < rows; ++r) {
      if (dec.partition1.block_of(r) == b && p1[r] > 0.0) visit(r);
    }
    for (std::size_t c = 0; c < cols; ++c) {
      if (dec.partition2.block_of(c) == b && p2[c] > 0.0) visit(rows + c);
    }
  }
  return report;
}

JointPmf conditional_joint(const JointPmf& joint, const GkDecomposition& dec, BlockLabel c) {
  if (c >= dec.block_count || dec.p_c[c] <= 0.0) {
    throw Error(ErrorKind::ZeroBlockMass, "block " + std::to_string(c) + " has zero mass");
  }
  double mass = 0.0;
  for (std::size_t r = 0; r < joint.rows(); ++r) {
    for (std::size_t k = 0; k < joint.cols(); ++k) {
      if (dec.partition1.block_of(r) == c && dec.partition2.block_of(k) == c) mass += joint.at(r, k);
    }
  }
  if (mass <= 0.0) throw Error(ErrorKind::ZeroBlockMass, "block " + std::to_string(c) + " has zero joint mass");
  std::vector<double> out(joint.rows() * joint.cols(), 0.0);
  for (std::size_t r = 0; r < joint.rows(); ++r) {
    for (std::size_t k = 0; k < joint.cols(); ++k) {
      if (dec.partition1.block_of(r) == c && dec.partition2.block_of(k) == c) {
        out[r * joint.cols() + k] = joint.at(r, k) / mass;
      }
    }
  }
  return JointPmf(joint.first(), joint.second(), std::move(out));
}

}  // namespace remgen
