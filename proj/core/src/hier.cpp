// Copyright 2026 The remgen Authors
// SPDX-License-Identifier: Apache-2.0

#include "remgen/hier.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "remgen/error.hpp"

namespace remgen {

namespace {

std::string group_prefix(std::size_t g) { return "g/" + std::to_string(g); }

std::string select_label(std::size_t g, std::size_t k) { return group_prefix(g) + "/select/" + std::to_string(k); }

std::string refine_label(std::size_t g, BlockLabel c) { return group_prefix(g) + "/refine/" + std::to_string(c); }

// Rejection loop shared by the Pmf-level and model-level entry points.
template <class Draw, class BlockOf>
RejectionDraws rejection_loop(SharedStream& stream, Draw draw, BlockOf block_of, BlockLabel c, std::size_t n_target,
                              std::uint64_t cap) {
  RejectionDraws out;
  out.outcomes.reserve(n_target);
  out.draws_until.reserve(n_target);
  std::uint64_t raw = 0;
  while (out.outcomes.size() < n_target) {
    if (raw >= cap) {
      throw Error(ErrorKind::RejectionCapExceeded,
                  "block " + std::to_string(c) + ": " + std::to_string(out.outcomes.size()) + " of " +
                      std::to_string(n_target) + " accepted after " + std::to_string(raw) + " draws");
    }
    const std::size_t o = draw(stream);
    ++raw;
    if (block_of(o) == c) {
      out.outcomes.push_back(o);
      out.draws_until.push_back(raw);
    }
  }
  return out;
}

Pmf block_target(const Pmf& target, const Partition& part) {
  require_same_alphabet(target.alphabet(), part.alphabet(), "block target");
  return block_marginal(target, part);
}

}  // namespace

HierProblem::HierProblem(PriorModel model, std::vector<Partition> parts, std::vector<Pmf> priors,
                         std::vector<Pmf> targets)
    : model_(std::move(model)),
      partitions_(std::move(parts)),
      priors_(std::move(priors)),
      targets_(std::move(targets)),
      p_c_(block_marginal(priors_.at(0), partitions_.at(0))),
      q_c_(block_target(targets_.at(0), partitions_.at(0))) {
  const std::size_t blocks = p_c_.size();
  block_ratio_ = importance_ratios(q_c_, p_c_);
  prior_cond_.resize(decoders());
  target_cond_.resize(decoders());
  cond_ratio_.resize(decoders());
  for (std::size_t i = 0; i < decoders(); ++i) {
    prior_cond_[i].resize(blocks);
    target_cond_[i].resize(blocks);
    cond_ratio_[i].resize(blocks);
    for (BlockLabel c = 0; c < blocks; ++c) {
      if (p_c_[c] <= 0.0) continue;
      prior_cond_[i][c] = condition_on_block(priors_[i], partitions_[i], c);
      if (q_c_[c] <= 0.0) continue;
      target_cond_[i][c] = condition_on_block(targets_[i], partitions_[i], c);
      cond_ratio_[i][c] = importance_ratios(*target_cond_[i][c], *prior_cond_[i][c]);
    }
  }
}

HierProblem HierProblem::point_to_point(const Pmf& target, const Pmf& prior, const Partition& part) {
  require_same_alphabet(target.alphabet(), prior.alphabet(), "hierarchical problem");
  require_same_alphabet(part.alphabet(), prior.alphabet(), "hierarchical problem");
  importance_ratios(target, prior);  // support check with a symbol-level message
  return HierProblem(PriorModel::marginal(prior), {part}, {prior}, {target});
}

HierProblem HierProblem::broadcast(const JointPmf& joint, const Partition& first, const Partition& second,
                                   const std::vector<Pmf>& targets, double block_tol) {
  if (targets.size() != 2) throw Error(ErrorKind::InvalidArgument, "broadcast needs one target per decoder");
  require_same_alphabet(first.alphabet(), joint.first(), "broadcast partition 1");
  require_same_alphabet(second.alphabet(), joint.second(), "broadcast partition 2");
  if (first.block_count() != second.block_count()) {
    throw Error(ErrorKind::InvalidArgument, "broadcast partitions use different label spaces");
  }
  for (std::size_t r = 0; r < joint.rows(); ++r) {
    for (std::size_t c = 0; c < joint.cols(); ++c) {
      if (joint.at(r, c) > 0.0 && first.block_of(r) != second.block_of(c)) {
        throw Error(ErrorKind::InvalidArgument, "partitions disagree on supported pair (" +
                                                    joint.first().symbol(r) + ", " + joint.second().symbol(c) + ")");
      }
    }
  }
  auto [p1, p2] = marginals(joint);
  importance_ratios(targets[0], p1);
  importance_ratios(targets[1], p2);
  const Pmf q1 = block_target(targets[0], first);
  const Pmf q2 = block_target(targets[1], second);
  for (BlockLabel c = 0; c < q1.size(); ++c) {
    if (std::abs(q1[c] - q2[c]) > block_tol) {
      throw Error(ErrorKind::BlockTargetMismatch, "targets give block " + std::to_string(c) + " mass " +
                                                      std::to_string(q1[c]) + " vs " + std::to_string(q2[c]));
    }
  }
  return HierProblem(PriorModel::joint(joint), {first, second}, {std::move(p1), std::move(p2)}, targets);
}

const Pmf& HierProblem::prior_cond(std::size_t i, BlockLabel c) const {
  const auto& slot = prior_cond_.at(i).at(c);
  if (!slot) throw Error(ErrorKind::ZeroBlockMass, "block " + std::to_string(c) + " has zero prior mass");
  return *slot;
}

const Pmf& HierProblem::target_cond(std::size_t i, BlockLabel c) const {
  const auto& slot = target_cond_.at(i).at(c);
  if (!slot) throw Error(ErrorKind::ZeroBlockMass, "block " + std::to_string(c) + " has zero target mass");
  return *slot;
}

HierConfig HierConfig::from_slack(const HierProblem& problem, double t_c, double t) {
  if (!(t_c >= 0.0) || !(t >= 0.0)) throw Error(ErrorKind::InvalidArgument, "slack must be non-negative");
  HierConfig cfg;
  cfg.t = t;
  cfg.t_c = t_c;
  cfg.n_c = problem.p_c().support_size() == 1 ? 1 : sample_size_for(kl(problem.q_c(), problem.p_c()), t_c);
  cfg.n_ref.assign(problem.decoders(), std::vector<std::size_t>(problem.block_count(), 1));
  for (std::size_t i = 0; i < problem.decoders(); ++i) {
    for (BlockLabel c = 0; c < problem.block_count(); ++c) {
      if (!problem.has_target_cond(c)) continue;
      const Pmf& pc = problem.prior_cond(i, c);
      if (pc.support_size() == 1) continue;
      cfg.n_ref[i][c] = sample_size_for(kl(problem.target_cond(i, c), pc), t);
    }
  }
  return cfg;
}

std::uint64_t default_rejection_cap(std::size_t n_target, double block_mass) {
  if (!(block_mass > 0.0)) throw Error(ErrorKind::ZeroBlockMass, "rejection cap for a zero-mass block");
  const double cap = std::ceil(50.0 * static_cast<double>(n_target) / block_mass);
  if (cap >= 1.8e19) return UINT64_MAX;
  return static_cast<std::uint64_t>(cap);
}

std::uint64_t HierConfig::cap_for(const HierProblem& problem, BlockLabel c) const {
  if (c < rejection_cap.size() && rejection_cap[c] != 0) return rejection_cap[c];
  std::size_t most = 1;
  for (const auto& row : n_ref) most = std::max(most, row.at(c));
  return default_rejection_cap(most, problem.p_c()[c]);
}

void HierConfig::validate(const HierProblem& problem) const {
  if (n_c < 1) throw Error(ErrorKind::InvalidArgument, "n_c must be at least 1");
  if (n_ref.size() != problem.decoders()) {
    throw Error(ErrorKind::InvalidArgument, "n_ref needs one row per decoder");
  }
  for (const auto& row : n_ref) {
    if (row.size() != problem.block_count()) {
      throw Error(ErrorKind::InvalidArgument, "n_ref row must have one entry per block");
    }
    for (BlockLabel c = 0; c < row.size(); ++c) {
      if (problem.has_target_cond(c) && row[c] < 1) {
        throw Error(ErrorKind::InvalidArgument, "n_ref must be at least 1 for block " + std::to_string(c));
      }
    }
  }
  if (!rejection_cap.empty() && rejection_cap.size() != problem.block_count()) {
    throw Error(ErrorKind::InvalidArgument, "rejection_cap must have one entry per block");
  }
  for (BlockLabel c = 0; c < rejection_cap.size(); ++c) {
    for (const auto& row : n_ref) {
      if (rejection_cap[c] != 0 && rejection_cap[c] < row[c]) {
        throw Error(ErrorKind::InvalidArgument, "rejection_cap below n_ref for block " + std::to_string(c));
      }
    }
  }
}

std::vector<BlockLabel> block_proposals(const StreamSeed& seed, const Pmf& prior, const Partition& part,
                                        std::size_t n_c) {
  require_same_alphabet(prior.alphabet(), part.alphabet(), "block_proposals");
  const auto ys = draw_proposals(seed, prior, n_c);
  std::vector<BlockLabel> out(ys.size());
  for (std::size_t j = 0; j < ys.size(); ++j) out[j] = part.block_of(ys[j]);
  return out;
}

std::vector<BlockLabel> block_proposals(const StreamSeed& seed, const HierProblem& problem, std::size_t n_c,
                                        std::size_t decoder) {
  if (n_c == 0) throw Error(ErrorKind::InvalidArgument, "n_c must be at least 1");
  SharedStream stream(seed);
  std::vector<BlockLabel> out(n_c);
  for (auto& c : out) c = problem.block_of_outcome(problem.model().draw(stream), decoder);
  return out;
}

AuxDistribution block_aux(const Pmf& target_c, const Pmf& p_c, std::span<const BlockLabel> c_samples) {
  return aux_distribution(target_c, p_c, c_samples);
}

RejectionDraws rejection_draws(const StreamSeed& seed, const HierProblem& problem, BlockLabel c,
                               std::size_t n_target, std::uint64_t cap, std::size_t decoder) {
  if (c >= problem.block_count() || problem.p_c()[c] <= 0.0) {
    throw Error(ErrorKind::ZeroBlockMass, "block " + std::to_string(c) + " has zero prior mass");
  }
  SharedStream stream(seed);
  const PriorModel& model = problem.model();
  return rejection_loop(
      stream, [&](SharedStream& s) { return model.draw(s); },
      [&](std::size_t o) { return problem.block_of_outcome(o, decoder); }, c, n_target, cap);
}

ConditionalProposals conditional_proposals(const StreamSeed& seed, const Pmf& prior, const Partition& part,
                                           BlockLabel c, std::size_t n_target, std::uint64_t cap) {
  require_same_alphabet(prior.alphabet(), part.alphabet(), "conditional_proposals");
  if (cap < n_target) throw Error(ErrorKind::InvalidArgument, "rejection cap below the target count");
  if (c >= part.block_count() || block_marginal(prior, part)[c] <= 0.0) {
    throw Error(ErrorKind::ZeroBlockMass, "block " + std::to_string(c) + " has zero prior mass");
  }
  SharedStream stream(seed);
  const InverseCdf cdf(prior.masses());
  auto draws = rejection_loop(
      stream, [&](SharedStream& s) { return cdf.draw(s); }, [&](std::size_t y) { return part.block_of(y); }, c,
      n_target, cap);
  return {std::move(draws.outcomes), draws.raw_draws()};
}

AuxDistribution conditional_aux(const Pmf& target_cond, const Pmf& prior_cond,
                                std::span<const SymbolIndex> proposals) {
  return aux_distribution(target_cond, prior_cond, proposals);
}

namespace {

struct RefinementList {
  RejectionDraws draws;
  std::vector<std::vector<SymbolIndex>> symbols;  // per decoder, first n_ref_i(c) accepted
  std::vector<AuxDistribution> aux;               // per decoder
};

struct GroupState {
  std::vector<BlockLabel> labels;
  AuxDistribution aux;
  std::map<BlockLabel, RefinementList> lists;
};

}  // namespace

HierEncoding hier_encode(const StreamSeed& seed, const HierProblem& problem, const HierConfig& cfg, std::size_t K) {
  cfg.validate(problem);
  const std::size_t decoders = problem.decoders();
  HierEncoding enc;
  enc.messages.reserve(K);
  enc.selected.reserve(K);
  enc.draws_at.reserve(K);

  std::optional<GroupState> state;
  std::size_t current_group = 0;
  for (std::size_t k = 0; k < K; ++k) {
    const std::uint64_t draws_before = enc.raw_prior_draws;
    const std::size_t g = cfg.group_of(k);
    if (!state || g != current_group) {
      state.emplace();
      current_group = g;
      state->labels = block_proposals(seed.child(group_prefix(g) + "/block"), problem, cfg.n_c);
      state->aux = aux_from_ratios(problem.block_ratio(), state->labels);
      enc.raw_prior_draws += cfg.n_c;
    }

    SharedStream select(seed.child(select_label(g, k)));
    HierMessage msg;
    msg.k = k;
    msg.group = g;
    msg.block = encode_index(select, state->aux);
    const BlockLabel c = state->labels[msg.block.index - 1];
    msg.block_label = c;

    auto it = state->lists.find(c);
    if (it == state->lists.end()) {
      std::size_t most = 1;
      for (std::size_t i = 0; i < decoders; ++i) most = std::max(most, cfg.refinements(i, c));
      RefinementList list;
      list.draws = rejection_draws(seed.child(refine_label(g, c)), problem, c, most, cfg.cap_for(problem, c));
      enc.raw_prior_draws += list.draws.raw_draws();
      for (std::size_t i = 0; i < decoders; ++i) {
        std::vector<SymbolIndex> ys(cfg.refinements(i, c));
        for (std::size_t j = 0; j < ys.size(); ++j) ys[j] = problem.model().view(list.draws.outcomes[j], i);
        list.aux.push_back(aux_from_ratios(problem.cond_ratio(i, c), ys));
        list.symbols.push_back(std::move(ys));
      }
      it = state->lists.emplace(c, std::move(list)).first;
    }

    const RefinementList& list = it->second;
    std::vector<SymbolIndex> chosen(decoders);
    for (std::size_t i = 0; i < decoders; ++i) {
      SharedStream refine(seed.child(select_label(g, k) + "/refine/" + std::to_string(i)));
      msg.refine.push_back(encode_index(refine, list.aux[i]));
      msg.raw_draws.push_back(list.draws.draws_until[list.symbols[i].size() - 1]);
      chosen[i] = list.symbols[i][msg.refine.back().index - 1];
    }
    enc.messages.push_back(std::move(msg));
    enc.selected.push_back(std::move(chosen));
    enc.draws_at.push_back(enc.raw_prior_draws - draws_before);
  }
  return enc;
}

BlockLabel hier_decode_block(const StreamSeed& seed, const HierProblem& problem, const HierConfig& cfg,
                             const HierMessage& msg, std::size_t decoder) {
  if (msg.block.index < 1 || msg.block.index > cfg.n_c) {
    throw Error(ErrorKind::IndexOutOfRange, "block index " + std::to_string(msg.block.index) + " outside [1, " +
                                                std::to_string(cfg.n_c) + "]");
  }
  const auto prefix = block_proposals(seed.child(group_prefix(msg.group) + "/block"), problem, msg.block.index,
                                      decoder);
  return prefix.back();
}

SymbolIndex hier_decode(const StreamSeed& seed, const HierProblem& problem, const HierConfig& cfg,
                        const HierMessage& msg, std::size_t decoder) {
  return hier_decode_refinement(seed, problem, cfg, msg, decoder, hier_decode_block(seed, problem, cfg, msg, decoder));
}

SymbolIndex hier_decode_refinement(const StreamSeed& seed, const HierProblem& problem, const HierConfig& cfg,
                                   const HierMessage& msg, std::size_t decoder, BlockLabel c) {
  if (decoder >= msg.refine.size()) throw Error(ErrorKind::InvalidArgument, "no refinement index for decoder");
  const std::size_t l = msg.refine[decoder].index;
  const std::size_t n = cfg.refinements(decoder, c);
  if (l < 1 || l > n) {
    throw Error(ErrorKind::IndexOutOfRange,
                "refinement index " + std::to_string(l) + " outside [1, " + std::to_string(n) + "]");
  }
  const auto draws =
      rejection_draws(seed.child(refine_label(msg.group, c)), problem, c, l, cfg.cap_for(problem, c), decoder);
  return problem.model().view(draws.outcomes.back(), decoder);
}

}  // namespace remgen
