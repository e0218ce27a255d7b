// Copyright 2026 The remgen Authors
// SPDX-License-Identifier: Apache-2.0

#include "remgen/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "remgen/error.hpp"
#include "remgen/mrc.hpp"
#include "remgen/oracles.hpp"
#include "remgen/scenario_io.hpp"

namespace remgen {

namespace {

constexpr std::size_t kDecoders = 2;
constexpr std::uint64_t kReportOracleCeiling = 2'000'000;

[[noreturn]] void violated(const std::string& rule, const std::string& detail) {
  throw Error(ErrorKind::InvalidScenario, rule + ": " + detail);
}

std::string num(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

const Alphabet& side(const JointPmf& joint, std::size_t i) { return i == 0 ? joint.first() : joint.second(); }

}  // namespace

std::string to_string(Mode mode) {
  switch (mode) {
    case Mode::Naive:
      return "naive";
    case Mode::Hierarchical:
      return "hierarchical";
    case Mode::Both:
      return "both";
  }
  return "both";
}

Mode mode_from_string(const std::string& name) {
  if (name == "naive") return Mode::Naive;
  if (name == "hierarchical" || name == "hier") return Mode::Hierarchical;
  if (name == "both") return Mode::Both;
  throw Error(ErrorKind::InvalidScenario, "mode: unknown mode '" + name + "'");
}

JointPmf effective_joint(const Scenario& sc) {
  const double atol = sc.params.atol;
  if (atol <= 0.0) return sc.joint;
  std::vector<double> m(sc.joint.masses().begin(), sc.joint.masses().end());
  double kept = 0.0;
  for (auto& v : m) {
    if (v <= atol) v = 0.0;
    kept += v;
  }
  if (!(kept > 0.0)) violated("atol", "threshold " + num(atol) + " removes every joint entry");
  for (auto& v : m) v /= kept;
  return JointPmf(sc.joint.first(), sc.joint.second(), std::move(m));
}

GkDecomposition scenario_decomposition(const Scenario& sc) {
  const JointPmf joint = effective_joint(sc);
  if (sc.partitions) return decomposition_from_partitions(joint, sc.partitions->first, sc.partitions->second);
  return gk_decompose(joint);
}

void validate_scenario(const Scenario& sc) {
  if (sc.targets.size() != kDecoders) {
    violated("decoder-count", "expected 2 targets, got " + std::to_string(sc.targets.size()));
  }
  if (sc.functions.size() != kDecoders) {
    violated("decoder-count", "expected 2 functions, got " + std::to_string(sc.functions.size()));
  }
  const auto& p = sc.params;
  if (!std::isfinite(p.t) || p.t < 0.0) violated("slack", "t must be finite and >= 0, got " + num(p.t));
  if (!std::isfinite(p.t_c) || p.t_c < 0.0) violated("slack", "t_c must be finite and >= 0, got " + num(p.t_c));
  if (!(p.atol >= 0.0 && p.atol < 1.0)) violated("atol", "must lie in [0, 1), got " + num(p.atol));
  if (p.rejection_cap && *p.rejection_cap == 0) violated("rejection-cap", "must be at least 1");

  const JointPmf joint = effective_joint(sc);
  const auto [p1, p2] = marginals(joint);
  for (std::size_t i = 0; i < kDecoders; ++i) {
    const Pmf& marginal = i == 0 ? p1 : p2;
    if (!(sc.targets[i].alphabet() == side(joint, i))) {
      violated("target-alphabet", "decoder " + std::to_string(i + 1) + " target alphabet differs from the joint's");
    }
    if (sc.functions[i].size() != side(joint, i).size()) {
      violated("function-size", "decoder " + std::to_string(i + 1) + " has " +
                                    std::to_string(sc.functions[i].size()) + " values for " +
                                    std::to_string(side(joint, i).size()) + " symbols");
    }
    for (std::size_t x = 0; x < sc.functions[i].size(); ++x) {
      if (!std::isfinite(sc.functions[i][x])) {
        violated("function-finite", "decoder " + std::to_string(i + 1) + " symbol '" + side(joint, i).symbol(x) + "'");
      }
    }
    for (std::size_t x = 0; x < marginal.size(); ++x) {
      if (sc.targets[i][x] > 0.0 && marginal[x] <= 0.0) {
        violated("target-support", "decoder " + std::to_string(i + 1) + " puts mass " + num(sc.targets[i][x]) +
                                       " on '" + side(joint, i).symbol(x) + "' outside the prior");
      }
    }
  }

  if (sc.partitions) {
    const auto& [g1, g2] = *sc.partitions;
    if (!(g1.alphabet() == joint.first()) || !(g2.alphabet() == joint.second())) {
      violated("partition-alphabet", "partition alphabets differ from the joint's");
    }
    for (std::size_t r = 0; r < joint.rows(); ++r) {
      for (std::size_t c = 0; c < joint.cols(); ++c) {
        if (joint.at(r, c) > 0.0 && g1.block_of(r) != g2.block_of(c)) {
          violated("partition-agreement", "supported pair (" + joint.first().symbol(r) + ", " +
                                              joint.second().symbol(c) + ") at row " + std::to_string(r) +
                                              ", col " + std::to_string(c) + " maps to different blocks");
        }
      }
    }
  }

  GkDecomposition dec = [&] {
    try {
      return scenario_decomposition(sc);
    } catch (const Error& e) {
      violated("decomposition", e.what());
    }
  }();
  const Pmf q1 = block_marginal(sc.targets[0], dec.partition1);
  const Pmf q2 = block_marginal(sc.targets[1], dec.partition2);
  for (BlockLabel c = 0; c < q1.size(); ++c) {
    if (std::abs(q1[c] - q2[c]) > 1e-9) {
      violated("block-marginal-agreement", "block " + std::to_string(c) + " has target mass " + num(q1[c]) +
                                               " for decoder 1 and " + num(q2[c]) + " for decoder 2");
    }
  }

  const auto& o = p.n_overrides;
  if (o.n_c && *o.n_c == 0) violated("n-overrides", "n_c must be at least 1");
  if (o.n_ref) {
    if (o.n_ref->size() != kDecoders) violated("n-overrides", "n_ref needs one row per decoder");
    for (const auto& row : *o.n_ref) {
      if (row.size() != q1.size()) {
        violated("n-overrides", "n_ref rows need " + std::to_string(q1.size()) + " entries (one per block label)");
      }
      for (auto v : row) {
        if (v == 0) violated("n-overrides", "n_ref entries must be at least 1");
      }
    }
  }
  if (o.naive) {
    if (o.naive->size() != kDecoders) violated("n-overrides", "naive needs one entry per decoder");
    for (auto v : *o.naive) {
      if (v == 0) violated("n-overrides", "naive sizes must be at least 1");
    }
  }
}

HierProblem scenario_problem(const Scenario& sc) {
  const GkDecomposition dec = scenario_decomposition(sc);
  return HierProblem::broadcast(effective_joint(sc), dec.partition1, dec.partition2, sc.targets);
}

SampleSizes choose_sample_sizes(const Scenario& sc) {
  const HierProblem problem = scenario_problem(sc);
  const HierConfig cfg = HierConfig::from_slack(problem, sc.params.t_c, sc.params.t);
  SampleSizes s;
  s.n_c = cfg.n_c;
  s.n_ref = cfg.n_ref;
  for (std::size_t i = 0; i < kDecoders; ++i) {
    const Pmf& prior = problem.prior(i);
    s.naive.push_back(prior.support_size() == 1 ? 1 : sample_size_for(kl(sc.targets[i], prior), sc.params.t));
  }
  const auto& o = sc.params.n_overrides;
  if (o.n_c) s.n_c = *o.n_c;
  if (o.n_ref) s.n_ref = *o.n_ref;
  if (o.naive) s.naive = *o.naive;
  return s;
}

double CostLedger::total_bits() const {
  double t = broadcast_bits;
  for (double u : unicast_bits) t += u;
  return t;
}

std::uint64_t CostLedger::total_wire() const {
  std::uint64_t t = broadcast_wire;
  for (auto u : unicast_wire) t += u;
  return t;
}

namespace {

void add_entry(CostLedger& ledger, CostEntry entry) {
  ledger.broadcast_bits += entry.broadcast_bits;
  ledger.broadcast_wire += entry.broadcast_wire;
  for (std::size_t i = 0; i < entry.unicast_bits.size(); ++i) {
    ledger.unicast_bits[i] += entry.unicast_bits[i];
    ledger.unicast_wire[i] += entry.unicast_wire[i];
  }
  ledger.raw_prior_draws += entry.raw_draws;
  ledger.per_k.push_back(std::move(entry));
}

DecoderResult summarize(std::vector<SymbolIndex> decoded, std::span<const double> f, const Pmf& target,
                        std::optional<ExactLaw> exact) {
  DecoderResult r;
  r.true_value = expectation(target, f);
  r.counts.assign(target.size(), 0);
  double sum = 0.0;
  for (auto s : decoded) {
    ++r.counts[s];
    sum += f[s];
  }
  if (!decoded.empty()) {
    const double K = static_cast<double>(decoded.size());
    r.estimate = sum / K;
    r.abs_bias = std::abs(*r.estimate - r.true_value);
    std::vector<double> freq(r.counts.size());
    for (std::size_t x = 0; x < freq.size(); ++x) freq[x] = static_cast<double>(r.counts[x]) / K;
    r.tv_empirical = tv(Pmf(target.alphabet(), std::move(freq)), target);
  }
  if (exact) r.tv_exact = tv(exact->pmf, target);
  r.decoded = std::move(decoded);
  return r;
}

template <class Fn>
std::optional<ExactLaw> try_exact(Fn fn) {
  try {
    return fn();
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::InfeasibleEnumeration || e.kind() == ErrorKind::DegenerateWeights) return std::nullopt;
    throw;
  }
}

RunReport report_shell(const Scenario& sc, const std::string& scheme, const SampleSizes& sizes,
                       const GkDecomposition& dec, const std::vector<Pmf>& priors) {
  RunReport rep;
  rep.scheme = scheme;
  rep.seed = sc.seed();
  rep.K = sc.params.K;
  rep.scenario_fingerprint = scenario_fingerprint(sc);
  rep.sizes = sizes;
  rep.ledger.unicast_bits.assign(kDecoders, 0.0);
  rep.ledger.unicast_wire.assign(kDecoders, 0);
  for (std::size_t i = 0; i < kDecoders; ++i) {
    const Partition& part = i == 0 ? dec.partition1 : dec.partition2;
    rep.bounds.push_back(evaluate_bounds(sc.functions[i], sc.targets[i], priors[i], part, sc.params.t_c, sc.params.t,
                                         sizes.n_c, sizes.n_ref.at(i)));
  }
  return rep;
}

}  // namespace

RunReport run_naive_unicast(const Scenario& sc) {
  validate_scenario(sc);
  const JointPmf joint = effective_joint(sc);
  const GkDecomposition dec = scenario_decomposition(sc);
  const SampleSizes sizes = choose_sample_sizes(sc);
  const auto [p1, p2] = marginals(joint);
  const std::vector<Pmf> priors{p1, p2};
  const PriorModel model = PriorModel::joint(joint);
  RunReport rep = report_shell(sc, "naive", sizes, dec, priors);

  std::vector<std::vector<double>> ratio;
  for (std::size_t i = 0; i < kDecoders; ++i) ratio.push_back(importance_ratios(sc.targets[i], priors[i]));
  const std::size_t most = *std::max_element(sizes.naive.begin(), sizes.naive.end());

  std::vector<std::vector<SymbolIndex>> decoded(kDecoders);
  const StreamSeed base = sc.seed();
  for (std::size_t k = 0; k < sc.params.K; ++k) {
    const StreamSeed rep_seed = base.child("naive/k/" + std::to_string(k));
    SharedStream stream(rep_seed);
    std::vector<std::size_t> outcomes(most);
    for (auto& o : outcomes) o = model.draw(stream);

    CostEntry entry;
    entry.k = k;
    entry.raw_draws = most;
    for (std::size_t i = 0; i < kDecoders; ++i) {
      std::vector<SymbolIndex> ys(sizes.naive[i]);
      for (std::size_t j = 0; j < ys.size(); ++j) ys[j] = model.view(outcomes[j], i);
      const AuxDistribution aux = aux_from_ratios(ratio[i], ys);
      SharedStream select(rep_seed.child("select/" + std::to_string(i)));
      const IndexMessage msg = encode_index(select, aux);
      entry.unicast_index.push_back(msg.index);
      entry.unicast_bits.push_back(msg.bit_cost);
      entry.unicast_wire.push_back(msg.wire_bits);

      // Decoder side: regenerate the shared prefix and read its coordinate.
      SharedStream replay(rep_seed);
      std::size_t o = 0;
      for (std::size_t j = 0; j < msg.index; ++j) o = model.draw(replay);
      decoded[i].push_back(model.view(o, i));
    }
    add_entry(rep.ledger, std::move(entry));
  }

  for (std::size_t i = 0; i < kDecoders; ++i) {
    auto exact = try_exact([&] {
      return exact_selected_distribution_mrc(sc.targets[i], priors[i], sizes.naive[i], EnumerationMethod::Grouped,
                                             kReportOracleCeiling);
    });
    rep.decoders.push_back(summarize(std::move(decoded[i]), sc.functions[i], sc.targets[i], std::move(exact)));
  }
  return rep;
}

RunReport run_hierarchical_broadcast(const Scenario& sc) {
  validate_scenario(sc);
  const GkDecomposition dec = scenario_decomposition(sc);
  const HierProblem problem = scenario_problem(sc);
  const SampleSizes sizes = choose_sample_sizes(sc);
  const std::vector<Pmf> priors{problem.prior(0), problem.prior(1)};
  RunReport rep = report_shell(sc, "hierarchical", sizes, dec, priors);

  HierConfig cfg;
  cfg.n_c = sizes.n_c;
  cfg.n_ref = sizes.n_ref;
  cfg.t = sc.params.t;
  cfg.t_c = sc.params.t_c;
  cfg.group_size = sc.params.group_size;
  if (sc.params.rejection_cap) cfg.rejection_cap.assign(problem.block_count(), *sc.params.rejection_cap);

  const StreamSeed base = sc.seed();
  const HierEncoding enc = hier_encode(base, problem, cfg, sc.params.K);
  std::vector<std::vector<SymbolIndex>> decoded(kDecoders);
  rep.block_sequences.assign(kDecoders, {});
  for (std::size_t k = 0; k < enc.messages.size(); ++k) {
    const HierMessage& msg = enc.messages[k];
    CostEntry entry;
    entry.k = k;
    entry.block_index = msg.block.index;
    entry.broadcast_bits = msg.block.bit_cost;
    entry.broadcast_wire = msg.block.wire_bits;
    entry.raw_draws = enc.draws_at[k];
    for (std::size_t i = 0; i < kDecoders; ++i) {
      entry.unicast_index.push_back(msg.refine[i].index);
      entry.unicast_bits.push_back(msg.refine[i].bit_cost);
      entry.unicast_wire.push_back(msg.refine[i].wire_bits);
      const BlockLabel c = hier_decode_block(base, problem, cfg, msg, i);
      rep.block_sequences[i].push_back(c);
      decoded[i].push_back(hier_decode_refinement(base, problem, cfg, msg, i, c));
      if (c != msg.block_label) rep.blocks_agree = false;
    }
    add_entry(rep.ledger, std::move(entry));
  }
  rep.blocks_agree = rep.blocks_agree && rep.block_sequences[0] == rep.block_sequences[1];

  for (std::size_t i = 0; i < kDecoders; ++i) {
    auto exact = try_exact([&] {
      return exact_selected_distribution_hier(problem, cfg, i, EnumerationMethod::Grouped, kReportOracleCeiling);
    });
    rep.decoders.push_back(summarize(std::move(decoded[i]), sc.functions[i], sc.targets[i], std::move(exact)));
  }
  return rep;
}

SavingsSummary cost_compare(const RunReport& baseline, const RunReport& candidate, const Scenario& sc) {
  const std::string fp = scenario_fingerprint(sc);
  if (baseline.scenario_fingerprint != candidate.scenario_fingerprint || baseline.scenario_fingerprint != fp) {
    throw Error(ErrorKind::MismatchedScenario, "reports come from different scenarios");
  }
  if (baseline.K != candidate.K) {
    throw Error(ErrorKind::MismatchedScenario, "reports use different K (" + std::to_string(baseline.K) + " vs " +
                                                   std::to_string(candidate.K) + ")");
  }
  SavingsSummary s;
  s.baseline_bits = baseline.ledger.total_bits();
  s.candidate_bits = candidate.ledger.total_bits();
  s.absolute = s.baseline_bits - s.candidate_bits;
  s.relative = s.baseline_bits > 0.0 ? s.absolute / s.baseline_bits : 0.0;
  s.broadcast_delta = baseline.ledger.broadcast_bits - candidate.ledger.broadcast_bits;
  for (std::size_t i = 0; i < baseline.ledger.unicast_bits.size(); ++i) {
    s.unicast_delta.push_back(baseline.ledger.unicast_bits[i] - candidate.ledger.unicast_bits.at(i));
  }
  s.baseline_wire = baseline.ledger.total_wire();
  s.candidate_wire = candidate.ledger.total_wire();
  if (candidate.K > 0) s.candidate_avg_bits_per_k = s.candidate_bits / static_cast<double>(candidate.K);
  if (candidate.scheme == "hierarchical" && candidate.sizes.n_c >= 2) {
    const HierProblem problem = scenario_problem(sc);
    s.predicted_bits_per_k = avg_bits_lemma3(problem.p_c(), problem.q_c(), candidate.sizes.n_c, candidate.sizes.n_ref);
  }
  return s;
}

}  // namespace remgen
