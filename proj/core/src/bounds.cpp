// Copyright 2026 The remgen Authors
// SPDX-License-Identifier: Apache-2.0

#include "remgen/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "remgen/error.hpp"

namespace remgen {

namespace {

void require_table(const Pmf& q, std::span<const double> f) {
  if (f.size() != q.size()) throw Error(ErrorKind::InvalidArgument, "function table size mismatch");
}

// Max |f| over the target support only; values off-support never matter.
double max_abs_on(const Pmf& q, std::span<const double> f) {
  double m = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (q[i] > 0.0) m = std::max(m, std::abs(f[i]));
  }
  return m;
}

double ratio_term(double e) { return e / (1.0 - e); }

std::vector<double> centered(const Pmf& q, std::span<const double> f) {
  const double mean = expectation(q, f);
  std::vector<double> out(f.begin(), f.end());
  for (auto& v : out) v -= mean;
  return out;
}

}  // namespace

TailSpec tail_spec(const Pmf& target, const Pmf& prior, double t) {
  if (!(t >= 0.0)) throw Error(ErrorKind::InvalidArgument, "slack t must be non-negative");
  TailSpec spec;
  spec.divergence = kl(target, prior);
  spec.slack = t;
  const double threshold = spec.divergence + t / 2.0;
  for (std::size_t i = 0; i < target.size(); ++i) {
    if (target[i] <= 0.0) continue;
    if (std::log(target[i] / prior[i]) > threshold) spec.tail += target[i];
  }
  spec.tail = std::clamp(spec.tail, 0.0, 1.0);
  return spec;
}

double epsilon_from_tail(double tail, double t) { return std::sqrt(std::exp(-t / 4.0) + 2.0 * std::sqrt(tail)); }

double epsilon_lemma1(const Pmf& target, const Pmf& prior, double t) {
  return epsilon_from_tail(tail_spec(target, prior, t).tail, t);
}

double l2_norm(const Pmf& q, std::span<const double> f) {
  require_table(q, f);
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += q[i] * f[i] * f[i];
  return std::sqrt(s);
}

double l4_norm(const Pmf& q, std::span<const double> f) {
  require_table(q, f);
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += q[i] * std::pow(f[i], 4);
  return std::pow(s, 0.25);
}

double std_dev(const Pmf& q, std::span<const double> f) {
  require_table(q, f);
  return l2_norm(q, centered(q, f));
}

BiasBound bias_bound_from_epsilon(double f_norm, double max_abs_f, double eps) {
  BiasBound b;
  b.confidence = 1.0 - 2.0 * eps;
  if (eps >= 1.0) {
    b.value = std::numeric_limits<double>::infinity();
    b.vacuous = true;
    return b;
  }
  b.value = 2.0 * f_norm * ratio_term(eps);
  b.vacuous = b.value > 2.0 * max_abs_f && f_norm > 0.0;
  return b;
}

BiasBound bias_bound_lemma1(std::span<const double> f, const Pmf& target, const Pmf& prior, double t) {
  require_table(target, f);
  return bias_bound_from_epsilon(l2_norm(target, f), max_abs_on(target, f), epsilon_lemma1(target, prior, t));
}

BlockEpsilons epsilon_blocks(const Pmf& target, const Pmf& prior, const Partition& part, double t_c, double t) {
  require_same_alphabet(target.alphabet(), part.alphabet(), "epsilon_blocks");
  require_same_alphabet(prior.alphabet(), part.alphabet(), "epsilon_blocks");
  const Pmf q_c = block_marginal(target, part);
  const Pmf p_c = block_marginal(prior, part);
  BlockEpsilons out;
  out.epsilon = epsilon_lemma1(q_c, p_c, t_c);
  out.per_block.resize(part.block_count());
  for (BlockLabel c = 0; c < part.block_count(); ++c) {
    if (q_c[c] <= 0.0) continue;
    const double e = epsilon_lemma1(condition_on_block(target, part, c), condition_on_block(prior, part, c), t);
    out.per_block[c] = e;
    out.epsilon_bar = std::max(out.epsilon_bar, e);
  }
  out.blocks = p_c.support_size();
  return out;
}

Theorem1Bound bias_bound_theorem1(double f_norm, double max_abs_f, double eps, double eps_bar,
                                  std::size_t block_count) {
  Theorem1Bound b;
  b.confidence = 1.0 - 2.0 * (static_cast<double>(block_count) * eps_bar + eps);
  if (eps >= 1.0 || eps_bar >= 1.0) {
    b.eq4 = std::numeric_limits<double>::infinity();
    b.vacuous = true;
    return b;
  }
  const double re = ratio_term(eps);
  const double rb = ratio_term(eps_bar);
  b.eq4 = f_norm * ((2.0 * std::sqrt(2.0) * re) * (2.0 * rb + 1.0) + 2.0 * rb);
  if (eps <= 1.0 / 9.0) b.simplified = 2.0 * std::sqrt(2.0) * f_norm * (re + rb);
  b.vacuous = b.eq4 > 2.0 * max_abs_f && f_norm > 0.0;
  return b;
}

TvBound tv_bound_cor1(std::size_t block_count, double eps, double eps_bar) {
  TvBound b;
  b.raw = 2.0 * (static_cast<double>(block_count) + 1.0) * eps_bar + 4.0 * eps;
  b.clamped = std::clamp(b.raw, 0.0, 1.0);
  b.vacuous = eps > 1.0 / 9.0 || b.raw > 1.0;
  return b;
}

namespace {

double complexity_factor(const Pmf& p_c, const Pmf& q_c, std::size_t n_c) {
  if (n_c < 2) throw Error(ErrorKind::InvalidArgument, "average complexity needs n_c >= 2");
  const double n = static_cast<double>(n_c);
  return (chi_square(p_c, q_c) + 1.0) * n / (n - 1.0);
}

}  // namespace

double avg_complexity_lemma3(const Pmf& p_c, const Pmf& q_c, std::size_t n_c, std::span<const std::size_t> n_ref) {
  require_same_alphabet(p_c.alphabet(), q_c.alphabet(), "avg_complexity_lemma3");
  if (n_ref.size() != q_c.size()) throw Error(ErrorKind::InvalidArgument, "n_ref needs one entry per block");
  const double factor = complexity_factor(p_c, q_c, n_c);
  double inner = 0.0;
  for (BlockLabel c = 0; c < q_c.size(); ++c) inner += q_c[c] * static_cast<double>(n_ref[c]);
  return static_cast<double>(n_c) + factor * inner;
}

double avg_bits_lemma3(const Pmf& p_c, const Pmf& q_c, std::size_t n_c,
                       const std::vector<std::vector<std::size_t>>& n_ref) {
  require_same_alphabet(p_c.alphabet(), q_c.alphabet(), "avg_bits_lemma3");
  const double factor = complexity_factor(p_c, q_c, n_c);
  double inner = 0.0;
  for (BlockLabel c = 0; c < q_c.size(); ++c) {
    double per_block = 0.0;
    for (const auto& row : n_ref) {
      if (row.size() != q_c.size()) throw Error(ErrorKind::InvalidArgument, "n_ref needs one entry per block");
      per_block += std::log2(static_cast<double>(std::max<std::size_t>(row[c], 1)));
    }
    inner += q_c[c] * per_block;
  }
  return std::log2(static_cast<double>(n_c)) + factor * inner;
}

DeviationBound deviation_bound_prop1(std::span<const double> f, const Pmf& target, const Pmf& prior, double t,
                                     std::size_t K, double eps_star) {
  if (K == 0 || !(eps_star > 0.0)) throw Error(ErrorKind::InvalidArgument, "need K >= 1 and eps_star > 0");
  require_table(target, f);
  const double eps = epsilon_lemma1(target, prior, t);
  const BiasBound bias = bias_bound_from_epsilon(l2_norm(target, f), max_abs_on(target, f), eps);
  DeviationBound d;
  d.bias_term = bias.value;
  d.confidence = 1.0 - eps_star - 4.0 * eps;
  d.vacuous = bias.vacuous || eps >= 1.0;
  const double fourth = l4_norm(target, centered(target, f));
  const double sd = std_dev(target, f);
  d.fluctuation_term =
      eps >= 1.0 ? std::numeric_limits<double>::infinity()
                 : (std::sqrt(2.0 * ratio_term(eps)) * fourth + sd) / (static_cast<double>(K) * eps_star);
  d.value = d.bias_term + d.fluctuation_term;
  std::ostringstream os;
  os << "interpreted: 2||f||_2 e/(1-e) + (sqrt(2e/(1-e)) ||f-Ef||_4 + sd(f)) / (K e*), e=" << eps;
  d.formula = os.str();
  return d;
}

DeviationBound deviation_bound_prop2(std::span<const double> f, const Pmf& target, const Pmf& prior,
                                     const Partition& part, double t_c, double t, std::size_t K, double eps_star) {
  if (K == 0 || !(eps_star > 0.0)) throw Error(ErrorKind::InvalidArgument, "need K >= 1 and eps_star > 0");
  require_table(target, f);
  const BlockEpsilons be = epsilon_blocks(target, prior, part, t_c, t);
  const Theorem1Bound th =
      bias_bound_theorem1(l2_norm(target, f), max_abs_on(target, f), be.epsilon, be.epsilon_bar, be.blocks);
  DeviationBound d;
  d.bias_term = th.eq4;
  d.confidence = 1.0 - eps_star - 4.0 * (static_cast<double>(be.blocks) * be.epsilon_bar + be.epsilon);
  d.vacuous = th.vacuous;
  const double fourth = l4_norm(target, centered(target, f));
  const double sd = std_dev(target, f);
  if (th.vacuous && !std::isfinite(th.eq4)) {
    d.fluctuation_term = std::numeric_limits<double>::infinity();
  } else {
    const double re = ratio_term(be.epsilon);
    const double rb = ratio_term(be.epsilon_bar);
    const double eps_hat = 2.0 * std::sqrt(2.0) * re * (2.0 * rb + 1.0) + 2.0 * rb;
    d.fluctuation_term = (fourth * std::sqrt(eps_hat) + sd) / (static_cast<double>(K) * eps_star);
  }
  d.value = d.bias_term + d.fluctuation_term;
  std::ostringstream os;
  os << "interpreted: eq4 + (||f-Ef||_4 sqrt(eps_hat) + sd(f)) / (K e*), e=" << be.epsilon
     << ", e_bar=" << be.epsilon_bar;
  d.formula = os.str();
  return d;
}

BoundReport evaluate_bounds(std::span<const double> f, const Pmf& target, const Pmf& prior, const Partition& part,
                            double t_c, double t, std::size_t n_c, std::span<const std::size_t> n_ref) {
  require_table(target, f);
  BoundReport r;
  const BlockEpsilons be = epsilon_blocks(target, prior, part, t_c, t);
  r.epsilon = be.epsilon;
  r.epsilon_bar = be.epsilon_bar;
  r.block_count = be.blocks;
  r.f_norm = l2_norm(target, f);
  const double fmax = max_abs_on(target, f);
  r.single_stage_epsilon = epsilon_lemma1(target, prior, t);
  r.single_stage = bias_bound_from_epsilon(r.f_norm, fmax, r.single_stage_epsilon);
  r.two_stage = bias_bound_theorem1(r.f_norm, fmax, be.epsilon, be.epsilon_bar, be.blocks);
  r.tv = tv_bound_cor1(be.blocks, be.epsilon, be.epsilon_bar);
  if (n_c >= 2) {
    r.avg_complexity =
        avg_complexity_lemma3(block_marginal(prior, part), block_marginal(target, part), n_c, n_ref);
  }
  return r;
}

}  // namespace remgen
