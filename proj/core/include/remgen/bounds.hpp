// Copyright 2026 The remgen Authors
// SPDX-License-Identifier: Apache-2.0

// Closed-form guarantees for MRC and the two-stage sampler on finite
// alphabets. Everything is exact arithmetic over the alphabet; nothing here
// samples.
//
// Conventions:
//   tail(q,p,t) = P_{X~q}[ log(q(X)/p(X)) > kl(q,p) + t/2 ]
//   eps(q,p,t)  = sqrt( exp(-t/4) + 2 sqrt(tail) )
//   ||f||       = L2 norm under the target, (sum q f^2)^(1/2)

#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "remgen/dist.hpp"

namespace remgen {

struct TailSpec {
  double divergence = 0.0;  // kl(q,p), nats
  double slack = 0.0;       // t, nats
  double tail = 0.0;
};

TailSpec tail_spec(const Pmf& target, const Pmf& prior, double t);

double epsilon_from_tail(double tail, double t);
double epsilon_lemma1(const Pmf& target, const Pmf& prior, double t);

/// (sum q f^2)^(1/2).
double l2_norm(const Pmf& q, std::span<const double> f);
/// (sum q f^4)^(1/4).
double l4_norm(const Pmf& q, std::span<const double> f);
/// Standard deviation of f under q.
double std_dev(const Pmf& q, std::span<const double> f);

struct BiasBound {
  double value = 0.0;
  double confidence = 0.0;  // may be negative when vacuous
  bool vacuous = false;
};

/// 2 ||f|| eps/(1-eps) with confidence 1 - 2 eps. Vacuous when eps >= 1 or
/// the value exceeds 2 max|f|.
BiasBound bias_bound_lemma1(std::span<const double> f, const Pmf& target, const Pmf& prior, double t);
BiasBound bias_bound_from_epsilon(double f_norm, double max_abs_f, double eps);

struct BlockEpsilons {
  double epsilon = 0.0;      // block stage, from (q_C, p_C, t_c)
  double epsilon_bar = 0.0;  // max over blocks of the conditional epsilons
  std::vector<std::optional<double>> per_block;  // empty where q_C(c) = 0
  std::size_t blocks = 0;    // |C|: blocks with positive prior mass
};

BlockEpsilons epsilon_blocks(const Pmf& target, const Pmf& prior, const Partition& part, double t_c, double t);

struct Theorem1Bound {
  double eq4 = 0.0;
  std::optional<double> simplified;  // only when eps <= 1/9
  double confidence = 0.0;           // 1 - 2(|C| eps_bar + eps)
  bool vacuous = false;
};

Theorem1Bound bias_bound_theorem1(double f_norm, double max_abs_f, double eps, double eps_bar,
                                  std::size_t block_count);

struct TvBound {
  double raw = 0.0;      // 2(|C|+1) eps_bar + 4 eps
  double clamped = 0.0;  // raw clamped to [0, 1]
  bool vacuous = false;  // eps > 1/9 or raw > 1
};

TvBound tv_bound_cor1(std::size_t block_count, double eps, double eps_bar);

/// n_c + (chi2(p_C,q_C) + 1) * n_c/(n_c-1) * sum_c q_C(c) n_ref(c).
/// Expected raw prior draws per transmission. Requires n_c >= 2.
double avg_complexity_lemma3(const Pmf& p_c, const Pmf& q_c, std::size_t n_c, std::span<const std::size_t> n_ref);

/// Same shape with sizes replaced by index lengths:
/// log2 n_c + (chi2 + 1) * n_c/(n_c-1) * sum_c q_C(c) * sum_i log2 n_ref_i(c).
double avg_bits_lemma3(const Pmf& p_c, const Pmf& q_c, std::size_t n_c,
                       const std::vector<std::vector<std::size_t>>& n_ref);

struct DeviationBound {
  double bias_term = 0.0;
  double fluctuation_term = 0.0;
  double value = 0.0;
  double confidence = 0.0;
  bool vacuous = false;
  std::string formula;
};

/// Single-stage deviation bound: bias term of bias_bound_lemma1 plus
///   (sqrt(2 eps/(1-eps)) * ||f - E_q f||_4 + sd_q(f)) / (K eps_star).
DeviationBound deviation_bound_prop1(std::span<const double> f, const Pmf& target, const Pmf& prior, double t,
                                     std::size_t K, double eps_star);

/// Two-stage deviation bound: the eq4 bias term plus
///   (||f - E_q f||_4 * sqrt(eps_hat) + sd_q(f)) / (K eps_star)
/// with eps_hat the bracket of the eq4 bound.
DeviationBound deviation_bound_prop2(std::span<const double> f, const Pmf& target, const Pmf& prior,
                                     const Partition& part, double t_c, double t, std::size_t K, double eps_star);

struct BoundReport {
  double epsilon = 0.0;
  double epsilon_bar = 0.0;
  double single_stage_epsilon = 0.0;  // single-stage eps of the full pair at slack t
  BiasBound single_stage;
  Theorem1Bound two_stage;
  TvBound tv;
  std::optional<double> avg_complexity;  // absent when n_c < 2
  double f_norm = 0.0;
  std::string norm_name = "L2(q)";
  std::size_t block_count = 0;
};

/// All bounds for one (target, prior, partition, f) at slacks (t_c, t), with
/// n_c and n_ref given (for the average complexity).
BoundReport evaluate_bounds(std::span<const double> f, const Pmf& target, const Pmf& prior, const Partition& part,
                            double t_c, double t, std::size_t n_c, std::span<const std::size_t> n_ref);

}  // namespace remgen
