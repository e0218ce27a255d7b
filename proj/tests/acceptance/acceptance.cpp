// Copyright 2026 The remgen Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance suite. One line per criterion; exits 1 if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "remgen/bounds.hpp"
#include "remgen/common_info.hpp"
#include "remgen/hier.hpp"
#include "remgen/mrc.hpp"
#include "remgen/oracles.hpp"
#include "remgen/protocol.hpp"
#include "remgen/randomness.hpp"
#include "remgen/scenario_io.hpp"

#ifndef REMGEN_TEST_DATA_DIR
#define REMGEN_TEST_DATA_DIR "tests/data"
#endif

namespace {

using namespace remgen;
using Rng = std::mt19937_64;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string data(const std::string& name) { return std::string(REMGEN_TEST_DATA_DIR) + "/" + name; }

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

// ---- test-side generators ---------------------------------------------------

std::vector<double> random_simplex(Rng& rng, std::size_t n, double zero_prob = 0.0) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  std::bernoulli_distribution zero(zero_prob);
  std::vector<double> w(n);
  for (auto& x : w) x = zero(rng) ? 0.0 : u(rng);
  if (std::all_of(w.begin(), w.end(), [](double x) { return x == 0.0; })) w[rng() % n] = 1.0;
  const double s = std::accumulate(w.begin(), w.end(), 0.0);
  for (auto& x : w) x /= s;
  return w;
}

// Random contiguous labelling of n symbols into at most max_blocks blocks.
std::vector<BlockLabel> random_labels(Rng& rng, std::size_t n, std::size_t max_blocks) {
  std::vector<BlockLabel> raw(n);
  for (auto& l : raw) l = rng() % max_blocks;
  std::vector<BlockLabel> remap(max_blocks, SIZE_MAX);
  std::size_t next = 0;
  for (auto& l : raw) {
    if (remap[l] == SIZE_MAX) remap[l] = next++;
    l = remap[l];
  }
  return raw;
}

std::uint64_t binomial(Rng& rng, std::uint64_t n, double p) {
  if (n == 0 || p <= 0.0) return 0;
  if (p >= 1.0) return n;
  std::binomial_distribution<std::uint64_t> b(n, p);
  return b(rng);
}

// Multinomial counts by sequential conditional binomials.
std::vector<std::uint64_t> multinomial(Rng& rng, std::uint64_t n, const std::vector<double>& p) {
  std::vector<std::uint64_t> out(p.size(), 0);
  double rest = 1.0;
  for (std::size_t i = 0; i < p.size() && n > 0; ++i) {
    if (i + 1 == p.size() || rest <= 0.0) {
      out[i] = n;
      break;
    }
    const std::uint64_t k = binomial(rng, n, std::min(1.0, p[i] / rest));
    out[i] = k;
    n -= k;
    rest -= p[i];
  }
  return out;
}

std::vector<double> masses(const Pmf& p) { return {p.masses().begin(), p.masses().end()}; }

// Conditional mean of f over the selection law given per-symbol proposal counts.
double weighted_mean(const std::vector<std::uint64_t>& counts, const std::vector<double>& ratio,
                     const std::vector<double>& f) {
  double num = 0.0, den = 0.0;
  for (std::size_t x = 0; x < counts.size(); ++x) {
    const double w = static_cast<double>(counts[x]) * ratio[x];
    num += w * f[x];
    den += w;
  }
  return den > 0.0 ? num / den : NAN;
}

double three_sigma_worst(const std::vector<std::uint64_t>& counts, const Pmf& law, std::size_t trials) {
  double worst = 0.0;
  for (std::size_t x = 0; x < law.size(); ++x) {
    const double p = law[x];
    const double f = static_cast<double>(counts[x]) / static_cast<double>(trials);
    const double sigma = std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
    worst = std::max(worst, sigma > 0.0 ? std::abs(f - p) / sigma : (f == p ? 0.0 : INFINITY));
  }
  return worst;
}

// ---- criteria ---------------------------------------------------------------

Outcome kl_chain_rule() {
  Rng rng(101);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 2 + rng() % 7;
    const Alphabet a = Alphabet::indexed(n);
    const Pmf p(a, random_simplex(rng, n));
    const Pmf q(a, random_simplex(rng, n, 0.3));
    const auto labels = random_labels(rng, n, 1 + rng() % n);
    const Partition part(a, labels);
    const Pmf q_c = block_marginal(q, part);
    double rhs = kl(q_c, block_marginal(p, part));
    for (BlockLabel c = 0; c < part.block_count(); ++c) {
      if (q_c[c] > 0.0) rhs += q_c[c] * kl(condition_on_block(q, part, c), condition_on_block(p, part, c));
    }
    worst = std::max(worst, std::abs(kl(q, p) - rhs));
  }
  return {worst <= 1e-12, "1000 triples, max |gap| = " + fmt(worst)};
}

// Block-structured joint with product blocks; every symbol has positive mass.
JointPmf block_joint(Rng& rng, std::size_t rows, std::size_t cols) {
  const std::size_t max_blocks = std::min(rows, cols);
  const std::size_t blocks = 1 + rng() % max_blocks;
  auto assign = [&](std::size_t n) {
    std::vector<BlockLabel> l(n);
    for (std::size_t i = 0; i < n; ++i) l[i] = i < blocks ? i : rng() % blocks;
    std::shuffle(l.begin(), l.end(), rng);
    return l;
  };
  const auto lr = assign(rows), lc = assign(cols);
  const auto block_mass = random_simplex(rng, blocks);
  std::vector<double> cells(rows * cols, 0.0);
  for (BlockLabel c = 0; c < blocks; ++c) {
    std::vector<std::size_t> rs, cs;
    for (std::size_t i = 0; i < rows; ++i) if (lr[i] == c) rs.push_back(i);
    for (std::size_t j = 0; j < cols; ++j) if (lc[j] == c) cs.push_back(j);
    const auto wr = random_simplex(rng, rs.size()), wc = random_simplex(rng, cs.size());
    for (std::size_t a = 0; a < rs.size(); ++a) {
      for (std::size_t b = 0; b < cs.size(); ++b) cells[rs[a] * cols + cs[b]] = block_mass[c] * wr[a] * wc[b];
    }
  }
  return JointPmf(Alphabet::indexed(rows, "y"), Alphabet::indexed(cols, "z"), cells);
}

Outcome gk_correctness() {
  Rng rng(202);
  int mismatches = 0, residual_fail = 0, ordering_fail = 0;
  double worst_residual = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const JointPmf j = block_joint(rng, 1 + rng() % 5, 1 + rng() % 5);
    const GkDecomposition dec = gk_decompose(j);
    const auto [b1, b2] = brute_force_gk(j);
    const auto same = [](const Partition& x, const Partition& y) {
      return std::equal(x.labels().begin(), x.labels().end(), y.labels().begin(), y.labels().end());
    };
    if (!same(dec.partition1, b1) || !same(dec.partition2, b2)) ++mismatches;
    const CommonVariableReport rep = verify_common_variable(j, dec);
    worst_residual = std::max(worst_residual, rep.max_independence_residual);
    if (rep.max_independence_residual > 1e-12) ++residual_fail;
    const auto [m1, m2] = marginals(j);
    const double slack = 1e-12;
    if (dec.cgk_nats > std::min(entropy(m1), entropy(m2)) + slack || dec.cgk_nats > mutual_information(j) + slack) {
      ++ordering_fail;
    }
  }
  return {mismatches == 0 && residual_fail == 0 && ordering_fail == 0,
          "1000 joints, partition mismatches " + std::to_string(mismatches) + ", max residual " +
              fmt(worst_residual) + ", C_GK ordering violations " + std::to_string(ordering_fail)};
}

Outcome mrc_exact_law() {
  const Alphabet a({"x0", "x1"});
  const Pmf prior(a, {0.5, 0.5});
  const Pmf target(a, {0.9, 0.1});
  const ExactLaw law = exact_selected_distribution_mrc(target, prior, 2);
  const bool exact = std::abs(law.pmf[0] - 0.7) <= 1e-15 && std::abs(law.pmf[1] - 0.3) <= 1e-15;
  const std::size_t trials = 100000;
  const std::vector<double> f{1.0, 0.0};
  const MrcRun run = mrc_estimate(StreamSeed{42, "acceptance/mrc"}, target, prior, f, 2, trials);
  std::vector<std::uint64_t> counts(2, 0);
  for (auto s : run.symbols) ++counts[s];
  const double z = three_sigma_worst(counts, law.pmf, trials);
  return {exact && z <= 3.0, "law (" + fmt(law.pmf[0]) + ", " + fmt(law.pmf[1]) + "), simulated max |z| = " + fmt(z)};
}

Outcome degenerate_partitions() {
  Rng rng(404);
  int instances = 0;
  double worst = 0.0;
  for (int trial = 0; trial < 24; ++trial) {
    const std::size_t n = 2 + rng() % 3;
    const Alphabet a = Alphabet::indexed(n);
    const Pmf prior(a, random_simplex(rng, n));
    const Pmf target(a, random_simplex(rng, n, 0.25));

    // one block: the block stage is trivial
    const std::size_t n_ref = 1 + rng() % 3;
    const std::size_t n_c = 1 + rng() % 2;
    const std::vector<std::size_t> one{n_ref};
    const ExactLaw h1 = exact_selected_distribution_hier(target, prior, Partition::single_block(a), n_c, one);
    const ExactLaw m1 = exact_selected_distribution_mrc(target, prior, n_ref);
    for (std::size_t x = 0; x < n; ++x) worst = std::max(worst, std::abs(h1.pmf[x] - m1.pmf[x]));

    // singleton blocks: refinement is trivial
    const std::size_t n_block = 1 + rng() % 3;
    const std::vector<std::size_t> ones(n, 1);
    const ExactLaw hs = exact_selected_distribution_hier(target, prior, Partition::singletons(a), n_block, ones);
    const ExactLaw ms = exact_selected_distribution_mrc(target, prior, n_block);
    for (std::size_t x = 0; x < n; ++x) worst = std::max(worst, std::abs(hs.pmf[x] - ms.pmf[x]));
    instances += 2;
  }
  return {instances >= 20 && worst <= 1e-12,
          std::to_string(instances) + " instances, max |difference| = " + fmt(worst)};
}

Outcome single_stage_soundness() {
  const Alphabet a({"a", "b", "c"});
  const Pmf prior(a, {0.5, 0.3, 0.2});
  const Pmf target(a, {0.2, 0.3, 0.5});
  const std::vector<double> f{1.0, -0.5, 0.25};
  const double t = 13.0;
  const double eps = epsilon_lemma1(target, prior, t);
  const BiasBound bound = bias_bound_lemma1(f, target, prior, t);
  const std::size_t n = sample_size_for(kl(target, prior), t);
  const double truth = expectation(target, f);
  int exceed = 0;
  const int draws = 500;
  for (int d = 0; d < draws; ++d) {
    const StreamSeed seed{7, "acceptance/single-stage/" + std::to_string(d)};
    const auto proposals = draw_proposals(seed, prior, n);
    const AuxDistribution aux = aux_distribution(target, prior, proposals);
    if (std::abs(expected_selection_value(aux, proposals, f) - truth) > bound.value) ++exceed;
  }
  const double frac = static_cast<double>(exceed) / draws;
  return {eps <= 0.2 && frac <= 2 * eps + 0.03,
          "eps = " + fmt(eps) + ", n = " + std::to_string(n) + ", exceed fraction " + fmt(frac) + " <= " +
              fmt(2 * eps + 0.03)};
}

struct HierInstance {
  std::vector<double> prior, target;
  std::vector<BlockLabel> labels;
};

Outcome two_stage_soundness() {
  std::ostringstream detail;
  bool ok = true;

  // Two-stage bias: conditional expectation of f given the drawn block tuple and
  // the per-block refinement tuples, sampled as multinomial counts.
  {
    const Alphabet a = Alphabet::indexed(4);
    const Pmf prior(a, {0.3, 0.2, 0.25, 0.25});
    const Pmf target(a, {0.15, 0.15, 0.2, 0.5});
    const Partition part(a, {0, 0, 1, 1});
    const std::vector<double> f{1.0, 0.0, -1.0, 0.5};
    const double t = 16.0, t_c = 16.0;
    const HierProblem problem = HierProblem::point_to_point(target, prior, part);
    const HierConfig cfg = HierConfig::from_slack(problem, t_c, t);
    const BlockEpsilons e = epsilon_blocks(target, prior, part, t_c, t);
    double max_f = 0.0;
    for (double v : f) max_f = std::max(max_f, std::abs(v));
    const Theorem1Bound b = bias_bound_theorem1(l2_norm(target, f), max_f, e.epsilon, e.epsilon_bar, e.blocks);
    const double truth = expectation(target, f);
    const auto ratio_c = problem.block_ratio();
    Rng rng(606);
    int exceed = 0;
    const int runs = 500;
    for (int r = 0; r < runs; ++r) {
      const auto m = multinomial(rng, cfg.n_c, masses(problem.p_c()));
      double num = 0.0, den = 0.0;
      for (BlockLabel c = 0; c < problem.block_count(); ++c) {
        const double w = static_cast<double>(m[c]) * ratio_c[c];
        if (w == 0.0) continue;
        const auto members = part.members(c);
        std::vector<double> pc, rc, fc;
        const Pmf& prior_c = problem.prior_cond(0, c);
        for (auto x : members) {
          pc.push_back(prior_c[x]);
          rc.push_back(problem.cond_ratio(0, c)[x]);
          fc.push_back(f[x]);
        }
        const auto counts = multinomial(rng, cfg.refinements(0, c), pc);
        num += w * weighted_mean(counts, rc, fc);
        den += w;
      }
      if (std::abs(num / den - truth) > b.eq4) ++exceed;
    }
    const double frac = static_cast<double>(exceed) / runs;
    const double allowed = 1.0 - b.confidence + 0.03;
    ok = ok && b.confidence > 0.0 && frac <= allowed;
    detail << "eq4 exceed fraction " << fmt(frac) << " <= " << fmt(allowed) << " (confidence " << fmt(b.confidence)
           << ")";
  }

  // TV bound on the oracle-exact law over a small suite.
  {
    const std::vector<HierInstance> suite{
        {{0.3, 0.2, 0.25, 0.25}, {0.2, 0.2, 0.3, 0.3}, {0, 0, 1, 1}},
        {{0.4, 0.1, 0.3, 0.2}, {0.3, 0.2, 0.3, 0.2}, {0, 0, 1, 1}},
        {{0.25, 0.25, 0.25, 0.25}, {0.3, 0.3, 0.2, 0.2}, {0, 1, 0, 1}},
        {{0.5, 0.5}, {0.6, 0.4}, {0, 1}},
        {{0.3, 0.3, 0.4}, {0.3, 0.2, 0.5}, {0, 0, 1}},
    };
    const double t = 24.0, t_c = 24.0;
    int non_vacuous = 0, violations = 0;
    double worst_ratio = 0.0;
    for (const auto& inst : suite) {
      const Alphabet a = Alphabet::indexed(inst.prior.size());
      const Pmf prior(a, inst.prior), target(a, inst.target);
      const Partition part(a, inst.labels);
      const BlockEpsilons e = epsilon_blocks(target, prior, part, t_c, t);
      const TvBound tvb = tv_bound_cor1(e.blocks, e.epsilon, e.epsilon_bar);
      if (tvb.vacuous) continue;
      ++non_vacuous;
      const HierProblem problem = HierProblem::point_to_point(target, prior, part);
      const HierConfig cfg = HierConfig::from_slack(problem, t_c, t);
      const ExactLaw law = exact_selected_distribution_hier(problem, cfg, 0, EnumerationMethod::Grouped);
      const double d = tv(law.pmf, target);
      worst_ratio = std::max(worst_ratio, d / tvb.raw);
      if (d > tvb.raw) ++violations;
    }
    ok = ok && non_vacuous > 0 && violations == 0;
    detail << "; tv bound on " << non_vacuous << " non-vacuous instances, " << violations
           << " violations, max tv/bound " << fmt(worst_ratio);
  }
  return {ok, detail.str()};
}

Outcome block_constant_functions() {
  Rng rng(707);
  double worst_exact = 0.0, worst_sim = 0.0;
  int instances = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 3 + rng() % 2;
    const Alphabet a = Alphabet::indexed(n);
    const Pmf prior(a, random_simplex(rng, n));
    const Pmf target(a, random_simplex(rng, n));
    auto labels = random_labels(rng, n, 2);
    if (*std::max_element(labels.begin(), labels.end()) == 0) labels.back() = 1;
    const Partition part(a, labels);
    std::vector<double> h(part.block_count());
    for (auto& v : h) v = std::uniform_real_distribution<double>(-2.0, 2.0)(rng);
    std::vector<double> f(n);
    for (std::size_t x = 0; x < n; ++x) f[x] = h[part.block_of(x)];

    const HierProblem problem = HierProblem::point_to_point(target, prior, part);
    HierConfig cfg;
    cfg.n_c = 2 + rng() % 2;
    cfg.n_ref.assign(1, std::vector<std::size_t>(part.block_count(), 0));
    for (auto& v : cfg.n_ref[0]) v = 1 + rng() % 2;
    const ExactLaw law = exact_selected_distribution_hier(problem, cfg, 0);
    const ExactLaw block = exact_block_law(problem.q_c(), problem.p_c(), cfg.n_c);
    worst_exact = std::max(worst_exact, std::abs(exact_bias(f, law, target) - exact_bias(h, block, problem.q_c())));

    // Same statement on a simulated run: the estimate equals the block-label estimate.
    const std::size_t K = 500;
    cfg.group_size = 1;
    const StreamSeed seed{9, "acceptance/cor2/" + std::to_string(trial)};
    const HierEncoding enc = hier_encode(seed, problem, cfg, K);
    double est = 0.0, block_est = 0.0;
    for (const auto& msg : enc.messages) {
      est += f[hier_decode(seed, problem, cfg, msg, 0)];
      block_est += h[hier_decode_block(seed, problem, cfg, msg, 0)];
    }
    worst_sim = std::max(worst_sim, std::abs(est - block_est) / K);
    ++instances;
  }
  return {worst_exact <= 1e-12 && worst_sim <= 1e-12,
          std::to_string(instances) + " instances, exact gap " + fmt(worst_exact) + ", simulated gap " +
              fmt(worst_sim)};
}

Outcome average_complexity() {
  struct Case {
    std::vector<double> p_c, q_c;
    std::size_t n_c;
    std::vector<std::size_t> n_ref;
  };
  const std::vector<Case> cases{
      {{0.6, 0.4}, {0.2, 0.8}, 4, {3, 5}},
      {{0.6, 0.4}, {0.95, 0.05}, 4, {3, 5}},
      {{0.5, 0.5}, {0.9, 0.1}, 3, {2, 2}},
      {{0.7, 0.3}, {0.4, 0.6}, 2, {1, 1}},
      {{0.6, 0.4}, {0.05, 0.95}, 6, {4, 2}},
  };
  std::ostringstream detail;
  bool ok = true;
  std::size_t idx = 0;
  for (const auto& cs : cases) {
    // two symbols per block with uneven conditionals
    const Alphabet a = Alphabet::indexed(4);
    const Pmf prior(a, {cs.p_c[0] * 0.7, cs.p_c[0] * 0.3, cs.p_c[1] * 0.4, cs.p_c[1] * 0.6});
    const Pmf target(a, {cs.q_c[0] * 0.5, cs.q_c[0] * 0.5, cs.q_c[1] * 0.8, cs.q_c[1] * 0.2});
    const Partition part(a, {0, 0, 1, 1});
    const HierProblem problem = HierProblem::point_to_point(target, prior, part);
    HierConfig cfg;
    cfg.n_c = cs.n_c;
    cfg.n_ref = {cs.n_ref};
    cfg.group_size = 1;
    const std::size_t K = 10000;
    const HierEncoding enc = hier_encode(StreamSeed{31, "acceptance/complexity/" + std::to_string(idx)}, problem, cfg, K);
    double sum = 0.0, sum2 = 0.0;
    for (const auto& msg : enc.messages) {
      const double v = static_cast<double>(cfg.n_c + msg.raw_draws[0]);
      sum += v;
      sum2 += v * v;
    }
    const double mean = sum / K;
    const double se = std::sqrt(std::max(0.0, sum2 / K - mean * mean) / (K - 1));
    const double bound = avg_complexity_lemma3(problem.p_c(), problem.q_c(), cs.n_c, cs.n_ref);
    const bool pass = mean <= bound + 2 * se;
    ok = ok && pass;
    detail << (idx ? "; " : "") << fmt(mean) << " <= " << fmt(bound);
    ++idx;
  }
  return {ok, "mean draws vs bound: " + detail.str()};
}

Outcome broadcast_savings() {
  Scenario sc = load_scenario(data("three_by_three.json"));
  sc.params.K = 1000;
  const RunReport naive = run_naive_unicast(sc);
  const RunReport hier = run_hierarchical_broadcast(sc);
  const bool cheaper = hier.ledger.total_bits() < naive.ledger.total_bits();

  const double block_bits = index_bits(hier.sizes.n_c);
  bool once = hier.ledger.per_k.size() == sc.params.K;
  for (std::size_t k = 0; k < hier.ledger.per_k.size(); ++k) {
    const CostEntry& e = hier.ledger.per_k[k];
    once = once && e.k == k && e.block_index.has_value() && e.broadcast_bits == block_bits &&
           e.unicast_bits.size() == 2;
  }
  once = once && std::abs(hier.ledger.broadcast_bits - block_bits * sc.params.K) <= 1e-9 * hier.ledger.broadcast_bits;

  Scenario diag = load_scenario(data("diagonal.json"));
  const RunReport dh = run_hierarchical_broadcast(diag);
  double unicast = 0.0;
  for (double b : dh.ledger.unicast_bits) unicast += b;

  return {cheaper && once && unicast == 0.0,
          "3x3 bits hierarchical " + fmt(hier.ledger.total_bits()) + " < naive " + fmt(naive.ledger.total_bits()) +
              ", block cost once per k: " + (once ? "yes" : "no") + ", diagonal unicast bits " + fmt(unicast)};
}

Outcome determinism() {
  auto body = [] {
    std::ostringstream out, err;
    const int code = cli::run_cli({"run", data("three_by_three.json"), "--scheme", "both", "--trials", "2", "--json"},
                                  out, err);
    return std::make_pair(code, out.str());
  };
  const auto first = body();
  const auto second = body();
  SharedStream s = SharedStream::from_state(0);
  const bool vectors = s.next_u64() == 0xE220A8397B1DCDAFULL && s.next_u64() == 0x6E789E6AA1B965F4ULL;
  const bool same = first.first == 0 && second.first == 0 && first.second == second.second && !first.second.empty();
  return {same && vectors, std::string("report bodies identical: ") + (same ? "yes" : "no") +
                               ", SplitMix64 vectors: " + (vectors ? "ok" : "mismatch")};
}

struct Criterion {
  int id;
  const char* name;
  double budget_seconds;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "KL chain rule", 5, kl_chain_rule},
      {2, "GK correctness", 30, gk_correctness},
      {3, "MRC exact law", 10, mrc_exact_law},
      {4, "degenerate-partition equivalence", 60, degenerate_partitions},
      {5, "single-stage bias bound soundness", 60, single_stage_soundness},
      {6, "two-stage bias and TV bound soundness", 120, two_stage_soundness},
      {7, "block-constant functions", 30, block_constant_functions},
      {8, "average sample complexity", 60, average_complexity},
      {9, "broadcast savings", 30, broadcast_savings},
      {10, "determinism", 5, determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs <= c.budget_seconds;
    const bool pass = o.pass && in_time;
    if (!pass) ++failed;
    std::printf("[%s] A%-2d %-38s %6.2fs/%gs  %s%s\n", pass ? "PASS" : "FAIL", c.id, c.name, secs, c.budget_seconds,
                o.detail.c_str(), in_time ? "" : " (over time budget)");
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
