// Copyright 2026 The remgen Authors
// SPDX-License-Identifier: Apache-2.0

#include "remgen/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "remgen/common_info.hpp"
#include "remgen/error.hpp"
#include "remgen/mrc.hpp"

namespace remgen {

namespace {

// Unnormalized outcome of one MRC stage: selection mass per symbol plus the
// mass of proposal tuples with all-zero weights.
struct StageLaw {
  std::vector<double> mass;
  double degenerate = 0.0;
  std::uint64_t terms = 0;
};

std::uint64_t checked_power(std::uint64_t base, std::size_t exp, std::uint64_t ceiling, const std::string& what) {
  std::uint64_t v = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (base != 0 && v > ceiling / base) {
      throw Error(ErrorKind::InfeasibleEnumeration, what + ": " + std::to_string(base) + "^" + std::to_string(exp) +
                                                        " exceeds the ceiling " + std::to_string(ceiling));
    }
    v *= base;
  }
  return v;
}

std::vector<SymbolIndex> support_of(std::span<const double> prior) {
  std::vector<SymbolIndex> s;
  for (std::size_t i = 0; i < prior.size(); ++i) {
    if (prior[i] > 0.0) s.push_back(i);
  }
  return s;
}

StageLaw ordered_stage(std::span<const double> ratio, std::span<const double> prior, std::size_t n,
                       std::uint64_t ceiling) {
  const auto supp = support_of(prior);
  StageLaw law;
  law.mass.assign(prior.size(), 0.0);
  law.terms = checked_power(supp.size(), n, ceiling, "ordered enumeration |support|^n");
  std::vector<std::size_t> idx(n, 0);
  for (std::uint64_t t = 0; t < law.terms; ++t) {
    double prob = 1.0;
    double tau = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const SymbolIndex s = supp[idx[j]];
      prob *= prior[s];
      tau += ratio[s];
    }
    if (tau > 0.0) {
      for (std::size_t j = 0; j < n; ++j) {
        const SymbolIndex s = supp[idx[j]];
        law.mass[s] += prob * ratio[s] / tau;
      }
    } else {
      law.degenerate += prob;
    }
    for (std::size_t j = n; j-- > 0;) {
      if (++idx[j] < supp.size()) break;
      idx[j] = 0;
    }
  }
  return law;
}

// Binomial(R, p) weights relative to the mode, visited mode-outward until
// they drop below 1e-300. `visit(k, w)` receives unnormalized weights.
template <class Visit>
void binomial_terms(std::uint64_t R, double p, Visit visit) {
  if (p >= 1.0) {
    visit(R, 1.0);
    return;
  }
  constexpr double kFloor = 1e-300;
  const double odds = p / (1.0 - p);
  auto mode = static_cast<std::uint64_t>(std::floor((static_cast<double>(R) + 1.0) * p));
  mode = std::min(mode, R);
  visit(mode, 1.0);
  double w = 1.0;
  for (std::uint64_t k = mode; k < R;) {
    w *= static_cast<double>(R - k) / static_cast<double>(k + 1) * odds;
    ++k;
    if (w < kFloor) break;
    visit(k, w);
  }
  w = 1.0;
  for (std::uint64_t k = mode; k > 0;) {
    w *= static_cast<double>(k) / static_cast<double>(R - k + 1) / odds;
    --k;
    if (w < kFloor) break;
    visit(k, w);
  }
}

StageLaw grouped_stage(std::span<const double> ratio, std::span<const double> prior, std::size_t n,
                       std::uint64_t ceiling) {
  const auto supp = support_of(prior);
  StageLaw law;
  law.mass.assign(prior.size(), 0.0);
  std::vector<std::uint64_t> counts(supp.size(), 0);

  std::function<void(std::size_t, std::uint64_t, double, double)> recurse = [&](std::size_t level, std::uint64_t R,
                                                                                 double rem_mass, double path) {
    if (level + 1 == supp.size()) {
      counts[level] = R;
      if (++law.terms > ceiling) {
        throw Error(ErrorKind::InfeasibleEnumeration,
                    "grouped enumeration exceeds " + std::to_string(ceiling) + " count vectors");
      }
      double tau = 0.0;
      for (std::size_t l = 0; l < supp.size(); ++l) tau += static_cast<double>(counts[l]) * ratio[supp[l]];
      if (tau > 0.0) {
        for (std::size_t l = 0; l < supp.size(); ++l) {
          if (counts[l] == 0) continue;
          law.mass[supp[l]] += path * static_cast<double>(counts[l]) * ratio[supp[l]] / tau;
        }
      } else {
        law.degenerate += path;
      }
      return;
    }
    const double p = std::min(1.0, prior[supp[level]] / rem_mass);
    double z = 0.0;
    binomial_terms(R, p, [&](std::uint64_t, double w) { z += w; });
    binomial_terms(R, p, [&](std::uint64_t k, double w) {
      counts[level] = k;
      recurse(level + 1, R - k, rem_mass - prior[supp[level]], path * w / z);
    });
  };

  double total = 0.0;
  for (auto s : supp) total += prior[s];
  recurse(0, n, total, 1.0);
  return law;
}

StageLaw stage_law(std::span<const double> ratio, std::span<const double> prior, std::size_t n,
                   EnumerationMethod method, std::uint64_t ceiling) {
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "proposal count must be at least 1");
  return method == EnumerationMethod::Ordered ? ordered_stage(ratio, prior, n, ceiling)
                                              : grouped_stage(ratio, prior, n, ceiling);
}

const char* method_name(EnumerationMethod m) { return m == EnumerationMethod::Ordered ? "ordered" : "grouped"; }

ExactLaw finish(const Alphabet& alphabet, StageLaw law, std::uint64_t size, const std::string& method) {
  double total = 0.0;
  for (double m : law.mass) total += m;
  if (!(total > 0.0)) {
    throw Error(ErrorKind::DegenerateWeights, "every proposal tuple has zero total weight");
  }
  for (auto& m : law.mass) m /= total;
  return ExactLaw{Pmf(alphabet, std::move(law.mass)), size, method, law.degenerate};
}

}  // namespace

ExactLaw exact_selected_distribution_mrc(const Pmf& target, const Pmf& prior, std::size_t n,
                                         EnumerationMethod method, std::uint64_t ceiling) {
  const auto ratio = importance_ratios(target, prior);
  StageLaw law = stage_law(ratio, prior.masses(), n, method, ceiling);
  const std::uint64_t size = law.terms;
  return finish(prior.alphabet(), std::move(law), size, std::string("mrc/") + method_name(method));
}

ExactLaw exact_block_law(const Pmf& q_c, const Pmf& p_c, std::size_t n_c, EnumerationMethod method,
                         std::uint64_t ceiling) {
  return exact_selected_distribution_mrc(q_c, p_c, n_c, method, ceiling);
}

ExactLaw exact_selected_distribution_hier(const HierProblem& problem, const HierConfig& cfg, std::size_t decoder,
                                          EnumerationMethod method, std::uint64_t ceiling) {
  const Pmf& p_c = problem.p_c();

  std::uint64_t documented = 0;
  if (method == EnumerationMethod::Ordered) {
    std::uint64_t inner = 1;
    for (BlockLabel c = 0; c < p_c.size(); ++c) {
      if (!problem.has_target_cond(c)) continue;
      const auto& pc = problem.prior_cond(decoder, c);
      inner = std::max(inner, checked_power(pc.support_size(), cfg.refinements(decoder, c), ceiling,
                                            "refinement enumeration"));
    }
    const std::uint64_t outer = checked_power(p_c.support_size(), cfg.n_c, ceiling, "block enumeration");
    if (outer > ceiling / inner) {
      throw Error(ErrorKind::InfeasibleEnumeration,
                  "two-stage enumeration " + std::to_string(outer) + " x " + std::to_string(inner) +
                      " exceeds the ceiling " + std::to_string(ceiling));
    }
    documented = outer * inner;
  }

  StageLaw block = stage_law(problem.block_ratio(), p_c.masses(), cfg.n_c, method, ceiling);
  double block_total = 0.0;
  for (double m : block.mass) block_total += m;
  if (!(block_total > 0.0)) throw Error(ErrorKind::DegenerateWeights, "block stage has zero total weight");
  std::uint64_t grouped_terms = block.terms;

  const Pmf& marginal = problem.prior(decoder);
  std::vector<double> out(marginal.size(), 0.0);
  double degenerate = block.degenerate;
  for (BlockLabel c = 0; c < p_c.size(); ++c) {
    if (block.mass[c] <= 0.0) continue;
    const auto& pc = problem.prior_cond(decoder, c);
    StageLaw inner =
        stage_law(problem.cond_ratio(decoder, c), pc.masses(), cfg.refinements(decoder, c), method, ceiling);
    grouped_terms += inner.terms;
    degenerate += block.mass[c] * inner.degenerate;
    for (std::size_t x = 0; x < out.size(); ++x) out[x] += block.mass[c] * inner.mass[x];
  }
  StageLaw combined{std::move(out), degenerate, 0};
  const std::uint64_t size = method == EnumerationMethod::Ordered ? documented : grouped_terms;
  return finish(marginal.alphabet(), std::move(combined), size, std::string("hier/") + method_name(method));
}

ExactLaw exact_selected_distribution_hier(const Pmf& target, const Pmf& prior, const Partition& part,
                                          std::size_t n_c, std::span<const std::size_t> n_ref,
                                          EnumerationMethod method, std::uint64_t ceiling) {
  const HierProblem problem = HierProblem::point_to_point(target, prior, part);
  if (n_ref.size() != part.block_count()) {
    throw Error(ErrorKind::InvalidArgument, "n_ref needs one entry per block");
  }
  HierConfig cfg;
  cfg.n_c = n_c;
  cfg.n_ref = {std::vector<std::size_t>(n_ref.begin(), n_ref.end())};
  cfg.validate(problem);
  return exact_selected_distribution_hier(problem, cfg, 0, method, ceiling);
}

double exact_bias(std::span<const double> f, const ExactLaw& law, const Pmf& target) {
  require_same_alphabet(law.pmf.alphabet(), target.alphabet(), "exact_bias");
  if (f.size() != target.size()) throw Error(ErrorKind::InvalidArgument, "function table size mismatch");
  double d = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) d += f[i] * (law.pmf[i] - target[i]);
  return std::abs(d);
}

double expected_refinement_draws(const Pmf& prior, const Partition& part, std::span<const std::size_t> n_ref,
                                 const Pmf& block_law) {
  const Pmf p_c = block_marginal(prior, part);
  if (block_law.size() != p_c.size() || n_ref.size() != p_c.size()) {
    throw Error(ErrorKind::InvalidArgument, "block law and n_ref need one entry per block");
  }
  double e = 0.0;
  for (BlockLabel c = 0; c < p_c.size(); ++c) {
    if (block_law[c] <= 0.0) continue;
    if (p_c[c] <= 0.0) throw Error(ErrorKind::ZeroBlockMass, "chosen block " + std::to_string(c) + " has zero mass");
    e += block_law[c] * static_cast<double>(n_ref[c]) / p_c[c];
  }
  return e;
}

namespace {

std::uint64_t bell(std::size_t n) {
  // Bell triangle.
  std::vector<std::uint64_t> row{1};
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::uint64_t> next{row.back()};
    for (auto v : row) next.push_back(next.back() + v);
    row = std::move(next);
  }
  return row.front();
}

// Calls visit(rgs, blocks) for every restricted growth string of length n.
template <class Visit>
void for_each_set_partition(std::size_t n, Visit visit) {
  std::vector<std::size_t> rgs(n, 0);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t pos, std::size_t blocks) {
    if (pos == n) {
      visit(rgs, blocks);
      return;
    }
    for (std::size_t b = 0; b <= blocks; ++b) {
      rgs[pos] = b;
      rec(pos + 1, std::max(blocks, b + 1));
    }
  };
  if (n == 0) {
    visit(rgs, 0);
    return;
  }
  rec(0, 0);
}

}  // namespace

std::pair<Partition, Partition> brute_force_gk(const JointPmf& joint) {
  const auto [p1, p2] = marginals(joint);
  const auto rows = support_of(p1.masses());
  const auto cols = support_of(p2.masses());
  const std::uint64_t work = bell(rows.size()) * bell(cols.size());
  if (rows.size() > 12 || cols.size() > 12 || work > 1'000'000) {
    throw Error(ErrorKind::InfeasibleEnumeration, "Bell(" + std::to_string(rows.size()) + ") * Bell(" +
                                                      std::to_string(cols.size()) + ") exceeds 10^6");
  }

  double best_entropy = -1.0;
  std::vector<std::size_t> best_rows, best_cols;
  std::size_t best_blocks = 0;
  for_each_set_partition(rows.size(), [&](const std::vector<std::size_t>& rg, std::size_t rb) {
    for_each_set_partition(cols.size(), [&](const std::vector<std::size_t>& cg, std::size_t cb) {
      if (rb != cb) return;
      constexpr std::size_t kNone = static_cast<std::size_t>(-1);
      std::vector<std::size_t> fwd(rb, kNone), back(cb, kNone);
      for (std::size_t a = 0; a < rows.size(); ++a) {
        for (std::size_t b = 0; b < cols.size(); ++b) {
          if (joint.at(rows[a], cols[b]) <= 0.0) continue;
          const std::size_t x = rg[a], y = cg[b];
          if ((fwd[x] != kNone && fwd[x] != y) || (back[y] != kNone && back[y] != x)) return;
          fwd[x] = y;
          back[y] = x;
        }
      }
      std::vector<double> mass(rb, 0.0);
      for (std::size_t a = 0; a < rows.size(); ++a) mass[rg[a]] += p1[rows[a]];
      double h = 0.0;
      for (double m : mass) {
        if (m > 0.0) h -= m * std::log(m);
      }
      if (h > best_entropy + 1e-12) {
        best_entropy = h;
        best_blocks = rb;
        best_rows = rg;
        best_cols.assign(cols.size(), 0);
        for (std::size_t b = 0; b < cols.size(); ++b) best_cols[b] = back[cg[b]];
      }
    });
  });

  // Canonical labels: first appearance over the first alphabet.
  constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> canon(best_blocks, kUnset);
  std::size_t next = 0;
  for (std::size_t a = 0; a < rows.size(); ++a) {
    if (canon[best_rows[a]] == kUnset) canon[best_rows[a]] = next++;
  }
  const bool any_null = rows.size() < joint.rows() || cols.size() < joint.cols();
  const std::size_t null_label = best_blocks;
  std::vector<BlockLabel> g1(joint.rows(), null_label), g2(joint.cols(), null_label);
  for (std::size_t a = 0; a < rows.size(); ++a) g1[rows[a]] = canon[best_rows[a]];
  for (std::size_t b = 0; b < cols.size(); ++b) g2[cols[b]] = canon[best_cols[b]];
  const std::size_t space = best_blocks + (any_null ? 1 : 0);
  return {Partition(joint.first(), std::move(g1), space), Partition(joint.second(), std::move(g2), space)};
}

}  // namespace remgen
