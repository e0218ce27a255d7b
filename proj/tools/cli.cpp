// Copyright 2026 The remgen Authors
// SPDX-License-Identifier: Apache-2.0

#include "cli.hpp"

#ifndef REMGEN_VERSION
#define REMGEN_VERSION "unknown"
#endif

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "remgen/bounds.hpp"
#include "remgen/common_info.hpp"
#include "remgen/mrc.hpp"
#include "remgen/oracles.hpp"
#include "remgen/protocol.hpp"
#include "remgen/scenario_io.hpp"
#include "report_json.hpp"

namespace remgen::cli {

int exit_code_for(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InfeasibleEnumeration:
      return kInfeasible;
    case ErrorKind::RejectionCapExceeded:
    case ErrorKind::DegenerateWeights:
    case ErrorKind::IndexOutOfRange:
    case ErrorKind::ZeroBlockMass:
      return kSamplingFault;
    default:
      return kInvalid;
  }
}

namespace {

struct Stats {
  double mean = 0.0;
  double stderr_ = 0.0;
};

Stats stats(const std::vector<double>& xs) {
  Stats s;
  if (xs.empty()) return s;
  for (double x : xs) s.mean += x;
  s.mean /= static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    s.stderr_ = std::sqrt(ss / static_cast<double>(xs.size() - 1) / static_cast<double>(xs.size()));
  }
  return s;
}

Json stats_json(const std::vector<double>& xs) {
  const Stats s = stats(xs);
  return Json{{"mean", s.mean}, {"stderr", s.stderr_}, {"n", xs.size()}};
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write '" + path + "'");
  out << text;
}

std::size_t default_workers() {
  if (const char* env = std::getenv("REMGEN_WORKERS")) {
    try {
      return std::max<std::size_t>(1, std::stoul(env));
    } catch (const std::exception&) {
      return 1;
    }
  }
  return 1;
}

// Runs fn(i) for i in [0, n) on `workers` threads. Results land in their own
// slot so the reduction order never depends on scheduling.
template <class Result, class Fn>
std::vector<Result> parallel_map(std::size_t n, std::size_t workers, Fn fn) {
  std::vector<std::optional<Result>> slots(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        slots[i] = fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(n, 1));
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::vector<Result> out;
  out.reserve(n);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

Scenario trial_scenario(const Scenario& sc, std::size_t trial) {
  Scenario t = sc;
  t.params.label = sc.params.label + "/trial/" + std::to_string(trial);
  return t;
}

// ---- gk -------------------------------------------------------------------

int cmd_gk(const std::string& path, bool json_out, const std::string& out_path, std::ostream& out) {
  const Scenario sc = load_scenario(path);
  const GkDecomposition dec = gk_decompose(effective_joint(sc));
  const CommonVariableReport check = verify_common_variable(effective_joint(sc), dec);
  Json body = to_json(dec, check);
  if (json_out) {
    out << body.dump(2) << "\n";
  } else {
    out << std::setprecision(4) << std::fixed;
    out << dec.block_count << (dec.block_count == 1 ? " block" : " blocks") << ", C_GK = "
        << nats_to_bits(dec.cgk_nats) << " bits (" << dec.cgk_nats << " nats)\n";
    out << std::defaultfloat << std::setprecision(6);
    for (BlockLabel c = 0; c < dec.block_count; ++c) {
      out << "  block " << c << " p_C=" << dec.p_c[c] << " :";
      for (auto x : dec.partition1.members(c)) out << ' ' << dec.partition1.alphabet().symbol(x);
      out << " |";
      for (auto y : dec.partition2.members(c)) out << ' ' << dec.partition2.alphabet().symbol(y);
      out << "\n";
    }
    out << "  conditional independence residual: " << check.max_independence_residual << "\n";
  }
  if (!out_path.empty()) write_file(out_path, report_file("gk", std::move(body)).dump(2) + "\n");
  return kOk;
}

// ---- run ------------------------------------------------------------------

struct TrialResult {
  std::optional<RunReport> naive;
  std::optional<RunReport> hier;
  std::optional<SavingsSummary> savings;
};

Json scheme_summary(const std::vector<TrialResult>& trials, bool hier) {
  std::vector<double> bits, wire;
  std::vector<std::vector<double>> bias(2), tve(2);
  for (const auto& t : trials) {
    const RunReport& r = hier ? *t.hier : *t.naive;
    bits.push_back(r.ledger.total_bits());
    wire.push_back(static_cast<double>(r.ledger.total_wire()));
    for (std::size_t i = 0; i < r.decoders.size(); ++i) {
      if (r.decoders[i].abs_bias) bias[i].push_back(*r.decoders[i].abs_bias);
      if (r.decoders[i].tv_empirical) tve[i].push_back(*r.decoders[i].tv_empirical);
    }
  }
  return Json{{"total_bits", stats_json(bits)},
              {"total_wire", stats_json(wire)},
              {"abs_bias", Json::array({stats_json(bias[0]), stats_json(bias[1])})},
              {"tv_empirical", Json::array({stats_json(tve[0]), stats_json(tve[1])})}};
}

int cmd_run(const std::string& path, const std::string& scheme, std::size_t trials, const std::string& out_path,
            std::size_t workers, bool per_k, bool json_out, std::ostream& out, std::ostream& err) {
  const Scenario sc = load_scenario(path);
  if (trials == 0) throw Error(ErrorKind::InvalidArgument, "--trials must be at least 1");
  const bool do_naive = scheme == "naive" || scheme == "both";
  const bool do_hier = scheme == "hier" || scheme == "hierarchical" || scheme == "both";
  if (!do_naive && !do_hier) throw Error(ErrorKind::InvalidArgument, "unknown scheme '" + scheme + "'");

  std::mutex report_mutex;
  std::optional<std::string> failing_label;
  std::vector<TrialResult> results;
  try {
    results = parallel_map<TrialResult>(trials, workers, [&](std::size_t t) {
      const Scenario ts = trial_scenario(sc, t);
      try {
        TrialResult r;
        if (do_naive) r.naive = run_naive_unicast(ts);
        if (do_hier) r.hier = run_hierarchical_broadcast(ts);
        if (r.naive && r.hier) r.savings = cost_compare(*r.naive, *r.hier, ts);
        return r;
      } catch (const Error&) {
        std::lock_guard lock(report_mutex);
        if (!failing_label) failing_label = ts.params.label;
        throw;
      }
    });
  } catch (const Error& e) {
    if (exit_code_for(e.kind()) == kSamplingFault && failing_label) {
      err << "sampling fault under seed " << sc.params.seed << " label '" << *failing_label << "'\n";
    }
    throw;
  }

  Json runs = Json::array();
  for (std::size_t t = 0; t < results.size(); ++t) {
    Json row{{"trial", t}, {"label", trial_scenario(sc, t).params.label}};
    if (results[t].naive) row["naive"] = to_json(*results[t].naive, per_k);
    if (results[t].hier) row["hierarchical"] = to_json(*results[t].hier, per_k);
    if (results[t].savings) row["savings"] = to_json(*results[t].savings);
    runs.push_back(std::move(row));
  }
  Json summary = Json::object();
  if (do_naive) summary["naive"] = scheme_summary(results, false);
  if (do_hier) summary["hierarchical"] = scheme_summary(results, true);
  if (do_naive && do_hier) {
    std::vector<double> abs;
    bool below = true;
    for (const auto& r : results) {
      abs.push_back(r.savings->absolute);
      below = below && r.savings->candidate_bits < r.savings->baseline_bits;
    }
    summary["savings"] = Json{{"absolute", stats_json(abs)}, {"hierarchical_below_naive_every_trial", below}};
  }
  Json body{{"command", "run"},
            {"scenario", scenario_json(sc)},
            {"scheme", scheme},
            {"trials", trials},
            {"runs", std::move(runs)},
            {"summary", summary}};

  if (json_out) {
    out << body.dump(2) << "\n";
  } else {
    out << std::setprecision(6);
    for (const char* key : {"naive", "hierarchical"}) {
      if (!summary.contains(key)) continue;
      const Json& s = summary[key];
      out << key << ": total bits " << s["total_bits"]["mean"].get<double>() << " (stderr "
          << s["total_bits"]["stderr"].get<double>() << "), |bias| decoder1 "
          << s["abs_bias"][0]["mean"].get<double>() << ", decoder2 " << s["abs_bias"][1]["mean"].get<double>()
          << "\n";
    }
    if (summary.contains("savings")) {
      out << "savings: " << summary["savings"]["absolute"]["mean"].get<double>() << " bits per run\n";
    }
  }
  if (!out_path.empty()) write_file(out_path, report_file("run", std::move(body)).dump(2) + "\n");
  return kOk;
}

// ---- bounds ---------------------------------------------------------------

int cmd_bounds(const std::string& path, std::optional<double> t, std::optional<double> tc, double eps_star,
               std::optional<std::size_t> K, bool json_out, const std::string& out_path, std::ostream& out) {
  Scenario sc = load_scenario(path);
  if (t) sc.params.t = *t;
  if (tc) sc.params.t_c = *tc;
  if (K) sc.params.K = *K;
  validate_scenario(sc);
  const std::size_t k_eff = std::max<std::size_t>(sc.params.K, 1);
  const GkDecomposition dec = scenario_decomposition(sc);
  const HierProblem problem = scenario_problem(sc);
  const SampleSizes sizes = choose_sample_sizes(sc);

  Json decoders = Json::array();
  out << std::setprecision(4) << std::fixed;
  for (std::size_t i = 0; i < 2; ++i) {
    const Partition& part = i == 0 ? dec.partition1 : dec.partition2;
    const Pmf& prior = problem.prior(i);
    const BoundReport b = evaluate_bounds(sc.functions[i], sc.targets[i], prior, part, sc.params.t_c, sc.params.t,
                                          sizes.n_c, sizes.n_ref[i]);
    const DeviationBound p1 = deviation_bound_prop1(sc.functions[i], sc.targets[i], prior, sc.params.t, k_eff, eps_star);
    const DeviationBound p2 = deviation_bound_prop2(sc.functions[i], sc.targets[i], prior, part, sc.params.t_c,
                                                    sc.params.t, k_eff, eps_star);
    decoders.push_back(Json{{"decoder", i + 1},
                            {"bounds", to_json(b)},
                            {"single_stage_deviation", to_json(p1)},
                            {"two_stage_deviation", to_json(p2)}});
    if (!json_out) {
      auto flag = [](bool v) { return v ? " [vacuous]" : ""; };
      out << "decoder " << i + 1 << "\n";
      out << "  single-stage epsilon = " << b.single_stage_epsilon << ", bias bound = " << b.single_stage.value
          << flag(b.single_stage.vacuous) << ", confidence = " << b.single_stage.confidence << "\n";
      out << "  block epsilon = " << b.epsilon << ", epsilon_bar = " << b.epsilon_bar << ", |C| = " << b.block_count
          << "\n";
      out << "  two-stage bias bound = " << b.two_stage.eq4 << flag(b.two_stage.vacuous)
          << ", confidence = " << b.two_stage.confidence << "\n";
      out << "  tv bound = " << b.tv.raw << flag(b.tv.vacuous) << "\n";
      if (b.avg_complexity) out << "  avg complexity (draws per k) = " << *b.avg_complexity << "\n";
      out << "  deviation (interpreted) single-stage = " << p1.value << ", two-stage = " << p2.value << "\n";
    }
  }
  Json body{{"command", "bounds"},
            {"scenario", scenario_json(sc)},
            {"eps_star", eps_star},
            {"sizes", to_json(sizes)},
            {"decoders", std::move(decoders)}};
  if (sizes.n_c >= 2) {
    body["predicted_bits_per_k"] = avg_bits_lemma3(problem.p_c(), problem.q_c(), sizes.n_c, sizes.n_ref);
  }
  if (json_out) out << body.dump(2) << "\n";
  if (!out_path.empty()) write_file(out_path, report_file("bounds", std::move(body)).dump(2) + "\n");
  return kOk;
}

// ---- oracle-check ---------------------------------------------------------

struct Check {
  std::string name;
  std::string scope;
  bool pass = true;
  bool counts = true;  // informational rows never fail the command
  std::string detail;
};

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(6) << v;
  return os.str();
}

std::string pmf_text(const Pmf& p) {
  std::string s = "(";
  for (std::size_t i = 0; i < p.size(); ++i) s += (i ? ", " : "") + fmt(p[i]);
  return s + ")";
}

// Per-symbol 3-sigma agreement of counts with an exact law.
Check frequency_check(const std::string& scope, const std::vector<std::uint64_t>& counts, const Pmf& law,
                      std::size_t trials) {
  Check c{"sim-vs-oracle", scope, true, true, ""};
  double worst = 0.0;
  for (std::size_t x = 0; x < law.size(); ++x) {
    const double p = law[x];
    const double f = static_cast<double>(counts[x]) / static_cast<double>(trials);
    const double sigma = std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
    const double z = sigma > 0.0 ? std::abs(f - p) / sigma : (std::abs(f - p) > 0.0 ? INFINITY : 0.0);
    worst = std::max(worst, z);
  }
  c.pass = worst <= 3.0;
  c.detail = "max |z| = " + fmt(worst) + " over " + std::to_string(trials) + " trials";
  return c;
}

int cmd_oracle_check(const std::string& path, std::size_t samples, std::uint64_t ceiling, bool json_out,
                     const std::string& out_path, std::ostream& out) {
  const Scenario sc = load_scenario(path);
  const JointPmf joint = effective_joint(sc);
  const GkDecomposition dec = scenario_decomposition(sc);
  const HierProblem problem = scenario_problem(sc);
  const SampleSizes sizes = choose_sample_sizes(sc);
  std::vector<Check> checks;

  const CommonVariableReport cv = verify_common_variable(joint, dec);
  checks.push_back({"gk-agreement", "joint", cv.agreement_ok, true,
                    "P[g1 != g2] = " + fmt(cv.disagreement_probability)});
  checks.push_back({"gk-independence", "joint", cv.independence_ok, true,
                    "residual = " + fmt(cv.max_independence_residual)});
  checks.push_back({"gk-maximal", "joint", cv.maximal, true,
                    cv.splittable_block ? "block " + std::to_string(*cv.splittable_block) + " splits further"
                                        : "no block splits further"});

  HierConfig cfg;
  cfg.n_c = sizes.n_c;
  cfg.n_ref = sizes.n_ref;
  if (sc.params.rejection_cap) cfg.rejection_cap.assign(problem.block_count(), *sc.params.rejection_cap);

  Json laws = Json::array();
  std::vector<ExactLaw> naive_laws, hier_laws;
  for (std::size_t i = 0; i < 2; ++i) {
    naive_laws.push_back(
        exact_selected_distribution_mrc(sc.targets[i], problem.prior(i), sizes.naive[i], EnumerationMethod::Ordered, ceiling));
    hier_laws.push_back(exact_selected_distribution_hier(problem, cfg, i, EnumerationMethod::Ordered, ceiling));
    laws.push_back(Json{{"decoder", i + 1}, {"naive", to_json(naive_laws[i])}, {"hierarchical", to_json(hier_laws[i])}});
    const std::string d = "decoder " + std::to_string(i + 1);
    checks.push_back({"exact-law", d + " naive", true, false, pmf_text(naive_laws[i].pmf)});
    checks.push_back({"exact-law", d + " hierarchical", true, false, pmf_text(hier_laws[i].pmf)});

    if (problem.p_c().support_size() == 1) {
      BlockLabel only = 0;
      while (problem.p_c()[only] <= 0.0) ++only;
      const ExactLaw mrc = exact_selected_distribution_mrc(sc.targets[i], problem.prior(i), cfg.refinements(i, only),
                                                           EnumerationMethod::Ordered, ceiling);
      double diff = 0.0;
      for (std::size_t x = 0; x < mrc.pmf.size(); ++x) diff = std::max(diff, std::abs(mrc.pmf[x] - hier_laws[i].pmf[x]));
      checks.push_back({"one-block-equivalence", d, diff <= 1e-12, true, "max diff = " + fmt(diff)});
    }

    const BoundReport b = evaluate_bounds(sc.functions[i], sc.targets[i], problem.prior(i),
                                          problem.partition(i), sc.params.t_c, sc.params.t, sizes.n_c, sizes.n_ref[i]);
    const double naive_bias = exact_bias(sc.functions[i], naive_laws[i], sc.targets[i]);
    checks.push_back({"single-stage-bias", d + " naive", naive_bias <= b.single_stage.value, false,
                      "exact " + fmt(naive_bias) + " vs bound " + fmt(b.single_stage.value) +
                          (b.single_stage.vacuous ? " (vacuous)" : "")});
    const double hier_bias = exact_bias(sc.functions[i], hier_laws[i], sc.targets[i]);
    checks.push_back({"two-stage-bias", d + " hierarchical", hier_bias <= b.two_stage.eq4, false,
                      "exact " + fmt(hier_bias) + " vs bound " + fmt(b.two_stage.eq4) +
                          (b.two_stage.vacuous ? " (vacuous)" : "")});
    const double tv_h = tv(hier_laws[i].pmf, sc.targets[i]);
    if (!b.tv.vacuous) {
      checks.push_back({"tv-bound", d + " hierarchical", tv_h <= b.tv.raw, true,
                        "tv " + fmt(tv_h) + " vs bound " + fmt(b.tv.raw)});
    } else {
      checks.push_back({"tv-bound", d + " hierarchical", true, false, "vacuous (" + fmt(b.tv.raw) + ")"});
    }
  }

  if (samples > 0) {
    Scenario sim = sc;
    sim.params.K = samples;
    sim.params.group_size = 1;
    sim.params.label = sc.params.label + "/oracle-check";
    const RunReport naive = run_naive_unicast(sim);
    const RunReport hier = run_hierarchical_broadcast(sim);
    for (std::size_t i = 0; i < 2; ++i) {
      const std::string d = "decoder " + std::to_string(i + 1);
      checks.push_back(frequency_check(d + " naive", naive.decoders[i].counts, naive_laws[i].pmf, samples));
      checks.push_back(frequency_check(d + " hierarchical", hier.decoders[i].counts, hier_laws[i].pmf, samples));
    }
  }

  bool ok = true;
  Json rows = Json::array();
  for (const auto& c : checks) {
    if (c.counts && !c.pass) ok = false;
    rows.push_back(Json{{"check", c.name}, {"scope", c.scope}, {"pass", c.pass}, {"counts", c.counts}, {"detail", c.detail}});
  }
  Json body{{"command", "oracle-check"},
            {"scenario", scenario_json(sc)},
            {"sizes", to_json(sizes)},
            {"laws", std::move(laws)},
            {"checks", std::move(rows)},
            {"pass", ok}};
  if (json_out) {
    out << body.dump(2) << "\n";
  } else {
    for (const auto& c : checks) {
      const char* verdict = c.pass ? "pass" : (c.counts ? "FAIL" : "info");
      out << std::left << std::setw(22) << c.name << std::setw(26) << c.scope << std::setw(6) << verdict << c.detail
          << "\n";
    }
    out << (ok ? "all checks passed" : "some checks failed") << "\n";
  }
  if (!out_path.empty()) write_file(out_path, report_file("oracle-check", std::move(body)).dump(2) + "\n");
  return ok ? kOk : kCheckFailed;
}

// ---- sweep ----------------------------------------------------------------

std::string csv_opt(const std::optional<double>& v) { return v ? fmt(*v) : ""; }

std::string join(const std::vector<std::size_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + std::to_string(v[i]);
  return s;
}

int cmd_sweep(const std::string& path, const std::string& param, const std::vector<double>& values,
              const std::string& scheme, const std::string& out_path, std::size_t workers, std::ostream& out) {
  const Scenario base = load_scenario(path);
  static const std::vector<std::string> kParams{"n", "n_c", "n_ref", "t", "t_c", "K"};
  if (std::find(kParams.begin(), kParams.end(), param) == kParams.end()) {
    throw Error(ErrorKind::InvalidArgument, "unknown sweep parameter '" + param + "'");
  }
  const bool do_naive = scheme == "naive" || scheme == "both";
  const bool do_hier = scheme == "hier" || scheme == "hierarchical" || scheme == "both";
  if (!do_naive && !do_hier) throw Error(ErrorKind::InvalidArgument, "unknown scheme '" + scheme + "'");

  auto configure = [&](double v) {
    Scenario sc = base;
    const auto count = [&] {
      if (!(v >= 1.0) || v != std::floor(v)) throw Error(ErrorKind::InvalidArgument, param + " values must be integers >= 1");
      return static_cast<std::size_t>(v);
    };
    if (param == "n") {
      sc.params.n_overrides.naive = std::vector<std::size_t>{count(), count()};
    } else if (param == "n_c") {
      sc.params.n_overrides.n_c = count();
    } else if (param == "n_ref") {
      const std::size_t blocks = scenario_problem(sc).block_count();
      sc.params.n_overrides.n_ref = std::vector<std::vector<std::size_t>>(2, std::vector<std::size_t>(blocks, count()));
    } else if (param == "t") {
      sc.params.t = v;
    } else if (param == "t_c") {
      sc.params.t_c = v;
    } else {
      if (!(v >= 0.0) || v != std::floor(v)) throw Error(ErrorKind::InvalidArgument, "K values must be integers >= 0");
      sc.params.K = static_cast<std::size_t>(v);
    }
    validate_scenario(sc);
    return sc;
  };

  const auto rows = parallel_map<std::string>(values.size(), workers, [&](std::size_t r) {
    const double v = values[r];
    const Scenario sc = configure(v);
    const SampleSizes sizes = choose_sample_sizes(sc);
    const HierProblem problem = scenario_problem(sc);
    const GkDecomposition dec = scenario_decomposition(sc);
    const std::size_t k_eff = std::max<std::size_t>(sc.params.K, 1);
    HierConfig cfg;
    cfg.n_c = sizes.n_c;
    cfg.n_ref = sizes.n_ref;
    std::ostringstream csv;
    auto exact_or_empty = [](auto fn) -> std::optional<ExactLaw> {
      try {
        return fn();
      } catch (const Error& e) {
        if (e.kind() == ErrorKind::InfeasibleEnumeration) return std::nullopt;
        throw;
      }
    };
    for (int pass = 0; pass < 2; ++pass) {
      const bool hier = pass == 1;
      if ((hier && !do_hier) || (!hier && !do_naive)) continue;
      std::optional<RunReport> rep;
      if (sc.params.K > 0) rep = hier ? run_hierarchical_broadcast(sc) : run_naive_unicast(sc);
      for (std::size_t i = 0; i < 2; ++i) {
        const Partition& part = i == 0 ? dec.partition1 : dec.partition2;
        const Pmf& prior = problem.prior(i);
        const auto law = exact_or_empty([&] {
          return hier ? exact_selected_distribution_hier(problem, cfg, i, EnumerationMethod::Grouped, 5'000'000)
                      : exact_selected_distribution_mrc(sc.targets[i], prior, sizes.naive[i],
                                                        EnumerationMethod::Grouped, 5'000'000);
        });
        const BoundReport b = evaluate_bounds(sc.functions[i], sc.targets[i], prior, part, sc.params.t_c, sc.params.t,
                                              sizes.n_c, sizes.n_ref[i]);
        std::optional<double> exact_tv, exact_b, emp_bias, bits;
        if (law) {
          exact_tv = tv(law->pmf, sc.targets[i]);
          exact_b = exact_bias(sc.functions[i], *law, sc.targets[i]);
        }
        if (rep) {
          emp_bias = rep->decoders[i].abs_bias;
          bits = rep->ledger.total_bits();
        }
        const DeviationBound dev =
            hier ? deviation_bound_prop2(sc.functions[i], sc.targets[i], prior, part, sc.params.t_c, sc.params.t, k_eff, 0.05)
                 : deviation_bound_prop1(sc.functions[i], sc.targets[i], prior, sc.params.t, k_eff, 0.05);
        csv << param << ',' << fmt(v) << ',' << (hier ? "hierarchical" : "naive") << ',' << i + 1 << ','
            << (hier ? std::to_string(sizes.n_c) : "") << ',' << (hier ? join(sizes.n_ref[i]) : std::to_string(sizes.naive[i]))
            << ',' << csv_opt(exact_tv) << ',' << csv_opt(exact_b) << ',' << csv_opt(emp_bias) << ',' << csv_opt(bits)
            << ',' << fmt(hier ? b.epsilon : b.single_stage_epsilon) << ',' << (hier ? fmt(b.epsilon_bar) : "") << ','
            << fmt(hier ? b.two_stage.eq4 : b.single_stage.value) << ',' << (hier ? fmt(b.tv.raw) : "") << ','
            << fmt(dev.fluctuation_term) << "\n";
      }
    }
    return csv.str();
  });

  std::ostringstream table;
  table << "param,value,scheme,decoder,n_c,n,exact_tv,exact_bias,empirical_bias,total_bits,epsilon,epsilon_bar,"
           "bias_bound,tv_bound,fluctuation_term\n";
  for (const auto& r : rows) table << r;
  if (out_path.empty()) {
    out << table.str();
  } else {
    write_file(out_path, table.str());
    out << "wrote " << values.size() << " sweep values to " << out_path << "\n";
  }
  return kOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"remgen: shared-randomness sampling experiments"};
  app.require_subcommand(1);
  app.set_version_flag("--version", REMGEN_VERSION);

  std::string scenario, out_path;
  bool json_out = false;

  auto* gk = app.add_subcommand("gk", "Common-information block decomposition of the joint prior");
  gk->add_option("scenario", scenario, "Scenario file")->required();
  gk->add_flag("--json", json_out, "Print JSON instead of text");
  gk->add_option("--out", out_path, "Write a report file");

  std::string scheme = "both";
  std::size_t trials = 1;
  std::size_t workers = default_workers();
  bool per_k = false;
  auto* run = app.add_subcommand("run", "Run the naive and/or hierarchical scheme");
  run->add_option("scenario", scenario, "Scenario file")->required();
  run->add_option("--scheme", scheme, "naive | hier | both")->check(CLI::IsMember({"naive", "hier", "hierarchical", "both"}));
  run->add_option("--trials", trials, "Independent runs under derived seeds")->check(CLI::PositiveNumber);
  run->add_option("--out", out_path, "Write a report file");
  run->add_option("--workers", workers, "Worker threads (default $REMGEN_WORKERS or 1)")->check(CLI::PositiveNumber);
  run->add_flag("--per-k", per_k, "Include per-repetition ledger rows");
  run->add_flag("--json", json_out, "Print the report body as JSON");

  std::optional<double> t_override, tc_override;
  std::optional<std::size_t> k_override;
  double eps_star = 0.05;
  auto* bounds = app.add_subcommand("bounds", "Evaluate the analytical guarantees");
  bounds->add_option("scenario", scenario, "Scenario file")->required();
  bounds->add_option("--t", t_override, "Refinement slack t (nats)");
  bounds->add_option("--tc", tc_override, "Block slack t_c (nats)");
  bounds->add_option("--eps-star", eps_star, "Confidence parameter of the deviation bounds")->check(CLI::PositiveNumber);
  bounds->add_option("--K", k_override, "Repetitions for the deviation bounds");
  bounds->add_flag("--json", json_out, "Print JSON instead of text");
  bounds->add_option("--out", out_path, "Write a report file");

  std::size_t samples = 20000;
  std::uint64_t ceiling = kEnumerationCeiling;
  auto* oracle = app.add_subcommand("oracle-check", "Compare samplers against exact enumeration");
  oracle->add_option("scenario", scenario, "Scenario file")->required();
  oracle->add_option("--samples", samples, "Simulated selections per scheme (0 skips simulation)");
  oracle->add_option("--ceiling", ceiling, "Enumeration ceiling");
  oracle->add_flag("--json", json_out, "Print JSON instead of text");
  oracle->add_option("--out", out_path, "Write a report file");

  std::string param;
  std::vector<double> values;
  auto* sweep = app.add_subcommand("sweep", "Sweep one parameter and emit a CSV table");
  sweep->add_option("scenario", scenario, "Scenario file")->required();
  sweep->add_option("--param", param, "n | n_c | n_ref | t | t_c | K")->required();
  sweep->add_option("--values", values, "Comma-separated values")->required()->delimiter(',');
  sweep->add_option("--scheme", scheme, "naive | hier | both")->check(CLI::IsMember({"naive", "hier", "hierarchical", "both"}));
  sweep->add_option("--out", out_path, "CSV output path (default stdout)");
  sweep->add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInvalid;
  }

  try {
    if (gk->parsed()) return cmd_gk(scenario, json_out, out_path, out);
    if (run->parsed()) return cmd_run(scenario, scheme, trials, out_path, workers, per_k, json_out, out, err);
    if (bounds->parsed()) {
      return cmd_bounds(scenario, t_override, tc_override, eps_star, k_override, json_out, out_path, out);
    }
    if (oracle->parsed()) return cmd_oracle_check(scenario, samples, ceiling, json_out, out_path, out);
    if (sweep->parsed()) return cmd_sweep(scenario, param, values, scheme, out_path, workers, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInvalid;
  }
  return kInvalid;
}

}  // namespace remgen::cli
