// Copyright 2026 The remgen Authors
// SPDX-License-Identifier: Apache-2.0

#include "report_json.hpp"

#include <chrono>
#include <cmath>
#include <ctime>

#include "remgen/scenario_io.hpp"

#ifndef REMGEN_VERSION
#define REMGEN_VERSION "unknown"
#endif

namespace remgen::cli {

Json number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

namespace {

template <class T>
Json optional_number(const std::optional<T>& v) {
  return v ? Json(number(static_cast<double>(*v))) : Json(nullptr);
}

std::string utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Json masses(const Pmf& p) { return std::vector<double>(p.masses().begin(), p.masses().end()); }

}  // namespace

Json to_json(const SampleSizes& s) {
  return Json{{"n_c", s.n_c}, {"n_ref", s.n_ref}, {"naive", s.naive}};
}

Json to_json(const CostLedger& ledger, bool per_k) {
  Json j{{"broadcast_bits", ledger.broadcast_bits},
         {"broadcast_wire", ledger.broadcast_wire},
         {"unicast_bits", ledger.unicast_bits},
         {"unicast_wire", ledger.unicast_wire},
         {"total_bits", ledger.total_bits()},
         {"total_wire", ledger.total_wire()},
         {"raw_prior_draws", ledger.raw_prior_draws}};
  if (per_k) {
    Json rows = Json::array();
    for (const auto& e : ledger.per_k) {
      rows.push_back(Json{{"k", e.k},
                          {"block_index", e.block_index ? Json(*e.block_index) : Json(nullptr)},
                          {"broadcast_bits", e.broadcast_bits},
                          {"broadcast_wire", e.broadcast_wire},
                          {"unicast_index", e.unicast_index},
                          {"unicast_bits", e.unicast_bits},
                          {"unicast_wire", e.unicast_wire},
                          {"raw_draws", e.raw_draws}});
    }
    j["per_k"] = std::move(rows);
  }
  return j;
}

Json to_json(const DecoderResult& r) {
  return Json{{"estimate", optional_number(r.estimate)},
              {"estimate_defined", r.estimate.has_value()},
              {"true_value", r.true_value},
              {"abs_bias", optional_number(r.abs_bias)},
              {"counts", r.counts},
              {"tv_empirical", optional_number(r.tv_empirical)},
              {"tv_exact", optional_number(r.tv_exact)}};
}

Json to_json(const RunReport& r, bool per_k) {
  Json decoders = Json::array();
  for (const auto& d : r.decoders) decoders.push_back(to_json(d));
  Json bounds = Json::array();
  for (const auto& b : r.bounds) bounds.push_back(to_json(b));
  Json j{{"scheme", r.scheme},
         {"seed", r.seed.seed},
         {"label", r.seed.label},
         {"K", r.K},
         {"scenario_fingerprint", r.scenario_fingerprint},
         {"sizes", to_json(r.sizes)},
         {"decoders", std::move(decoders)},
         {"ledger", to_json(r.ledger, per_k)},
         {"bounds", std::move(bounds)}};
  if (r.scheme == "hierarchical") j["blocks_agree"] = r.blocks_agree;
  return j;
}

Json to_json(const BoundReport& b) {
  return Json{{"norm", b.norm_name},
              {"f_norm", b.f_norm},
              {"blocks", b.block_count},
              {"epsilon", number(b.epsilon)},
              {"epsilon_bar", number(b.epsilon_bar)},
              {"single_stage",
               Json{{"epsilon", number(b.single_stage_epsilon)},
                    {"bias_bound", number(b.single_stage.value)},
                    {"confidence", b.single_stage.confidence},
                    {"vacuous", b.single_stage.vacuous}}},
              {"two_stage",
               Json{{"eq4", number(b.two_stage.eq4)},
                    {"simplified", optional_number(b.two_stage.simplified)},
                    {"confidence", b.two_stage.confidence},
                    {"vacuous", b.two_stage.vacuous}}},
              {"tv_bound", Json{{"raw", b.tv.raw}, {"clamped", b.tv.clamped}, {"vacuous", b.tv.vacuous}}},
              {"avg_complexity", optional_number(b.avg_complexity)}};
}

Json to_json(const DeviationBound& d) {
  return Json{{"bias_term", number(d.bias_term)},
              {"fluctuation_term", number(d.fluctuation_term)},
              {"value", number(d.value)},
              {"confidence", d.confidence},
              {"vacuous", d.vacuous},
              {"formula", d.formula}};
}

Json to_json(const SavingsSummary& s) {
  return Json{{"baseline_bits", s.baseline_bits},
              {"candidate_bits", s.candidate_bits},
              {"absolute_savings", s.absolute},
              {"relative_savings", s.relative},
              {"broadcast_delta", s.broadcast_delta},
              {"unicast_delta", s.unicast_delta},
              {"baseline_wire", s.baseline_wire},
              {"candidate_wire", s.candidate_wire},
              {"candidate_avg_bits_per_k", s.candidate_avg_bits_per_k},
              {"predicted_bits_per_k", optional_number(s.predicted_bits_per_k)}};
}

Json to_json(const GkDecomposition& dec, const CommonVariableReport& check) {
  Json blocks = Json::array();
  for (BlockLabel c = 0; c < dec.block_count; ++c) {
    std::vector<std::string> first, second;
    for (auto x : dec.partition1.members(c)) first.push_back(dec.partition1.alphabet().symbol(x));
    for (auto y : dec.partition2.members(c)) second.push_back(dec.partition2.alphabet().symbol(y));
    blocks.push_back(Json{{"label", c}, {"mass", dec.p_c[c]}, {"first", first}, {"second", second}});
  }
  return Json{{"block_count", dec.block_count},
              {"p_c", masses(dec.p_c)},
              {"cgk_nats", dec.cgk_nats},
              {"cgk_bits", nats_to_bits(dec.cgk_nats)},
              {"blocks", std::move(blocks)},
              {"disagreement_probability", check.disagreement_probability},
              {"independence_residual", check.max_independence_residual},
              {"maximal", check.maximal}};
}

Json to_json(const ExactLaw& law) {
  return Json{{"pmf", masses(law.pmf)},
              {"enumeration_size", law.enumeration_size},
              {"method", law.method},
              {"degenerate_mass", law.degenerate_mass}};
}

Json scenario_json(const Scenario& sc) { return Json::parse(dump_scenario(sc)); }

Json report_file(const std::string& command, Json body) {
  return Json{{"meta", Json{{"tool", "remgen " + command}, {"version", REMGEN_VERSION}, {"timestamp", utc_now()}}},
              {"body", std::move(body)}};
}

}  // namespace remgen::cli
