// Copyright 2026 The remgen Authors
// SPDX-License-Identifier: Apache-2.0

#include "remgen/scenario_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "remgen/error.hpp"

namespace remgen {

namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void bad(const std::string& field, const std::string& detail) {
  throw Error(ErrorKind::InvalidScenario, field + ": " + detail);
}

const json& need(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) bad(where + key, "missing");
  return obj.at(key);
}

template <class T>
T get_as(const json& j, const std::string& field) {
  try {
    return j.get<T>();
  } catch (const json::exception& e) {
    bad(field, e.what());
  }
}

std::vector<double> real_list(const json& j, const std::string& field) {
  if (!j.is_array()) bad(field, "expected a list of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) bad(field + "[" + std::to_string(i) + "]", "expected a number");
    out.push_back(j[i].get<double>());
  }
  return out;
}

std::vector<std::vector<double>> per_decoder_lists(const json& root, const char* plural, const char* single,
                                                   const std::vector<Alphabet>& alphabets) {
  if (root.contains(plural)) {
    const json& j = root.at(plural);
    if (!j.is_array()) bad(plural, "expected one list per decoder");
    std::vector<std::vector<double>> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
      out.push_back(real_list(j[i], std::string(plural) + "[" + std::to_string(i) + "]"));
    }
    return out;
  }
  if (root.contains(single)) {
    if (!(alphabets[0] == alphabets[1])) bad(single, "a shared entry needs both decoders to use the same alphabet");
    auto v = real_list(root.at(single), single);
    return {v, v};
  }
  bad(plural, "missing (or give a shared '" + std::string(single) + "')");
}

template <class Make>
auto guarded(const std::string& field, Make make) {
  try {
    return make();
  } catch (const Error& e) {
    bad(field, e.what());
  }
}

}  // namespace

Scenario parse_scenario(std::string_view json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    bad("parse", e.what());
  }
  if (!root.is_object()) bad("parse", "top level must be an object");
  const int version = get_as<int>(need(root, "version", ""), "version");
  if (version != kScenarioVersion) bad("version", "unsupported version " + std::to_string(version));

  const json& alph = need(root, "alphabets", "");
  if (!alph.is_array() || alph.size() != 2) bad("alphabets", "expected two symbol lists");
  std::vector<Alphabet> alphabets;
  for (std::size_t i = 0; i < 2; ++i) {
    const std::string field = "alphabets[" + std::to_string(i) + "]";
    auto names = get_as<std::vector<std::string>>(alph[i], field);
    alphabets.push_back(guarded(field, [&] { return Alphabet(std::move(names)); }));
  }

  const json& jj = need(root, "joint", "");
  if (!jj.is_array() || jj.size() != alphabets[0].size()) {
    bad("joint", "expected " + std::to_string(alphabets[0].size()) + " rows");
  }
  std::vector<double> cells;
  for (std::size_t r = 0; r < jj.size(); ++r) {
    auto row = real_list(jj[r], "joint[" + std::to_string(r) + "]");
    if (row.size() != alphabets[1].size()) {
      bad("joint[" + std::to_string(r) + "]", "expected " + std::to_string(alphabets[1].size()) + " columns");
    }
    cells.insert(cells.end(), row.begin(), row.end());
  }
  JointPmf joint = guarded("joint", [&] { return JointPmf(alphabets[0], alphabets[1], std::move(cells)); });

  const auto target_lists = per_decoder_lists(root, "targets", "target", alphabets);
  if (target_lists.size() != 2) bad("targets", "expected two targets");
  std::vector<Pmf> targets;
  for (std::size_t i = 0; i < 2; ++i) {
    const std::string field = "targets[" + std::to_string(i) + "]";
    if (target_lists[i].size() != alphabets[i].size()) {
      bad(field, "expected " + std::to_string(alphabets[i].size()) + " masses");
    }
    targets.push_back(guarded(field, [&] { return Pmf(alphabets[i], target_lists[i]); }));
  }
  auto functions = per_decoder_lists(root, "functions", "function", alphabets);

  std::optional<std::pair<Partition, Partition>> partitions;
  if (root.contains("partitions")) {
    const json& jp = root.at("partitions");
    if (!jp.is_array() || jp.size() != 2) bad("partitions", "expected two label lists");
    auto l1 = get_as<std::vector<BlockLabel>>(jp[0], "partitions[0]");
    auto l2 = get_as<std::vector<BlockLabel>>(jp[1], "partitions[1]");
    if (l1.size() != alphabets[0].size() || l2.size() != alphabets[1].size()) {
      bad("partitions", "label lists must match the alphabet sizes");
    }
    std::size_t space = 0;
    for (auto v : l1) space = std::max(space, v + 1);
    for (auto v : l2) space = std::max(space, v + 1);
    partitions.emplace(guarded("partitions[0]", [&] { return Partition(alphabets[0], l1, space); }),
                       guarded("partitions[1]", [&] { return Partition(alphabets[1], l2, space); }));
  }

  ScenarioParams params;
  if (root.contains("params")) {
    const json& jp = root.at("params");
    if (!jp.is_object()) bad("params", "expected an object");
    if (jp.contains("t")) params.t = get_as<double>(jp.at("t"), "params.t");
    if (jp.contains("t_c")) params.t_c = get_as<double>(jp.at("t_c"), "params.t_c");
    if (jp.contains("K")) params.K = get_as<std::size_t>(jp.at("K"), "params.K");
    if (jp.contains("seed")) params.seed = get_as<std::uint64_t>(jp.at("seed"), "params.seed");
    if (jp.contains("label")) params.label = get_as<std::string>(jp.at("label"), "params.label");
    if (jp.contains("atol")) params.atol = get_as<double>(jp.at("atol"), "params.atol");
    if (jp.contains("group_size")) params.group_size = get_as<std::size_t>(jp.at("group_size"), "params.group_size");
    if (jp.contains("rejection_cap") && !jp.at("rejection_cap").is_null()) {
      params.rejection_cap = get_as<std::uint64_t>(jp.at("rejection_cap"), "params.rejection_cap");
    }
    if (jp.contains("n_overrides")) {
      const json& o = jp.at("n_overrides");
      if (!o.is_object()) bad("params.n_overrides", "expected an object");
      if (o.contains("n_c")) params.n_overrides.n_c = get_as<std::size_t>(o.at("n_c"), "params.n_overrides.n_c");
      if (o.contains("n_ref")) {
        params.n_overrides.n_ref =
            get_as<std::vector<std::vector<std::size_t>>>(o.at("n_ref"), "params.n_overrides.n_ref");
      }
      if (o.contains("naive")) {
        params.n_overrides.naive = get_as<std::vector<std::size_t>>(o.at("naive"), "params.n_overrides.naive");
      }
    }
  }
  const Mode mode = root.contains("mode") ? mode_from_string(get_as<std::string>(root.at("mode"), "mode")) : Mode::Both;

  Scenario sc{std::move(joint), std::move(targets), std::move(functions), std::move(partitions), params, mode};
  validate_scenario(sc);
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("file", "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

namespace {

json to_json(const Scenario& sc) {
  json root;
  root["version"] = kScenarioVersion;
  // json::array: a braced pair of two-symbol lists would otherwise become an object
  root["alphabets"] = json::array({sc.joint.first().symbols(), sc.joint.second().symbols()});
  json rows = json::array();
  for (std::size_t r = 0; r < sc.joint.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < sc.joint.cols(); ++c) row.push_back(sc.joint.at(r, c));
    rows.push_back(std::move(row));
  }
  root["joint"] = std::move(rows);
  json targets = json::array();
  for (const auto& t : sc.targets) targets.push_back(std::vector<double>(t.masses().begin(), t.masses().end()));
  root["targets"] = std::move(targets);
  root["functions"] = sc.functions;
  if (sc.partitions) {
    const auto& [a, b] = *sc.partitions;
    root["partitions"] = json::array({std::vector<BlockLabel>(a.labels().begin(), a.labels().end()),
                                      std::vector<BlockLabel>(b.labels().begin(), b.labels().end())});
  }
  const auto& p = sc.params;
  json params;
  params["t"] = p.t;
  params["t_c"] = p.t_c;
  params["K"] = p.K;
  params["seed"] = p.seed;
  params["label"] = p.label;
  json o = json::object();
  if (p.n_overrides.n_c) o["n_c"] = *p.n_overrides.n_c;
  if (p.n_overrides.n_ref) o["n_ref"] = *p.n_overrides.n_ref;
  if (p.n_overrides.naive) o["naive"] = *p.n_overrides.naive;
  params["n_overrides"] = std::move(o);
  params["rejection_cap"] = p.rejection_cap ? json(*p.rejection_cap) : json(nullptr);
  params["atol"] = p.atol;
  params["group_size"] = p.group_size;
  root["params"] = std::move(params);
  root["mode"] = to_string(sc.mode);
  return root;
}

}  // namespace

std::string dump_scenario(const Scenario& sc) { return to_json(sc).dump(2) + "\n"; }

std::string scenario_fingerprint(const Scenario& sc) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(to_json(sc).dump())));
  return buf;
}

}  // namespace remgen
