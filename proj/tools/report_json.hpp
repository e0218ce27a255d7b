// Copyright 2026 The remgen Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include <json.hpp>

#include "remgen/bounds.hpp"
#include "remgen/common_info.hpp"
#include "remgen/oracles.hpp"
#include "remgen/protocol.hpp"

namespace remgen::cli {

using Json = nlohmann::ordered_json;

Json to_json(const SampleSizes& s);
Json to_json(const CostLedger& ledger, bool per_k);
Json to_json(const DecoderResult& r);
Json to_json(const RunReport& r, bool per_k);
Json to_json(const BoundReport& b);
Json to_json(const DeviationBound& d);
Json to_json(const SavingsSummary& s);
Json to_json(const GkDecomposition& dec, const CommonVariableReport& check);
Json to_json(const ExactLaw& law);
Json scenario_json(const Scenario& sc);

/// {"meta": {tool, version, timestamp}, "body": body}.
Json report_file(const std::string& command, Json body);

/// Numbers that may be infinite are written as strings ("inf").
Json number(double v);

}  // namespace remgen::cli
