// Copyright 2026 The cmpl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
#pragma once

#include <string>
#include <vector>

#include "cmpl/core.hpp"
#include "json.hpp"

namespace cmpl {

inline nlohmann::json facts_json(const Instance& d) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& f : d) out.push_back(f.repr());
  return out;
}

inline nlohmann::json tuple_json(const Tuple& t) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& x : t) out.push_back(x.repr());
  return out;
}

inline const char* regime_name(Regime r) {
  switch (r) {
    case Regime::kNoNulls: return "no-nulls";
    case Regime::kIncompleteFacts: return "incomplete-facts";
    case Regime::kRestrictedFacts: return "restricted-facts";
    case Regime::kPartialFacts: return "partial-facts";
  }
  return "";
}

inline nlohmann::json verdict_json(const Verdict& v) {
  nlohmann::json out;
  out["holds"] = v.holds;
  out["method"] = v.method;
  nlohmann::json w = nlohmann::json::object();
  if (v.certificate) {
    nlohmann::json cert = nlohmann::json::array();
    for (const auto& e : v.certificate->entries) {
      nlohmann::json m = nlohmann::json::object();
      for (const auto& [k, t] : e.mapping) m[k] = t.repr();
      cert.push_back({{"test_db", facts_json(e.test_db)},
                      {"head", tuple_json(e.head)},
                      {"container", e.container},
                      {"mapping", m}});
    }
    w["certificate"] = cert;
  }
  if (v.counterexample) {
    w["ideal"] = facts_json(v.counterexample->ideal);
    w["available"] = facts_json(v.counterexample->available);
    w["regime"] = regime_name(v.counterexample->regime);
  }
  if (v.test_db) w["test_db"] = facts_json(*v.test_db);
  if (v.test_head) w["head"] = tuple_json(*v.test_head);
  if (v.trace) {
    nlohmann::json steps = nlohmann::json::array();
    for (std::size_t i = 0; i < v.trace->ideal.size(); ++i)
      steps.push_back({{"action", v.trace->actions[i]},
                       {"ideal", facts_json(v.trace->ideal[i])},
                       {"available", facts_json(v.trace->available[i])}});
    w["trace"] = steps;
  }
  out["witness"] = w;
  if (!v.notes.empty()) out["notes"] = v.notes;
  return out;
}

inline std::string emit_verdict(const Verdict& v) { return verdict_json(v).dump(2); }

inline std::string emit_refusal(const std::string& why) {
  nlohmann::json out;
  out["holds"] = nullptr;
  out["refused"] = why;
  return out.dump(2);
}

inline std::string human_verdict(const Verdict& v) {
  std::string out = std::string(v.holds ? "holds" : "does not hold") + " (" + v.method + ")\n";
  for (const auto& n : v.notes) out += "  " + n + "\n";
  auto list = [&](const char* label, const Instance& d) {
    out += std::string("  ") + label + ":\n";
    for (const auto& f : d) out += "    " + f.repr() + "\n";
  };
  if (v.counterexample) {
    list("ideal", v.counterexample->ideal);
    list("available", v.counterexample->available);
  } else if (v.test_db) {
    list("test database", *v.test_db);
  }
  if (v.test_head) out += "  head: " + tuple_repr(*v.test_head) + "\n";
  return out;
}

}  // namespace cmpl
