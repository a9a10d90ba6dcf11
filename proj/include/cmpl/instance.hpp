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

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cmpl/completeness.hpp"
#include "cmpl/core.hpp"
#include "cmpl/eval.hpp"

namespace cmpl {

namespace detail {

// Values a variable may take in an extension of d: every known constant plus
// `extra` new ones. With comparisons around, the new values are spread over
// every gap between known constants so that each order type is reachable.
inline std::vector<Value> extension_pool(const std::set<Value>& known,
                                         std::size_t extra, bool ordered) {
  std::vector<Value> pool(known.begin(), known.end());
  if (!ordered) {
    Rational next = max_fresh_index(known) + Rational(1);
    for (std::size_t i = 0; i < extra; ++i) {
      pool.push_back(Value::fresh(next));
      next = next + Rational(1);
    }
    return pool;
  }
  std::vector<Value> base = pool;
  auto run = [&](std::optional<Value> lo, std::optional<Value> hi) {
    std::vector<std::optional<Value>> fixed;
    if (lo) fixed.push_back(lo);
    for (std::size_t i = 0; i < extra; ++i) fixed.push_back(std::nullopt);
    if (hi) fixed.push_back(hi);
    auto vals = realize_blocks(fixed);
    for (std::size_t i = lo ? 1 : 0; i < (lo ? 1 : 0) + extra; ++i) pool.push_back(vals[i]);
  };
  if (base.empty()) {
    run(std::nullopt, std::nullopt);
  } else {
    run(std::nullopt, base.front());
    for (std::size_t i = 1; i < base.size(); ++i) run(base[i - 1], base[i]);
    run(base.back(), std::nullopt);
  }
  return pool;
}

// Calls f(D̂) for every d ∪ vB with v : vars(q) -> pool satisfying q's
// comparisons.
template <class F>
bool for_each_extension(const Instance& d, const Query& q,
                        const std::vector<Value>& pool, std::size_t cap, F&& f) {
  std::vector<std::string> vars = var_list(q);
  double total = 1;
  for (std::size_t i = 0; i < vars.size(); ++i) total *= static_cast<double>(pool.size());
  if (total > static_cast<double>(cap))
    throw LimitExceeded("extension enumeration exceeds limit");
  std::vector<std::size_t> idx(vars.size(), 0);
  while (true) {
    Subst s;
    for (std::size_t i = 0; i < vars.size(); ++i)
      s.emplace(vars[i], Term::constant(pool[idx[i]]));
    bool ok = true;
    for (const auto& m : q.body.cmps) {
      Comparison g = substitute(s, m);
      if (!cmp_holds(g.lhs, g.op, g.rhs)) ok = false;
    }
    if (ok) {
      Instance ext = d;
      for (const auto& a : q.body.atoms) ext.insert(substitute(s, a));
      if (ext != d && !f(ext)) return false;
    }
    std::size_t k = 0;
    while (k < idx.size() && ++idx[k] == pool.size()) idx[k++] = 0;
    if (k == idx.size()) break;
  }
  return true;
}

inline bool any_comparisons(const Query& q, const std::vector<TCStatement>& cs) {
  return !q.relational() || !all_relational(cs);
}

}  // namespace detail

// Can some ideal database d ∪ vB that is consistent with the statements
// (having d as its available part) change the answer of q?
inline Verdict tc_qc_instance(const Instance& d, const std::vector<TCStatement>& cs,
                              const Query& q, std::size_t cap = kDefaultEnumerationCap) {
  require_full_projection(cs);
  std::set<Value> known = instance_consts(d);
  for (const auto& c : q.consts()) known.insert(c);
  for (const auto& c : consts_of(cs)) known.insert(c);
  auto pool = detail::extension_pool(known, q.vars().size(), detail::any_comparisons(q, cs));
  auto base = evaluate_set(q, d);
  Verdict v;
  v.method = "instance-extensions";
  v.holds = detail::for_each_extension(d, q, pool, cap, [&](const Instance& ext) {
    IncompleteDatabase idb{ext, d, Regime::kNoNulls};
    for (const auto& c : cs)
      if (!satisfies_tc(idb, c)) return true;
    if (evaluate_set(q, ext) == base) return true;
    v.counterexample = idb;
    return false;
  });
  return v;
}

inline Verdict qc_qc_instance(const Instance& d, const std::vector<Query>& premises,
                              const Query& q, std::size_t cap = kDefaultEnumerationCap) {
  std::set<Value> known = instance_consts(d);
  bool ordered = !q.relational();
  for (const auto& c : q.consts()) known.insert(c);
  for (const auto& p : premises) {
    for (const auto& c : p.consts()) known.insert(c);
    ordered = ordered || !p.relational();
  }
  auto pool = detail::extension_pool(known, q.vars().size(), ordered);
  std::vector<std::set<Tuple>> before;
  for (const auto& p : premises) before.push_back(evaluate_set(p, d));
  auto base = evaluate_set(q, d);
  Verdict v;
  v.method = "instance-extensions";
  v.holds = detail::for_each_extension(d, q, pool, cap, [&](const Instance& ext) {
    for (std::size_t i = 0; i < premises.size(); ++i)
      if (evaluate_set(premises[i], ext) != before[i]) return true;
    if (evaluate_set(q, ext) == base) return true;
    v.counterexample = IncompleteDatabase{ext, d, Regime::kNoNulls};
    return false;
  });
  return v;
}

struct DimensionReport {
  std::map<Tuple, bool> complete;  // dimension value -> complete
  bool new_values_possible = false;
  std::map<Tuple, Verdict> details;
};

inline DimensionReport dimension_analysis(const Instance& d,
                                          const std::vector<TCStatement>& cs,
                                          const Query& q,
                                          const std::vector<std::string>& dims,
                                          std::size_t cap = kDefaultEnumerationCap) {
  std::vector<std::size_t> pos;
  for (const auto& name : dims) {
    std::optional<std::size_t> at;
    for (std::size_t i = 0; i < q.head.size() && !at; ++i)
      if (q.head[i] == Term::var(name)) at = i;
    if (!at) throw std::invalid_argument("dimension " + name + " is not a head variable of " + q.name);
    pos.push_back(*at);
  }
  auto bind = [&](const Tuple& vals) {
    Subst s;
    for (std::size_t i = 0; i < dims.size(); ++i) s.emplace(dims[i], vals[i]);
    return substitute(s, q);
  };
  DimensionReport rep;
  std::set<Tuple> present;
  for (const auto& t : evaluate_set(q, d)) {
    Tuple key;
    for (std::size_t p : pos) key.push_back(t[p]);
    present.insert(key);
  }
  for (const auto& key : present) {
    Verdict v = tc_qc_instance(d, cs, bind(key), cap);
    rep.complete[key] = v.holds;
    rep.details.emplace(key, std::move(v));
  }
  std::set<Value> known = instance_consts(d);
  std::vector<Value> cand(known.begin(), known.end());
  Rational next = max_fresh_index(known) + Rational(1);
  for (std::size_t i = 0; i < dims.size(); ++i) {
    cand.push_back(Value::fresh(next));
    next = next + Rational(1);
  }
  std::vector<std::size_t> idx(dims.size(), 0);
  while (!rep.new_values_possible && !cand.empty()) {
    Tuple key;
    for (std::size_t i : idx) key.push_back(Term::constant(cand[i]));
    if (!present.count(key) && !tc_qc_instance(d, cs, bind(key), cap).holds)
      rep.new_values_possible = true;
    std::size_t k = 0;
    while (k < idx.size() && ++idx[k] == cand.size()) idx[k++] = 0;
    if (k == idx.size()) break;
  }
  return rep;
}

}  // namespace cmpl
