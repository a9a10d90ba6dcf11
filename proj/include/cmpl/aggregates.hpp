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

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cmpl/completeness.hpp"
#include "cmpl/containment.hpp"
#include "cmpl/core.hpp"
#include "cmpl/eval.hpp"
#include "cmpl/order.hpp"

namespace cmpl {

enum class AggFn : std::uint8_t { kCount, kSum, kMax, kMin };

// Grouping terms are the head of `core` minus, for sum/max/min, its last
// term, which is the aggregated one.
struct AggregateQuery {
  Query core;
  AggFn fn = AggFn::kCount;
};

inline Verdict tc_qc_count(const std::vector<TCStatement>& cs, const AggregateQuery& qa) {
  if (qa.fn != AggFn::kCount) throw std::invalid_argument("not a count query");
  Verdict v = tc_qc_bag(cs, qa.core);
  v.method = "count/" + v.method;
  return v;
}

inline Verdict tc_qc_sum(const std::vector<TCStatement>& cs, const AggregateQuery& qa) {
  if (qa.fn != AggFn::kSum) throw std::invalid_argument("not a sum query");
  if (qa.core.head.empty()) throw std::invalid_argument("sum query needs an aggregated term");
  auto r = reduce(qa.core);
  if (!r) throw std::invalid_argument("query " + qa.core.name + " is unsatisfiable");
  const Term& y = r->head.back();
  bool nonneg = y.is_const()
                    ? Value::number(0) <= y.value
                    : entails(r->body.cmps, {Term::num(0), CmpOp::kLe, y});
  if (!nonneg) throw Refusal("aggregated term " + y.repr() + " is not provably nonnegative");
  Verdict v = tc_qc_bag(cs, *r);
  // Bag completeness of the core always suffices; the converse needs
  // relational statements.
  if (!v.holds && !all_relational(cs))
    throw Refusal("sum reasoning needs statements without comparisons");
  v.method = "sum/" + v.method;
  return v;
}

// Every answer (x, y) of q1 is matched by an answer (x, y') of q2 with
// y' >= y (y' <= y when `reverse`).
inline Verdict dominated(const Query& q1, const Query& q2, bool reverse = false,
                         std::size_t cap = kDefaultEnumerationCap) {
  if (q1.head.size() != q2.head.size() || q1.head.empty())
    throw std::invalid_argument("dominance needs equal, nonempty head arity");
  if (q1.relational() && q2.relational()) {
    Verdict v = contained(q1, {q2}, cap);
    v.method = "dominance-by-containment/" + v.method;
    return v;
  }
  Verdict v;
  v.method = "dominance/representative-valuations";
  auto r = reduce(q1);
  if (!r) {
    v.holds = true;
    return v;
  }
  std::set<Value> consts = r->consts();
  auto c2 = q2.consts();
  consts.insert(c2.begin(), c2.end());
  std::size_t k = r->head.size() - 1;
  v.holds = for_each_representative_valuation(
      var_list(*r), consts, r->body.cmps,
      [&](const RepresentativeValuation& rv) {
        Instance db;
        for (const auto& a : r->body.atoms) db.insert(substitute(rv.assignment, a));
        Tuple h = substitute(rv.assignment, r->head);
        for (const auto& t : evaluate_set(q2, db)) {
          if (!std::equal(t.begin(), t.begin() + static_cast<std::ptrdiff_t>(k), h.begin()))
            continue;
          if (!t[k].is_const() || !h[k].is_const()) continue;
          if (reverse ? t[k].value <= h[k].value : h[k].value <= t[k].value) return true;
        }
        v.test_db = db;
        v.test_head = h;
        return false;
      },
      cap);
  return v;
}

inline Verdict tc_qc_max(const std::vector<TCStatement>& cs, const AggregateQuery& qa,
                         std::size_t cap = kDefaultEnumerationCap) {
  if (qa.fn != AggFn::kMax && qa.fn != AggFn::kMin)
    throw std::invalid_argument("not a max or min query");
  if (qa.core.head.empty()) throw std::invalid_argument("aggregate query needs an aggregated term");
  require_full_projection(cs);
  bool reverse = qa.fn == AggFn::kMin;
  if (qa.core.relational() && all_relational(cs)) {
    Verdict v = tc_qc_set(cs, qa.core, cap);
    v.method = (reverse ? "min/" : "max/") + v.method;
    return v;
  }
  Verdict v;
  v.method = reverse ? "min/representative-valuations" : "max/representative-valuations";
  auto r = reduce(qa.core);
  if (!r) throw std::invalid_argument("query " + qa.core.name + " is unsatisfiable");
  std::set<Value> consts = consts_of(cs);
  auto own = r->consts();
  consts.insert(own.begin(), own.end());
  std::size_t k = r->head.size() - 1;
  v.holds = for_each_representative_valuation(
      var_list(*r), consts, r->body.cmps,
      [&](const RepresentativeValuation& rv) {
        Instance l;
        for (const auto& a : r->body.atoms) l.insert(substitute(rv.assignment, a));
        Instance t = t_c(cs, l);
        Tuple h = substitute(rv.assignment, r->head);
        for (const auto& a : evaluate_set(*r, t)) {
          if (!std::equal(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(k), h.begin()))
            continue;
          if (reverse ? a[k].value <= h[k].value : h[k].value <= a[k].value) return true;
        }
        v.counterexample = IncompleteDatabase{l, t, Regime::kNoNulls};
        v.test_db = l;
        v.test_head = h;
        return false;
      },
      cap);
  return v;
}

inline Verdict tc_qc_aggregate(const std::vector<TCStatement>& cs, const AggregateQuery& qa) {
  switch (qa.fn) {
    case AggFn::kCount: return tc_qc_count(cs, qa);
    case AggFn::kSum: return tc_qc_sum(cs, qa);
    case AggFn::kMax:
    case AggFn::kMin: return tc_qc_max(cs, qa);
  }
  throw std::invalid_argument("unknown aggregate");
}

}  // namespace cmpl
