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

#include "cmpl/containment.hpp"
#include "cmpl/core.hpp"
#include "cmpl/eval.hpp"
#include "cmpl/order.hpp"

namespace cmpl {

// One statement per relational atom: the atom, conditioned on the rest of
// the body and all comparisons.
inline std::vector<TCStatement> canonical_statements(const Query& q) {
  std::vector<TCStatement> out;
  for (std::size_t i = 0; i < q.body.atoms.size(); ++i) {
    TCStatement c;
    c.name = (q.name.empty() ? std::string("Q") : q.name) + "_" + std::to_string(i + 1);
    c.head = q.body.atoms[i];
    for (std::size_t j = 0; j < q.body.atoms.size(); ++j)
      if (j != i) c.cond.atoms.push_back(q.body.atoms[j]);
    c.cond.cmps = q.body.cmps;
    out.push_back(std::move(c));
  }
  return out;
}

inline void require_full_projection(const std::vector<TCStatement>& cs) {
  for (const auto& c : cs)
    if (!c.full_projection())
      throw Refusal("statement " + c.name +
                    " projects attributes; use the null-aware procedures");
}

inline bool all_relational(const std::vector<TCStatement>& cs) {
  for (const auto& c : cs)
    if (!c.relational()) return false;
  return true;
}

inline std::set<Value> consts_of(const std::vector<TCStatement>& cs) {
  std::set<Value> out;
  for (const auto& c : cs) {
    collect_consts(c.head, out);
    collect_consts(c.cond, out);
  }
  return out;
}

// The least available instance that a database with ideal part d must have
// to satisfy every statement.
inline Instance t_c(const std::vector<TCStatement>& cs, const Instance& d) {
  Instance out;
  for (const auto& c : cs) {
    Query qc = c.query();
    for (auto& t : evaluate_set(qc, d)) out.insert(Atom{c.head.rel, t});
  }
  return out;
}

inline Verdict tc_tc(const std::vector<TCStatement>& premises,
                     const TCStatement& goal) {
  require_full_projection(premises);
  require_full_projection({goal});
  std::vector<Query> containers;
  for (const auto& c : premises)
    if (c.head.rel == goal.head.rel) containers.push_back(c.query());
  Verdict v = contained(goal.query(), containers);
  v.method = "tc-tc/" + v.method;
  if (!v.holds) {
    IncompleteDatabase idb;
    idb.ideal = *v.test_db;
    idb.available = *v.test_db;
    idb.available.erase(Atom{goal.head.rel, *v.test_head});
    v.counterexample = std::move(idb);
    v.notes.push_back("unconstrained fact " + Atom{goal.head.rel, *v.test_head}.repr());
  }
  return v;
}

inline Verdict tc_qc_bag(const std::vector<TCStatement>& premises, const Query& q) {
  require_full_projection(premises);
  Verdict out;
  out.holds = true;
  out.method = "canonical-statements";
  Certificate cert;
  for (const auto& c : canonical_statements(q)) {
    Verdict v = tc_tc(premises, c);
    if (!v.holds) {
      v.method = out.method;
      v.notes.insert(v.notes.begin(), "canonical statement " + c.repr() + " not entailed");
      return v;
    }
    if (v.certificate)
      for (auto& e : v.certificate->entries) cert.entries.push_back(std::move(e));
  }
  out.certificate = std::move(cert);
  return out;
}

inline Verdict tc_qc_set(const std::vector<TCStatement>& premises, const Query& q,
                         std::size_t cap = kDefaultEnumerationCap) {
  require_full_projection(premises);
  auto r = reduce(q);
  if (!r) throw std::invalid_argument("query " + q.name + " is unsatisfiable");
  Verdict v;
  auto check = [&](const Instance& l, const Tuple& head) {
    Instance t = t_c(premises, l);
    if (answers(*r, t, head)) return true;
    v.counterexample = IncompleteDatabase{l, t, Regime::kNoNulls};
    v.test_db = l;
    v.test_head = head;
    return false;
  };
  bool rel_premises = all_relational(premises);
  if (rel_premises && r->relational()) {
    v.method = "frozen-body";
    Frozen fz = freeze(r->body, r->head);
    v.holds = check(fz.facts, substitute(fz.mapping, r->head));
    return v;
  }
  std::set<Value> consts = consts_of(premises);
  auto own = r->consts();
  consts.insert(own.begin(), own.end());
  std::optional<Subst> theta;
  if (rel_premises && r->linear()) theta = generic_valuation(var_list(*r), consts, r->body.cmps);
  if (theta) {
    v.method = "frozen-body-linear";
    Instance l;
    for (const auto& a : r->body.atoms) l.insert(substitute(*theta, a));
    Instance t = t_c(premises, l);
    v.holds = t == l;
    if (!v.holds) {
      v.counterexample = IncompleteDatabase{l, t, Regime::kNoNulls};
      v.test_db = l;
      v.test_head = substitute(*theta, r->head);
    }
    return v;
  }
  v.method = "representative-valuations";
  v.holds = for_each_representative_valuation(
      var_list(*r), consts, r->body.cmps,
      [&](const RepresentativeValuation& rv) {
        Instance l;
        for (const auto& a : r->body.atoms) l.insert(substitute(rv.assignment, a));
        return check(l, substitute(rv.assignment, r->head));
      },
      cap);
  return v;
}

// Second route to set completeness for comparison-free premises: minimal
// queries are set-complete exactly when they are bag-complete.
inline Verdict tc_qc_set_via_minimization(const std::vector<TCStatement>& premises,
                                          const Query& q) {
  if (!all_relational(premises))
    throw Refusal("minimization route needs comparison-free statements");
  Verdict v = tc_qc_bag(premises, minimize(q));
  v.method = "minimize-then-bag";
  return v;
}

inline Verdict tc_qc(const std::vector<TCStatement>& premises, const Query& q,
                     Semantics sem) {
  return sem == Semantics::kBag ? tc_qc_bag(premises, q) : tc_qc_set(premises, q);
}

inline std::vector<TCStatement> weakest_precondition(const Query& q) {
  if (!q.relational())
    throw Refusal("weakest preconditions are only established for queries without comparisons");
  if (!is_minimal(q))
    throw Refusal("query " + q.name + " is not minimal");
  return canonical_statements(q);
}

inline Verdict qc_qc_bag(const std::vector<Query>& premises, const Query& q) {
  std::vector<TCStatement> cs;
  for (const auto& p : premises) {
    auto c = canonical_statements(p);
    cs.insert(cs.end(), c.begin(), c.end());
  }
  Verdict v = tc_qc_bag(cs, q);
  v.method = "qc-qc-bag/" + v.method;
  return v;
}

}  // namespace cmpl
