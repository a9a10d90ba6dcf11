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

#include "cmpl/core.hpp"
#include "cmpl/eval.hpp"
#include "cmpl/order.hpp"

namespace cmpl {

inline std::set<Value> consts_of(const std::vector<Query>& qs) {
  std::set<Value> out;
  for (const auto& q : qs) {
    auto c = q.consts();
    out.insert(c.begin(), c.end());
  }
  return out;
}

inline std::vector<std::string> var_list(const Query& q) {
  auto v = q.vars();
  return {v.begin(), v.end()};
}

inline bool is_safe(const Query& q) {
  std::set<std::string> bound;
  for (const auto& a : q.body.atoms) collect_vars(a, bound);
  for (const auto& v : q.vars())
    if (!bound.count(v)) return false;
  return true;
}

namespace detail {

// Finds a container with a valuation into db producing head.
inline bool covered(const std::vector<Query>& containers, const Instance& db,
                    const Tuple& head, Certificate* cert) {
  for (std::size_t j = 0; j < containers.size(); ++j) {
    Subst seed;
    if (!bind_head(containers[j].head, head, seed)) continue;
    std::optional<Subst> hit;
    for_each_valuation(
        containers[j].body, db,
        [&](const Subst& s) {
          hit = s;
          return false;
        },
        NullMode::kIdentity, seed);
    if (hit) {
      if (cert) cert->entries.push_back({db, head, j, *hit});
      return true;
    }
  }
  return false;
}

}  // namespace detail

// q1 contained in the union of `containers` under set semantics.
inline Verdict contained(const Query& q1, const std::vector<Query>& containers,
                         std::size_t cap = kDefaultEnumerationCap) {
  for (const auto& q : containers)
    if (q.head.size() != q1.head.size())
      throw std::invalid_argument("head arity mismatch between " + q1.name +
                                  " and " + q.name);
  Verdict v;
  auto r = reduce(q1);
  if (!r) {
    v.holds = true;
    v.method = "unsatisfiable-containee";
    v.certificate = Certificate{};
    return v;
  }
  bool relational = true;
  for (const auto& q : containers) relational = relational && q.relational();

  Certificate cert;
  auto fail = [&](Instance db, Tuple head) {
    v.holds = false;
    v.test_db = std::move(db);
    v.test_head = std::move(head);
    return v;
  };

  std::set<Value> consts = consts_of(containers);
  auto own = r->consts();
  consts.insert(own.begin(), own.end());

  if (relational) {
    // The generic valuation must avoid the containers' constants as well.
    std::optional<Subst> theta;
    if (!r->relational()) theta = generic_valuation(var_list(*r), consts, r->body.cmps);
    if (r->relational() || theta) {
      v.method = "frozen-body";
      Instance db;
      Tuple head;
      if (r->relational()) {
        Frozen fz = freeze(r->body, r->head);
        db = fz.facts;
        head = substitute(fz.mapping, r->head);
      } else {
        for (const auto& a : r->body.atoms) db.insert(substitute(*theta, a));
        head = substitute(*theta, r->head);
      }
      if (!detail::covered(containers, db, head, &cert)) return fail(db, head);
      v.holds = true;
      v.certificate = std::move(cert);
      return v;
    }
  }

  v.method = "representative-valuations";
  std::optional<std::pair<Instance, Tuple>> bad;
  for_each_representative_valuation(
      var_list(*r), consts, r->body.cmps,
      [&](const RepresentativeValuation& rv) {
        Instance db;
        for (const auto& a : r->body.atoms) db.insert(substitute(rv.assignment, a));
        Tuple head = substitute(rv.assignment, r->head);
        if (detail::covered(containers, db, head, &cert)) return true;
        bad.emplace(std::move(db), std::move(head));
        return false;
      },
      cap);
  if (bad) return fail(bad->first, bad->second);
  v.holds = true;
  v.certificate = std::move(cert);
  return v;
}

inline bool is_contained(const Query& q1, const Query& q2) {
  return contained(q1, {q2}).holds;
}

inline bool equivalent(const Query& a, const Query& b) {
  return is_contained(a, b) && is_contained(b, a);
}

namespace detail {

// q without its i-th atom. Variables left without an atom are projected out
// of the comparisons: over a dense order the projection is the set of
// implied relations among the remaining terms.
inline Query drop_atom(const Query& q, std::size_t i) {
  Query out = q;
  out.body.atoms.erase(out.body.atoms.begin() + static_cast<std::ptrdiff_t>(i));
  std::set<std::string> bound;
  for (const auto& a : out.body.atoms) collect_vars(a, bound);
  bool orphans = false;
  for (const auto& m : out.body.cmps)
    for (const Term* t : {&m.lhs, &m.rhs})
      if (t->is_var() && !bound.count(t->name)) orphans = true;
  if (!orphans) return out;
  OrderClosure oc(q.body.cmps);
  const auto& terms = oc.terms();
  auto kept = [&](const Term& t) { return t.is_const() || (t.is_var() && bound.count(t.name)); };
  out.body.cmps.clear();
  for (std::size_t a = 0; a < terms.size(); ++a)
    for (std::size_t b = 0; b < terms.size(); ++b) {
      if (a == b || !kept(terms[a]) || !kept(terms[b])) continue;
      if (terms[a].is_const() && terms[b].is_const()) continue;
      auto r = oc.rel(a, b);
      if (r == OrderClosure::kLt) out.body.cmps.push_back({terms[a], CmpOp::kLt, terms[b]});
      if (r == OrderClosure::kLe) out.body.cmps.push_back({terms[a], CmpOp::kLe, terms[b]});
    }
  return out;
}

}  // namespace detail

// Merges forced equalities, then removes, one at a time and in input order,
// the first atom whose removal keeps the query safe and equivalent.
inline Query minimize(const Query& q) {
  auto r = reduce(q);
  if (!r) throw std::invalid_argument("cannot minimize unsatisfiable query " + q.name);
  Query cur = *r;
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < cur.body.atoms.size(); ++i) {
      Query cand = detail::drop_atom(cur, i);
      if (!is_safe(cand)) continue;
      if (is_contained(cand, cur)) {
        cur = std::move(cand);
        changed = true;
        break;
      }
    }
  }
  return cur;
}

inline bool is_minimal(const Query& q) {
  return minimize(q).body.atoms.size() == q.body.atoms.size();
}

}  // namespace cmpl
