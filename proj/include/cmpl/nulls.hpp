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
#include "cmpl/containment.hpp"
#include "cmpl/core.hpp"
#include "cmpl/eval.hpp"
#include "cmpl/order.hpp"

namespace cmpl {

// Certain answers. Incomplete facts: nulls are distinct unknown values and
// any tuple with a null is dropped. Partial facts: unknown nulls behave as
// above, not-applicable and ambiguous nulls block joins, and only tuples whose
// nulls are all not-applicable survive.
inline std::set<Tuple> eval_cert(const Query& q, const Instance& d,
                                 Regime regime = Regime::kIncompleteFacts) {
  bool partial = regime == Regime::kPartialFacts;
  auto raw = evaluate_set(q, d, partial ? NullMode::kThreeValued : NullMode::kIdentity);
  std::set<Tuple> out;
  for (const auto& t : raw) {
    bool keep = true;
    for (const auto& x : t)
      if (x.is_null() && !(partial && x.null_kind == NullKind::kNotApplicable)) keep = false;
    if (keep) out.insert(collapse(t));
  }
  return out;
}

inline std::set<Tuple> eval_sql(const Query& q, const Instance& d) {
  std::set<Tuple> out;
  for (const auto& t : evaluate_set(q, d, NullMode::kSql)) out.insert(collapse(t));
  return out;
}

inline Bag eval_sql_bag(const Query& q, const Instance& d) {
  Bag out;
  for (const auto& [t, n] : evaluate_bag(q, d, NullMode::kSql)) out[collapse(t)] += n;
  return out;
}

// T_C with projections: every answer of Q_C over d, with the positions
// outside P replaced by new nulls of kind `pad`.
inline Instance t_c_proj(const std::vector<TCStatement>& cs, const Instance& d,
                         NullKind pad = NullKind::kPlain) {
  Instance out;
  int next = max_null_id(d) + 1;
  for (const auto& c : cs) {
    Query qc = c.query();
    std::vector<int> pos = c.positions();
    std::vector<bool> keep(c.head.args.size(), false);
    for (int p : pos) keep[p - 1] = true;
    for (const auto& t : evaluate_set(qc, d, NullMode::kSql)) {
      Atom f{c.head.rel, t};
      for (std::size_t i = 0; i < keep.size(); ++i)
        if (!keep[i]) f.args[i] = Term::null(pad, next++);
      out.insert(std::move(f));
    }
  }
  return out;
}

namespace detail {

inline void check_projections(const std::vector<TCStatement>& cs) {
  for (const auto& c : cs)
    if (c.projection)
      for (int p : *c.projection)
        if (p < 1 || p > static_cast<int>(c.head.args.size()))
          throw std::invalid_argument("statement " + c.name + " has invalid position " +
                                      std::to_string(p));
}

// Variables occurring once among q's atoms and nowhere in comparisons.
inline std::vector<std::string> singleton_vars(const Query& q,
                                               const std::set<std::string>& exclude = {}) {
  std::map<std::string, int> occ;
  for (const auto& a : q.body.atoms)
    for (const auto& t : a.args)
      if (t.is_var()) ++occ[t.name];
  std::set<std::string> in_cmp;
  for (const auto& m : q.body.cmps) {
    collect_vars(m.lhs, in_cmp);
    collect_vars(m.rhs, in_cmp);
  }
  std::vector<std::string> out;
  for (const auto& [v, n] : occ)
    if (n == 1 && !in_cmp.count(v) && !exclude.count(v)) out.push_back(v);
  return out;
}

// Calls f(θ) for the prototypes of q's remaining variables: the freeze when
// nothing is ordered, otherwise every representative valuation.
template <class F>
bool for_each_prototype(const Query& q, const std::vector<TCStatement>& cs,
                        const Subst& fixed, std::size_t cap, F&& f) {
  std::vector<std::string> rest;
  for (const auto& v : q.vars())
    if (!fixed.count(v)) rest.push_back(v);
  bool ordered = !q.relational() || !all_relational(cs);
  if (!ordered) {
    Query bound = substitute(fixed, q);
    Frozen fz = freeze(bound.body, bound.head);
    Subst s = fixed;
    for (auto& [k, t] : fz.mapping) s[k] = t;
    return f(s);
  }
  std::set<Value> consts = q.consts();
  for (const auto& c : consts_of(cs)) consts.insert(c);
  return for_each_representative_valuation(
      rest, consts, q.body.cmps,
      [&](const RepresentativeValuation& rv) {
        Subst s = fixed;
        for (const auto& [k, t] : rv.assignment) s[k] = t;
        return f(s);
      },
      cap);
}

}  // namespace detail

// Incomplete-facts regime: the prototype's head must be a certain answer over
// the least available database T_C(L).
inline Verdict tc_qc_inc(const std::vector<TCStatement>& cs, const Query& q,
                         std::size_t cap = kDefaultEnumerationCap) {
  detail::check_projections(cs);
  Verdict v;
  v.method = "prototypes/certain-answers";
  auto r = reduce(q);
  if (!r) {
    v.holds = true;
    v.notes.push_back("query is unsatisfiable");
    return v;
  }
  v.holds = detail::for_each_prototype(*r, cs, {}, cap, [&](const Subst& s) {
    Instance l;
    for (const auto& a : r->body.atoms) l.insert(substitute(s, a));
    Instance t = t_c_proj(cs, l);
    Tuple h = substitute(s, r->head);
    if (eval_cert(*r, t).count(collapse(h))) return true;
    v.counterexample = IncompleteDatabase{l, t, Regime::kIncompleteFacts};
    v.test_db = l;
    v.test_head = h;
    return false;
  });
  return v;
}

// Restricted-facts regime (not-applicable nulls only, SQL evaluation). Every
// null version of the body is checked: any subset of the singleton
// variables set to distinct not-applicable nulls.
inline Verdict tc_qc_res(const std::vector<TCStatement>& cs, const Query& q,
                         std::size_t cap = kDefaultEnumerationCap) {
  detail::check_projections(cs);
  Verdict v;
  auto r = reduce(q);
  if (!r) {
    v.holds = true;
    v.method = "null-versions";
    v.notes.push_back("query is unsatisfiable");
    return v;
  }
  auto singles = detail::singleton_vars(*r);
  // A distinguished singleton variable turns into a null answer in the
  // all-null version, which hides the loss of its non-null answers.
  std::set<std::string> head_vars;
  for (const auto& t : r->head) collect_vars(t, head_vars);
  bool head_single = false;
  for (const auto& s : singles) head_single = head_single || head_vars.count(s);
  bool shortcut = r->boolean() || (r->linear() && !head_single);
  v.method = shortcut ? "null-versions/all-null" : "null-versions";
  if (singles.size() > 20) throw LimitExceeded("too many singleton variables");
  std::size_t first = shortcut ? (std::size_t{1} << singles.size()) - 1 : 0;
  for (std::size_t mask = first; mask < (std::size_t{1} << singles.size()); ++mask) {
    Subst nulls;
    int id = 1;
    for (std::size_t i = 0; i < singles.size(); ++i)
      if (mask >> i & 1) nulls.emplace(singles[i], Term::null(NullKind::kNotApplicable, id++));
    bool ok = detail::for_each_prototype(*r, cs, nulls, cap, [&](const Subst& s) {
      Instance l;
      for (const auto& a : r->body.atoms) l.insert(substitute(s, a));
      Tuple h = collapse(substitute(s, r->head));
      if (!eval_sql(*r, l).count(h)) return true;
      Instance t = t_c_proj(cs, l, NullKind::kNotApplicable);
      if (eval_sql(*r, t).count(h)) return true;
      Instance ideal = l;
      ideal.insert(t.begin(), t.end());
      v.counterexample = IncompleteDatabase{ideal, t, Regime::kRestrictedFacts};
      v.test_db = l;
      v.test_head = h;
      return false;
    });
    if (!ok) {
      v.holds = false;
      return v;
    }
  }
  v.holds = true;
  return v;
}

// Partial facts with unknown and not-applicable nulls: same verdicts as the
// restricted regime.
inline Verdict tc_qc_3null(const std::vector<TCStatement>& cs, const Query& q,
                           std::size_t cap = kDefaultEnumerationCap) {
  Verdict v = tc_qc_res(cs, q, cap);
  v.method = "three-null/" + v.method;
  return v;
}

// Merges facts that agree on their key, keeping non-null values. Throws if
// two facts with one key carry different non-null values at some position.
inline Instance chase(const Instance& d, const Keys& keys) {
  std::vector<Atom> facts(d.begin(), d.end());
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < facts.size() && !changed; ++i) {
      auto k = keys.find(facts[i].rel);
      if (k == keys.end()) continue;
      for (std::size_t j = i + 1; j < facts.size() && !changed; ++j) {
        if (facts[j].rel != facts[i].rel) continue;
        bool same_key = true;
        for (int p = 0; p < k->second && same_key; ++p) {
          const Term& a = facts[i].args[static_cast<std::size_t>(p)];
          if (a.is_null()) throw std::invalid_argument("null in key position of " + facts[i].repr());
          same_key = a == facts[j].args[static_cast<std::size_t>(p)];
        }
        if (!same_key) continue;
        Atom merged = facts[i];
        for (std::size_t p = 0; p < merged.args.size(); ++p) {
          const Term& a = facts[i].args[p];
          const Term& b = facts[j].args[p];
          if (a == b || b.is_null()) continue;
          if (a.is_null()) {
            merged.args[p] = b;
            continue;
          }
          throw std::runtime_error("key violation between " + facts[i].repr() + " and " +
                                   facts[j].repr());
        }
        facts[i] = merged;
        facts.erase(facts.begin() + static_cast<std::ptrdiff_t>(j));
        changed = true;
      }
    }
  }
  return Instance(facts.begin(), facts.end());
}

namespace detail {

// Unifies non-key terms of body atoms that agree on their key terms. Returns
// nullopt when two distinct constants would have to be equal.
inline std::optional<Query> chase_body(const Query& q, const Keys& keys) {
  Query cur = q;
  bool changed = true;
  while (changed) {
    changed = false;
    auto& atoms = cur.body.atoms;
    for (std::size_t i = 0; i < atoms.size() && !changed; ++i) {
      auto k = keys.find(atoms[i].rel);
      if (k == keys.end()) continue;
      for (std::size_t j = i + 1; j < atoms.size() && !changed; ++j) {
        if (atoms[j].rel != atoms[i].rel) continue;
        bool same_key = true;
        for (int p = 0; p < k->second && same_key; ++p)
          same_key = atoms[i].args[static_cast<std::size_t>(p)] ==
                     atoms[j].args[static_cast<std::size_t>(p)];
        if (!same_key) continue;
        for (std::size_t p = 0; p < atoms[i].args.size(); ++p) {
          const Term a = atoms[i].args[p];
          const Term b = atoms[j].args[p];
          if (a == b) continue;
          Subst s;
          if (b.is_var()) {
            s.emplace(b.name, a);
          } else if (a.is_var()) {
            s.emplace(a.name, b);
          } else {
            return std::nullopt;
          }
          cur = substitute(s, cur);
          changed = true;
          break;
        }
        if (!changed) {
          atoms.erase(atoms.begin() + static_cast<std::ptrdiff_t>(j));
          changed = true;
        }
      }
    }
  }
  return cur;
}

}  // namespace detail

// Bag semantics under keys. Only key-preserving statements are allowed. The
// crucial variables (head plus key positions) fix answers and multiplicities.
inline Verdict tc_qc_bag_keys(const std::vector<TCStatement>& cs, const Query& q,
                              const Keys& keys, std::size_t cap = kDefaultEnumerationCap) {
  detail::check_projections(cs);
  for (const auto& a : q.body.atoms)
    if (!keys.count(a.rel)) throw Refusal("no key declared for relation " + a.rel);
  for (const auto& c : cs) {
    auto k = keys.find(c.head.rel);
    int kk = k == keys.end() ? 0 : k->second;
    auto pos = c.positions();
    std::set<int> p(pos.begin(), pos.end());
    for (int i = 1; i <= kk; ++i)
      if (!p.count(i)) throw Refusal("statement " + c.name + " is not key-preserving");
  }
  Verdict v;
  v.method = "crucial-variables/chase";
  auto r0 = reduce(q);
  std::optional<Query> r = r0 ? detail::chase_body(*r0, keys) : std::nullopt;
  if (!r) {
    v.holds = true;
    v.notes.push_back("query is unsatisfiable under the keys");
    return v;
  }
  std::set<std::string> key_vars;
  for (const auto& a : r->body.atoms) {
    int k = keys.at(a.rel);
    for (int p = 0; p < k; ++p) collect_vars(a.args[static_cast<std::size_t>(p)], key_vars);
  }
  Query crucial = *r;
  crucial.name = r->name + "_crucial";
  std::set<std::string> in_head;
  for (const auto& t : r->head) collect_vars(t, in_head);
  for (const auto& kv : key_vars)
    if (!in_head.count(kv)) crucial.head.push_back(Term::var(kv));
  Subst nulls;
  int id = 1;
  for (const auto& s : detail::singleton_vars(*r, key_vars))
    nulls.emplace(s, Term::null(NullKind::kNotApplicable, id++));
  v.holds = detail::for_each_prototype(*r, cs, nulls, cap, [&](const Subst& s) {
    Instance l;
    for (const auto& a : r->body.atoms) l.insert(substitute(s, a));
    Instance chased;
    try {
      chased = chase(l, keys);
    } catch (const std::runtime_error&) {
      return true;  // the valuation breaks a key: not a database
    }
    Tuple w = collapse(substitute(s, crucial.head));
    Instance t = chase(t_c_proj(cs, chased, NullKind::kNotApplicable), keys);
    if (eval_sql(crucial, t).count(w)) return true;
    v.counterexample = IncompleteDatabase{chased, t, Regime::kRestrictedFacts};
    v.test_db = chased;
    v.test_head = w;
    return false;
  });
  return v;
}

}  // namespace cmpl
