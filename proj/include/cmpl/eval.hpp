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

#include <algorithm>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cmpl/core.hpp"

namespace cmpl {

// How a valuation may bind variables to null tokens.
//   kIdentity:    a null is an ordinary value equal only to itself.
//   kSql:         variables occurring twice or more among the atoms (join
//                 variables) never bind a null; null in a query atom matches
//                 nothing.
//   kThreeValued: join variables may bind only unknown nulls (and plain
//                 nulls, read as unknown); not-applicable and ambiguous nulls
//                 block joins.
enum class NullMode : std::uint8_t { kIdentity, kSql, kThreeValued };

namespace detail {

inline bool can_join_on(const Term& v, NullMode mode) {
  if (!v.is_null()) return true;
  switch (mode) {
    case NullMode::kIdentity: return true;
    case NullMode::kSql: return false;
    case NullMode::kThreeValued:
      return v.null_kind == NullKind::kUnknown || v.null_kind == NullKind::kPlain;
  }
  return false;
}

inline bool cmp_holds(const Term& l, CmpOp op, const Term& r) {
  if (!l.is_const() || !r.is_const()) return false;
  return holds(l.value, op, r.value);
}

class Matcher {
 public:
  Matcher(const Condition& c, const Instance& d, NullMode mode)
      : cond_(c), mode_(mode) {
    for (const auto& f : d) by_rel_[f.rel].push_back(&f);
    std::map<std::string, int> occ;
    for (const auto& a : c.atoms)
      for (const auto& t : a.args)
        if (t.is_var()) ++occ[t.name];
    for (const auto& [v, n] : occ)
      if (n >= 2) join_vars_.insert(v);
    done_.assign(c.atoms.size(), false);
  }

  template <class F>
  bool run(Subst& s, F& f) {
    if (!cmps_ok(s)) return true;
    return step(s, f, 0);
  }

 private:
  bool cmps_ok(const Subst& s) const {
    for (const auto& m : cond_.cmps) {
      Term l = substitute(s, m.lhs), r = substitute(s, m.rhs);
      if (l.is_var() || r.is_var()) continue;
      if (!cmp_holds(l, m.op, r)) return false;
    }
    return true;
  }

  std::size_t pick(const Subst& s) const {
    std::size_t best = cond_.atoms.size();
    int best_bound = -1;
    std::size_t best_size = std::numeric_limits<std::size_t>::max();
    for (std::size_t i = 0; i < cond_.atoms.size(); ++i) {
      if (done_[i]) continue;
      const Atom& a = cond_.atoms[i];
      int bound = 0;
      for (const auto& t : a.args)
        if (!t.is_var() || s.count(t.name)) ++bound;
      auto it = by_rel_.find(a.rel);
      std::size_t size = it == by_rel_.end() ? 0 : it->second.size();
      if (bound > best_bound || (bound == best_bound && size < best_size)) {
        best = i;
        best_bound = bound;
        best_size = size;
      }
    }
    return best;
  }

  template <class F>
  bool step(Subst& s, F& f, std::size_t depth) {
    if (depth == cond_.atoms.size()) return f(static_cast<const Subst&>(s));
    std::size_t i = pick(s);
    const Atom& a = cond_.atoms[i];
    auto it = by_rel_.find(a.rel);
    if (it == by_rel_.end()) return true;
    done_[i] = true;
    std::vector<std::string> added;
    for (const Atom* fact : it->second) {
      if (fact->args.size() != a.args.size()) continue;
      bool ok = true;
      for (std::size_t k = 0; k < a.args.size() && ok; ++k) {
        const Term& t = a.args[k];
        const Term& v = fact->args[k];
        if (t.is_var()) {
          auto b = s.find(t.name);
          if (b != s.end()) {
            ok = b->second == v;
          } else if (join_vars_.count(t.name) && !can_join_on(v, mode_)) {
            ok = false;
          } else {
            s.emplace(t.name, v);
            added.push_back(t.name);
          }
        } else if (t.is_null() && mode_ != NullMode::kIdentity) {
          ok = false;
        } else {
          ok = t == v;
        }
      }
      if (ok && cmps_ok(s)) {
        if (!step(s, f, depth + 1)) {
          for (const auto& n : added) s.erase(n);
          done_[i] = false;
          return false;
        }
      }
      for (const auto& n : added) s.erase(n);
      added.clear();
    }
    done_[i] = false;
    return true;
  }

  const Condition& cond_;
  NullMode mode_;
  std::map<std::string, std::vector<const Atom*>> by_rel_;
  std::set<std::string> join_vars_;
  std::vector<bool> done_;
};

}  // namespace detail

// Calls f(subst) for every valuation of c's variables that maps c's atoms
// into d and satisfies its comparisons. f returns false to stop early; the
// function returns false iff it was stopped.
template <class F>
bool for_each_valuation(const Condition& c, const Instance& d, F&& f,
                        NullMode mode = NullMode::kIdentity, Subst seed = {}) {
  detail::Matcher m(c, d, mode);
  return m.run(seed, f);
}

inline bool has_valuation(const Condition& c, const Instance& d,
                          NullMode mode = NullMode::kIdentity, Subst seed = {}) {
  return !for_each_valuation(
      c, d, [](const Subst&) { return false; }, mode, std::move(seed));
}

// Binds q's head to tuple t. Returns false if a head constant disagrees or a
// repeated head variable would need two values.
inline bool bind_head(const std::vector<Term>& head, const Tuple& t, Subst& s) {
  if (head.size() != t.size()) return false;
  for (std::size_t i = 0; i < head.size(); ++i) {
    const Term& h = head[i];
    if (h.is_var()) {
      auto [it, fresh] = s.emplace(h.name, t[i]);
      if (!fresh && !(it->second == t[i])) return false;
    } else if (!(h == t[i])) {
      return false;
    }
  }
  return true;
}

inline std::set<Tuple> evaluate_set(const Query& q, const Instance& d,
                                    NullMode mode = NullMode::kIdentity) {
  std::set<Tuple> out;
  for_each_valuation(
      q.body, d,
      [&](const Subst& s) {
        out.insert(substitute(s, q.head));
        return true;
      },
      mode);
  return out;
}

inline Bag evaluate_bag(const Query& q, const Instance& d,
                        NullMode mode = NullMode::kIdentity) {
  Bag out;
  for_each_valuation(
      q.body, d,
      [&](const Subst& s) {
        ++out[substitute(s, q.head)];
        return true;
      },
      mode);
  return out;
}

// Result of evaluate(q, d, semantics): a bag, with every count 1 under set
// semantics.
inline Bag evaluate(const Query& q, const Instance& d, Semantics sem) {
  if (sem == Semantics::kBag) return evaluate_bag(q, d);
  Bag out;
  for (auto& t : evaluate_set(q, d)) out.emplace(t, 1);
  return out;
}

inline bool answers(const Query& q, const Instance& d, const Tuple& t,
                    NullMode mode = NullMode::kIdentity) {
  Subst s;
  if (!bind_head(q.head, t, s)) return false;
  return has_valuation(q.body, d, mode, std::move(s));
}

inline Rational max_fresh_index(const std::set<Value>& vals) {
  Rational top(-1);
  for (const auto& v : vals)
    if (v.tag == Value::Tag::kFresh && top < v.num) top = v.num;
  return top;
}

struct Frozen {
  Instance facts;
  Subst mapping;
};

// Replaces every variable by its own fresh constant, numbered in order of
// first occurrence after any fresh constant already present.
inline Frozen freeze(const Condition& c, const std::vector<Term>& extra = {}) {
  std::set<Value> consts;
  collect_consts(c, consts);
  for (const auto& t : extra) collect_consts(t, consts);
  Rational next = max_fresh_index(consts) + Rational(1);
  Frozen out;
  auto visit = [&](const Term& t) {
    if (t.is_var() && !out.mapping.count(t.name)) {
      out.mapping.emplace(t.name, Term::constant(Value::fresh(next)));
      next = next + Rational(1);
    }
  };
  for (const auto& a : c.atoms)
    for (const auto& t : a.args) visit(t);
  for (const auto& m : c.cmps) {
    visit(m.lhs);
    visit(m.rhs);
  }
  for (const auto& t : extra) visit(t);
  for (const auto& a : c.atoms) out.facts.insert(substitute(out.mapping, a));
  return out;
}

inline Instance facts_of(const Instance& d, const std::string& rel) {
  Instance out;
  for (const auto& f : d)
    if (f.rel == rel) out.insert(f);
  return out;
}

inline int max_null_id(const Instance& d) {
  int top = 0;
  for (const auto& f : d)
    for (const auto& t : f.args)
      if (t.is_null()) top = std::max(top, t.null_id);
  return top;
}

// Constants equal, or nulls of the same kind. Used for indicator checks.
inline bool same_value(const Term& a, const Term& b) {
  if (a.is_null() && b.is_null()) return a.null_kind == b.null_kind;
  return a == b;
}

inline bool satisfies_tc(const IncompleteDatabase& idb, const TCStatement& c) {
  NullMode mode =
      idb.regime == Regime::kNoNulls ? NullMode::kIdentity : NullMode::kSql;
  Query qc = c.query();
  std::vector<int> pos = c.positions();
  Instance avail = facts_of(idb.available, c.head.rel);
  return for_each_valuation(
      qc.body, idb.ideal,
      [&](const Subst& s) {
        Tuple t = substitute(s, qc.head);
        for (const auto& f : avail) {
          bool hit = f.args.size() == t.size();
          for (int p : pos) {
            if (!hit) break;
            hit = same_value(f.args[p - 1], t[p - 1]);
          }
          if (hit) return true;
        }
        return false;
      },
      mode);
}

inline bool satisfies_qc(const IncompleteDatabase& idb, const Query& q,
                         Semantics sem) {
  return evaluate(q, idb.ideal, sem) == evaluate(q, idb.available, sem);
}

}  // namespace cmpl
