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

// Brute-force reference implementations used only by the tests. They share
// the data model with the library but none of its algorithms: evaluation is
// a nested loop over facts, and orderings are realized on an explicit grid.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "cmpl/core.hpp"
#include "cmpl/process.hpp"

namespace oracle {

using cmpl::Atom;
using cmpl::Bag;
using cmpl::CmpOp;
using cmpl::Comparison;
using cmpl::Condition;
using cmpl::Instance;
using cmpl::NullKind;
using cmpl::Query;
using cmpl::Rational;
using cmpl::Subst;
using cmpl::TCStatement;
using cmpl::Term;
using cmpl::Tuple;
using cmpl::Value;

enum class Nulls { kToken, kSql };

inline bool compare(const Term& a, CmpOp op, const Term& b) {
  if (!a.is_const() || !b.is_const()) return false;
  switch (op) {
    case CmpOp::kEq: return a.value == b.value;
    case CmpOp::kLt: return a.value < b.value;
    case CmpOp::kLe: return a.value <= b.value;
  }
  return false;
}

inline Term lookup(const Subst& s, const Term& t) {
  if (!t.is_var()) return t;
  auto it = s.find(t.name);
  return it == s.end() ? t : it->second;
}

// Every valuation of the condition's atoms into d, in the given null mode.
// Token mode: a null is an ordinary value equal only to itself. SQL mode:
// a variable may take a null only if it occurs once among the atoms.
inline void valuations(const Condition& c, const Instance& d, Nulls mode,
                       const std::function<void(const Subst&)>& f) {
  std::map<std::string, int> occ;
  for (const auto& a : c.atoms)
    for (const auto& t : a.args)
      if (t.is_var()) ++occ[t.name];
  std::vector<Atom> facts(d.begin(), d.end());
  Subst s;
  std::function<void(std::size_t)> go = [&](std::size_t i) {
    if (i == c.atoms.size()) {
      for (const auto& m : c.cmps)
        if (!compare(lookup(s, m.lhs), m.op, lookup(s, m.rhs))) return;
      f(s);
      return;
    }
    const Atom& a = c.atoms[i];
    for (const auto& fact : facts) {
      if (fact.rel != a.rel || fact.args.size() != a.args.size()) continue;
      Subst saved = s;
      bool ok = true;
      for (std::size_t k = 0; ok && k < a.args.size(); ++k) {
        const Term& pat = a.args[k];
        const Term& val = fact.args[k];
        if (mode == Nulls::kSql && val.is_null()) {
          ok = pat.is_var() && occ[pat.name] == 1;
          if (ok) s[pat.name] = val;
          continue;
        }
        if (pat.is_var()) {
          auto it = s.find(pat.name);
          if (it == s.end()) s[pat.name] = val;
          else ok = it->second == val;
        } else {
          ok = pat == val;
        }
      }
      if (ok) go(i + 1);
      s = std::move(saved);
    }
  };
  go(0);
}

inline Tuple head_of(const Query& q, const Subst& s) {
  Tuple t;
  for (const auto& h : q.head) t.push_back(lookup(s, h));
  return t;
}

inline Term plain(const Term& t) { return t.is_null() ? Term::null(NullKind::kPlain, 0) : t; }

inline Bag eval_bag(const Query& q, const Instance& d, Nulls mode = Nulls::kToken) {
  Bag out;
  valuations(q.body, d, mode, [&](const Subst& s) { ++out[head_of(q, s)]; });
  return out;
}

inline std::set<Tuple> eval(const Query& q, const Instance& d, Nulls mode = Nulls::kToken) {
  std::set<Tuple> out;
  for (const auto& [t, n] : eval_bag(q, d, mode)) out.insert(t);
  return out;
}

// Nulls printed as one symbol, as a user of the answer would see them.
inline std::set<Tuple> eval_plain(const Query& q, const Instance& d, Nulls mode) {
  std::set<Tuple> out;
  for (const auto& t : eval(q, d, mode)) {
    Tuple u;
    for (const auto& x : t) u.push_back(plain(x));
    out.insert(u);
  }
  return out;
}

// Certain answers under Codd nulls over a null-free completion space:
// naive evaluation, then drop tuples that mention a null.
inline std::set<Tuple> eval_certain(const Query& q, const Instance& d) {
  std::set<Tuple> out;
  for (const auto& t : eval(q, d, Nulls::kToken))
    if (std::none_of(t.begin(), t.end(), [](const Term& x) { return x.is_null(); }))
      out.insert(t);
  return out;
}

inline Query statement_query(const TCStatement& c) {
  Query q{"Q_" + c.name, c.head.args, c.cond};
  q.body.atoms.insert(q.body.atoms.begin(), c.head);
  return q;
}

// Least available database for a null-free ideal one.
inline Instance least_available(const std::vector<TCStatement>& cs, const Instance& ideal) {
  Instance out;
  for (const auto& c : cs)
    for (const auto& t : eval(statement_query(c), ideal)) out.insert(Atom{c.head.rel, t});
  return out;
}

// Grid of points realizing every ordering of `n` values relative to the
// given numeric constants.
inline std::vector<Term> grid(const std::set<Value>& consts, int n) {
  std::vector<Rational> cs;
  for (const auto& v : consts)
    if (v.tag == Value::Tag::kNum) cs.push_back(v.num);
  std::vector<Rational> pts;
  if (cs.empty()) {
    for (int j = 1; j <= n; ++j) pts.push_back(j);
  } else {
    pts = cs;
    for (int j = 1; j <= n; ++j) {
      pts.push_back(cs.front() - j);
      pts.push_back(cs.back() + j);
    }
    for (std::size_t i = 0; i + 1 < cs.size(); ++i)
      for (int j = 1; j <= n; ++j)
        pts.push_back(cs[i] + (cs[i + 1] - cs[i]) * Rational(j, n + 1));
  }
  std::sort(pts.begin(), pts.end());
  std::vector<Term> out;
  for (const auto& p : pts) out.push_back(Term::constant(Value::number(p)));
  for (const auto& v : consts)
    if (v.tag != Value::Tag::kNum) out.push_back(Term::constant(v));
  return out;
}

inline std::vector<std::string> vars_of(const Query& q) {
  std::set<std::string> vs;
  cmpl::collect_vars(q.body, vs);
  for (const auto& h : q.head) cmpl::collect_vars(h, vs);
  return {vs.begin(), vs.end()};
}

// Calls f(s) for every grounding of q's variables on the grid that
// satisfies q's comparisons. f returns false to stop.
inline bool groundings(const Query& q, const std::set<Value>& consts,
                       const std::function<bool(const Subst&)>& f) {
  std::vector<std::string> vs = vars_of(q);
  std::vector<Term> pts = grid(consts, static_cast<int>(vs.size()));
  Subst s;
  std::function<bool(std::size_t)> go = [&](std::size_t i) {
    if (i == vs.size()) {
      for (const auto& m : q.body.cmps)
        if (!compare(lookup(s, m.lhs), m.op, lookup(s, m.rhs))) return true;
      return f(s);
    }
    for (const auto& p : pts) {
      s[vs[i]] = p;
      if (!go(i + 1)) return false;
    }
    s.erase(vs[i]);
    return true;
  };
  return go(0);
}

inline Instance ground_body(const Query& q, const Subst& s) {
  Instance d;
  for (const auto& a : q.body.atoms) {
    Atom g{a.rel, {}};
    for (const auto& t : a.args) g.args.push_back(lookup(s, t));
    d.insert(g);
  }
  return d;
}

inline std::set<Value> mentioned(const std::vector<Query>& qs) {
  std::set<Value> out;
  for (const auto& q : qs) {
    cmpl::collect_consts(q.body, out);
    for (const auto& h : q.head) cmpl::collect_consts(h, out);
  }
  return out;
}

// q1 ⊆ ∪ containers, by checking every grounded body of q1 on the grid.
inline bool contained(const Query& q1, const std::vector<Query>& containers) {
  std::vector<Query> all{q1};
  all.insert(all.end(), containers.begin(), containers.end());
  return groundings(q1, mentioned(all), [&](const Subst& s) {
    Instance d = ground_body(q1, s);
    Tuple t = head_of(q1, s);
    for (const auto& c : containers)
      if (eval(c, d).count(t)) return true;
    return false;
  });
}

// TC-QC entailment without nulls: every grounded body of q is an ideal
// database; its least available database must give the same answers.
inline bool tc_qc(const std::vector<TCStatement>& cs, const Query& q, bool bag) {
  std::vector<Query> all{q};
  for (const auto& c : cs) all.push_back(statement_query(c));
  return groundings(q, mentioned(all), [&](const Subst& s) {
    Instance ideal = ground_body(q, s);
    Instance avail = least_available(cs, ideal);
    return bag ? eval_bag(q, ideal) == eval_bag(q, avail) : eval(q, ideal) == eval(q, avail);
  });
}

// Every answer (x̄, y) of q1 is matched by some (x̄, y') of q2 with y' ≥ y,
// or y' ≤ y when reversed.
inline bool dominated(const Query& q1, const Query& q2, bool reverse = false) {
  return groundings(q1, mentioned({q1, q2}), [&](const Subst& s) {
    Instance d = ground_body(q1, s);
    Tuple t = head_of(q1, s);
    for (const auto& u : eval(q2, d)) {
      if (!std::equal(t.begin(), t.end() - 1, u.begin())) continue;
      if (reverse ? u.back().value <= t.back().value : t.back().value <= u.back().value)
        return true;
    }
    return false;
  });
}

// Completeness of the maximum (or minimum) of the last head position per
// group of the others.
inline bool tc_qc_extremum(const std::vector<TCStatement>& cs, const Query& q, bool min) {
  std::vector<Query> all{q};
  for (const auto& c : cs) all.push_back(statement_query(c));
  auto best = [&](const Instance& d) {
    std::map<Tuple, Value> out;
    for (const auto& t : eval(q, d)) {
      Tuple g(t.begin(), t.end() - 1);
      auto [it, fresh] = out.emplace(g, t.back().value);
      if (!fresh && (min ? t.back().value < it->second : it->second < t.back().value))
        it->second = t.back().value;
    }
    return out;
  };
  return groundings(q, mentioned(all), [&](const Subst& s) {
    Instance ideal = ground_body(q, s);
    return best(ideal) == best(least_available(cs, ideal));
  });
}

// Completeness over a fixed available database: extend d by grounded
// bodies of q drawn from a grid over the constants of d, q and the
// statements, with `spare` extra points per gap.
inline bool tc_qc_instance(const Instance& d, const std::vector<TCStatement>& cs, const Query& q,
                           int spare = 0) {
  std::vector<Query> all{q};
  for (const auto& c : cs) all.push_back(statement_query(c));
  std::set<Value> consts = mentioned(all);
  for (const auto& f : d)
    for (const auto& t : f.args)
      if (t.is_const()) consts.insert(t.value);
  std::vector<std::string> vs = vars_of(q);
  std::vector<Term> pts = grid(consts, static_cast<int>(vs.size()) + spare);
  std::set<Tuple> base = eval(q, d);
  Subst s;
  std::function<bool(std::size_t)> go = [&](std::size_t i) {
    if (i < vs.size()) {
      for (const auto& p : pts) {
        s[vs[i]] = p;
        if (!go(i + 1)) return false;
      }
      return true;
    }
    for (const auto& m : q.body.cmps)
      if (!compare(lookup(s, m.lhs), m.op, lookup(s, m.rhs))) return true;
    Instance ideal = d;
    for (const auto& f : ground_body(q, s)) ideal.insert(f);
    for (const auto& f : least_available(cs, ideal))
      if (!d.count(f)) return true;
    return eval(q, ideal) == base;
  };
  return go(0);
}

inline bool qc_qc_instance(const Instance& d, const std::vector<Query>& premises, const Query& q) {
  std::vector<Query> all{q};
  all.insert(all.end(), premises.begin(), premises.end());
  std::set<Value> consts = mentioned(all);
  for (const auto& f : d)
    for (const auto& t : f.args)
      if (t.is_const()) consts.insert(t.value);
  std::set<Tuple> base = eval(q, d);
  return groundings(q, consts, [&](const Subst& s) {
    Instance ideal = d;
    for (const auto& f : ground_body(q, s)) ideal.insert(f);
    for (const auto& p : premises)
      if (eval(p, ideal) != eval(p, d)) return true;
    return eval(q, ideal) == base;
  });
}

// ---- Null regimes, over the values {a, b} and at most two nulls. ----

inline std::vector<Instance> small_instances(const cmpl::Schema& sch, const std::vector<Term>& values,
                                             std::size_t max_facts) {
  std::vector<Atom> facts;
  for (const auto& [rel, arity] : sch) {
    std::vector<std::size_t> idx(static_cast<std::size_t>(arity), 0);
    for (;;) {
      Atom f{rel, {}};
      for (auto i : idx) f.args.push_back(values[i]);
      facts.push_back(f);
      std::size_t k = 0;
      while (k < idx.size() && ++idx[k] == values.size()) idx[k++] = 0;
      if (k == idx.size()) break;
    }
  }
  std::vector<Instance> out;
  Instance cur;
  std::function<void(std::size_t)> go = [&](std::size_t i) {
    out.push_back(cur);
    if (cur.size() == max_facts) return;
    for (std::size_t j = i; j < facts.size(); ++j) {
      cur.insert(facts[j]);
      go(j + 1);
      cur.erase(facts[j]);
    }
  };
  go(0);
  return out;
}

inline std::vector<int> kept_positions(const TCStatement& c) {
  if (c.projection) return *c.projection;
  std::vector<int> all;
  for (std::size_t i = 1; i <= c.head.args.size(); ++i) all.push_back(static_cast<int>(i));
  return all;
}

// Facts of the ideal database constrained by each statement.
inline std::vector<std::pair<const TCStatement*, Atom>> constrained(
    const std::vector<TCStatement>& cs, const Instance& ideal, Nulls mode) {
  std::vector<std::pair<const TCStatement*, Atom>> out;
  for (const auto& c : cs)
    for (const auto& t : eval(statement_query(c), ideal, mode)) out.push_back({&c, Atom{c.head.rel, t}});
  return out;
}

inline bool satisfies(const std::vector<TCStatement>& cs, const Instance& ideal,
                      const Instance& avail, Nulls mode) {
  for (const auto& [c, u] : constrained(cs, ideal, mode)) {
    bool found = false;
    for (const auto& f : avail) {
      if (f.rel != u.rel) continue;
      bool agree = true;
      for (int p : kept_positions(*c)) agree = agree && f.args[p - 1] == u.args[p - 1];
      found = found || agree;
    }
    if (!found) return false;
  }
  return true;
}

inline std::vector<Term> ab() { return {Term::str("a"), Term::str("b")}; }

// Incomplete facts: null-free ideal databases; the least informative
// available database keeps, per constrained fact and statement, only the
// kept positions and fresh unknown values elsewhere.
inline bool tc_qc_inc(const std::vector<TCStatement>& cs, const Query& q, const cmpl::Schema& sch) {
  for (const auto& ideal : small_instances(sch, ab(), 4)) {
    std::set<Tuple> want = eval(q, ideal);
    if (want.empty()) continue;
    Instance avail;
    int next = 1;
    for (const auto& [c, u] : constrained(cs, ideal, Nulls::kToken)) {
      Atom f = u;
      std::vector<int> keep = kept_positions(*c);
      for (std::size_t i = 0; i < f.args.size(); ++i)
        if (std::find(keep.begin(), keep.end(), static_cast<int>(i) + 1) == keep.end())
          f.args[i] = Term::null(NullKind::kUnknown, next++);
      avail.insert(f);
    }
    if (!satisfies(cs, ideal, avail, Nulls::kToken)) return false;  // cannot happen
    if (eval_certain(q, avail) != want) return false;
  }
  return true;
}

// Ideal databases with up to two not-applicable nulls outside key positions.
inline void for_each_null_ideal(const cmpl::Schema& sch, const cmpl::Keys& keys,
                                const std::function<bool(const Instance&)>& f) {
  for (const auto& base : small_instances(sch, ab(), 4)) {
    std::vector<std::pair<std::size_t, std::size_t>> slots;
    std::vector<Atom> facts(base.begin(), base.end());
    for (std::size_t i = 0; i < facts.size(); ++i) {
      auto k = keys.find(facts[i].rel);
      std::size_t from = k == keys.end() ? 0 : static_cast<std::size_t>(k->second);
      for (std::size_t p = from; p < facts[i].args.size(); ++p) slots.push_back({i, p});
    }
    auto emit = [&](std::vector<std::size_t> chosen) {
      std::vector<Atom> fs = facts;
      int id = 1;
      for (auto s : chosen) fs[slots[s].first].args[slots[s].second] = Term::null(NullKind::kNotApplicable, id++);
      return f(Instance(fs.begin(), fs.end()));
    };
    if (!emit({})) return;
    for (std::size_t a = 0; a < slots.size(); ++a) {
      if (!emit({a})) return;
      for (std::size_t b = a + 1; b < slots.size(); ++b)
        if (!emit({a, b})) return;
    }
  }
}

inline std::vector<Instance> subsets(const Instance& d) {
  std::vector<Atom> fs(d.begin(), d.end());
  std::vector<Instance> out;
  for (std::uint32_t m = 0; m < (1U << fs.size()); ++m) {
    Instance s;
    for (std::size_t i = 0; i < fs.size(); ++i)
      if ((m >> i) & 1U) s.insert(fs[i]);
    out.push_back(s);
  }
  return out;
}

// Restricted facts: the available database is a subset of the ideal one,
// answers are computed the SQL way.
inline bool tc_qc_res(const std::vector<TCStatement>& cs, const Query& q, const cmpl::Schema& sch) {
  bool ok = true;
  for_each_null_ideal(sch, {}, [&](const Instance& ideal) {
    std::set<Tuple> want = eval_plain(q, ideal, Nulls::kSql);
    if (want.empty()) return true;
    for (const auto& avail : subsets(ideal))
      if (satisfies(cs, ideal, avail, Nulls::kSql) && eval_plain(q, avail, Nulls::kSql) != want)
        return ok = false;
    return true;
  });
  return ok;
}

inline bool keys_hold(const Instance& d, const cmpl::Keys& keys) {
  std::set<std::pair<std::string, Tuple>> seen;
  for (const auto& f : d) {
    auto k = keys.find(f.rel);
    if (k == keys.end()) continue;
    Tuple key(f.args.begin(), f.args.begin() + k->second);
    if (!seen.insert({f.rel, key}).second) return false;
  }
  return true;
}

inline Bag bag_plain(const Query& q, const Instance& d) {
  Bag out;
  for (const auto& [t, n] : eval_bag(q, d, Nulls::kSql)) {
    Tuple u;
    for (const auto& x : t) u.push_back(plain(x));
    out[u] += n;
  }
  return out;
}

// Bag semantics over key-satisfying databases with restricted facts.
inline bool tc_qc_bag_keys(const std::vector<TCStatement>& cs, const Query& q,
                           const cmpl::Schema& sch, const cmpl::Keys& keys) {
  bool ok = true;
  for_each_null_ideal(sch, keys, [&](const Instance& ideal) {
    if (!keys_hold(ideal, keys)) return true;
    Bag want = bag_plain(q, ideal);
    if (want.empty()) return true;
    for (const auto& avail : subsets(ideal))
      if (satisfies(cs, ideal, avail, Nulls::kSql) && bag_plain(q, avail) != want)
        return ok = false;
    return true;
  });
  return ok;
}

// ---- Transition systems. ----

// (normal sequence, end state) for every path from the initial state of at
// most max_len steps.
inline std::set<std::pair<std::vector<std::string>, std::string>> normal_paths(
    const cmpl::Qats& t, std::size_t max_len) {
  std::set<std::pair<std::vector<std::string>, std::string>> out;
  std::vector<std::string> path;
  std::function<void(const std::string&)> go = [&](const std::string& s) {
    std::vector<std::string> norm;
    for (std::size_t i = 0; i < path.size(); ++i)
      if (std::find(path.begin() + static_cast<std::ptrdiff_t>(i) + 1, path.end(), path[i]) == path.end())
        norm.push_back(path[i]);
    out.insert({norm, s});
    if (path.size() == max_len) return;
    for (const auto& e : t.edges)
      if (e.from == s) {
        path.push_back(e.action);
        go(e.to);
        path.pop_back();
      }
  };
  go(t.initial);
  return out;
}

// Propositional formulas in CNF over variables 0..n-1.
struct Lit {
  int var;
  bool positive;
};
using Clauses = std::vector<std::vector<Lit>>;

inline bool satisfied(const Clauses& phi, std::uint32_t bits) {
  for (const auto& c : phi) {
    bool any = false;
    for (const auto& l : c) any = any || (((bits >> l.var) & 1U) != 0) == l.positive;
    if (!any) return false;
  }
  return true;
}

inline bool satisfiable(const Clauses& phi, int n) {
  for (std::uint32_t b = 0; b < (1U << n); ++b)
    if (satisfied(phi, b)) return true;
  return false;
}

// ∀ vars 0..u-1 ∃ the rest.
inline bool forall_exists(const Clauses& phi, int n, int u) {
  for (std::uint32_t a = 0; a < (1U << u); ++a) {
    bool ok = false;
    for (std::uint32_t e = 0; e < (1U << (n - u)) && !ok; ++e)
      ok = satisfied(phi, a | (e << u));
    if (!ok) return false;
  }
  return true;
}

}  // namespace oracle
