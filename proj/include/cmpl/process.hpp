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
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "cmpl/containment.hpp"
#include "cmpl/core.hpp"
#include "cmpl/eval.hpp"
#include "cmpl/order.hpp"

namespace cmpl {

// R(x, y) <~ G(x, z): the action may add R-facts whose guard holds before it.
struct RealWorldEffect {
  Atom head;
  Condition guard;
};

// R(x, y), G(x, z) -> R^a(x, y): `body` holds both the R atom and G.
struct CopyEffect {
  Atom head;
  Condition body;
};

struct Action {
  std::string name;
  std::vector<RealWorldEffect> real_world;
  std::vector<CopyEffect> copies;
};

struct Edge {
  std::string from, action, to;
  friend bool operator==(const Edge&, const Edge&) = default;
};

struct Qats {
  std::vector<std::string> states;
  std::string initial;
  std::vector<Action> actions;  // in declaration order
  std::vector<Edge> edges;

  const Action& action(const std::string& name) const {
    for (const auto& a : actions)
      if (a.name == name) return a;
    throw std::invalid_argument("undeclared action " + name);
  }
  bool has_state(const std::string& s) const {
    return std::find(states.begin(), states.end(), s) != states.end();
  }
};

inline Query real_world_query(const RealWorldEffect& r) {
  Query q;
  q.name = "P_r";
  q.head = r.head.args;
  q.body.atoms.push_back(r.head);
  q.body.atoms.insert(q.body.atoms.end(), r.guard.atoms.begin(), r.guard.atoms.end());
  q.body.cmps = r.guard.cmps;
  return q;
}

inline Query copy_query(const CopyEffect& c) {
  if (std::find(c.body.atoms.begin(), c.body.atoms.end(), c.head) == c.body.atoms.end())
    throw std::invalid_argument("copy effect for " + c.head.repr() +
                                " must contain its head atom in the body");
  return Query{"P_c", c.head.args, c.body};
}

inline Instance copy_facts(const std::vector<CopyEffect>& ce, const Instance& ideal) {
  Instance out;
  for (const auto& c : ce) {
    Query p = copy_query(c);
    for (auto& t : evaluate_set(p, ideal)) out.insert(Atom{c.head.rel, t});
  }
  return out;
}

// Every fact of d2 \ d1 matches the head of some effect whose guard holds in d1.
inline bool conforms(const Instance& d1, const Instance& d2,
                     const std::vector<RealWorldEffect>& re) {
  for (const auto& f : d2) {
    if (d1.count(f)) continue;
    bool ok = false;
    for (const auto& r : re) {
      if (r.head.rel != f.rel) continue;
      Subst s;
      if (!bind_head(r.head.args, f.args, s)) continue;
      if (has_valuation(r.guard, d1, NullMode::kIdentity, s)) {
        ok = true;
        break;
      }
    }
    if (!ok) return false;
  }
  return true;
}

namespace detail {

inline Subst rename_apart(const std::set<std::string>& vars, const std::string& suffix) {
  Subst s;
  for (const auto& v : vars) s.emplace(v, Term::var(v + suffix));
  return s;
}

// r's head and guard renamed away from q, so that P_r and q can be joined.
inline RealWorldEffect renamed(const RealWorldEffect& r) {
  std::set<std::string> vars;
  collect_vars(r.head, vars);
  collect_vars(r.guard, vars);
  Subst s = rename_apart(vars, "'r");
  return RealWorldEffect{substitute(s, r.head), substitute(s, r.guard)};
}

// P_r joined with q, with r's head equated to q's i-th atom.
inline Query risk_query(const RealWorldEffect& r, const Query& q, std::size_t i) {
  RealWorldEffect rr = renamed(r);
  Query out = real_world_query(rr);
  out.name = "P_r^" + std::to_string(i + 1);
  out.body.atoms.insert(out.body.atoms.end(), q.body.atoms.begin(), q.body.atoms.end());
  out.body.cmps.insert(out.body.cmps.end(), q.body.cmps.begin(), q.body.cmps.end());
  const Atom& a = q.body.atoms[i];
  for (std::size_t k = 0; k < a.args.size(); ++k)
    out.body.cmps.push_back({rr.head.args[k], CmpOp::kEq, a.args[k]});
  return out;
}

inline std::vector<std::size_t> atoms_on(const Query& q, const Atom& head) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < q.body.atoms.size(); ++i)
    if (q.body.atoms[i].rel == head.rel && q.body.atoms[i].args.size() == head.args.size())
      out.push_back(i);
  return out;
}

}  // namespace detail

// Can a fact added by r change the answer of q?
inline Verdict risky(const RealWorldEffect& r, const Query& q) {
  Verdict v;
  v.method = "risk-satisfiability";
  v.holds = false;
  for (std::size_t i : detail::atoms_on(q, r.head)) {
    Query rq = detail::risk_query(r, q, i);
    auto red = reduce(rq);
    if (!red) continue;
    v.holds = true;
    auto theta = generic_valuation(var_list(*red), red->consts(), red->body.cmps);
    if (theta) {
      // d1 holds the guard and the other query atoms; d2 adds the new fact.
      Instance d1, d2;
      Atom fresh = substitute(*theta, red->body.atoms.front());
      for (std::size_t k = 1; k < red->body.atoms.size(); ++k) {
        Atom f = substitute(*theta, red->body.atoms[k]);
        if (k != 1 + r.guard.atoms.size() + i) d1.insert(f);
      }
      d2 = d1;
      d2.insert(fresh);
      v.counterexample = IncompleteDatabase{d2, d1, Regime::kNoNulls};
    }
    v.notes.push_back("query atom " + std::to_string(i + 1) + " can receive new facts");
    return v;
  }
  return v;
}

// Every fact that r may add and that can matter to q is copied by one of
// `copies`.
inline Verdict repaired(const RealWorldEffect& r, const std::vector<CopyEffect>& copies,
                        const Query& q) {
  std::vector<Query> containers;
  for (const auto& c : copies)
    if (c.head.rel == r.head.rel && c.head.args.size() == r.head.args.size())
      containers.push_back(copy_query(c));
  Verdict out;
  out.holds = true;
  out.method = "repair-containment";
  Certificate cert;
  for (std::size_t i : detail::atoms_on(q, r.head)) {
    Verdict v = contained(detail::risk_query(r, q, i), containers);
    if (!v.holds) {
      v.method = out.method;
      v.notes.push_back("facts matching query atom " + std::to_string(i + 1) +
                        " are not copied");
      return v;
    }
    if (v.certificate)
      for (auto& e : v.certificate->entries) cert.entries.push_back(std::move(e));
  }
  out.certificate = std::move(cert);
  return out;
}

// A fact r may add that is new, changes q's answer on the smallest database
// it can be added to, and is copied by none of `copies`. Searched over the
// representative valuations of r and q joined on one of q's atoms. Returns
// the database with the fact and the fact's tuple.
inline std::optional<std::pair<Instance, Tuple>> unrepaired_witness(
    const RealWorldEffect& r, const std::vector<CopyEffect>& copies, const Query& q,
    std::size_t cap = kDefaultEnumerationCap) {
  RealWorldEffect rr = detail::renamed(r);
  std::set<Value> consts = q.consts();
  collect_consts(rr.head, consts);
  collect_consts(rr.guard, consts);
  for (const auto& c : copies) {
    collect_consts(c.head, consts);
    collect_consts(c.body, consts);
  }
  std::set<std::string> vs;
  collect_vars(rr.head, vs);
  collect_vars(rr.guard, vs);
  collect_vars(q.body, vs);
  for (const auto& t : q.head) collect_vars(t, vs);
  std::vector<std::string> vars(vs.begin(), vs.end());
  std::optional<std::pair<Instance, Tuple>> found;
  for (std::size_t k : detail::atoms_on(q, rr.head)) {
    std::vector<Comparison> m = rr.guard.cmps;
    m.insert(m.end(), q.body.cmps.begin(), q.body.cmps.end());
    for (std::size_t p = 0; p < rr.head.args.size(); ++p)
      m.push_back({rr.head.args[p], CmpOp::kEq, q.body.atoms[k].args[p]});
    for_each_representative_valuation(
        vars, consts, m,
        [&](const RepresentativeValuation& rv) {
          Atom f = substitute(rv.assignment, rr.head);
          Instance d1;
          for (const auto& a : rr.guard.atoms) d1.insert(substitute(rv.assignment, a));
          if (d1.count(f)) return true;
          for (const auto& a : q.body.atoms) d1.insert(substitute(rv.assignment, a));
          d1.erase(f);
          if (evaluate_set(q, d1).count(substitute(rv.assignment, q.head))) return true;
          Instance d2 = d1;
          d2.insert(f);
          if (copy_facts(copies, d2).count(f)) return true;
          found = std::make_pair(d2, f.args);
          return false;
        },
        cap);
    if (found) break;
  }
  return found;
}

// Keeps the last occurrence of every action.
inline std::vector<std::string> normalize(const std::vector<std::string>& seq) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (auto it = seq.rbegin(); it != seq.rend(); ++it)
    if (seen.insert(*it).second) out.push_back(*it);
  std::reverse(out.begin(), out.end());
  return out;
}

// Decides completeness of action sequences. Repair checks are cached on
// (action, effect, set of later actions).
class SequenceChecker {
 public:
  SequenceChecker(const Qats& qats, const Query& q) : qats_(qats), q_(q) {
    for (std::size_t i = 0; i < qats.actions.size(); ++i) index_[qats.actions[i].name] = i;
  }

  Verdict check(const std::vector<std::string>& seq) {
    Verdict out;
    out.holds = true;
    out.method = "risky-effects-repaired";
    for (const auto& a : seq)
      if (!index_.count(a)) throw std::invalid_argument("undeclared action " + a);
    for (std::size_t i = 0; i < seq.size(); ++i) {
      const Action& act = qats_.action(seq[i]);
      // Copies of step j read the ideal database after step j, so the
      // action's own copy effects count as well.
      std::vector<bool> later(qats_.actions.size(), false);
      for (std::size_t j = i; j < seq.size(); ++j) later[index_.at(seq[j])] = true;
      for (std::size_t e = 0; e < act.real_world.size(); ++e) {
        const Verdict& v = lookup(index_.at(seq[i]), e, later);
        if (v.holds) continue;
        out.holds = false;
        out.notes.push_back("effect " + std::to_string(e + 1) + " of action " + seq[i] +
                            " at step " + std::to_string(i + 1) + " is risky and not repaired");
        if (v.test_db)
          out.trace = development(seq, i, act.real_world[e].head.rel, *v.test_db, *v.test_head);
        out.test_db = v.test_db;
        out.test_head = v.test_head;
        if (out.trace)
          out.counterexample = IncompleteDatabase{out.trace->ideal.back(),
                                                  out.trace->available.back(),
                                                  Regime::kNoNulls};
        return out;
      }
    }
    return out;
  }

 private:
  const Verdict& lookup(std::size_t action, std::size_t effect, const std::vector<bool>& later) {
    auto key = std::make_tuple(action, effect, later);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    const RealWorldEffect& r = qats_.actions[action].real_world[effect];
    Verdict v;
    if (!risky(r, q_).holds) {
      v.holds = true;
      v.method = "not-risky";
    } else {
      std::vector<CopyEffect> copies;
      for (std::size_t k = 0; k < later.size(); ++k)
        if (later[k])
          copies.insert(copies.end(), qats_.actions[k].copies.begin(),
                        qats_.actions[k].copies.end());
      v = repaired(r, copies, q_);
      if (!v.holds) {
        // The containment test also fails for facts that never change the
        // answer; only a concrete witness makes the sequence incomplete.
        auto w = unrepaired_witness(r, copies, q_);
        if (w) {
          v.test_db = w->first;
          v.test_head = w->second;
        } else {
          v.holds = true;
          v.method = "repaired-on-answer-changing-facts";
          v.counterexample.reset();
          v.test_db.reset();
          v.test_head.reset();
        }
      }
    }
    return cache_.emplace(key, std::move(v)).first->second;
  }

  // Ideal states D \ {R(t)} up to step i, D afterwards; the available side
  // never receives R(t).
  Trace development(const std::vector<std::string>& seq, std::size_t i, const std::string& rel,
                    const Instance& d, const Tuple& head) const {
    Trace tr;
    Instance before = d;
    before.erase(Atom{rel, head});
    Instance ideal = before;
    Instance avail = before;
    tr.actions.push_back("");
    tr.ideal.push_back(ideal);
    tr.available.push_back(avail);
    for (std::size_t j = 0; j < seq.size(); ++j) {
      if (j == i) ideal = d;
      const Action& a = qats_.action(seq[j]);
      Instance copied = copy_facts(a.copies, ideal);
      avail.insert(copied.begin(), copied.end());
      tr.actions.push_back(seq[j]);
      tr.ideal.push_back(ideal);
      tr.available.push_back(avail);
    }
    return tr;
  }

  const Qats& qats_;
  const Query& q_;
  std::map<std::string, std::size_t> index_;
  std::map<std::tuple<std::size_t, std::size_t, std::vector<bool>>, Verdict> cache_;
};

inline Verdict sequence_complete(const std::vector<std::string>& seq, const Query& q,
                                 const Qats& qats) {
  SequenceChecker checker(qats, q);
  return checker.check(seq);
}

// Is seq the normalization of some path from the initial state to s?
inline bool realizable(const Qats& qats, const std::vector<std::string>& seq,
                       const std::string& s) {
  std::set<std::string> cur{qats.initial};
  for (std::size_t i = 0; i < seq.size(); ++i) {
    std::set<std::string> allowed(seq.begin() + static_cast<std::ptrdiff_t>(i), seq.end());
    std::set<std::string> reach = cur;
    std::vector<std::string> work(cur.begin(), cur.end());
    while (!work.empty()) {
      std::string x = work.back();
      work.pop_back();
      for (const auto& e : qats.edges)
        if (e.from == x && allowed.count(e.action) && reach.insert(e.to).second)
          work.push_back(e.to);
    }
    std::set<std::string> next;
    for (const auto& e : qats.edges)
      if (reach.count(e.from) && e.action == seq[i]) next.insert(e.to);
    cur = std::move(next);
    if (cur.empty()) return false;
  }
  return cur.count(s) > 0;
}

inline bool reachable(const Qats& qats, const std::string& s) {
  std::set<std::string> seen{qats.initial};
  std::vector<std::string> work{qats.initial};
  while (!work.empty()) {
    std::string x = work.back();
    work.pop_back();
    for (const auto& e : qats.edges)
      if (e.from == x && seen.insert(e.to).second) work.push_back(e.to);
  }
  return seen.count(s) > 0;
}

inline constexpr std::size_t kMaxDesignActions = 9;

// Completeness of q in every run ending in s: checked over all normal action
// sequences realizable as a path to s.
inline Verdict design_time_verify(const Qats& qats, const std::string& s, const Query& q,
                                  std::size_t max_actions = kMaxDesignActions) {
  if (!qats.has_state(s)) throw std::invalid_argument("undeclared state " + s);
  Verdict out;
  out.method = "normal-sequences";
  if (!reachable(qats, s)) {
    out.holds = true;
    out.notes.push_back("state " + s + " is unreachable; completeness holds vacuously");
    return out;
  }
  std::vector<std::string> names;
  for (const auto& a : qats.actions) names.push_back(a.name);
  if (names.size() > max_actions)
    throw LimitExceeded("too many actions for design-time verification");
  SequenceChecker checker(qats, q);
  std::vector<std::string> seq;
  std::vector<bool> used(names.size(), false);
  std::size_t checked = 0;
  std::optional<Verdict> bad;
  auto dfs = [&](auto&& self) -> void {
    if (bad) return;
    if (realizable(qats, seq, s)) {
      ++checked;
      Verdict v = checker.check(seq);
      if (!v.holds) {
        v.notes.insert(v.notes.begin(), "failing sequence: " +
                                            (seq.empty() ? std::string("(empty)") : [&] {
                                              std::string j;
                                              for (const auto& a : seq) j += (j.empty() ? "" : ",") + a;
                                              return j;
                                            }()));
        bad = std::move(v);
        return;
      }
    }
    for (std::size_t k = 0; k < names.size(); ++k) {
      if (used[k]) continue;
      used[k] = true;
      seq.push_back(names[k]);
      self(self);
      seq.pop_back();
      used[k] = false;
      if (bad) return;
    }
  };
  dfs(dfs);
  if (bad) {
    bad->method = out.method;
    return *bad;
  }
  out.holds = true;
  out.notes.push_back(std::to_string(checked) + " realizable normal sequences checked");
  return out;
}

inline Verdict runtime_verify(const Qats& qats, const std::vector<std::string>& path,
                              const Query& q) {
  std::set<std::string> cur{qats.initial};
  for (const auto& a : path) {
    qats.action(a);
    std::set<std::string> next;
    for (const auto& e : qats.edges)
      if (cur.count(e.from) && e.action == a) next.insert(e.to);
    if (next.empty()) throw std::invalid_argument("no transition for action " + a + " on the path");
    cur = std::move(next);
  }
  Verdict v = sequence_complete(path, q, qats);
  v.method = "runtime/" + v.method;
  return v;
}

}  // namespace cmpl
