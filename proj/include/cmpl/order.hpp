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
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cmpl/core.hpp"

namespace cmpl {

// Path closure of a set of <, <=, = constraints over a dense unbounded order.
// Distinct constants are chained by < in their true order. The constraints
// are unsatisfiable iff some term ends up strictly below itself.
class OrderClosure {
 public:
  enum Rel : std::uint8_t { kNone = 0, kLe = 1, kLt = 2 };

  OrderClosure(const std::vector<Comparison>& cmps,
               const std::vector<Term>& extra = {}) {
    for (const auto& m : cmps) {
      index_of(m.lhs);
      index_of(m.rhs);
    }
    for (const auto& t : extra) index_of(t);
    std::size_t n = terms_.size();
    rel_.assign(n, std::vector<Rel>(n, kNone));
    for (std::size_t i = 0; i < n; ++i) rel_[i][i] = kLe;
    std::vector<std::size_t> consts;
    for (std::size_t i = 0; i < n; ++i)
      if (terms_[i].is_const()) consts.push_back(i);
    std::sort(consts.begin(), consts.end(), [&](std::size_t a, std::size_t b) {
      return terms_[a].value < terms_[b].value;
    });
    for (std::size_t k = 1; k < consts.size(); ++k)
      rel_[consts[k - 1]][consts[k]] = kLt;
    for (const auto& m : cmps) {
      std::size_t l = index_of(m.lhs), r = index_of(m.rhs);
      if (terms_[l].is_null() || terms_[r].is_null()) {
        null_cmp_ = true;
        continue;
      }
      switch (m.op) {
        case CmpOp::kEq:
          add(l, r, kLe);
          add(r, l, kLe);
          break;
        case CmpOp::kLe: add(l, r, kLe); break;
        case CmpOp::kLt: add(l, r, kLt); break;
      }
    }
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i) {
        if (rel_[i][k] == kNone) continue;
        for (std::size_t j = 0; j < n; ++j) {
          if (rel_[k][j] == kNone) continue;
          Rel c = (rel_[i][k] == kLt || rel_[k][j] == kLt) ? kLt : kLe;
          if (c > rel_[i][j]) rel_[i][j] = c;
        }
      }
  }

  bool satisfiable() const {
    if (null_cmp_) return false;
    for (std::size_t i = 0; i < terms_.size(); ++i)
      if (rel_[i][i] == kLt) return false;
    return true;
  }

  const std::vector<Term>& terms() const { return terms_; }
  std::optional<std::size_t> find(const Term& t) const {
    auto it = pos_.find(t);
    if (it == pos_.end()) return std::nullopt;
    return it->second;
  }
  Rel rel(std::size_t i, std::size_t j) const { return rel_[i][j]; }
  bool forced_equal(std::size_t i, std::size_t j) const {
    return rel_[i][j] != kNone && rel_[j][i] != kNone;
  }

 private:
  std::size_t index_of(const Term& t) {
    auto [it, fresh] = pos_.emplace(t, terms_.size());
    if (fresh) terms_.push_back(t);
    return it->second;
  }
  void add(std::size_t i, std::size_t j, Rel r) {
    if (r > rel_[i][j]) rel_[i][j] = r;
  }

  std::vector<Term> terms_;
  std::map<Term, std::size_t> pos_;
  std::vector<std::vector<Rel>> rel_;
  bool null_cmp_ = false;
};

inline bool satisfiable(const std::vector<Comparison>& cmps) {
  return OrderClosure(cmps).satisfiable();
}

// m |= c, read as: every assignment satisfying m satisfies c.
inline bool entails(const std::vector<Comparison>& m, const Comparison& c) {
  auto with = [&](Comparison neg) {
    std::vector<Comparison> all = m;
    all.push_back(std::move(neg));
    return satisfiable(all);
  };
  switch (c.op) {
    case CmpOp::kLt: return !with({c.rhs, CmpOp::kLe, c.lhs});
    case CmpOp::kLe: return !with({c.rhs, CmpOp::kLt, c.lhs});
    case CmpOp::kEq:
      return !with({c.lhs, CmpOp::kLt, c.rhs}) && !with({c.rhs, CmpOp::kLt, c.lhs});
  }
  return false;
}

// Merges terms that the comparisons force to be equal and drops comparisons
// that became trivial. Returns nullopt if the comparisons are contradictory.
// A class containing a constant is replaced by it; otherwise by its variable
// that occurs first (head first, then body).
inline std::optional<Query> reduce(const Query& q) {
  OrderClosure oc(q.body.cmps);
  if (!oc.satisfiable()) return std::nullopt;
  std::vector<std::string> order;
  std::set<std::string> seen;
  auto note = [&](const Term& t) {
    if (t.is_var() && seen.insert(t.name).second) order.push_back(t.name);
  };
  for (const auto& t : q.head) note(t);
  for (const auto& a : q.body.atoms)
    for (const auto& t : a.args) note(t);
  for (const auto& m : q.body.cmps) {
    note(m.lhs);
    note(m.rhs);
  }
  Subst s;
  const auto& terms = oc.terms();
  for (const auto& v : order) {
    auto iv = oc.find(Term::var(v));
    if (!iv) continue;
    std::optional<Term> rep;
    for (std::size_t j = 0; j < terms.size(); ++j)
      if (terms[j].is_const() && oc.forced_equal(*iv, j)) rep = terms[j];
    if (!rep) {
      for (const auto& w : order) {
        auto iw = oc.find(Term::var(w));
        if (iw && oc.forced_equal(*iv, *iw)) {
          rep = Term::var(w);
          break;
        }
      }
    }
    if (rep && !(*rep == Term::var(v))) s.emplace(v, *rep);
  }
  Query out = substitute(s, q);
  std::vector<Comparison> kept;
  for (const auto& m : out.body.cmps) {
    if (m.lhs.is_const() && m.rhs.is_const()) continue;
    if (m.lhs == m.rhs) continue;
    if (std::find(kept.begin(), kept.end(), m) != kept.end()) continue;
    kept.push_back(m);
  }
  out.body.cmps = std::move(kept);
  return out;
}

// One consistent way of linearly ordering variables among constants, plus a
// concrete assignment realizing it. blocks[i] < blocks[i+1]; each block holds
// terms that are equal.
struct RepresentativeValuation {
  std::vector<std::vector<Term>> blocks;
  Subst assignment;
};

namespace detail {

// Values for var-only blocks: interleaved between the neighbouring constants.
inline std::vector<Value> realize_blocks(
    const std::vector<std::optional<Value>>& fixed) {
  std::size_t n = fixed.size();
  std::vector<Value> out(n);
  std::size_t i = 0;
  while (i < n) {
    if (fixed[i]) {
      out[i] = *fixed[i];
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < n && !fixed[j]) ++j;
    std::optional<Value> lo = i > 0 ? fixed[i - 1] : std::nullopt;
    std::optional<Value> hi = j < n ? fixed[j] : std::nullopt;
    if (lo && hi) {
      Value cur = *lo;
      for (std::size_t k = i; k < j; ++k) out[k] = cur = between(cur, *hi);
    } else if (lo) {
      Value cur = *lo;
      for (std::size_t k = i; k < j; ++k) out[k] = cur = above(cur);
    } else if (hi) {
      Value cur = *hi;
      for (std::size_t k = j; k > i; --k) out[k - 1] = cur = below(cur);
    } else {
      Value cur = Value::number(0);
      for (std::size_t k = i; k < j; ++k) {
        out[k] = cur;
        cur = above(cur);
      }
    }
    i = j;
  }
  return out;
}

}  // namespace detail

// Enumerates every ordered partition of vars and consts in which each
// constant sits alone at its true position and m holds. The callback returns
// false to stop; the function returns false iff stopped. Throws
// LimitExceeded after more than cap complete valuations.
inline bool for_each_representative_valuation(
    const std::vector<std::string>& vars, const std::set<Value>& consts,
    const std::vector<Comparison>& m,
    const std::function<bool(const RepresentativeValuation&)>& f,
    std::size_t cap = kDefaultEnumerationCap) {
  std::vector<std::vector<Term>> blocks;
  for (const auto& c : consts) blocks.push_back({Term::constant(c)});
  std::size_t emitted = 0;

  auto position = [&](const Term& t) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < blocks.size(); ++i)
      for (const auto& u : blocks[i])
        if (u == t) return i;
    return std::nullopt;
  };
  auto consistent = [&]() {
    for (const auto& c : m) {
      auto l = position(c.lhs), r = position(c.rhs);
      if (!l || !r) continue;
      switch (c.op) {
        case CmpOp::kEq: if (*l != *r) return false; break;
        case CmpOp::kLt: if (!(*l < *r)) return false; break;
        case CmpOp::kLe: if (!(*l <= *r)) return false; break;
      }
    }
    return true;
  };

  std::function<bool(std::size_t)> rec = [&](std::size_t k) -> bool {
    if (k == vars.size()) {
      if (++emitted > cap)
        throw LimitExceeded("representative valuation limit exceeded");
      std::vector<std::optional<Value>> fixed(blocks.size());
      for (std::size_t i = 0; i < blocks.size(); ++i)
        for (const auto& t : blocks[i])
          if (t.is_const()) fixed[i] = t.value;
      std::vector<Value> vals = detail::realize_blocks(fixed);
      RepresentativeValuation rv;
      rv.blocks = blocks;
      for (std::size_t i = 0; i < blocks.size(); ++i)
        for (const auto& t : blocks[i])
          if (t.is_var()) rv.assignment.emplace(t.name, Term::constant(vals[i]));
      return f(rv);
    }
    Term v = Term::var(vars[k]);
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      blocks[i].push_back(v);
      bool go = consistent() ? rec(k + 1) : true;
      blocks[i].pop_back();
      if (!go) return false;
    }
    for (std::size_t gap = 0; gap <= blocks.size(); ++gap) {
      blocks.insert(blocks.begin() + static_cast<std::ptrdiff_t>(gap), {v});
      bool go = consistent() ? rec(k + 1) : true;
      blocks.erase(blocks.begin() + static_cast<std::ptrdiff_t>(gap));
      if (!go) return false;
    }
    return true;
  };
  std::set<Value> need;
  for (const auto& c : m) {
    collect_consts(c.lhs, need);
    collect_consts(c.rhs, need);
  }
  for (const auto& c : need)
    if (!consts.count(c))
      throw std::invalid_argument("comparison constant " + c.repr() +
                                  " missing from the constant set");
  if (!OrderClosure(m).satisfiable()) return true;
  return rec(0);
}

inline std::vector<RepresentativeValuation> representative_valuations(
    const std::set<std::string>& vars, const std::set<Value>& consts,
    const std::vector<Comparison>& m, std::size_t cap = kDefaultEnumerationCap) {
  std::vector<RepresentativeValuation> out;
  std::vector<std::string> vs(vars.begin(), vars.end());
  for_each_representative_valuation(
      vs, consts, m,
      [&](const RepresentativeValuation& rv) {
        out.push_back(rv);
        return true;
      },
      cap);
  return out;
}

// A valuation giving every variable its own value, distinct from all
// constants, while satisfying m: a linear extension of the closure. Exists
// iff m is satisfiable and forces no two distinct terms equal (as after
// reduce); nullopt otherwise.
inline std::optional<Subst> generic_valuation(const std::vector<std::string>& vars,
                                              const std::set<Value>& consts,
                                              const std::vector<Comparison>& m) {
  std::vector<Term> extra;
  for (const auto& v : vars) extra.push_back(Term::var(v));
  for (const auto& c : consts) extra.push_back(Term::constant(c));
  OrderClosure oc(m, extra);
  if (!oc.satisfiable()) return std::nullopt;
  const auto& terms = oc.terms();
  std::size_t n = terms.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (oc.forced_equal(i, j)) return std::nullopt;
  std::vector<std::size_t> order;
  std::vector<bool> used(n, false);
  for (std::size_t step = 0; step < n; ++step) {
    for (std::size_t i = 0; i < n; ++i) {
      if (used[i]) continue;
      bool minimal = true;
      for (std::size_t j = 0; j < n && minimal; ++j)
        if (j != i && !used[j] && oc.rel(j, i) != OrderClosure::kNone) minimal = false;
      if (minimal) {
        used[i] = true;
        order.push_back(i);
        break;
      }
    }
  }
  std::vector<std::optional<Value>> fixed;
  for (std::size_t i : order)
    fixed.push_back(terms[i].is_const() ? std::optional<Value>(terms[i].value)
                                        : std::nullopt);
  std::vector<Value> vals = detail::realize_blocks(fixed);
  Subst out;
  for (std::size_t k = 0; k < order.size(); ++k)
    if (terms[order[k]].is_var())
      out.emplace(terms[order[k]].name, Term::constant(vals[k]));
  return out;
}

}  // namespace cmpl
