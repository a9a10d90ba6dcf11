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
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cmpl/rational.hpp"

namespace cmpl {

// Raised when a procedure's preconditions rule out a sound answer.
class Refusal : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class LimitExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kDefaultEnumerationCap = 1'000'000;

// A constant of the dense ordered domain. Numbers precede strings, strings
// precede freeze constants. A string carries a rational offset so that the
// string region is dense as well; written literals have offset 0.
struct Value {
  enum class Tag : std::uint8_t { kNum, kStr, kFresh };

  Tag tag = Tag::kNum;
  Rational num;
  std::string str;

  static Value number(Rational q) { return Value{Tag::kNum, q, {}}; }
  static Value string(std::string s, Rational offset = 0) {
    return Value{Tag::kStr, offset, std::move(s)};
  }
  static Value fresh(Rational index) { return Value{Tag::kFresh, index, {}}; }

  friend bool operator==(const Value&, const Value&) = default;
  friend std::strong_ordering operator<=>(const Value& a, const Value& b) {
    if (a.tag != b.tag) return a.tag <=> b.tag;
    if (a.tag == Tag::kStr) {
      if (auto c = a.str <=> b.str; c != 0) return c;
    }
    return a.num <=> b.num;
  }

  std::string repr() const {
    switch (tag) {
      case Tag::kNum:
        return num.str();
      case Tag::kStr: {
        std::string out = "\"";
        for (char c : str) {
          if (c == '"' || c == '\\') out += '\\';
          out += c;
        }
        out += '"';
        if (num != Rational(0)) out += "~" + num.str();
        return out;
      }
      case Tag::kFresh:
        return "#f" + num.str();
    }
    return {};
  }
};

inline Value above(const Value& v) {
  return Value{v.tag, v.num + Rational(1), v.str};
}
inline Value below(const Value& v) {
  return Value{v.tag, v.num - Rational(1), v.str};
}
// Some value strictly between a < b.
inline Value between(const Value& a, const Value& b) {
  if (a.tag != b.tag) return above(a);
  if (a.tag == Value::Tag::kStr && a.str != b.str) return above(a);
  return Value{a.tag, (a.num + b.num) / Rational(2), a.str};
}

enum class NullKind : std::uint8_t { kPlain, kUnknown, kNotApplicable, kAmbiguous };

inline const char* null_literal(NullKind k) {
  switch (k) {
    case NullKind::kPlain: return "_";
    case NullKind::kUnknown: return "_uk";
    case NullKind::kNotApplicable: return "_na";
    case NullKind::kAmbiguous: return "_amb";
  }
  return "_";
}

struct Term {
  enum class Kind : std::uint8_t { kVar, kConst, kNull };

  Kind kind = Kind::kVar;
  std::string name;  // variable name
  Value value;       // constant
  NullKind null_kind = NullKind::kPlain;
  int null_id = 0;

  static Term var(std::string n) {
    Term t;
    t.kind = Kind::kVar;
    t.name = std::move(n);
    return t;
  }
  static Term constant(Value v) {
    Term t;
    t.kind = Kind::kConst;
    t.value = std::move(v);
    return t;
  }
  static Term num(std::int64_t n) { return constant(Value::number(n)); }
  static Term str(std::string s) { return constant(Value::string(std::move(s))); }
  static Term null(NullKind k, int id) {
    Term t;
    t.kind = Kind::kNull;
    t.null_kind = k;
    t.null_id = id;
    return t;
  }

  bool is_var() const { return kind == Kind::kVar; }
  bool is_const() const { return kind == Kind::kConst; }
  bool is_null() const { return kind == Kind::kNull; }
  bool is_ground() const { return kind != Kind::kVar; }

  friend bool operator==(const Term& a, const Term& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
      case Kind::kVar: return a.name == b.name;
      case Kind::kConst: return a.value == b.value;
      case Kind::kNull: return a.null_kind == b.null_kind && a.null_id == b.null_id;
    }
    return false;
  }
  friend std::strong_ordering operator<=>(const Term& a, const Term& b) {
    if (a.kind != b.kind) return a.kind <=> b.kind;
    switch (a.kind) {
      case Kind::kVar: return a.name <=> b.name;
      case Kind::kConst: return a.value <=> b.value;
      case Kind::kNull:
        if (a.null_kind != b.null_kind) return a.null_kind <=> b.null_kind;
        return a.null_id <=> b.null_id;
    }
    return std::strong_ordering::equal;
  }

  std::string repr() const {
    switch (kind) {
      case Kind::kVar: return name;
      case Kind::kConst: return value.repr();
      case Kind::kNull:
        return std::string(null_literal(null_kind)) + "@" + std::to_string(null_id);
    }
    return {};
  }
};

using Tuple = std::vector<Term>;

// Answer tuples are compared with every null read as the same SQL NULL.
inline Term collapse(const Term& t) {
  return t.is_null() ? Term::null(NullKind::kPlain, 0) : t;
}
inline Tuple collapse(const Tuple& t) {
  Tuple out;
  out.reserve(t.size());
  for (const auto& x : t) out.push_back(collapse(x));
  return out;
}

struct Atom {
  std::string rel;
  std::vector<Term> args;

  friend bool operator==(const Atom&, const Atom&) = default;
  friend auto operator<=>(const Atom&, const Atom&) = default;

  bool is_ground() const {
    return std::all_of(args.begin(), args.end(),
                       [](const Term& t) { return t.is_ground(); });
  }
  bool has_null() const {
    return std::any_of(args.begin(), args.end(),
                       [](const Term& t) { return t.is_null(); });
  }
  std::string repr() const {
    std::string out = rel + "(";
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (i) out += ",";
      out += args[i].repr();
    }
    return out + ")";
  }
};

enum class CmpOp : std::uint8_t { kEq, kLt, kLe };

inline const char* op_symbol(CmpOp op) {
  switch (op) {
    case CmpOp::kEq: return "=";
    case CmpOp::kLt: return "<";
    case CmpOp::kLe: return "<=";
  }
  return "=";
}

struct Comparison {
  Term lhs;
  CmpOp op = CmpOp::kEq;
  Term rhs;

  friend bool operator==(const Comparison&, const Comparison&) = default;
  friend auto operator<=>(const Comparison&, const Comparison&) = default;

  std::string repr() const {
    return lhs.repr() + " " + op_symbol(op) + " " + rhs.repr();
  }
};

inline bool holds(const Value& a, CmpOp op, const Value& b) {
  switch (op) {
    case CmpOp::kEq: return a == b;
    case CmpOp::kLt: return a < b;
    case CmpOp::kLe: return a <= b;
  }
  return false;
}

struct Condition {
  std::vector<Atom> atoms;
  std::vector<Comparison> cmps;

  friend bool operator==(const Condition&, const Condition&) = default;

  bool empty() const { return atoms.empty() && cmps.empty(); }
  std::string repr() const {
    if (empty()) return "true";
    std::string out;
    for (const auto& a : atoms) {
      if (!out.empty()) out += ", ";
      out += a.repr();
    }
    for (const auto& c : cmps) {
      if (!out.empty()) out += ", ";
      out += c.repr();
    }
    return out;
  }
};

inline void collect_vars(const Term& t, std::set<std::string>& out) {
  if (t.is_var()) out.insert(t.name);
}
inline void collect_vars(const Atom& a, std::set<std::string>& out) {
  for (const auto& t : a.args) collect_vars(t, out);
}
inline void collect_vars(const Condition& c, std::set<std::string>& out) {
  for (const auto& a : c.atoms) collect_vars(a, out);
  for (const auto& m : c.cmps) {
    collect_vars(m.lhs, out);
    collect_vars(m.rhs, out);
  }
}
inline void collect_consts(const Term& t, std::set<Value>& out) {
  if (t.is_const()) out.insert(t.value);
}
inline void collect_consts(const Atom& a, std::set<Value>& out) {
  for (const auto& t : a.args) collect_consts(t, out);
}
inline void collect_consts(const Condition& c, std::set<Value>& out) {
  for (const auto& a : c.atoms) collect_consts(a, out);
  for (const auto& m : c.cmps) {
    collect_consts(m.lhs, out);
    collect_consts(m.rhs, out);
  }
}

struct Query {
  std::string name;
  std::vector<Term> head;
  Condition body;

  friend bool operator==(const Query&, const Query&) = default;

  bool relational() const { return body.cmps.empty(); }
  bool linear() const {
    std::set<std::string> seen;
    for (const auto& a : body.atoms)
      if (!seen.insert(a.rel).second) return false;
    return true;
  }
  bool boolean() const { return head.empty(); }
  std::set<std::string> vars() const {
    std::set<std::string> out;
    collect_vars(body, out);
    for (const auto& t : head) collect_vars(t, out);
    return out;
  }
  std::set<Value> consts() const {
    std::set<Value> out;
    collect_consts(body, out);
    for (const auto& t : head) collect_consts(t, out);
    return out;
  }
  std::string repr() const {
    std::string out = (name.empty() ? std::string("Q") : name) + "(";
    for (std::size_t i = 0; i < head.size(); ++i) {
      if (i) out += ",";
      out += head[i].repr();
    }
    return out + ") :- " + body.repr();
  }
};

using Instance = std::set<Atom>;
using Bag = std::map<Tuple, std::size_t>;
using Schema = std::map<std::string, int>;
using Keys = std::map<std::string, int>;

inline std::set<Value> instance_consts(const Instance& d) {
  std::set<Value> out;
  for (const auto& f : d) collect_consts(f, out);
  return out;
}

struct TCStatement {
  std::string name;
  Atom head;
  Condition cond;
  std::optional<std::vector<int>> projection;  // 1-based positions

  friend bool operator==(const TCStatement&, const TCStatement&) = default;

  bool relational() const { return cond.cmps.empty(); }
  std::vector<int> positions() const {
    if (projection) return *projection;
    std::vector<int> all(head.args.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i) + 1;
    return all;
  }
  bool full_projection() const {
    return !projection || projection->size() == head.args.size();
  }
  // Q_C(s) :- R(s), G.
  Query query() const {
    Query q;
    q.name = "Q_" + name;
    q.head = head.args;
    q.body.atoms.push_back(head);
    q.body.atoms.insert(q.body.atoms.end(), cond.atoms.begin(), cond.atoms.end());
    q.body.cmps = cond.cmps;
    return q;
  }
  std::string repr() const {
    std::string out = "Compl(" + head.repr();
    if (projection) {
      out += "; {";
      for (std::size_t i = 0; i < projection->size(); ++i) {
        if (i) out += ",";
        out += std::to_string((*projection)[i]);
      }
      out += "}";
    }
    return out + "; " + cond.repr() + ")";
  }
};

enum class Regime : std::uint8_t { kNoNulls, kIncompleteFacts, kRestrictedFacts, kPartialFacts };

struct IncompleteDatabase {
  Instance ideal;
  Instance available;
  Regime regime = Regime::kNoNulls;

  friend bool operator==(const IncompleteDatabase&, const IncompleteDatabase&) = default;
};

enum class Semantics : std::uint8_t { kSet, kBag };

using Subst = std::map<std::string, Term>;

inline Term substitute(const Subst& s, const Term& t) {
  if (!t.is_var()) return t;
  auto it = s.find(t.name);
  return it == s.end() ? t : it->second;
}
inline Atom substitute(const Subst& s, const Atom& a) {
  Atom out{a.rel, {}};
  out.args.reserve(a.args.size());
  for (const auto& t : a.args) out.args.push_back(substitute(s, t));
  return out;
}
inline Tuple substitute(const Subst& s, const Tuple& ts) {
  Tuple out;
  out.reserve(ts.size());
  for (const auto& t : ts) out.push_back(substitute(s, t));
  return out;
}
inline Comparison substitute(const Subst& s, const Comparison& c) {
  return {substitute(s, c.lhs), c.op, substitute(s, c.rhs)};
}
inline Condition substitute(const Subst& s, const Condition& c) {
  Condition out;
  for (const auto& a : c.atoms) out.atoms.push_back(substitute(s, a));
  for (const auto& m : c.cmps) out.cmps.push_back(substitute(s, m));
  return out;
}
inline Query substitute(const Subst& s, const Query& q) {
  return Query{q.name, substitute(s, q.head), substitute(s, q.body)};
}

inline std::string tuple_repr(const Tuple& t) {
  std::string out = "(";
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) out += ",";
    out += t[i].repr();
  }
  return out + ")";
}

// A witness that containment holds: for each test database, which container
// produced the head tuple and through which valuation.
struct Certificate {
  struct Entry {
    Instance test_db;
    Tuple head;
    std::size_t container = 0;
    Subst mapping;
  };
  std::vector<Entry> entries;
};

// Ideal and available databases after each step of an action sequence.
struct Trace {
  std::vector<std::string> actions;
  std::vector<Instance> ideal;
  std::vector<Instance> available;
};

struct Verdict {
  bool holds = false;
  std::string method;
  std::optional<Certificate> certificate;
  std::optional<IncompleteDatabase> counterexample;
  std::optional<Instance> test_db;  // failing containment test database
  std::optional<Tuple> test_head;
  std::optional<Trace> trace;
  std::vector<std::string> notes;
};

}  // namespace cmpl
