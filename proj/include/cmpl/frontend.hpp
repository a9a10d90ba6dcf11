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
#include <cctype>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cmpl/core.hpp"
#include "cmpl/process.hpp"

namespace cmpl {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& where, int line, int col, const std::string& msg)
      : std::runtime_error(where + ":" + std::to_string(line) + ":" + std::to_string(col) +
                           ": " + msg),
        line_(line),
        col_(col) {}
  int line() const { return line_; }
  int col() const { return col_; }

 private:
  int line_;
  int col_;
};

struct Goal {
  std::string query;
  Semantics semantics = Semantics::kSet;
};

struct Workspace {
  Schema schema;
  std::map<std::string, Query> queries;
  std::vector<TCStatement> statements;
  std::map<std::string, Instance> instances;
  Keys keys;
  std::vector<Goal> goals;
  std::optional<Qats> qats;

  const Query& query(const std::string& name) const {
    auto it = queries.find(name);
    if (it == queries.end()) throw std::invalid_argument("unknown query " + name);
    return it->second;
  }
  const TCStatement& statement(const std::string& name) const {
    for (const auto& c : statements)
      if (c.name == name) return c;
    throw std::invalid_argument("unknown statement " + name);
  }
  const Instance& instance(const std::string& name) const {
    auto it = instances.find(name);
    if (it == instances.end()) throw std::invalid_argument("unknown instance " + name);
    return it->second;
  }
};

namespace detail {

struct Token {
  enum Kind { kIdent, kNumber, kString, kNull, kPunct, kEnd } kind = kEnd;
  std::string text;
  Value value;  // numbers and strings
  NullKind null_kind = NullKind::kPlain;
  int null_id = -1;  // -1: not written
  int line = 1, col = 1;
};

class Lexer {
 public:
  Lexer(std::string_view src, std::string where) : src_(src), where_(std::move(where)) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip();
      Token t;
      t.line = line_;
      t.col = col_;
      if (pos_ >= src_.size()) {
        out.push_back(t);
        return out;
      }
      char c = src_[pos_];
      if (std::isalpha(static_cast<unsigned char>(c))) {
        t.kind = Token::kIdent;
        while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
                                      src_[pos_] == '_' || src_[pos_] == '\''))
          t.text += take();
      } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                 (c == '-' && pos_ + 1 < src_.size() &&
                  std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
        t.kind = Token::kNumber;
        t.text = number_text();
        auto q = Rational::parse(t.text);
        if (!q) fail(t, "malformed number '" + t.text + "'");
        t.value = Value::number(*q);
      } else if (c == '"') {
        t.kind = Token::kString;
        take();
        std::string s;
        while (true) {
          if (pos_ >= src_.size() || src_[pos_] == '\n') fail(t, "unterminated string");
          char d = take();
          if (d == '"') break;
          if (d == '\\') {
            if (pos_ >= src_.size()) fail(t, "unterminated string");
            d = take();
          }
          s += d;
        }
        Rational off(0);
        if (pos_ < src_.size() && src_[pos_] == '~') {
          take();
          std::string n = number_text();
          auto q = Rational::parse(n);
          if (!q) fail(t, "malformed string offset");
          off = *q;
        }
        t.value = Value::string(s, off);
        t.text = s;
      } else if (c == '_') {
        t.kind = Token::kNull;
        take();
        std::string tag;
        while (pos_ < src_.size() && std::isalpha(static_cast<unsigned char>(src_[pos_])))
          tag += take();
        if (tag.empty()) t.null_kind = NullKind::kPlain;
        else if (tag == "uk") t.null_kind = NullKind::kUnknown;
        else if (tag == "na") t.null_kind = NullKind::kNotApplicable;
        else if (tag == "amb") t.null_kind = NullKind::kAmbiguous;
        else fail(t, "unknown null kind '_" + tag + "'");
        if (pos_ < src_.size() && src_[pos_] == '@') {
          take();
          std::string n;
          while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
            n += take();
          if (n.empty() || n.size() > 9) fail(t, "malformed null label");
          t.null_id = std::stoi(n);
          if (t.null_id == 0) fail(t, "null labels start at 1");
        }
        t.text = "_" + tag;
      } else {
        t.kind = Token::kPunct;
        static const char* two[] = {":-", "<=", ">=", "<~", "->"};
        for (const char* p : two)
          if (src_.substr(pos_, 2) == p) t.text = p;
        if (t.text.empty()) {
          if (std::string_view("().,;:{}[]/=<>").find(c) == std::string_view::npos)
            fail(t, std::string("unexpected character '") + c + "'");
          t.text = std::string(1, c);
        }
        for (std::size_t i = 0; i < t.text.size(); ++i) take();
      }
      out.push_back(std::move(t));
    }
  }

 private:
  [[noreturn]] void fail(const Token& t, const std::string& msg) const {
    throw ParseError(where_, t.line, t.col, msg);
  }
  char take() {
    char c = src_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }
  void skip() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '%') {
        while (pos_ < src_.size() && src_[pos_] != '\n') take();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        take();
      } else {
        break;
      }
    }
  }
  std::string number_text() {
    std::string s;
    if (pos_ < src_.size() && src_[pos_] == '-') s += take();
    auto digits = [&] {
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) s += take();
    };
    digits();
    if (pos_ + 1 < src_.size() && (src_[pos_] == '.' || src_[pos_] == '/') &&
        std::isdigit(static_cast<unsigned char>(src_[pos_ + 1]))) {
      s += take();
      digits();
    }
    return s;
  }

  std::string_view src_;
  std::string where_;
  std::size_t pos_ = 0;
  int line_ = 1, col_ = 1;
};

struct Located {
  Atom atom;
  int line, col;
};

}  // namespace detail

// Accumulates declarations from one or more sources, then validates the whole
// workspace.
class WorkspaceBuilder {
 public:
  void add(std::string_view text, const std::string& where = "<input>") {
    toks_ = detail::Lexer(text, where).run();
    where_ = where;
    i_ = 0;
    while (peek().kind != detail::Token::kEnd) declaration();
  }

  Workspace finish() {
    for (const auto& u : uses_) {
      auto it = ws_.schema.find(u.atom.rel);
      if (it == ws_.schema.end())
        throw ParseError(u.where, u.line, u.col, "undeclared relation " + u.atom.rel);
      if (it->second != static_cast<int>(u.atom.args.size()))
        throw ParseError(u.where, u.line, u.col,
                         "relation " + u.atom.rel + " has arity " + std::to_string(it->second) +
                             ", used with " + std::to_string(u.atom.args.size()));
    }
    for (const auto& k : key_uses_) {
      auto it = ws_.schema.find(k.rel);
      if (it == ws_.schema.end())
        throw ParseError(k.where, k.line, k.col, "key on undeclared relation " + k.rel);
      if (it->second != k.arity)
        throw ParseError(k.where, k.line, k.col, "key arity disagrees with relation " + k.rel);
    }
    for (const auto& g : ws_.goals)
      if (!ws_.queries.count(g.query))
        throw std::invalid_argument("goal names unknown query " + g.query);
    // Labelled nulls keep their label; unlabelled ones get fresh labels.
    int next = 0;
    for (const auto& [n, d] : ws_.instances) next = std::max(next, max_null_id(d));
    for (auto& [n, d] : ws_.instances) {
      Instance fixed;
      for (Atom f : d) {
        for (auto& t : f.args)
          if (t.is_null() && t.null_id < 0) t.null_id = ++next;
        fixed.insert(std::move(f));
      }
      d = std::move(fixed);
    }
    if (ws_.qats) {
      Qats& q = *ws_.qats;
      if (q.initial.empty()) throw std::invalid_argument("transition system has no initial state");
      for (const auto& e : q.edges) {
        if (!q.has_state(e.from) || !q.has_state(e.to))
          throw std::invalid_argument("edge uses undeclared state");
        q.action(e.action);
      }
    }
    return std::move(ws_);
  }

 private:
  using Tok = detail::Token;

  struct Use {
    Atom atom;
    std::string where;
    int line, col;
  };
  struct KeyUse {
    std::string rel;
    int arity;
    std::string where;
    int line, col;
  };

  const Tok& peek(std::size_t k = 0) const {
    return toks_[std::min(i_ + k, toks_.size() - 1)];
  }
  const Tok& next() {
    const Tok& t = toks_[i_];
    if (i_ + 1 < toks_.size()) ++i_;
    return t;
  }
  [[noreturn]] void fail(const Tok& t, const std::string& msg) const {
    throw ParseError(where_, t.line, t.col, msg);
  }
  bool is(const std::string& p) const {
    return (peek().kind == Tok::kPunct || peek().kind == Tok::kIdent) && peek().text == p;
  }
  void expect(const std::string& p) {
    if (!is(p)) fail(peek(), "expected '" + p + "'");
    next();
  }
  std::string ident(const std::string& what) {
    if (peek().kind != Tok::kIdent) fail(peek(), "expected " + what);
    return next().text;
  }
  int integer(const std::string& what) {
    const Tok& t = peek();
    if (t.kind != Tok::kNumber || !t.value.num.is_integer()) fail(t, "expected " + what);
    next();
    return static_cast<int>(t.value.num.num());
  }

  Term term(bool allow_null) {
    const Tok& t = peek();
    switch (t.kind) {
      case Tok::kIdent: next(); return Term::var(t.text);
      case Tok::kNumber:
      case Tok::kString: next(); return Term::constant(t.value);
      case Tok::kNull:
        if (!allow_null) fail(t, "null values may only appear in instances");
        next();
        return Term::null(t.null_kind, t.null_id);
      default: fail(t, "expected a term");
    }
  }

  Atom atom(bool allow_null, std::optional<std::vector<int>>* projection = nullptr) {
    const Tok& at = peek();
    Atom a;
    a.rel = ident("relation name");
    if (projection && is("[")) {
      next();
      std::vector<int> pos{integer("position")};
      while (is(",")) {
        next();
        pos.push_back(integer("position"));
      }
      expect("]");
      *projection = pos;
    }
    expect("(");
    if (!is(")")) {
      a.args.push_back(term(allow_null));
      while (is(",")) {
        next();
        a.args.push_back(term(allow_null));
      }
    }
    expect(")");
    uses_.push_back({a, where_, at.line, at.col});
    return a;
  }

  // Relational atom or infix comparison.
  void literal(Condition& c) {
    if (peek().kind == Tok::kIdent && peek(1).kind == Tok::kPunct && peek(1).text == "(" ) {
      c.atoms.push_back(atom(false));
      return;
    }
    if (peek().kind == Tok::kIdent && peek(1).kind == Tok::kPunct && peek(1).text == "[")
      fail(peek(), "projections are only allowed in statement heads");
    Term l = term(false);
    const Tok& op = peek();
    if (op.kind != Tok::kPunct) fail(op, "expected a comparison operator");
    next();
    Term r = term(false);
    if (op.text == "=") c.cmps.push_back({l, CmpOp::kEq, r});
    else if (op.text == "<") c.cmps.push_back({l, CmpOp::kLt, r});
    else if (op.text == "<=") c.cmps.push_back({l, CmpOp::kLe, r});
    else if (op.text == ">") c.cmps.push_back({r, CmpOp::kLt, l});
    else if (op.text == ">=") c.cmps.push_back({r, CmpOp::kLe, l});
    else fail(op, "expected a comparison operator");
  }

  Condition body() {
    Condition c;
    if (is("true")) {
      next();
      return c;
    }
    literal(c);
    while (is(",")) {
      next();
      literal(c);
    }
    return c;
  }

  // Variables in comparisons (and `extra`) must occur in some atom; compared
  // constants must agree in type.
  void check_condition(const Tok& at, const std::vector<Atom>& atoms, const Condition& c,
                       const std::vector<Term>& extra, const std::string& what) {
    std::set<std::string> bound;
    for (const auto& a : atoms) collect_vars(a, bound);
    for (const auto& a : c.atoms) collect_vars(a, bound);
    std::set<std::string> need;
    collect_vars(c, need);
    for (const auto& t : extra) collect_vars(t, need);
    for (const auto& v : need)
      if (!bound.count(v)) fail(at, what + " is unsafe: variable " + v + " occurs in no atom");
    // Union of variables linked by comparisons; each class sees one type.
    std::map<std::string, std::string> parent;
    std::function<std::string(const std::string&)> root = [&](const std::string& v) {
      auto it = parent.find(v);
      if (it == parent.end() || it->second == v) return v;
      return it->second = root(it->second);
    };
    for (const auto& m : c.cmps)
      if (m.lhs.is_var() && m.rhs.is_var()) parent[root(m.lhs.name)] = root(m.rhs.name);
    std::map<std::string, Value::Tag> tag;
    for (const auto& m : c.cmps) {
      if (m.lhs.is_const() && m.rhs.is_const()) {
        if (m.lhs.value.tag != m.rhs.value.tag)
          fail(at, "comparison between a number and a string in " + what);
        continue;
      }
      const Term* v = m.lhs.is_var() ? &m.lhs : &m.rhs;
      const Term* k = m.lhs.is_var() ? &m.rhs : &m.lhs;
      if (!k->is_const()) continue;
      auto [it, fresh] = tag.emplace(root(v->name), k->value.tag);
      if (!fresh && it->second != k->value.tag)
        fail(at, "variable " + v->name + " is compared with both numbers and strings in " + what);
    }
  }

  void require_name_free(const Tok& at, bool taken, const std::string& what,
                         const std::string& name) {
    if (taken) fail(at, "duplicate " + what + " " + name);
  }

  Qats& qats() {
    if (!ws_.qats) ws_.qats.emplace();
    return *ws_.qats;
  }

  void declaration() {
    const Tok& kw = peek();
    if (kw.kind != Tok::kIdent) fail(kw, "expected a declaration");
    std::string k = next().text;
    if (k == "rel") {
      const Tok& at = peek();
      std::string r = ident("relation name");
      expect("/");
      int n = integer("arity");
      if (n < 0) fail(at, "negative arity");
      auto it = ws_.schema.find(r);
      if (it != ws_.schema.end() && it->second != n) fail(at, "relation " + r + " redeclared");
      ws_.schema[r] = n;
    } else if (k == "query") {
      const Tok& at = peek();
      Query q;
      q.name = ident("query name");
      require_name_free(at, ws_.queries.count(q.name) > 0, "query", q.name);
      expect("(");
      if (!is(")")) {
        q.head.push_back(term(false));
        while (is(",")) {
          next();
          q.head.push_back(term(false));
        }
      }
      expect(")");
      expect(":-");
      q.body = body();
      check_condition(at, {}, q.body, q.head, "query " + q.name);
      ws_.queries.emplace(q.name, std::move(q));
    } else if (k == "tc") {
      const Tok& at = peek();
      TCStatement c;
      c.name = ident("statement name");
      for (const auto& s : ws_.statements)
        require_name_free(at, s.name == c.name, "statement", c.name);
      expect(":");
      const Tok& head_at = peek();
      c.head = atom(false, &c.projection);
      if (c.projection) {
        std::set<int> seen;
        for (int p : *c.projection)
          if (p < 1 || p > static_cast<int>(c.head.args.size()) || !seen.insert(p).second)
            fail(head_at, "invalid projection position " + std::to_string(p));
        std::sort(c.projection->begin(), c.projection->end());
      }
      if (is(";")) {
        next();
        c.cond = body();
      }
      check_condition(at, {c.head}, c.cond, {}, "statement " + c.name);
      ws_.statements.push_back(std::move(c));
    } else if (k == "key") {
      const Tok& at = peek();
      std::string r = ident("relation name");
      expect("/");
      int n = integer("arity");
      expect("=");
      int len = integer("key length");
      if (len < 1 || len > n) fail(at, "key length must be between 1 and the arity");
      key_uses_.push_back({r, n, where_, at.line, at.col});
      ws_.keys[r] = len;
    } else if (k == "goal") {
      const Tok& at = peek();
      std::string sem = ident("set or bag");
      if (sem != "set" && sem != "bag") fail(at, "goal semantics must be set or bag");
      std::string q = ident("query name");
      ws_.goals.push_back({q, sem == "bag" ? Semantics::kBag : Semantics::kSet});
    } else if (k == "instance") {
      const Tok& at = peek();
      std::string name = ident("instance name");
      require_name_free(at, ws_.instances.count(name) > 0, "instance", name);
      expect("{");
      Instance d;
      while (!is("}")) {
        const Tok& ft = peek();
        Atom f = atom(true);
        for (const auto& t : f.args)
          if (t.is_var()) fail(ft, "fact " + f.repr() + " contains variable " + t.name);
        d.insert(std::move(f));
        if (!is("}")) expect(".");
      }
      expect("}");
      ws_.instances.emplace(name, std::move(d));
      if (is(".")) next();
      return;
    } else if (k == "state") {
      const Tok& at = peek();
      std::string s = ident("state name");
      require_name_free(at, qats().has_state(s), "state", s);
      qats().states.push_back(s);
      if (is("init")) {
        next();
        if (!qats().initial.empty()) fail(at, "second initial state " + s);
        qats().initial = s;
      }
    } else if (k == "action") {
      const Tok& at = peek();
      std::string name = ident("action name");
      Action* a = nullptr;
      for (auto& x : qats().actions)
        if (x.name == name) a = &x;
      if (!a) {
        qats().actions.push_back(Action{name, {}, {}});
        a = &qats().actions.back();
      }
      if (is("rw")) {
        next();
        RealWorldEffect r;
        r.head = atom(false);
        expect("<~");
        r.guard = body();
        check_condition(at, {r.head}, r.guard, {}, "effect of " + name);
        a->real_world.push_back(std::move(r));
      } else if (is("copy")) {
        next();
        CopyEffect c;
        c.body = body();
        expect("->");
        c.head = atom(false);
        if (std::find(c.body.atoms.begin(), c.body.atoms.end(), c.head) == c.body.atoms.end())
          fail(at, "copy effect of " + name + " must contain " + c.head.repr() + " in its body");
        check_condition(at, {}, c.body, c.head.args, "copy effect of " + name);
        a->copies.push_back(std::move(c));
      } else if (!is(".")) {
        fail(peek(), "expected rw or copy");
      }
    } else if (k == "edge") {
      Edge e;
      e.from = ident("state");
      e.action = ident("action");
      e.to = ident("state");
      qats().edges.push_back(std::move(e));
    } else {
      fail(kw, "unknown declaration '" + k + "'");
    }
    expect(".");
  }

  std::vector<Tok> toks_;
  std::size_t i_ = 0;
  std::string where_;
  Workspace ws_;
  std::vector<Use> uses_;
  std::vector<KeyUse> key_uses_;
};

inline Workspace parse_workspace(std::string_view text, const std::string& where = "<input>") {
  WorkspaceBuilder b;
  b.add(text, where);
  return b.finish();
}

// Printers emit the input syntax, so their output parses back.

inline std::string print_instance(const std::string& name, const Instance& d) {
  std::string out = "instance " + name + " {";
  for (const auto& f : d) out += "\n  " + f.repr() + ".";
  return out + (d.empty() ? "}\n" : "\n}\n");
}

inline std::string print_query(const Query& q) {
  std::string out = "query " + q.repr() + ".\n";
  return out;
}

inline std::string print_statement(const TCStatement& c) {
  std::string out = "tc " + c.name + " : " + c.head.rel;
  if (c.projection) {
    out += "[";
    for (std::size_t i = 0; i < c.projection->size(); ++i)
      out += (i ? "," : "") + std::to_string((*c.projection)[i]);
    out += "]";
  }
  out += "(";
  for (std::size_t i = 0; i < c.head.args.size(); ++i)
    out += (i ? "," : "") + c.head.args[i].repr();
  out += ")";
  if (!c.cond.empty()) out += " ; " + c.cond.repr();
  return out + ".\n";
}

inline std::string print_schema(const Schema& s) {
  std::string out;
  for (const auto& [r, n] : s) out += "rel " + r + "/" + std::to_string(n) + ".\n";
  return out;
}

inline Schema schema_of(const std::vector<Query>& qs) {
  Schema s;
  for (const auto& q : qs)
    for (const auto& a : q.body.atoms) s[a.rel] = static_cast<int>(a.args.size());
  return s;
}

}  // namespace cmpl
