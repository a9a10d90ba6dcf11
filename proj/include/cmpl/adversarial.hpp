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

#include <array>
#include <cstdint>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "cmpl/core.hpp"

namespace cmpl {

struct Literal {
  int var = 0;  // 0-based proposition index
  bool positive = true;
};

// Conjunctive normal form with clauses of one to three literals. For the
// forall-exists kind, propositions 0..universal-1 are universally quantified
// and the rest existentially.
struct Cnf {
  int num_vars = 0;
  int universal = 0;
  std::vector<std::vector<Literal>> clauses;
};

enum class AdversarialKind : std::uint8_t { k3Unsat, k3Sat, kForallExists };

struct ContainmentProblem {
  Query containee;
  std::vector<Query> containers;
};

namespace detail {

inline std::array<Literal, 3> pad3(const std::vector<Literal>& c) {
  if (c.empty() || c.size() > 3) throw std::invalid_argument("clauses need one to three literals");
  std::array<Literal, 3> out{c[0], c[0], c[0]};
  for (std::size_t i = 0; i < 3; ++i) out[i] = c[std::min(i, c.size() - 1)];
  return out;
}

inline std::string clause_rel(std::size_t i) { return "C" + std::to_string(i + 1); }

inline Term prop(int v) { return Term::var("p" + std::to_string(v + 1)); }

// The seven 0/1 triples that satisfy the clause.
inline std::vector<Atom> satisfying_facts(const std::string& rel,
                                          const std::array<Literal, 3>& c) {
  std::vector<Atom> out;
  for (int bits = 0; bits < 8; ++bits) {
    std::array<int, 3> val{bits >> 2 & 1, bits >> 1 & 1, bits & 1};
    bool sat = false;
    bool consistent = true;
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < i; ++j)
        if (c[i].var == c[j].var && val[i] != val[j]) consistent = false;
      if ((val[i] == 1) == c[i].positive) sat = true;
    }
    if (sat && consistent)
      out.push_back(Atom{rel, {Term::num(val[0]), Term::num(val[1]), Term::num(val[2])}});
  }
  return out;
}

}  // namespace detail

// 3unsat: phi is unsatisfiable iff Q is contained in the union of the Q'_i
// built from the clauses of its negation.
// 3sat: phi is satisfiable iff Q, built from all satisfying 0/1 facts of
// every clause, is contained in Q'.
// forall-exists: phi is valid iff Q is contained in Q'.
inline ContainmentProblem adversarial_instance(AdversarialKind kind, const Cnf& phi) {
  for (const auto& c : phi.clauses)
    for (const auto& l : c)
      if (l.var < 0 || l.var >= phi.num_vars) throw std::invalid_argument("literal out of range");
  ContainmentProblem out;
  out.containee.name = "Q";
  switch (kind) {
    case AdversarialKind::k3Unsat: {
      for (std::size_t i = 0; i < phi.clauses.size(); ++i) {
        auto c = detail::pad3(phi.clauses[i]);
        std::string rel = detail::clause_rel(i);
        out.containee.body.atoms.push_back(
            Atom{rel, {detail::prop(c[0].var), detail::prop(c[1].var), detail::prop(c[2].var)}});
        Query qi;
        qi.name = "Q" + std::to_string(i + 1);
        Atom a{rel, {}};
        for (int j = 0; j < 3; ++j) {
          Term x = Term::var("x" + std::to_string(j + 1));
          a.args.push_back(x);
          // The negated literal is true when p >= 0 reads as true.
          if (c[j].positive)
            qi.body.cmps.push_back({x, CmpOp::kLt, Term::num(0)});
          else
            qi.body.cmps.push_back({Term::num(0), CmpOp::kLe, x});
        }
        qi.body.atoms.insert(qi.body.atoms.begin(), a);
        out.containers.push_back(std::move(qi));
      }
      break;
    }
    case AdversarialKind::k3Sat: {
      Query qp;
      qp.name = "Q1";
      for (std::size_t i = 0; i < phi.clauses.size(); ++i) {
        auto c = detail::pad3(phi.clauses[i]);
        std::string rel = detail::clause_rel(i);
        for (auto& f : detail::satisfying_facts(rel, c)) out.containee.body.atoms.push_back(f);
        qp.body.atoms.push_back(
            Atom{rel, {detail::prop(c[0].var), detail::prop(c[1].var), detail::prop(c[2].var)}});
      }
      out.containers.push_back(std::move(qp));
      break;
    }
    case AdversarialKind::kForallExists: {
      Query qp;
      qp.name = "Q1";
      for (int j = 0; j < phi.universal; ++j) {
        std::string r = "R" + std::to_string(j + 1), s = "S" + std::to_string(j + 1);
        Term w = Term::var("w" + std::to_string(j + 1));
        out.containee.body.atoms.push_back(Atom{r, {Term::num(0), w}});
        out.containee.body.atoms.push_back(Atom{r, {w, Term::num(1)}});
        out.containee.body.atoms.push_back(Atom{s, {w, Term::num(0)}});
        out.containee.body.atoms.push_back(Atom{s, {Term::num(1), Term::num(1)}});
        Term u = Term::var("u" + std::to_string(j + 1));
        Term v = Term::var("v" + std::to_string(j + 1));
        qp.body.atoms.push_back(Atom{r, {u, v}});
        qp.body.atoms.push_back(Atom{s, {v, detail::prop(j)}});
        qp.body.cmps.push_back({u, CmpOp::kLe, Term::num(0)});
        qp.body.cmps.push_back({Term::num(0), CmpOp::kLt, v});
      }
      for (std::size_t i = 0; i < phi.clauses.size(); ++i) {
        auto c = detail::pad3(phi.clauses[i]);
        std::string rel = detail::clause_rel(i);
        for (auto& f : detail::satisfying_facts(rel, c)) out.containee.body.atoms.push_back(f);
        qp.body.atoms.push_back(
            Atom{rel, {detail::prop(c[0].var), detail::prop(c[1].var), detail::prop(c[2].var)}});
      }
      out.containers.push_back(std::move(qp));
      break;
    }
  }
  return out;
}

inline Cnf random_cnf(std::mt19937_64& rng, int num_vars, int num_clauses, int universal = 0) {
  Cnf phi;
  phi.num_vars = num_vars;
  phi.universal = universal;
  std::uniform_int_distribution<int> var(0, num_vars - 1), len(1, 3), coin(0, 1);
  for (int i = 0; i < num_clauses; ++i) {
    std::vector<Literal> c;
    int n = len(rng);
    for (int k = 0; k < n; ++k) c.push_back({var(rng), coin(rng) == 1});
    phi.clauses.push_back(std::move(c));
  }
  return phi;
}

}  // namespace cmpl
