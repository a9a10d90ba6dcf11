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
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cmpl/cmpl.hpp"
#include "cmpl/emit.hpp"
#include "json.hpp"

namespace {

using namespace cmpl;

struct Options {
  std::vector<std::string> files;
  bool human = false;
  std::string query, union_, statements, goal, premises, fn, instance, dims, regime,
      semantics, state, path, kind;
  std::uint64_t seed = 1;
  int vars = 3, clauses = 3, universal = 1;
};

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

Workspace load(const Options& o) {
  WorkspaceBuilder b;
  for (const auto& f : o.files) {
    std::ifstream in(f);
    if (!in) throw std::invalid_argument("cannot read " + f);
    std::stringstream buf;
    buf << in.rdbuf();
    b.add(buf.str(), f);
  }
  return b.finish();
}

const Query& pick_query(const Workspace& ws, const Options& o) {
  if (!o.query.empty()) return ws.query(o.query);
  if (!ws.goals.empty()) return ws.query(ws.goals.front().query);
  throw std::invalid_argument("no --query given and no goal declared");
}

Semantics pick_semantics(const Workspace& ws, const Options& o) {
  if (o.semantics == "set") return Semantics::kSet;
  if (o.semantics == "bag") return Semantics::kBag;
  if (!o.semantics.empty()) throw std::invalid_argument("semantics must be set or bag");
  for (const auto& g : ws.goals)
    if (o.query.empty() || g.query == o.query) return g.semantics;
  return Semantics::kSet;
}

std::vector<TCStatement> pick_statements(const Workspace& ws, const std::string& names) {
  if (names.empty()) return ws.statements;
  std::vector<TCStatement> out;
  for (const auto& n : split(names)) out.push_back(ws.statement(n));
  return out;
}

std::vector<Query> pick_queries(const Workspace& ws, const std::string& names) {
  std::vector<Query> out;
  for (const auto& n : split(names)) out.push_back(ws.query(n));
  return out;
}

int report(const Verdict& v, const Options& o) {
  std::cout << (o.human ? human_verdict(v) : emit_verdict(v) + "\n");
  return v.holds ? 0 : 1;
}

int report_json(const nlohmann::json& j, bool holds, const Options& o, const std::string& human) {
  std::cout << (o.human ? human : j.dump(2) + "\n");
  return holds ? 0 : 1;
}

int run_command(const std::string& cmd, const Options& o) {
  if (cmd == "gen-adversarial") {
    AdversarialKind kind;
    if (o.kind == "3unsat") kind = AdversarialKind::k3Unsat;
    else if (o.kind == "3sat") kind = AdversarialKind::k3Sat;
    else if (o.kind == "forall-exists") kind = AdversarialKind::kForallExists;
    else throw std::invalid_argument("kind must be 3unsat, 3sat or forall-exists");
    std::mt19937_64 rng(o.seed);
    int uni = kind == AdversarialKind::kForallExists ? std::min(o.universal, o.vars) : 0;
    Cnf phi = random_cnf(rng, o.vars, o.clauses, uni);
    ContainmentProblem p = adversarial_instance(kind, phi);
    std::vector<Query> all{p.containee};
    all.insert(all.end(), p.containers.begin(), p.containers.end());
    std::string text = "% " + o.kind + " seed " + std::to_string(o.seed) + "\n% formula:";
    for (const auto& c : phi.clauses) {
      text += " (";
      for (std::size_t i = 0; i < c.size(); ++i)
        text += (i ? " | " : "") + std::string(c[i].positive ? "" : "~") + "p" +
                std::to_string(c[i].var + 1);
      text += ")";
    }
    text += "\n" + print_schema(schema_of(all));
    for (const auto& q : all) text += print_query(q);
    nlohmann::json j;
    j["kind"] = o.kind;
    j["seed"] = o.seed;
    j["containee"] = p.containee.name;
    nlohmann::json names = nlohmann::json::array();
    for (const auto& q : p.containers) names.push_back(q.name);
    j["containers"] = names;
    j["workspace"] = text;
    std::cout << (o.human ? text : j.dump(2) + "\n");
    return 0;
  }

  Workspace ws = load(o);
  if (cmd == "check-containment") {
    if (o.query.empty() || o.union_.empty())
      throw std::invalid_argument("check-containment needs --query and --union");
    return report(contained(ws.query(o.query), pick_queries(ws, o.union_)), o);
  }
  if (cmd == "check-tctc") {
    if (o.goal.empty()) throw std::invalid_argument("check-tctc needs --goal");
    auto premises = pick_statements(ws, o.statements);
    std::erase_if(premises, [&](const TCStatement& c) { return o.statements.empty() && c.name == o.goal; });
    return report(tc_tc(premises, ws.statement(o.goal)), o);
  }
  if (cmd == "check-tcqc") {
    const Query& q = pick_query(ws, o);
    return report(tc_qc(pick_statements(ws, o.statements), q, pick_semantics(ws, o)), o);
  }
  if (cmd == "check-qcqc-bag") {
    return report(qc_qc_bag(pick_queries(ws, o.premises), pick_query(ws, o)), o);
  }
  if (cmd == "check-aggregate") {
    AggregateQuery qa{pick_query(ws, o), AggFn::kCount};
    if (o.fn == "count") qa.fn = AggFn::kCount;
    else if (o.fn == "sum") qa.fn = AggFn::kSum;
    else if (o.fn == "max") qa.fn = AggFn::kMax;
    else if (o.fn == "min") qa.fn = AggFn::kMin;
    else throw std::invalid_argument("--fn must be count, sum, max or min");
    return report(tc_qc_aggregate(pick_statements(ws, o.statements), qa), o);
  }
  if (cmd == "check-tcqc-instance") {
    return report(tc_qc_instance(ws.instance(o.instance), pick_statements(ws, o.statements),
                                 pick_query(ws, o)),
                  o);
  }
  if (cmd == "check-qcqc-instance") {
    return report(qc_qc_instance(ws.instance(o.instance), pick_queries(ws, o.premises),
                                 pick_query(ws, o)),
                  o);
  }
  if (cmd == "dimension-analysis") {
    const Query& q = pick_query(ws, o);
    DimensionReport rep = dimension_analysis(ws.instance(o.instance),
                                             pick_statements(ws, o.statements), q, split(o.dims));
    nlohmann::json j;
    bool all = !rep.new_values_possible;
    nlohmann::json vals = nlohmann::json::array();
    std::string human;
    for (const auto& [k, c] : rep.complete) {
      all = all && c;
      vals.push_back({{"value", tuple_json(k)}, {"complete", c}});
      human += tuple_repr(k) + ": " + (c ? "complete" : "possibly incomplete") + "\n";
    }
    human += std::string("new values possible: ") + (rep.new_values_possible ? "yes" : "no") + "\n";
    j["holds"] = all;
    j["method"] = "dimension-analysis";
    j["values"] = vals;
    j["new_values_possible"] = rep.new_values_possible;
    return report_json(j, all, o, human);
  }
  if (cmd == "check-tcqc-nulls") {
    const Query& q = pick_query(ws, o);
    auto cs = pick_statements(ws, o.statements);
    Semantics sem = pick_semantics(ws, o);
    if (sem == Semantics::kBag) {
      if (o.regime == "inc") throw Refusal("bag semantics under incomplete facts is not supported");
      return report(tc_qc_bag_keys(cs, q, ws.keys), o);
    }
    if (o.regime == "inc") return report(tc_qc_inc(cs, q), o);
    if (o.regime == "res") return report(tc_qc_res(cs, q), o);
    if (o.regime == "3null") return report(tc_qc_3null(cs, q), o);
    if (o.regime == "amb")
      throw Refusal("no set of table completeness statements characterizes set completeness "
                    "when ambiguous nulls may occur");
    throw std::invalid_argument("--regime must be inc, res, 3null or amb");
  }
  if (cmd == "verify-design") {
    if (!ws.qats) throw std::invalid_argument("workspace declares no transition system");
    if (o.state.empty()) throw std::invalid_argument("verify-design needs --state");
    return report(design_time_verify(*ws.qats, o.state, pick_query(ws, o)), o);
  }
  if (cmd == "verify-runtime") {
    if (!ws.qats) throw std::invalid_argument("workspace declares no transition system");
    return report(runtime_verify(*ws.qats, split(o.path), pick_query(ws, o)), o);
  }
  if (cmd == "weakest-precondition") {
    const Query& q = pick_query(ws, o);
    auto cs = weakest_precondition(q);
    nlohmann::json j;
    j["holds"] = true;
    j["method"] = "weakest-precondition";
    nlohmann::json list = nlohmann::json::array();
    std::string human;
    for (const auto& c : cs) {
      list.push_back(print_statement(c).substr(0, print_statement(c).size() - 1));
      human += print_statement(c);
    }
    j["statements"] = list;
    return report_json(j, true, o, human);
  }
  throw std::invalid_argument("unknown command " + cmd);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Completeness reasoning over partially complete databases"};
  app.require_subcommand(1);
  Options o;
  auto common = [&](CLI::App* sub) {
    sub->add_option("files", o.files, "workspace files (.cmpl)");
    auto* json = sub->add_flag("--json", "JSON output (default)");
    sub->add_flag("--human", o.human, "human-readable output")->excludes(json);
    sub->add_option("--query", o.query, "query name");
    sub->add_option("--statements", o.statements, "comma-separated statement names (default: all)");
  };
  struct Spec {
    const char* name;
    const char* help;
  };
  const Spec specs[] = {
      {"check-containment", "containment of --query in the union of --union"},
      {"check-tctc", "entailment of statement --goal by --statements"},
      {"check-tcqc", "query completeness entailed by statements"},
      {"check-qcqc-bag", "bag completeness of --query entailed by completeness of --premises"},
      {"check-aggregate", "completeness of an aggregate query"},
      {"check-tcqc-instance", "query completeness over a concrete available --instance"},
      {"check-qcqc-instance", "query completeness from --premises over an --instance"},
      {"dimension-analysis", "which --dims values of the query answer are complete"},
      {"check-tcqc-nulls", "query completeness over databases with nulls"},
      {"verify-design", "completeness in every run reaching --state"},
      {"verify-runtime", "completeness after the actions of --path"},
      {"weakest-precondition", "statements characterizing completeness of --query"},
      {"gen-adversarial", "containment instance from a random propositional formula"},
  };
  for (const auto& s : specs) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    common(sub);
    std::string n = s.name;
    if (n == "check-containment") sub->add_option("--union", o.union_, "comma-separated containers");
    if (n == "check-tctc") sub->add_option("--goal", o.goal, "goal statement");
    if (n == "check-tcqc" || n == "check-tcqc-nulls")
      sub->add_option("--semantics", o.semantics, "set or bag")
          ->check(CLI::IsMember({"set", "bag"}));
    if (n == "check-qcqc-bag" || n == "check-qcqc-instance")
      sub->add_option("--premises", o.premises, "comma-separated premise queries");
    if (n == "check-aggregate")
      sub->add_option("--fn", o.fn, "count, sum, max or min")
          ->required()
          ->check(CLI::IsMember({"count", "sum", "max", "min"}));
    if (n == "check-tcqc-instance" || n == "check-qcqc-instance" || n == "dimension-analysis")
      sub->add_option("--instance", o.instance, "instance name")->required();
    if (n == "dimension-analysis")
      sub->add_option("--dims", o.dims, "comma-separated head variables")->required();
    if (n == "check-tcqc-nulls")
      sub->add_option("--regime", o.regime, "inc, res, 3null or amb")
          ->required()
          ->check(CLI::IsMember({"inc", "res", "3null", "amb"}));
    if (n == "verify-design") sub->add_option("--state", o.state, "target state")->required();
    if (n == "verify-runtime") sub->add_option("--path", o.path, "comma-separated actions")->required();
    if (n == "gen-adversarial") {
      sub->add_option("--kind", o.kind, "3unsat, 3sat or forall-exists")
          ->required()
          ->check(CLI::IsMember({"3unsat", "3sat", "forall-exists"}));
      sub->add_option("--seed", o.seed, "random seed");
      sub->add_option("--vars", o.vars, "propositions")->check(CLI::Range(1, 12));
      sub->add_option("--clauses", o.clauses, "clauses")->check(CLI::Range(0, 20));
      sub->add_option("--universal", o.universal, "universal propositions (forall-exists)")
          ->check(CLI::Range(0, 12));
    }
  }
  if (argc < 2) {
    std::cerr << app.help();
    return 2;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  std::string cmd = app.get_subcommands().front()->get_name();
  try {
    return run_command(cmd, o);
  } catch (const Refusal& e) {
    if (o.human)
      std::cout << "refused: " << e.what() << "\n";
    else
      std::cout << emit_refusal(e.what()) << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
