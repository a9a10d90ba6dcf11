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
#include <gtest/gtest.h>
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <string>

#include "json.hpp"

namespace {

struct Result {
  int code;
  std::string out;
};

Result run(const std::string& args, bool merge_stderr = false) {
  std::string cmd = std::string("cd ") + CMPL_EXAMPLES_DIR + " && " + CMPL_BINARY + " " + args +
                    (merge_stderr ? " 2>&1" : " 2>/dev/null");
  FILE* p = popen(cmd.c_str(), "r");
  Result r{-1, {}};
  if (!p) return r;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

nlohmann::json json_of(const Result& r) { return nlohmann::json::parse(r.out); }

TEST(Cli, NoArgumentsIsUsageError) {
  Result r = run("", true);
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("Usage"), std::string::npos);
}

TEST(Cli, UnknownSubcommand) { EXPECT_EQ(run("frobnicate school.cmpl").code, 2); }

TEST(Cli, TcQcDoesNotHold) {
  Result r = run("check-tcqc --semantics set school.cmpl --statements C1 --query Q1");
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(json_of(r)["holds"], false);
  EXPECT_TRUE(json_of(r)["witness"].contains("ideal"));
}

TEST(Cli, TcQcHolds) {
  Result r = run("check-tcqc school.cmpl --statements C1,C2 --query Q1");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(json_of(r)["holds"], true);
}

TEST(Cli, VerifyDesign) {
  Result r = run("verify-design school.cmpl --state s2 --query QHofer");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(json_of(r)["holds"], true);
  EXPECT_EQ(run("verify-design school.cmpl --state s1 --query QHofer").code, 1);
}

TEST(Cli, VerifyRuntime) {
  EXPECT_EQ(run("verify-runtime school.cmpl --path pH,rH --query QHofer").code, 0);
  EXPECT_EQ(run("verify-runtime school.cmpl --path rH,pH --query QHofer").code, 2);
}

TEST(Cli, AmbiguousNullsRefused) {
  Result r = run("check-tcqc-nulls nulls.cmpl --regime amb --query Q_art_students");
  EXPECT_EQ(r.code, 2);
  auto j = json_of(r);
  EXPECT_TRUE(j["holds"].is_null());
  EXPECT_TRUE(j.contains("refused"));
}

TEST(Cli, NullRegimes) {
  EXPECT_EQ(run("check-tcqc-nulls nulls.cmpl --regime res --query Q_art_students --statements C1,C2").code, 1);
  EXPECT_EQ(run("check-tcqc-nulls nulls.cmpl --query Q_nr_for_french --statements C_french --regime res --semantics bag").code, 1);
}

TEST(Cli, InstanceAndAggregates) {
  EXPECT_EQ(run("check-tcqc-instance greek.cmpl --instance D --query Q_greek").code, 0);
  EXPECT_EQ(run("check-tcqc-instance greek.cmpl --instance D_greek --query Q_greek").code, 1);
  EXPECT_EQ(run("check-aggregate aggregates.cmpl --fn count --query Q_nr --statements C_4A").code, 0);
  EXPECT_EQ(run("check-aggregate aggregates.cmpl --fn max --query Q_best_pt --statements C_4A").code, 1);
  Result d = run("dimension-analysis enrollments.cmpl --instance April10 --query Q_pupils --dims s");
  EXPECT_EQ(d.code, 1);  // not every value is complete
  EXPECT_EQ(json_of(d)["new_values_possible"], true);
}

TEST(Cli, HumanOutput) {
  Result r = run("check-tcqc --human school.cmpl --statements C1,C2 --query Q1");
  EXPECT_EQ(r.code, 0);
  EXPECT_THROW(nlohmann::json::parse(r.out), nlohmann::json::parse_error);
}

TEST(Cli, ParseErrorsExitTwo) {
  Result r = run("check-tcqc /dev/null --query Q1", true);
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(run("check-tcqc no_such_file.cmpl --query Q1").code, 2);
}

TEST(Cli, ByteIdenticalRuns) {
  for (const char* args : {"check-tcqc --semantics set school.cmpl --statements C1 --query Q1",
                           "verify-design school.cmpl --state s5 --query QBoth",
                           "gen-adversarial --kind forall-exists --seed 9 --vars 4 --clauses 3 --universal 2",
                           "weakest-precondition school.cmpl --query Q_C1"}) {
    Result a = run(args), b = run(args);
    EXPECT_EQ(a.code, b.code) << args;
    EXPECT_EQ(a.out, b.out) << args;
    EXPECT_FALSE(a.out.empty()) << args;
  }
}

}  // namespace
