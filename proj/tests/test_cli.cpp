/*
 * Copyright 2026 The esfold Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "cli.hpp"
#include "oracles.hpp"

using namespace esfold;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "esfold");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string fx(const std::string& name) { return std::string(ESFOLD_FIXTURE_DIR) + "/" + name; }

}  // namespace

TEST(CliTest, EquivalentFolding) {
  const auto r = run({"equiv", fx("a0.json"), fx("a1.json")});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("hp-equivalent", 0), 0U);
}

TEST(CliTest, DistinguishedFolding) {
  const auto r = run({"equiv", fx("a0.json"), fx("a2.json")});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.out.rfind("not hp-equivalent", 0), 0U);
  EXPECT_GT(r.out.size(), std::string("not hp-equivalent\n").size());
}

TEST(CliTest, FoldMatchesFixture) {
  const auto r = run({"fold", fx("a0.json"), "--set", "c0,c1"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(isomorphic(std::get<Aes>(parse(r.out)), oracle::fixture<Aes>("a1.json")));
}

TEST(CliTest, FoldRejectsNonCombinable) {
  const auto r = run({"fold", fx("a0.json"), "--set", "c0,c2"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("not combinable"), std::string::npos);
  const auto forced = run({"fold", fx("a0.json"), "--set", "c0,c2", "--force"});
  ASSERT_EQ(forced.code, 0);
  EXPECT_TRUE(isomorphic(std::get<Aes>(parse(forced.out)), oracle::fixture<Aes>("a2.json")));
}

TEST(CliTest, FesFoldMatchesFixture) {
  const auto r = run({"fold", fx("f0.json"), "--set", "c1,c2"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(isomorphic(std::get<Fes>(parse(r.out)), oracle::fixture<Fes>("f1.json")));
}

TEST(CliTest, Validate) {
  EXPECT_EQ(run({"validate", fx("a0.json")}).code, 0);
  EXPECT_EQ(run({"validate", fx("f3.json"), "--semantic"}).code, 1);
  EXPECT_EQ(run({"validate", fx("f3.json")}).code, 0);
}

TEST(CliTest, ConfigsAndHistories) {
  const auto c = run({"configs", fx("a0.json"), "--maximal"});
  EXPECT_EQ(c.code, 0);
  EXPECT_EQ(c.out, "{c0}\n{c1, d}\n{c2, d, e}\n");
  const auto h = run({"hist", fx("a2.json"), "c0+c2"});
  EXPECT_EQ(h.code, 0);
  EXPECT_EQ(std::count(h.out.begin(), h.out.end(), '\n'), 4);
}

TEST(CliTest, CandidatesReportConditions) {
  const auto r = run({"candidates", fx("f0.json")});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("X = {c1, c2}: combinable"), std::string::npos);
  EXPECT_NE(r.out.find("condition 2: fails"), std::string::npos);
}

TEST(CliTest, MinimizeAll) {
  const auto r = run({"minimize", fx("a0.json"), "--all"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("classes: 2\n", 0), 0U);
}

TEST(CliTest, ConvertDotGen) {
  const auto c = run({"convert", fx("a0_pes.json"), "--to", "aes"});
  ASSERT_EQ(c.code, 0);
  EXPECT_EQ(kind_of(parse(c.out)), Kind::aes);
  EXPECT_EQ(run({"convert", fx("a0.json"), "--to", "fes"}).code, 2);
  EXPECT_EQ(run({"dot", fx("a1.json")}).out.rfind("digraph aes {", 0), 0U);
  const auto g1 = run({"gen", "--events", "6", "--seed", "9", "--kind", "fes"});
  const auto g2 = run({"gen", "--events", "6", "--seed", "9", "--kind", "fes"});
  ASSERT_EQ(g1.code, 0);
  EXPECT_EQ(g1.out, g2.out);
  EXPECT_EQ(kind_of(parse(g1.out)), Kind::fes);
}

TEST(CliTest, UsageErrors) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"equiv", fx("a0.json")}).code, 2);
  EXPECT_EQ(run({"validate", fx("missing.json")}).code, 2);
  EXPECT_EQ(run({"gen", "--causality", "2"}).code, 2);
  EXPECT_EQ(run({"fold", fx("a0.json"), "--set", "c0,zz"}).code, 2);
  EXPECT_EQ(run({"fold", fx("a0_pes.json"), "--set", "c0,c1"}).code, 2);
}

TEST(CliTest, CapacityGuard) {
  ::setenv("ESFOLD_CAP", "3", 1);
  const auto r = run({"equiv", fx("a0.json"), fx("a1.json")});
  ::unsetenv("ESFOLD_CAP");
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("capacity"), std::string::npos) << r.err;
}
