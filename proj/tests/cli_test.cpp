// Copyright 2026 The vetmeter Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "vetmeter/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "vetmeter/vet.hpp"

namespace vetmeter::cli {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "vetmeter");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const char* base = std::getenv("VETMETER_TEST_TMP");
    dir_ = fs::path(base ? base : fs::temp_directory_path().string()) /
           ("cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  static std::string slurp(const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }
  static void write(const std::string& p, const std::string& text) {
    std::ofstream(p, std::ios::binary) << text;
  }
  fs::path dir_;
};

TEST_F(CliTest, SimulateDefaultsAndDeterminism) {
  const auto a = run_cli({"simulate", "--out", path("a.jsonl")});
  ASSERT_EQ(a.code, kOk) << a.err;
  const auto text = slurp(path("a.jsonl"));
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 40000);
  EXPECT_TRUE(fs::exists(path("a.jsonl.truth.json")));
  ASSERT_EQ(run_cli({"simulate", "--out", path("b.jsonl")}).code, kOk);
  EXPECT_EQ(slurp(path("b.jsonl")), text);
  EXPECT_EQ(slurp(path("b.jsonl.truth.json")), slurp(path("a.jsonl.truth.json")));
}

TEST_F(CliTest, SimulateRejectsZeroRecords) {
  const auto r = run_cli({"simulate", "--records", "0", "--out", path("x.jsonl")});
  EXPECT_EQ(r.code, kFatal);
  EXPECT_NE(r.err.find("InvalidConfig"), std::string::npos);
}

TEST_F(CliTest, AnalyzeZeroOverheadShowsUnitVet) {
  ASSERT_EQ(run_cli({"simulate", "--records", "2000", "--overhead-fraction", "0", "--io-fraction",
                     "0", "--jitter", "0", "--out", path("ideal.jsonl")})
                .code,
            kOk);
  const auto r = run_cli({"analyze", "--input", path("ideal.jsonl")});
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_NE(r.out.find("vet_job                1.000"), std::string::npos) << r.out;
}

TEST_F(CliTest, AnalyzeCsvAndJsonReports) {
  ASSERT_EQ(run_cli({"simulate", "--records", "2000", "--out", path("t.jsonl")}).code, kOk);
  const auto csv = run_cli({"analyze", "--input", path("t.jsonl"), "--report", "csv"});
  ASSERT_EQ(csv.code, kOk) << csv.err;
  EXPECT_EQ(csv.out.substr(0, csv.out.find('\n')), "task_id,pr_ns,ei_ns,oc_ns,vet_task");
  EXPECT_EQ(std::count(csv.out.begin(), csv.out.end(), '\n'), 5);

  ASSERT_EQ(run_cli({"analyze", "--input", path("t.jsonl"), "--report", "json", "--out",
                     path("r.json")})
                .code,
            kOk);
  const auto reports = parse_reports_json(slurp(path("r.json")));
  ASSERT_EQ(reports.size(), 1u);
  EXPECT_EQ(render_report(reports, ReportFormat::kJson), slurp(path("r.json")));
  EXPECT_EQ(reports[0].per_task[0].buckets.size(), 400u);  // 2000 records / unit 5 < 1000
}

TEST_F(CliTest, AnalyzeShortTaskExitsPartial) {
  std::string text = "job,task,phase,seq,duration_ns\n";
  for (int i = 0; i < 3; ++i) text += "j1,m_short,read-map," + std::to_string(i) + ",100\n";
  for (int i = 0; i < 100; ++i) {
    text += "j1,m_long,read-map," + std::to_string(i) + "," + std::to_string(100 + i % 7) + "\n";
  }
  write(path("short.csv"), text);
  const auto r =
      run_cli({"analyze", "--input", path("short.csv"), "--format", "csv", "--unit", "1"});
  EXPECT_EQ(r.code, kPartial);
  EXPECT_NE(r.out.find("m_short: TraceTooShort"), std::string::npos) << r.out;
  EXPECT_NE(r.err.find("TraceTooShort"), std::string::npos);
}

TEST_F(CliTest, AnalyzeFatalErrors) {
  write(path("bad.jsonl"), "{\"job\":\"j1\"}\n");
  const auto r = run_cli({"analyze", "--input", path("bad.jsonl")});
  EXPECT_EQ(r.code, kFatal);
  EXPECT_NE(r.err.find("line 1"), std::string::npos) << r.err;
  EXPECT_EQ(run_cli({"analyze", "--input", path("missing.jsonl")}).code, kFatal);
  EXPECT_EQ(run_cli({"analyze"}).code, kFatal);
  EXPECT_EQ(run_cli({}).code, kFatal);
}

TEST_F(CliTest, TailCommands) {
  ASSERT_EQ(run_cli({"simulate", "--records", "20000", "--tasks", "1", "--out", path("p.jsonl")})
                .code,
            kOk);
  const auto hill = run_cli({"tail", "--input", path("p.jsonl"), "--hill", "--kmax", "50"});
  ASSERT_EQ(hill.code, kOk) << hill.err;
  EXPECT_EQ(std::count(hill.out.begin(), hill.out.end(), '\n'), 51);  // header + 50 rows
  EXPECT_EQ(hill.out.substr(0, 8), "k,alpha\n");
  EXPECT_NE(hill.err.find("summary_alpha="), std::string::npos);

  const auto em = run_cli({"tail", "--input", path("p.jsonl"), "--emplot"});
  ASSERT_EQ(em.code, kOk);
  EXPECT_EQ(em.out.substr(0, 12), "log_x,log_p\n");

  std::string flat = "job,task,phase,seq,duration_ns\n";
  for (int i = 0; i < 200; ++i) flat += "j,t,read-map," + std::to_string(i) + ",77\n";
  write(path("flat.csv"), flat);
  EXPECT_EQ(run_cli({"tail", "--input", path("flat.csv"), "--format", "csv"}).code, kPartial);
}

TEST_F(CliTest, KsCommands) {
  write(path("a.txt"), "1.5\n2.5\n3.5\n4.5\n");
  write(path("b.txt"), "11\n12\n13\n14\n");
  const auto same = run_cli({"ks", "--a", path("a.txt"), "--b", path("a.txt")});
  EXPECT_EQ(same.code, kOk);
  EXPECT_NE(same.out.find("d=0 p=1"), std::string::npos) << same.out;
  const auto apart = run_cli({"ks", "--a", path("a.txt"), "--b", path("b.txt")});
  EXPECT_EQ(apart.code, kKsReject);
  EXPECT_NE(apart.out.find("d=1 "), std::string::npos);

  write(path("report.csv"), "task_id,pr_ns,ei_ns,oc_ns,vet_task\nm_1,10,5,5,2\nm_2,9,3,6,3\n");
  write(path("col.txt"), "vet_task\n2\n3\n");
  EXPECT_EQ(run_cli({"ks", "--a", path("report.csv"), "--b", path("col.txt")}).code, kOk);

  write(path("empty.txt"), "");
  EXPECT_EQ(run_cli({"ks", "--a", path("empty.txt"), "--b", path("a.txt")}).code, kFatal);
}

TEST_F(CliTest, SameConfigRunsAreNotDistinguished) {
  int accepted = 0;
  for (int seed = 1; seed <= 20; ++seed) {
    for (const char* which : {"x", "y"}) {
      const auto s = std::to_string(seed * 2 + (which[0] == 'y'));
      ASSERT_EQ(run_cli({"simulate", "--records", "1000", "--tasks", "25", "--seed", s, "--out",
                         path(std::string(which) + ".jsonl")})
                    .code,
                kOk);
      ASSERT_EQ(run_cli({"analyze", "--input", path(std::string(which) + ".jsonl"), "--report",
                         "csv", "--out", path(std::string(which) + ".csv")})
                    .code,
                kOk);
    }
    const auto r = run_cli({"ks", "--a", path("x.csv"), "--b", path("y.csv")});
    ASSERT_NE(r.code, kFatal) << r.err;
    accepted += r.code == kOk;
  }
  EXPECT_GE(accepted, 18);
}

}  // namespace
}  // namespace vetmeter::cli
