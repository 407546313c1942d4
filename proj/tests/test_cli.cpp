/*
 * Copyright 2026 The kgp Authors
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

#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "../tools/cli.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "kgp");
  std::ostringstream out, err;
  const int code = kgp::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() / ("kgp_cli_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter_++));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string file(const std::string& name, const std::string& content) const {
    const fs::path p = path_ / name;
    std::ofstream(p, std::ios::binary) << content;
    return p.string();
  }
  std::string path(const std::string& name) const { return (path_ / name).string(); }

 private:
  fs::path path_;
  static inline int counter_ = 0;
};

json strip_wall_time(json j) {
  j.erase("wall_time");
  return j;
}

}  // namespace

TEST_CASE("verify gp-krr passes") {
  const Run r = run({"verify", "--suite", "gp-krr", "--trials", "50", "--seed", "7"});
  CHECK(r.code == kgp::cli::kOk);
  const json j = json::parse(r.out);
  CHECK(j["schema"] == 1);
  CHECK(j["suite"] == "gp-krr");
  CHECK(j["seed"] == 7);
  CHECK(j["failed"] == 0);
  CHECK(j["passed"] == true);
  CHECK(j["cases"].size() == 50);
  for (const json& c : j["cases"]) {
    CHECK(c["passed"] == true);
    CHECK(c["gap"].get<double>() <= c["tolerance"].get<double>());
    CHECK(c["inputs_digest"].get<std::string>().size() == 16);
  }
}

TEST_CASE("verify with zero trials is an empty report") {
  const Run r = run({"verify", "--suite", "all", "--trials", "0"});
  CHECK(r.code == kgp::cli::kOk);
  const json j = json::parse(r.out);
  CHECK(j["cases"].empty());
  CHECK(j["failed"] == 0);
}

TEST_CASE("usage errors exit with 2") {
  CHECK(run({"verify", "--suite", "nonsense"}).code == kgp::cli::kUsage);
  CHECK(run({}).code == kgp::cli::kUsage);
  CHECK(run({"frobnicate"}).code == kgp::cli::kUsage);
  CHECK(run({"verify", "--trials", "abc"}).code == kgp::cli::kUsage);
  CHECK(run({"mmd", "--kernel", "bogus:a=1", "--p", "/nonexistent", "--q", "/nonexistent"}).code ==
        kgp::cli::kUsage);
  CHECK(run({"rates", "--sizes", "64,128"}).code == kgp::cli::kUsage);
  CHECK(run({"rates", "--replications", "0"}).code == kgp::cli::kUsage);
}

TEST_CASE("verify reports are deterministic") {
  TempDir dir;
  const std::string a = dir.path("a.json");
  const std::string b = dir.path("b.json");
  CHECK(run({"verify", "--suite", "all", "--trials", "5", "--seed", "3", "--out", a}).code == 0);
  CHECK(run({"verify", "--suite", "all", "--trials", "5", "--seed", "3", "--out", b}).code == 0);
  std::ifstream fa(a), fb(b);
  const json ja = strip_wall_time(json::parse(fa));
  const json jb = strip_wall_time(json::parse(fb));
  CHECK(ja.dump() == jb.dump());
  CHECK(ja["cases"].size() == 5 * 6 + 5 * 5);
}

TEST_CASE("regress in both modes agrees") {
  TempDir dir;
  const std::string data = dir.file("d.csv", "x1,y\n0.0,1.0\n0.5,-0.5\n1.0,2.0\n");
  const std::string pred = dir.path("p.csv");
  const Run r = run({"regress", "--data", data, "--kernel", "matern:alpha=1.5,h=0.5", "--lambda", "0.01",
                     "--mode", "both", "--predictions", pred});
  CHECK(r.code == kgp::cli::kOk);
  const json j = json::parse(r.out);
  CHECK(j["max_discrepancy"].get<double>() <= 1e-8);
  CHECK(j["passed"] == true);
  std::ifstream f(pred);
  std::string header;
  std::getline(f, header);
  CHECK(header == "x1,krr,gp,gp_variance");
}

TEST_CASE("regress on an empty file returns the prior") {
  TempDir dir;
  const std::string data = dir.file("empty.csv", "");
  const std::string query = dir.file("q.csv", "x1\n0.1\n0.9\n");
  const Run r = run({"regress", "--data", data, "--kernel", "se:gamma=1", "--sigma2", "0.1", "--mode", "gp",
                     "--query", query});
  CHECK(r.code == kgp::cli::kOk);
  const json j = json::parse(r.out);
  CHECK(j["predictions_gp"] == json::array({0.0, 0.0}));
  CHECK(j["posterior_variance"] == json::array({1.0, 1.0}));
}

TEST_CASE("malformed CSV names the line") {
  TempDir dir;
  const std::string data = dir.file("bad.csv", "x1,y\n0.0,1.0\n0.5,abc\n");
  const Run r = run({"regress", "--data", data, "--kernel", "se:gamma=1", "--lambda", "0.1"});
  CHECK(r.code == kgp::cli::kUsage);
  CHECK(r.err.find("bad.csv:3:") != std::string::npos);
  const std::string ragged = dir.file("ragged.csv", "x1,y\n0.0,1.0\n0.5\n");
  CHECK(run({"regress", "--data", ragged, "--kernel", "se:gamma=1", "--lambda", "0.1"}).code == kgp::cli::kUsage);
}

TEST_CASE("mmd of identical files is zero") {
  TempDir dir;
  const std::string p = dir.file("p.csv", "x1,x2,w\n0.1,0.2,0.5\n0.3,0.4,0.5\n");
  const Run r = run({"mmd", "--kernel", "se:gamma=1", "--p", p, "--q", p});
  CHECK(r.code == kgp::cli::kOk);
  CHECK(json::parse(r.out)["mmd"] == 0.0);
}

TEST_CASE("hsic with a constant column is zero") {
  TempDir dir;
  const std::string data = dir.file("h.csv", "x1,y1\n0.0,3.0\n0.5,3.0\n1.0,3.0\n0.2,3.0\n");
  const Run r = run({"hsic", "--data", data, "--kernel", "matern:alpha=0.5,h=1", "--draws", "200"});
  CHECK(r.code == kgp::cli::kOk);
  const json j = json::parse(r.out);
  CHECK(j["hsic"] == 0.0);
  CHECK(j["hsic_gp_exact"] == 0.0);
  CHECK(j["monte_carlo"]["estimate"] == 0.0);
}

TEST_CASE("quadrature with nodes on the target atoms") {
  TempDir dir;
  const std::string nodes = dir.file("n.csv", "x1,y\n0.1,1.0\n0.4,2.0\n0.8,3.0\n0.9,4.0\n");
  const std::string target = dir.file("t.csv", "x1,w\n0.1,0.25\n0.4,0.25\n0.8,0.25\n0.9,0.25\n");
  const Run r = run({"quadrature", "--kernel", "matern:alpha=2.5,h=0.3", "--nodes", nodes, "--target", target});
  CHECK(r.code == kgp::cli::kOk);
  const json j = json::parse(r.out);
  for (const json& w : j["weights"]) CHECK(std::abs(w.get<double>() - 0.25) <= 1e-12);
  CHECK(std::abs(j["variance"].get<double>()) <= 1e-10);
  CHECK(j["mean"].get<double>() == doctest::Approx(2.5).epsilon(1e-12));
}

TEST_CASE("sample and contraction are deterministic") {
  TempDir dir;
  const std::string pts = dir.file("x.csv", "x1\n0.0\n0.5\n1.0\n");
  const Run a = run({"sample", "--kernel", "se:gamma=1", "--points", pts, "--count", "4", "--seed", "9"});
  const Run b = run({"sample", "--kernel", "se:gamma=1", "--points", pts, "--count", "4", "--seed", "9"});
  CHECK(a.code == 0);
  CHECK(strip_wall_time(json::parse(a.out)) == strip_wall_time(json::parse(b.out)));
  CHECK(json::parse(a.out)["samples"].size() == 4);
  const Run c = run({"contraction"});
  CHECK(c.code == 0);
  const double slope = json::parse(c.out)["fitted_slope"].get<double>();
  CHECK(slope >= 0.8);
  CHECK(slope <= 1.4);
}

TEST_CASE("the installed binary uses the documented exit codes") {
  const auto status = [](const std::string& args) {
    const int raw = std::system((std::string(KGP_CLI_PATH) + " " + args + " > /dev/null 2>&1").c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  };
  CHECK(status("verify --suite gp-krr --trials 3") == 0);
  CHECK(status("verify --suite nope") == 2);
  CHECK(status("--help") == 0);
}
