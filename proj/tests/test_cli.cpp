// SPDX-FileCopyrightText: © 2026 acam-edge contributors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cstdlib>
#include <json.hpp>
#include <sstream>

#include "acam/cli.hpp"
#include "acam/io_util.hpp"
#include "support.hpp"

using namespace acam;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "acam-edge");
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

class Fixture {
 public:
  Fixture() {
    REQUIRE(run({"synth", "--classes", "4", "--features", "32", "--per-class", "12", "--spread", "0.1", "--out",
                 train(), "--test-out", test()})
                .code == kExitOk);
  }
  [[nodiscard]] std::string train() const { return (dir / "train.fmap").string(); }
  [[nodiscard]] std::string test() const { return (dir / "test.fmap").string(); }
  [[nodiscard]] std::string path(const std::string& name) const { return (dir / name).string(); }

  test::TempDir dir;
};

}  // namespace

TEST_CASE("usage and exit codes") {
  auto r = run({});
  CHECK(r.code == kExitValidation);
  CHECK(r.err.find("Usage") != std::string::npos);

  CHECK(run({"--help"}).code == kExitOk);
  CHECK(run({"--frobnicate"}).code == kExitValidation);
  CHECK(run({"synth", "--bogus", "1", "--out", "x"}).code == kExitValidation);
  CHECK(run({"classify", "--bank", "/nonexistent/bank.json", "--input", "/nonexistent/x.fmap"}).code == kExitIo);
  CHECK(run({"synth", "--classes", "notanumber", "--out", "x"}).code == kExitValidation);
}

TEST_CASE("synth then eval is byte-identical across runs") {
  test::TempDir dir;
  const auto tr = (dir / "tr.fmap").string();
  const auto te = (dir / "te.fmap").string();
  const std::vector<std::string> synth{"synth", "--classes", "10", "--features", "784", "--per-class", "100",
                                       "--spread", "0.05", "--seed", "42", "--out", tr, "--test-out", te};
  REQUIRE(run(synth).code == 0);
  const auto first = read_file_bytes(tr);
  REQUIRE(run(synth).code == 0);
  CHECK(read_file_bytes(tr) == first);

  const auto a = run({"eval", "--train", tr, "--test", te});
  const auto b = run({"eval", "--train", tr, "--test", te, "--jobs", "1"});
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  const auto doc = nlohmann::json::parse(a.out);
  CHECK(doc["results"][0]["accuracy"].get<double>() >= 0.99);
  CHECK(doc["results"][1]["accuracy"].get<double>() >= 0.99);
}

TEST_CASE("seed comes from the environment when the flag is absent") {
  test::TempDir dir;
  const auto a = (dir / "a.fmap").string();
  const auto b = (dir / "b.fmap").string();
  const auto c = (dir / "c.fmap").string();
  ::setenv("ACAM_EDGE_SEED", "1234", 1);
  REQUIRE(run({"synth", "--classes", "3", "--features", "16", "--spread", "0.2", "--out", a}).code == 0);
  REQUIRE(run({"synth", "--classes", "3", "--features", "16", "--spread", "0.2", "--seed", "7", "--out", c}).code == 0);
  ::setenv("ACAM_EDGE_SEED", "garbage", 1);
  CHECK(run({"synth", "--classes", "3", "--features", "16", "--out", a}).code == kExitValidation);
  ::unsetenv("ACAM_EDGE_SEED");
  REQUIRE(run({"synth", "--classes", "3", "--features", "16", "--spread", "0.2", "--seed", "1234", "--out", b}).code ==
          0);
  CHECK(read_file_bytes(a) == read_file_bytes(b));
  CHECK(read_file_bytes(c) != read_file_bytes(b));
}

TEST_CASE("energy subcommand") {
  auto r = run({"energy", "--templates", "10", "--features", "784", "--ecell", "185e-15"});
  REQUIRE(r.code == 0);
  auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["backend_energy_j"].get<double>() == doctest::Approx(1.4504e-9).epsilon(1e-12));

  r = run({"energy", "--arch", ACAM_DATA_DIR "/student_arch.json", "--sparsity", "0.8", "--removed", "7850",
           "--templates", "10", "--features", "784", "--reference-arch", ACAM_DATA_DIR "/teacher_arch.json",
           "--stated-ratio", "792"});
  REQUIRE(r.code == 0);
  doc = nlohmann::json::parse(r.out);
  CHECK(doc["effective_macs"] == 4749174);
  CHECK(doc["reduction_ratio"].get<double>() == doctest::Approx(800.385).epsilon(1e-5));
  CHECK(doc["notes"].dump().find("DISCREPANCY") != std::string::npos);

  CHECK(run({"energy", "--total-macs", "10", "--arch", ACAM_DATA_DIR "/student_arch.json"}).code == kExitValidation);
  CHECK(run({"energy", "--total-macs", "10", "--removed", "11"}).code == kExitValidation);
  CHECK(run({"energy", "--format", "csv"}).out.rfind("field,value\n", 0) == 0);
  CHECK(run({"energy", "--format", "xml"}).code == kExitValidation);
}

TEST_CASE("template, classify, thresholds, sweep and robustness subcommands") {
  Fixture fx;
  const auto bank = fx.path("bank.json");
  REQUIRE(run({"templates", "--input", fx.train(), "--k", "auto", "--out", bank}).code == 0);

  auto r = run({"classify", "--bank", bank, "--input", fx.test()});
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("sample_index,true_label,predicted,tie,best_score_0,best_score_1,best_score_2,best_score_3\n",
                    0) == 0);
  CHECK(count_lines(r.out) == 1 + 48);
  CHECK(run({"classify", "--bank", bank, "--input", fx.test(), "--method", "cosine"}).code == kExitValidation);

  r = run({"thresholds", "--input", fx.train()});
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("feature_index,mean,median\n", 0) == 0);
  CHECK(count_lines(r.out) == 33);

  r = run({"sweep", "--train", fx.train(), "--test", fx.test(), "--ks", "1,2,3"});
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("k,accuracy,macro_f1,n_templates\n", 0) == 0);
  CHECK(count_lines(r.out) == 4);
  CHECK(run({"sweep", "--train", fx.train(), "--test", fx.test(), "--ks", "4"}).code == kExitValidation);

  r = run({"robustness", "--bank", bank, "--input", fx.test(), "--sigma-sweep", "0:0.05:0.3", "--seeds", "3"});
  REQUIRE(r.code == 0);
  CHECK(count_lines(r.out) == 1 + 7);
  CHECK(r.out.find("\n0.3,") != std::string::npos);
  CHECK(run({"robustness", "--bank", bank, "--input", fx.test(), "--sigma-sweep", "0:-1:1"}).code ==
        kExitValidation);
  CHECK(run({"robustness", "--bank", bank, "--input", fx.test(), "--sigma-sweep", "0.1,0.2", "--format", "json"})
            .code == 0);

  const auto prefix = fx.path("cm");
  r = run({"eval", "--train", fx.train(), "--test", fx.test(), "--confusion-out", prefix, "--format", "csv"});
  REQUIRE(r.code == 0);
  CHECK(read_file_text(prefix + "_fc.csv").rfind("true\\pred,0,1,2,3\n", 0) == 0);
  CHECK(std::filesystem::exists(prefix + "_sim.csv"));
}

TEST_CASE("validation errors write nothing") {
  Fixture fx;
  const auto out = fx.path("never.json");
  CHECK(run({"templates", "--input", fx.train(), "--k", "5", "--out", out}).code == kExitValidation);
  CHECK(run({"templates", "--input", fx.train(), "--gamma", "-2", "--out", out}).code == kExitValidation);
  CHECK(run({"eval", "--train", fx.train(), "--test", fx.test(), "--alpha", "-1", "--out", out}).code ==
        kExitValidation);
  CHECK_FALSE(std::filesystem::exists(out));
  CHECK_FALSE(std::filesystem::exists(out + ".tmp"));
}

TEST_CASE("corrupt input is an I/O-class error") {
  test::TempDir dir;
  const auto bad = (dir / "bad.fmap").string();
  write_file_atomic(bad, "XMAP not a feature map");
  const auto r = run({"thresholds", "--input", bad});
  CHECK(r.code == kExitIo);
  CHECK(r.err.find("magic") != std::string::npos);
}
