#include <sys/wait.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "fracvar/io.hpp"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class Sandbox {
 public:
  Sandbox() {
    dir_ = fs::temp_directory_path() / ("fracvar_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter_++));
    fs::create_directories(dir_);
  }
  ~Sandbox() { fs::remove_all(dir_); }
  fs::path file(const std::string& name) const { return dir_ / name; }

  Run run(const std::string& args) const {
    const std::string cmd = "cd '" + dir_.string() + "' && '" FRACVAR_CLI_PATH "' " + args + " > stdout.txt 2> stderr.txt";
    const int status = std::system(cmd.c_str());
    Run r{WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(file("stdout.txt")), slurp(file("stderr.txt"))};
    return r;
  }

 private:
  static inline int counter_ = 0;
  fs::path dir_;
};

}  // namespace

TEST_CASE("fbm subcommand") {
  Sandbox box;
  const auto r = box.run("fbm --h 0.5 --n 4 --delta 1 --seed 7 --out a.csv");
  REQUIRE(r.code == 0);
  std::ifstream in(box.file("a.csv"));
  const auto p = fracvar::io::read_path_csv(in);
  CHECK(p.size() == 4);
  CHECK(p.values[0] == 0.0);
  CHECK(p.delta == 1.0);

  REQUIRE(box.run("fbm --h 0.5 --n 4 --delta 1 --seed 7 --out b.csv").code == 0);
  CHECK(slurp(box.file("a.csv")) == slurp(box.file("b.csv")));

  const auto bad = box.run("fbm --h 1.2 --n 4 --seed 1 --out c.csv");
  CHECK(bad.code == 1);
  CHECK(bad.err.find("(0,1)") != std::string::npos);
  CHECK_FALSE(fs::exists(box.file("c.csv")));

  CHECK(box.run("fbm --h 0.5 --n 4 --bogus").code == 2);
  CHECK(box.run("fbm --n 4").code == 2);
  CHECK(box.run("fbm --h 0.5 --n 4 --seed 3 --format json --out d.json").code == 0);
  const auto doc = nlohmann::json::parse(slurp(box.file("d.json")));
  CHECK(doc.at("values").size() == 4);
}

TEST_CASE("seed from the environment") {
  Sandbox box;
  REQUIRE(box.run("fbm --h 0.3 --n 16 --seed 11 --out a.csv").code == 0);
  CHECK(std::system(("cd '" + box.file("").string() + "' && FRACVAR_SEED=11 '" FRACVAR_CLI_PATH
                     "' fbm --h 0.3 --n 16 --out e.csv")
                        .c_str()) == 0);
  CHECK(slurp(box.file("a.csv")) == slurp(box.file("e.csv")));
}

TEST_CASE("estimate subcommand") {
  Sandbox box;
  REQUIRE(box.run("fbm --h 0.7 --n 8001 --delta 0.000125 --seed 5 --out path.csv").code == 0);
  const auto r = box.run("estimate --input path.csv --estimator standard --out est.json");
  REQUIRE(r.code == 0);
  const auto est = nlohmann::json::parse(slurp(box.file("est.json")));
  CHECK(est.at("estimator") == "standard");
  CHECK(std::abs(est.at("value").get<double>() - 0.7) < 0.02);

  const auto stdout_run = box.run("estimate --input path.csv --estimator h2");
  REQUIRE(stdout_run.code == 0);
  CHECK(nlohmann::json::parse(stdout_run.out).at("estimator") == "regression_h2");
  const auto h1 = box.run("estimate --input path.csv --estimator regression_h1 --delta 0.5");
  REQUIRE(h1.code == 0);
  CHECK_FALSE(nlohmann::json::parse(h1.out).at("warnings").empty());

  {
    std::ofstream flat(box.file("flat.csv"));
    flat << "t,value\n0,1\n0.5,1\n1,1\n1.5,1\n";
  }
  const auto degenerate = box.run("estimate --input flat.csv");
  CHECK(degenerate.code == 1);
  CHECK(degenerate.err.find("degenerate data") != std::string::npos);

  {
    std::ofstream broken(box.file("broken.csv"));
    broken << "t,value\n0,1\n0.5,x\n";
  }
  const auto malformed = box.run("estimate --input broken.csv");
  CHECK(malformed.code == 1);
  CHECK(malformed.err.find("row 2") != std::string::npos);
  CHECK(box.run("estimate --input path.csv --estimator whittle").code == 2);
}

TEST_CASE("ratio estimate ignores the noise scale") {
  Sandbox box;
  REQUIRE(box.run("simulate --h 0.6 --n 2000 --drift zero --sigma 1 --seed 9 --out one.csv").code == 0);
  REQUIRE(box.run("simulate --h 0.6 --n 2000 --drift zero --sigma 5 --seed 9 --out five.csv").code == 0);
  const auto a = box.run("estimate --input one.csv --estimator ratio --filter 1,-2,1");
  const auto b = box.run("estimate --input five.csv --estimator ratio --filter 1,-2,1");
  REQUIRE(a.code == 0);
  REQUIRE(b.code == 0);
  const double va = nlohmann::json::parse(a.out).at("value");
  const double vb = nlohmann::json::parse(b.out).at("value");
  CHECK(std::abs(va - vb) <= 1e-12);
}

TEST_CASE("study subcommand") {
  Sandbox box;
  const auto unknown = box.run("study --setting Study-S9");
  CHECK(unknown.code == 2);
  CHECK(unknown.err.find("Study-S1") != std::string::npos);

  {
    std::ofstream s(box.file("setting.json"));
    s << R"({"label":"tiny","h_true":0.7,"interval_end":1,"estimator_kind":"ratio","base_filter":[1,-2,1],)"
      << R"("sigma":1,"drift":"sine","n_list":[100,200],"reps":5,"seed":3})";
  }
  const auto r = box.run("study --setting setting.json --parallelism 2 --out report.csv --format csv --dump-reps reps.csv");
  REQUIRE(r.code == 0);
  CHECK(r.out.find("tiny") != std::string::npos);
  const auto report = slurp(box.file("report.csv"));
  CHECK(report.rfind("setting,n,mse,bias,variance,failures\n", 0) == 0);
  CHECK(fs::exists(box.file("reps.csv")));

  const auto json_run = box.run("study --setting setting.json --reps 3 --out report.json");
  REQUIRE(json_run.code == 0);
  const auto doc = nlohmann::json::parse(slurp(box.file("report.json")));
  CHECK(doc.dump().find("\"reps\":3") != std::string::npos);

  {
    std::ofstream s(box.file("bad.json"));
    s << R"({"label":"tiny","typo":1})";
  }
  CHECK(box.run("study --setting bad.json").code == 1);
}

TEST_CASE("clt subcommand") {
  Sandbox box;
  const auto r = box.run("clt --filter=-1,1 --h 0.5 --n 512 --reps 500 --seed 2 --out clt.json");
  REQUIRE(r.code == 0);
  const auto doc = nlohmann::json::parse(slurp(box.file("clt.json")));
  CHECK(doc.contains("variance_ratio"));
  CHECK(box.run("clt --h 0.5 --reps 10 --seed 2").code == 1);
}
