#include <catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

RunResult run_tool(const std::string& args, const std::string& env = "") {
  static int counter = 0;
  fs::path dir = fs::temp_directory_path() / "domainscope_cli_io";
  fs::create_directories(dir);
  fs::path out = dir / ("out" + std::to_string(counter));
  fs::path err = dir / ("err" + std::to_string(counter));
  ++counter;
  std::string cmd = env + " " + std::string(DOMAINSCOPE_TOOL) + " " + args +
                    " > " + out.string() + " 2> " + err.string();
  int status = std::system(cmd.c_str());
  int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return {code, slurp(out), slurp(err)};
}

const std::string kRegistry = std::string(DOMAINSCOPE_FIXTURES) + "/ibex.toml";

fs::path fresh_dir(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / ("domainscope_cli_" + name);
  fs::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("pipeline on the bundled fixture exits 0 and writes the report") {
  auto out = fresh_dir("pipeline");
  auto r = run_tool("--registry " + kRegistry + " --out " + out.string() +
                    " pipeline");
  CAPTURE(r.err);
  REQUIRE(r.exit_code == 0);
  CHECK(fs::exists(out / "report" / "summary.txt"));
  CHECK(fs::exists(out / "report" / "tables" / "contribution.csv"));
  CHECK(fs::exists(out / "report" / "tables" / "correlation.csv"));
  CHECK(fs::exists(out / "report" / "graphs" / "TEF.net"));
  CHECK(fs::exists(out / "manifest.json"));
  CHECK(fs::exists(out / "candidates.jsonl"));
  CHECK(fs::exists(out / "registry.json"));
  CHECK(fs::exists(out / "indicators.csv"));
  std::string manifest = slurp(out / "manifest.json");
  CHECK(manifest.find("suffix_snapshot") != std::string::npos);
  CHECK(manifest.find("config_hash") != std::string::npos);
}

TEST_CASE("graph subcommand lists small organizations as skipped") {
  auto out = fresh_dir("graph");
  auto r = run_tool("--registry " + kRegistry + " --out " + out.string() +
                    " graph");
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.find("ACC: SKIPPED") != std::string::npos);
  CHECK(r.out.find("REE: SKIPPED") != std::string::npos);
  CHECK(r.out.find("TEF: n=11") != std::string::npos);
}

TEST_CASE("unknown subcommand exits 1 with usage text") {
  auto r = run_tool("--registry " + kRegistry + " frobnicate");
  CHECK(r.exit_code == 1);
  CHECK(r.err.find("error:") != std::string::npos);
}

TEST_CASE("missing registry exits 1 with a machine-parseable error") {
  auto r = run_tool("--registry /nonexistent/registry.toml pipeline");
  CHECK(r.exit_code == 1);
  CHECK(r.err.rfind("error: code=", 0) == 0);
}

TEST_CASE("missing backend fixture dir exits 2") {
  auto out = fresh_dir("nobackend");
  auto r = run_tool("--registry " + kRegistry + " --out " + out.string() +
                    " --fixture-dir /nonexistent/backend measure");
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("code=BackendUnavailable") != std::string::npos);
}

TEST_CASE("DOMAINSCOPE_CACHE env var overrides the cache path") {
  auto out = fresh_dir("envcache");
  fs::path env_cache = fs::temp_directory_path() / "domainscope_env.jsonl";
  fs::remove(env_cache);
  auto r = run_tool("--registry " + kRegistry + " --out " + out.string() +
                        " measure",
                    "DOMAINSCOPE_CACHE=" + env_cache.string());
  REQUIRE(r.exit_code == 0);
  CHECK(fs::exists(env_cache));
  CHECK_FALSE(fs::exists(out / "cache.jsonl"));
}

TEST_CASE("discover writes the candidate queue") {
  auto out = fresh_dir("discover");
  auto r = run_tool("--registry " + kRegistry + " --out " + out.string() +
                    " discover");
  REQUIRE(r.exit_code == 0);
  std::string queue = slurp(out / "candidates.jsonl");
  CHECK(queue.find("fundaciontelefonica.com") != std::string::npos);
  CHECK(queue.find("acciona-microenergia.org") != std::string::npos);
  CHECK(queue.find("should-not-appear.org") == std::string::npos);
}

TEST_CASE("flags are accepted after the subcommand") {
  auto out = fresh_dir("flagorder");
  auto r = run_tool("pipeline --backend fixture --registry " + kRegistry +
                    " --out " + out.string());
  CAPTURE(r.err);
  REQUIRE(r.exit_code == 0);
  CHECK(fs::exists(out / "report" / "summary.txt"));
}

TEST_CASE("mentions subcommand prints totals and skips") {
  auto out = fresh_dir("mentions");
  auto r = run_tool("--registry " + kRegistry + " --out " + out.string() +
                    " mentions");
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.find("TEF: 110 pairs") != std::string::npos);
  CHECK(r.out.find("ACC: SKIPPED") != std::string::npos);
  CHECK(fs::exists(out / "mentions" / "TEF_edges.csv"));
}

TEST_CASE("stats subcommand writes correlation and PCA tables") {
  auto out = fresh_dir("stats");
  auto r = run_tool("--registry " + kRegistry + " --out " + out.string() +
                    " stats");
  REQUIRE(r.exit_code == 0);
  CHECK(fs::exists(out / "report" / "tables" / "correlation.csv"));
  CHECK(fs::exists(out / "report" / "tables" / "pca.csv"));
  std::string corr = slurp(out / "report" / "tables" / "correlation.csv");
  CHECK(corr.rfind("indicator,Pco,Alexa,OSE,Aut,InD,OutD,Clo,Bet,Cco,Eve",
                   0) == 0);
}

TEST_CASE("discover without a reachable web fixture exits 2") {
  auto out = fresh_dir("noweb");
  auto r = run_tool("--registry " + kRegistry + " --out " + out.string() +
                    " --web-dir /nonexistent/web discover");
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("code=FetcherUnavailable") != std::string::npos);
}

TEST_CASE("min-domains below 2 is a validation error") {
  auto r = run_tool("--registry " + kRegistry + " --min-domains 1 mentions");
  CHECK(r.exit_code == 1);
  CHECK(r.err.find("code=UsageError") != std::string::npos);
}

TEST_CASE("jobs flag leaves every output identical") {
  auto out1 = fresh_dir("jobs1");
  auto out4 = fresh_dir("jobs4");
  auto r1 = run_tool("--registry " + kRegistry + " --out " + out1.string() +
                     " --jobs 1 report");
  auto r4 = run_tool("--registry " + kRegistry + " --out " + out4.string() +
                     " --jobs 4 report");
  REQUIRE(r1.exit_code == 0);
  REQUIRE(r4.exit_code == 0);
  for (auto& entry : fs::recursive_directory_iterator(out1 / "report")) {
    if (!entry.is_regular_file()) continue;
    auto rel = fs::relative(entry.path(), out1 / "report");
    INFO(rel.string());
    CHECK(slurp(entry.path()) == slurp(out4 / "report" / rel));
  }
}
