#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>

#include "steerlab/harness/campaign.hpp"
#include "steerlab/harness/io.hpp"
#include "steerlab/harness/reports.hpp"

using namespace steerlab;
using namespace steerlab::harness;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path scratch_dir() {
  const char* env = std::getenv("STEERLAB_TMP");
  const fs::path dir = env ? fs::path(env) : fs::temp_directory_path() / "steerlab_test";
  fs::create_directories(dir);
  return dir;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

int run_cli(const std::string& args) {
  const char* cli = std::getenv("STEERLAB_CLI");
  REQUIRE(cli != nullptr);
  const std::string cmd = std::string(cli) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

CampaignConfig small_config() {
  CampaignConfig cfg;
  cfg.mode = CampaignMode::Histogram;
  cfg.mu_grid = {1.0};
  cfg.n_settings = 2;
  cfg.trials = 3;
  cfg.seed = 9;
  return cfg;
}

void write_bob_bloch(const fs::path& path, int n) {
  json bob;
  bob["bloch"] = json::array();
  const double axes[3][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  for (int i = 0; i < n; ++i) bob["bloch"].push_back({axes[i][0], axes[i][1], axes[i][2]});
  std::ofstream out(path);
  out << bob.dump() << "\n";
}

}  // namespace

TEST_CASE("campaign output is deterministic across thread counts") {
  const fs::path dir = scratch_dir();
  CampaignConfig cfg = small_config();

  cfg.threads = 1;
  write_results_csv(run_campaign(cfg), (dir / "serial.csv").string());
  cfg.threads = 4;
  write_results_csv(run_campaign(cfg), (dir / "parallel.csv").string());
  CHECK(read_file(dir / "serial.csv") == read_file(dir / "parallel.csv"));

  // A different seed changes the records.
  cfg.seed = 10;
  write_results_csv(run_campaign(cfg), (dir / "reseeded.csv").string());
  CHECK(read_file(dir / "serial.csv") != read_file(dir / "reseeded.csv"));
}

TEST_CASE("record counts per settings mode") {
  CampaignConfig cfg = small_config();
  CHECK(run_campaign(cfg).records.size() == 3 * 8);  // orthogonal pairing dropped

  cfg.exclude_orthogonal_plane_pairs = false;
  CHECK(run_campaign(cfg).records.size() == 3 * 9);

  cfg.n_settings = 3;
  CHECK(run_campaign(cfg).records.size() == 3);
}

TEST_CASE("campaign config validation") {
  CampaignConfig cfg = small_config();
  cfg.n_settings = 4;
  CHECK_THROWS_AS(run_campaign(cfg), std::domain_error);
  cfg = small_config();
  cfg.mu_grid = {1.5};
  CHECK_THROWS_AS(run_campaign(cfg), std::domain_error);
  cfg.mu_grid.clear();
  CHECK_THROWS_AS(run_campaign(cfg), std::domain_error);
}

TEST_CASE("summary fractions match the records") {
  CampaignConfig cfg = small_config();
  cfg.mode = CampaignMode::ViolationBars;
  const CampaignResult result = run_campaign(cfg);
  const json summary = summarize(result);

  size_t steered = 0, ls = 0;
  for (const TrialRecord& r : result.records) {
    if (r.asr_violated()) ++steered;
    if (r.ls.violated) ++ls;
  }
  CHECK(summary["records"].get<size_t>() == result.records.size());
  CHECK(summary["asr"]["violation_fraction"].get<double>() ==
        doctest::Approx(static_cast<double>(steered) / result.records.size()));
  CHECK(summary["criteria"]["LS"]["violation_fraction"].get<double>() ==
        doctest::Approx(static_cast<double>(ls) / result.records.size()));
  CHECK(summary["criteria"].contains("CHSH-LS"));
  CHECK(summary["criteria"].contains("DBS"));
  CHECK(summary["criteria"].contains("RIS"));
}

TEST_CASE("analyze pipeline on files") {
  const fs::path dir = scratch_dir();
  const fs::path dist_path = dir / "singlet.json";
  const fs::path bob_path = dir / "bob3.json";
  const JointDistribution exact =
      joint_distribution(werner_state(WernerParams(1.0)), pauli_triad(), pauli_triad());
  io::save_distribution(exact, dist_path.string());
  write_bob_bloch(bob_path, 3);

  const AnalysisReport clean = analyze_files(dist_path.string(), bob_path.string(), false);
  CHECK(clean.record.t == 0.0);
  REQUIRE(clean.record.asr_status == conic::Status::Optimal);
  CHECK(clean.record.asr_value == doctest::Approx(2.0 - std::sqrt(3.0)).epsilon(1e-3));
  CHECK(std::abs(evaluate_witness(clean.witness, clean.ns_dist) - clean.record.asr_value) < 1e-8);

  // Signalling fixture: finite-shot counts from the same state.
  RngStream stream(61);
  const JointDistribution noisy = sample_counts(exact, ShotModel(1000), stream);
  const fs::path noisy_path = dir / "noisy.json";
  io::save_distribution(noisy, noisy_path.string());
  const AnalysisReport repaired = analyze_files(noisy_path.string(), bob_path.string(), true);
  CHECK(repaired.record.t > 0.0);
  REQUIRE(repaired.record.raw_asr_status.has_value());
  CHECK(*repaired.record.raw_asr_status == conic::Status::Unbounded);
  CHECK(repaired.record.asr_status == conic::Status::Optimal);
  CHECK(signalling_magnitude(repaired.ns_dist) < 1e-8);

  // Mismatched Bob file and unreadable input are schema errors.
  const fs::path bob2_path = dir / "bob2.json";
  write_bob_bloch(bob2_path, 2);
  CHECK_THROWS_AS(analyze_files(dist_path.string(), bob2_path.string(), false), io::ParseError);
  const fs::path empty_path = dir / "empty.json";
  std::ofstream(empty_path).close();
  CHECK_THROWS_AS(analyze_files(empty_path.string(), bob_path.string(), false), io::ParseError);
}

TEST_CASE("distribution round-trip through JSON") {
  const fs::path dir = scratch_dir();
  const JointDistribution exact =
      joint_distribution(werner_state(WernerParams(0.73)), pauli_triad(), pauli_triad());
  const fs::path path = dir / "roundtrip.json";
  io::save_distribution(exact, path.string());
  const JointDistribution loaded = io::load_distribution(path.string());
  REQUIRE(loaded.p.size() == exact.p.size());
  for (size_t i = 0; i < exact.p.size(); ++i) CHECK(std::abs(loaded.p[i] - exact.p[i]) < 1e-11);
}

TEST_CASE("CLI exit codes and outputs") {
  const fs::path dir = scratch_dir();

  CHECK(run_cli("") == 2);
  CHECK(run_cli("--bogus") == 2);
  CHECK(run_cli("simulate") == 2);  // --out is required
  CHECK(run_cli("--help") == 0);
  CHECK(run_cli("simulate --settings 5 --out " + (dir / "x").string()) == 2);

  const fs::path sim = dir / "cli_sim";
  CHECK(run_cli("simulate --mode histogram --mu 0.907 --settings 3 --trials 2 --shots 200 "
                "--seed 3 --aligned --out " + sim.string()) == 0);
  CHECK(fs::exists(sim / "results.csv"));
  CHECK(fs::exists(sim / "summary.json"));
  CHECK(fs::exists(sim / "histogram.svg"));
  CHECK(fs::exists(sim / "bars.svg"));
  std::istringstream csv(read_file(sim / "results.csv"));
  std::string line;
  int rows = 0;
  while (std::getline(csv, line)) ++rows;
  CHECK(rows == 3);  // header + 2 trials

  CHECK(run_cli("report --in " + sim.string() + " --format svg") == 0);
  CHECK(run_cli("report --in " + sim.string() + " --format bogus") == 2);
  CHECK(run_cli("report --in " + (dir / "nowhere").string() + " --format csv") == 1);
}

TEST_CASE("STEERLAB_SEED overrides the configured seed") {
  const fs::path dir = scratch_dir();
  const std::string common = "simulate --mode histogram --mu 1 --settings 2 --trials 2 ";

  CHECK(run_cli(common + "--seed 1 --out " + (dir / "env_a").string()) == 0);

  const char* cli = std::getenv("STEERLAB_CLI");
  REQUIRE(cli != nullptr);
  const std::string cmd = "STEERLAB_SEED=1 " + std::string(cli) + " " + common + "--seed 999 " +
                          "--out " + (dir / "env_b").string() + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  CHECK(WEXITSTATUS(status) == 0);
  CHECK(read_file(dir / "env_a" / "results.csv") == read_file(dir / "env_b" / "results.csv"));
}
