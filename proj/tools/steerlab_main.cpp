#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "steerlab/harness/campaign.hpp"
#include "steerlab/harness/io.hpp"
#include "steerlab/harness/reports.hpp"

namespace {

using namespace steerlab;

std::vector<double> parse_mu(const std::string& text) {
  std::vector<double> grid;
  if (text.find(':') != std::string::npos) {
    double start, stop, step;
    char c1, c2;
    std::istringstream in(text);
    if (!(in >> start >> c1 >> stop >> c2 >> step) || c1 != ':' || c2 != ':' || step <= 0) {
      throw std::invalid_argument("--mu grid must be start:stop:step with step > 0");
    }
    for (double v = start; v <= stop + step * 0.5; v += step) {
      grid.push_back(std::min(v, stop));
    }
  } else {
    std::stringstream in(text);
    std::string field;
    while (std::getline(in, field, ',')) grid.push_back(std::stod(field));
  }
  if (grid.empty()) throw std::invalid_argument("--mu parsed to an empty grid");
  return grid;
}

void apply_env_seed(harness::CampaignConfig& cfg) {
  if (const char* env = std::getenv("STEERLAB_SEED")) {
    cfg.seed = std::stoull(env);
  }
}

void check_writable(const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  const fs::path probe = fs::path(dir) / ".steerlab_probe";
  std::ofstream out(probe);
  if (!out) throw std::runtime_error("output directory not writable: " + dir);
  out.close();
  fs::remove(probe);
}

nlohmann::json record_json(const harness::TrialRecord& rec) {
  nlohmann::json j;
  j["signalling_raw"] = io::round_sig(rec.signalling_raw);
  j["t"] = io::round_sig(rec.t);
  j["asr_status"] = conic::to_string(rec.asr_status);
  j["asr_value"] = io::round_sig(rec.asr_value);
  j["steerable"] = rec.asr_violated();
  if (rec.raw_asr_status) j["raw_asr_status"] = conic::to_string(*rec.raw_asr_status);
  auto outcome = [](const harness::InequalityOutcome& o) {
    nlohmann::json v;
    v["value"] = io::round_sig(o.value);
    v["bound"] = io::round_sig(o.bound);
    v["violated"] = o.violated;
    return v;
  };
  nlohmann::json criteria;
  if (rec.ls.present) criteria["LS"] = outcome(rec.ls);
  if (rec.chsh.present) criteria["CHSH-LS"] = outcome(rec.chsh);
  if (rec.dbs.present) criteria["DBS"] = outcome(rec.dbs);
  if (rec.ris.present) criteria["RIS"] = outcome(rec.ris);
  j["criteria"] = std::move(criteria);
  j["wall_time_ms"] = rec.wall_time_ms;
  return j;
}

int run(int argc, char** argv) {
  CLI::App app{"steerlab: steering certification from joint measurement statistics"};
  app.require_subcommand(1);

  harness::CampaignConfig cfg;
  std::string mode_name = "histogram";
  std::string mu_text = "1";
  std::string sampler_name = "haar";
  long long shots = 0;
  bool include_plane_pairs = false;

  CLI::App* simulate = app.add_subcommand("simulate", "run a Monte-Carlo campaign");
  simulate->add_option("--mode", mode_name, "sweep | histogram | bars")
      ->check(CLI::IsMember({"sweep", "histogram", "bars"}));
  simulate->add_option("--mu", mu_text, "mixing parameter: value, comma list or start:stop:step");
  simulate->add_option("--settings", cfg.n_settings, "settings per side (2 or 3)")
      ->check(CLI::IsMember({2, 3}));
  simulate->add_option("--trials", cfg.trials, "trials (0 = mode default)");
  simulate->add_option("--shots", shots, "finite shots per setting pair (omit for exact)");
  simulate->add_option("--sampler", sampler_name, "haar | fibonacci")
      ->check(CLI::IsMember({"haar", "fibonacci"}));
  simulate->add_option("--lattice-size", cfg.sampler.lattice_size, "fibonacci lattice size");
  simulate->add_option("--seed", cfg.seed, "64-bit RNG seed");
  simulate->add_option("--threads", cfg.threads, "worker threads");
  simulate->add_flag("--aligned", cfg.aligned, "use the fixed Pauli axes on both sides");
  simulate->add_flag("--with-sr", cfg.with_sr, "also compute SR per trial (exact runs)");
  simulate->add_flag("--allow-signalling", cfg.allow_signalling,
                     "additionally run ASR on the raw sampled data");
  simulate->add_flag("--include-orthogonal-plane-pairs", include_plane_pairs,
                     "keep the first axis-pair combination in two-settings campaigns");
  simulate->add_option("--out", cfg.output_dir, "output directory")->required();

  std::string dist_path, bob_path, analyze_out;
  bool analyze_allow_signalling = false;
  CLI::App* analyze = app.add_subcommand("analyze", "analyze a distribution file");
  analyze->add_option("--dist", dist_path, "distribution JSON")->required();
  analyze->add_option("--bob", bob_path, "Bob measurement JSON")->required();
  analyze->add_flag("--allow-signalling", analyze_allow_signalling,
                    "also report ASR status on the raw data");
  analyze->add_option("--out", analyze_out, "output directory")->required();

  std::string report_in, format_text = "csv,json,svg";
  CLI::App* report = app.add_subcommand("report", "re-emit reports from a results directory");
  report->add_option("--in", report_in, "results directory")->required();
  report->add_option("--format", format_text, "comma list of csv,json,svg");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Collapse CLI11's per-error exit codes onto the documented usage code,
    // keeping 0 for --help and --version.
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (simulate->parsed()) {
    if (mode_name == "sweep") cfg.mode = harness::CampaignMode::SweepMu;
    else if (mode_name == "bars") cfg.mode = harness::CampaignMode::ViolationBars;
    else cfg.mode = harness::CampaignMode::Histogram;
    cfg.mu_grid = parse_mu(mu_text);
    cfg.sampler.mode = sampler_name == "fibonacci" ? SamplerMode::FibonacciLattice
                                                   : SamplerMode::HaarRotation;
    if (shots > 0) cfg.shots = shots;
    cfg.exclude_orthogonal_plane_pairs = !include_plane_pairs;
    apply_env_seed(cfg);
    check_writable(cfg.output_dir);

    const harness::CampaignResult result = harness::run_campaign(cfg);
    harness::write_results(result);
    std::cout << "wrote " << result.records.size() << " records to " << cfg.output_dir << "\n";
    return 0;
  }

  if (analyze->parsed()) {
    check_writable(analyze_out);
    const harness::AnalysisReport rep =
        harness::analyze_files(dist_path, bob_path, analyze_allow_signalling);

    namespace fs = std::filesystem;
    nlohmann::json j = record_json(rep.record);
    std::ofstream out(fs::path(analyze_out) / "report.json");
    out << j.dump(2) << "\n";
    if (rep.record.asr_status == conic::Status::Optimal) {
      std::ofstream w(fs::path(analyze_out) / "witness.json");
      w << io::witness_to_json(rep.witness).dump(2) << "\n";
    }
    io::save_distribution(rep.ns_dist, (fs::path(analyze_out) / "ns_dist.json").string());

    std::cout << "signalling " << rep.record.signalling_raw << ", t " << rep.record.t
              << ", ASR " << conic::to_string(rep.record.asr_status) << " "
              << rep.record.asr_value << "\n";
    return rep.record.asr_status == conic::Status::NumericalFailure ? 1 : 0;
  }

  std::vector<std::string> formats;
  std::stringstream in(format_text);
  std::string field;
  while (std::getline(in, field, ',')) formats.push_back(field);
  harness::emit_reports(report_in, formats);
  std::cout << "reports refreshed in " << report_in << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const io::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
