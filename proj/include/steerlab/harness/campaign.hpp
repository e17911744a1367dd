#pragma once

// Monte-Carlo campaign execution: configuration, per-trial records and the
// simulate/analyze pipelines.

#include <optional>
#include <string>
#include <vector>

#include "steerlab/sampling.hpp"
#include "steerlab/steering/inequalities.hpp"
#include "steerlab/steering/sdp.hpp"

namespace steerlab::harness {

enum class CampaignMode { SweepMu, Histogram, ViolationBars };

std::string to_string(CampaignMode m);

struct CampaignConfig {
  CampaignMode mode = CampaignMode::Histogram;
  std::vector<double> mu_grid = {1.0};
  int n_settings = 3;  // 2 or 3
  int trials = 0;      // 0 = mode default
  std::optional<long long> shots;
  TriadSampler sampler;
  std::uint64_t seed = 0;
  bool exclude_orthogonal_plane_pairs = true;  // drop the (A1A2, B1B2) pairing
  bool aligned = false;   // Alice uses Bob's Pauli axes (deterministic)
  bool with_sr = false;   // also run SR via tomographic assemblage (exact runs)
  bool allow_signalling = false;  // additionally run ASR on the raw sampled data
  int threads = 1;
  std::string output_dir;

  int effective_trials() const;
};

struct InequalityOutcome {
  double value = 0.0;
  double bound = 0.0;
  bool violated = false;
  bool present = false;
};

struct TrialRecord {
  long long trial_index = 0;
  int combo_index = -1;  // pair-combination index in two-settings campaigns
  double mu = 0.0;
  std::vector<Vec3> alice_axes, bob_axes;
  double signalling_raw = 0.0;
  double t = 0.0;  // NSA signalling robustness (0 for exact data)
  conic::Status asr_status = conic::Status::NumericalFailure;
  double asr_value = 0.0;
  std::optional<conic::Status> raw_asr_status;  // --allow-signalling only
  std::optional<double> sr_value;
  InequalityOutcome ls, chsh, dbs, ris;
  double wall_time_ms = 0.0;

  bool asr_violated() const;
};

/// ASR verdict threshold separating solver noise from genuine positivity.
inline constexpr double kSteerableThreshold = 1e-6;

struct CampaignResult {
  CampaignConfig config;
  std::vector<TrialRecord> records;
};

CampaignResult run_campaign(const CampaignConfig& config);

/// File-based pipeline: signalling diagnostic, NSA, ASR, inequalities.
struct AnalysisReport {
  TrialRecord record;
  SteeringFunctional witness;
  JointDistribution ns_dist;
};

AnalysisReport analyze_files(const std::string& dist_path, const std::string& bob_path,
                             bool allow_signalling);

}  // namespace steerlab::harness
