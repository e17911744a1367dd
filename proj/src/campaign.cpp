#include "steerlab/harness/campaign.hpp"

#include <atomic>
#include <chrono>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "steerlab/harness/io.hpp"

namespace steerlab::harness {

namespace {

constexpr double kSignallingGate = 1e-8;

std::vector<Vec3> pauli_axes(int n) {
  std::vector<Vec3> axes = {Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(0, 0, 1)};
  axes.resize(n);
  return axes;
}

MeasurementSet set_from_axes(const std::vector<Vec3>& axes) {
  MeasurementSet set;
  for (const Vec3& n : axes) set.settings.push_back(projective_setting(n));
  return set;
}

JointDistribution slice_pairs(const JointDistribution& d, const PairSelection& sel) {
  std::vector<double> p(16, 0.0);
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) {
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
          p[((x * 2 + y) * 2 + a) * 2 + b] = d.at(sel.alice_axes[x], sel.bob_axes[y], a, b);
        }
      }
    }
  }
  return JointDistribution(std::move(p), 2, 2, 2, 2);
}

void fill_outcome(InequalityOutcome& out, const InequalityReport& rep) {
  out.value = rep.value;
  out.bound = rep.bound;
  out.violated = rep.violated;
  out.present = true;
}

void evaluate_inequalities(TrialRecord& rec, const JointDistribution& dist,
                           const MeasurementSet& bob) {
  if (dist.n_x != dist.n_y) return;
  const CorrelationMatrix M = correlation_matrix(dist);
  fill_outcome(rec.ls, linear_steering(M, bob));
  if (dist.n_x == 2) fill_outcome(rec.chsh, chsh_like_steering(M));
  fill_outcome(rec.dbs, dbs(M));
  fill_outcome(rec.ris, ris(M));
}

TrialRecord evaluate_record(const CampaignConfig& cfg, double mu, long long trial_index,
                            int combo_index, const JointDistribution& dist,
                            const MeasurementSet& alice, const MeasurementSet& bob,
                            const DensityMatrix& state) {
  const auto started = std::chrono::steady_clock::now();
  TrialRecord rec;
  rec.trial_index = trial_index;
  rec.combo_index = combo_index;
  rec.mu = mu;
  for (const auto& s : alice.settings) rec.alice_axes.push_back(s.bloch);
  for (const auto& s : bob.settings) rec.bob_axes.push_back(s.bloch);

  rec.signalling_raw = signalling_magnitude(dist);
  JointDistribution work = dist;
  if (rec.signalling_raw > kSignallingGate) {
    if (cfg.allow_signalling) {
      rec.raw_asr_status = adapted_steering_robustness(dist, bob).status;
    }
    const NsaResult nsa = nonsignalling_projection(dist, bob);
    rec.t = nsa.t;
    work = nsa.ns_dist;
  }

  const SteeringResult asr = adapted_steering_robustness(work, bob);
  rec.asr_status = asr.status;
  rec.asr_value = asr.value;

  if (cfg.with_sr && !cfg.shots) {
    const SteeringResult sr = steering_robustness(assemblage_from_state(state, alice));
    if (sr.status == conic::Status::Optimal) rec.sr_value = sr.value;
  }

  evaluate_inequalities(rec, work, bob);

  rec.wall_time_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - started)
                         .count();
  return rec;
}

std::vector<TrialRecord> run_trial(const CampaignConfig& cfg, double mu, long long trial_index) {
  RngStream stream = RngStream::for_trial(cfg.seed, static_cast<std::uint64_t>(trial_index));
  const DensityMatrix state = werner_state(WernerParams(mu));

  if (cfg.aligned) {
    const MeasurementSet set = set_from_axes(pauli_axes(cfg.n_settings));
    JointDistribution dist = joint_distribution(state, set, set);
    if (cfg.shots) dist = sample_counts(dist, ShotModel(*cfg.shots), stream);
    return {evaluate_record(cfg, mu, trial_index, -1, dist, set, set, state)};
  }

  const OrthogonalTriad alice_triad = sample_triad(cfg.sampler, stream);
  const OrthogonalTriad bob_triad = sample_triad(cfg.sampler, stream);
  const MeasurementSet alice =
      set_from_axes({alice_triad.axes[0], alice_triad.axes[1], alice_triad.axes[2]});
  const MeasurementSet bob =
      set_from_axes({bob_triad.axes[0], bob_triad.axes[1], bob_triad.axes[2]});
  JointDistribution dist = joint_distribution(state, alice, bob);
  if (cfg.shots) dist = sample_counts(dist, ShotModel(*cfg.shots), stream);

  if (cfg.n_settings == 3) {
    return {evaluate_record(cfg, mu, trial_index, -1, dist, alice, bob, state)};
  }

  std::vector<TrialRecord> records;
  const auto combos = pair_combinations();
  int excluded = -1;
  if (cfg.exclude_orthogonal_plane_pairs) {
    // A two-setting selection measures in the plane normal to its omitted
    // axis, and two planes are orthogonal exactly when their normals are.
    // Drop the combination whose planes are closest to orthogonal.
    double best = 2.0;
    for (int k = 0; k < static_cast<int>(combos.size()); ++k) {
      const double dot = std::abs(
          alice_triad.axes[combos[k].alice_omitted].dot(bob_triad.axes[combos[k].bob_omitted]));
      if (dot < best) {
        best = dot;
        excluded = k;
      }
    }
  }
  for (int k = 0; k < static_cast<int>(combos.size()); ++k) {
    if (k == excluded) continue;
    const PairSelection& sel = combos[k];
    MeasurementSet alice2, bob2;
    for (int i : sel.alice_axes) alice2.settings.push_back(alice.settings[i]);
    for (int i : sel.bob_axes) bob2.settings.push_back(bob.settings[i]);
    records.push_back(evaluate_record(cfg, mu, trial_index, k, slice_pairs(dist, sel), alice2,
                                      bob2, state));
  }
  return records;
}

}  // namespace

std::string to_string(CampaignMode m) {
  switch (m) {
    case CampaignMode::SweepMu: return "sweep-mu";
    case CampaignMode::Histogram: return "histogram";
    case CampaignMode::ViolationBars: return "violation-bars";
  }
  return "?";
}

int CampaignConfig::effective_trials() const {
  if (trials > 0) return trials;
  switch (mode) {
    case CampaignMode::SweepMu: return 50;
    case CampaignMode::Histogram: return 10000;
    case CampaignMode::ViolationBars: return 2000;
  }
  return 1;
}

bool TrialRecord::asr_violated() const {
  return asr_status == conic::Status::Optimal && asr_value > kSteerableThreshold;
}

CampaignResult run_campaign(const CampaignConfig& config) {
  if (config.n_settings != 2 && config.n_settings != 3) {
    throw std::domain_error("n_settings must be 2 or 3");
  }
  if (config.mu_grid.empty()) throw std::domain_error("mu grid must be non-empty");
  for (double mu : config.mu_grid) {
    if (mu < 0.0 || mu > 1.0) throw std::domain_error("mu grid values must lie in [0, 1]");
  }

  const int trials = config.effective_trials();
  std::vector<double> mus;
  if (config.mode == CampaignMode::SweepMu) {
    for (double mu : config.mu_grid) mus.insert(mus.end(), trials, mu);
  } else {
    mus.assign(trials, config.mu_grid.front());
  }

  std::vector<std::vector<TrialRecord>> buckets(mus.size());
  std::atomic<size_t> cursor{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    for (;;) {
      const size_t i = cursor.fetch_add(1);
      if (i >= mus.size()) return;
      try {
        buckets[i] = run_trial(config, mus[i], static_cast<long long>(i));
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };

  const int n_threads = std::max(1, config.threads);
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  CampaignResult result;
  result.config = config;
  for (auto& bucket : buckets) {
    for (auto& rec : bucket) result.records.push_back(std::move(rec));
  }
  return result;
}

AnalysisReport analyze_files(const std::string& dist_path, const std::string& bob_path,
                             bool allow_signalling) {
  const JointDistribution dist = io::load_distribution(dist_path);
  const MeasurementSet bob = io::load_bob_measurements(bob_path);
  if (bob.n_settings() != dist.n_y) {
    throw io::ParseError("bob measurement count does not match the distribution's n_y");
  }

  const auto started = std::chrono::steady_clock::now();
  AnalysisReport report{TrialRecord{}, SteeringFunctional{}, dist};
  TrialRecord& rec = report.record;
  rec.mu = -1.0;
  for (const auto& s : bob.settings) rec.bob_axes.push_back(s.bloch);

  rec.signalling_raw = signalling_magnitude(dist);
  if (rec.signalling_raw > kSignallingGate) {
    if (allow_signalling) {
      rec.raw_asr_status = adapted_steering_robustness(dist, bob).status;
    }
    const NsaResult nsa = nonsignalling_projection(dist, bob);
    rec.t = nsa.t;
    report.ns_dist = nsa.ns_dist;
  }

  const SteeringResult asr = adapted_steering_robustness(report.ns_dist, bob);
  rec.asr_status = asr.status;
  rec.asr_value = asr.value;
  report.witness = asr.witness;

  if (report.ns_dist.n_x == report.ns_dist.n_y) {
    evaluate_inequalities(rec, report.ns_dist, bob);
  }

  rec.wall_time_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - started)
                         .count();
  return report;
}

}  // namespace steerlab::harness
