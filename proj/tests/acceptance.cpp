// Acceptance gate: runs the seven acceptance criteria end to end and prints
// one PASS/FAIL line per criterion. The exit code is the number of failed
// criteria, so the gate fails loudly instead of hiding shortfalls.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <string>
#include <thread>
#include <vector>

#include "steerlab/harness/campaign.hpp"
#include "steerlab/sampling.hpp"
#include "steerlab/steering/sdp.hpp"

using namespace steerlab;
using namespace steerlab::harness;

namespace {

struct Gate {
  int failures = 0;
  std::vector<std::string> notes;

  void sub(bool ok, bool& all_ok, const char* fmt, ...) {
    char buf[512];
    va_list args;
    va_start(args, fmt);
    std::vsnprintf(buf, sizeof(buf), fmt, args);
    va_end(args);
    notes.push_back(std::string("    ") + (ok ? "ok   " : "FAIL ") + buf);
    if (!ok) all_ok = false;
  }

  void finish(int index, bool ok, const std::string& title) {
    std::printf("criterion %d: %s — %s\n", index, ok ? "PASS" : "FAIL", title.c_str());
    for (const std::string& n : notes) std::printf("%s\n", n.c_str());
    notes.clear();
    if (!ok) ++failures;
  }
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

MeasurementSet pauli_pair() {
  MeasurementSet set;
  set.settings.push_back(projective_setting(Vec3(1, 0, 0)));
  set.settings.push_back(projective_setting(Vec3(0, 1, 0)));
  return set;
}

MeasurementSet triad_set(const OrthogonalTriad& t) {
  MeasurementSet set;
  for (const Vec3& n : t.axes) set.settings.push_back(projective_setting(n));
  return set;
}

JointDistribution aligned_dist(double mu, const MeasurementSet& set) {
  return joint_distribution(werner_state(WernerParams(mu)), set, set);
}

int hw_threads() {
  return std::max(1u, std::thread::hardware_concurrency());
}

struct Fractions {
  double asr = 0.0, ls = 0.0, chsh = 0.0, dbs = 0.0, ris = 0.0;
  double mean_asr = 0.0;
  size_t optimal = 0, records = 0;
};

Fractions fractions_of(const CampaignResult& result) {
  Fractions f;
  f.records = result.records.size();
  size_t asr = 0, ls = 0, chsh = 0, dbs = 0, ris = 0;
  double sum = 0.0;
  for (const TrialRecord& r : result.records) {
    if (r.asr_violated()) ++asr;
    if (r.asr_status == conic::Status::Optimal) {
      ++f.optimal;
      sum += r.asr_value;
    }
    if (r.ls.violated) ++ls;
    if (r.chsh.violated) ++chsh;
    if (r.dbs.violated) ++dbs;
    if (r.ris.violated) ++ris;
  }
  const double n = static_cast<double>(f.records);
  f.asr = asr / n;
  f.ls = ls / n;
  f.chsh = chsh / n;
  f.dbs = dbs / n;
  f.ris = ris / n;
  f.mean_asr = f.optimal ? sum / static_cast<double>(f.optimal) : 0.0;
  return f;
}

void criterion_1(Gate& gate) {
  bool ok = true;
  const MeasurementSet triad = pauli_triad();
  const MeasurementSet pair = pauli_pair();

  auto t0 = std::chrono::steady_clock::now();
  const SteeringResult sr =
      steering_robustness(assemblage_from_state(werner_state(WernerParams(1.0)), triad));
  const double sr_sec = seconds_since(t0);
  gate.sub(sr.status == conic::Status::Optimal && std::abs(sr.value - 0.2679) <= 1e-3 &&
               sr_sec < 1.0,
           ok, "SR aligned triads = %.6f (target 0.2679 +- 1e-3, %.2fs)", sr.value, sr_sec);

  t0 = std::chrono::steady_clock::now();
  const SteeringResult asr3 = adapted_steering_robustness(aligned_dist(1.0, triad), triad);
  const double asr3_sec = seconds_since(t0);
  gate.sub(asr3.status == conic::Status::Optimal && std::abs(asr3.value - 0.2679) <= 1e-3 &&
               asr3_sec < 1.0,
           ok, "ASR aligned triads = %.6f (target 0.2679 +- 1e-3, %.2fs)", asr3.value, asr3_sec);

  t0 = std::chrono::steady_clock::now();
  const SteeringResult asr2 = adapted_steering_robustness(aligned_dist(1.0, pair), pair);
  const double asr2_sec = seconds_since(t0);
  gate.sub(asr2.status == conic::Status::Optimal && std::abs(asr2.value - 0.1716) <= 1e-3 &&
               asr2_sec < 1.0,
           ok, "ASR aligned pairs = %.6f (target 0.1716 +- 1e-3, %.2fs)", asr2.value, asr2_sec);

  gate.finish(1, ok, "closed-form anchors");
}

void criterion_2(Gate& gate) {
  bool ok = true;
  const auto start = std::chrono::steady_clock::now();

  auto smallest_violation = [](const MeasurementSet& set) {
    for (int k = 0; k <= 200; ++k) {
      const double mu = 0.005 * k;
      const SteeringResult asr = adapted_steering_robustness(aligned_dist(mu, set), set);
      if (asr.status == conic::Status::Optimal && asr.value > 1e-6) return mu;
    }
    return 2.0;
  };

  const double mu3 = smallest_violation(pauli_triad());
  const double mu2 = smallest_violation(pauli_pair());
  const double sec = seconds_since(start);
  gate.sub(std::abs(mu3 - 1.0 / std::sqrt(3.0)) <= 0.005, ok,
           "3-setting threshold mu = %.3f (target 1/sqrt(3) = %.4f +- 0.005)", mu3,
           1.0 / std::sqrt(3.0));
  gate.sub(std::abs(mu2 - 1.0 / std::sqrt(2.0)) <= 0.005, ok,
           "2-setting threshold mu = %.3f (target 1/sqrt(2) = %.4f +- 0.005)", mu2,
           1.0 / std::sqrt(2.0));
  gate.sub(sec < 30.0, ok, "runtime %.1fs (limit 30s)", sec);

  gate.finish(2, ok, "steerability thresholds on a 0.005 grid");
}

void criterion_3(Gate& gate) {
  bool ok = true;
  CampaignConfig cfg;
  cfg.mode = CampaignMode::Histogram;
  cfg.mu_grid = {1.0};
  cfg.n_settings = 2;
  cfg.trials = 1000;
  cfg.seed = 11;
  cfg.threads = hw_threads();
  const Fractions f = fractions_of(run_campaign(cfg));
  gate.sub(f.optimal == f.records, ok, "all %zu records solved to optimality", f.records);
  gate.sub(std::abs(f.mean_asr - 0.0627) <= 0.010, ok,
           "mean ASR over 2-setting pairs = %.4f (target 0.0627 +- 0.010)", f.mean_asr);
  gate.finish(3, ok, "random-measurement mean ASR at mu = 1");
}

void criterion_4(Gate& gate) {
  bool ok = true;

  CampaignConfig three;
  three.mode = CampaignMode::ViolationBars;
  three.mu_grid = {1.0};
  three.n_settings = 3;
  three.trials = 2000;
  three.seed = 7;
  three.threads = hw_threads();
  const Fractions f3 = fractions_of(run_campaign(three));
  gate.sub(f3.asr == 1.0, ok, "3 settings: ASR fraction = %.4f (target 1)", f3.asr);
  gate.sub(f3.dbs == 1.0, ok, "3 settings: DBS fraction = %.4f (target 1)", f3.dbs);
  gate.sub(f3.ris == 1.0, ok, "3 settings: RIS fraction = %.4f (target 1)", f3.ris);
  gate.sub(std::abs(f3.ls - 0.116) <= 0.02, ok,
           "3 settings: LS fraction = %.4f (target 0.116 +- 0.02)", f3.ls);

  CampaignConfig two = three;
  two.n_settings = 2;
  two.seed = 11;
  const Fractions f2 = fractions_of(run_campaign(two));
  gate.sub(std::abs(f2.asr - 0.818) <= 0.03, ok,
           "2 settings: ASR fraction = %.4f (target 0.818 +- 0.03)", f2.asr);
  gate.sub(std::abs(f2.chsh - 0.777) <= 0.03, ok,
           "2 settings: CHSH-LS fraction = %.4f (target 0.777 +- 0.03)", f2.chsh);
  gate.sub(std::abs(f2.ris - 0.541) <= 0.03, ok,
           "2 settings: RIS fraction = %.4f (target 0.541 +- 0.03)", f2.ris);
  gate.sub(std::abs(f2.dbs - 0.516) <= 0.03, ok,
           "2 settings: DBS fraction = %.4f (target 0.516 +- 0.03)", f2.dbs);
  gate.sub(std::abs(f2.ls - 0.194) <= 0.03, ok,
           "2 settings: LS fraction = %.4f (target 0.194 +- 0.03)", f2.ls);

  gate.finish(4, ok, "noiseless violation probabilities (see README: acceptance gate)");
}

void criterion_5(Gate& gate) {
  bool ok = true;
  const MeasurementSet triad = pauli_triad();
  const JointDistribution ideal = aligned_dist(0.907, triad);

  int unbounded = 0, optimal = 0, t_nonneg = 0, ns_ok = 0;
  const int trials = 100;
  for (int i = 0; i < trials; ++i) {
    RngStream stream = RngStream::for_trial(5, static_cast<std::uint64_t>(i));
    const JointDistribution sampled = sample_counts(ideal, ShotModel(1000), stream);
    if (adapted_steering_robustness(sampled, triad).status == conic::Status::Unbounded) {
      ++unbounded;
    }
    const NsaResult nsa = nonsignalling_projection(sampled, triad);
    if (nsa.t >= 0.0) ++t_nonneg;
    if (signalling_magnitude(nsa.ns_dist) < 1e-8) ++ns_ok;
    if (adapted_steering_robustness(nsa.ns_dist, triad).status == conic::Status::Optimal) {
      ++optimal;
    }
  }
  gate.sub(unbounded >= 95, ok, "raw ASR unbounded on %d/100 trials (target >= 95)", unbounded);
  gate.sub(optimal == trials, ok, "post-NSA ASR optimal on %d/100 trials (target 100)", optimal);
  gate.sub(t_nonneg == trials, ok, "t >= 0 on %d/100 trials", t_nonneg);
  gate.sub(ns_ok == trials, ok, "repaired data non-signalling within 1e-8 on %d/100 trials",
           ns_ok);
  gate.finish(5, ok, "NSA pipeline on finite-shot data");
}

void criterion_6(Gate& gate) {
  bool ok = true;
  CampaignConfig cfg;
  cfg.mode = CampaignMode::ViolationBars;
  cfg.mu_grid = {0.907};
  cfg.n_settings = 3;
  cfg.trials = 200;
  cfg.shots = 1000;
  cfg.seed = 5;
  cfg.threads = hw_threads();
  const Fractions f = fractions_of(run_campaign(cfg));
  gate.sub(f.asr > f.ls, ok, "ASR fraction %.4f vs LS %.4f", f.asr, f.ls);
  gate.sub(f.asr > f.dbs, ok, "ASR fraction %.4f vs DBS %.4f", f.asr, f.dbs);
  gate.sub(f.asr > f.ris, ok, "ASR fraction %.4f vs RIS %.4f", f.asr, f.ris);
  gate.finish(6, ok, "mu = 0.907 + shots preset: ASR strictly ahead of every rival");
}

void criterion_7(Gate& gate) {
  bool ok = true;
  const MeasurementSet pauli = pauli_triad();

  // ASR <= SR for arbitrary Bob triads; equality for the Pauli triad.
  int le_ok = 0, eq_ok = 0, verified = 0, roundtrip = 0;
  const int cases = 100;
  for (int i = 0; i < cases; ++i) {
    RngStream stream = RngStream::for_trial(17, static_cast<std::uint64_t>(i));
    const double mu = stream.next_double();
    const DensityMatrix rho = werner_state(WernerParams(mu));
    const MeasurementSet alice = triad_set(sample_triad(TriadSampler{}, stream));
    const MeasurementSet bob = triad_set(sample_triad(TriadSampler{}, stream));

    const SteeringResult sr = steering_robustness(assemblage_from_state(rho, alice));
    const SteeringResult free_bob =
        adapted_steering_robustness(joint_distribution(rho, alice, bob), bob);
    const JointDistribution pauli_dist = joint_distribution(rho, alice, pauli);
    const SteeringResult pauli_bob = adapted_steering_robustness(pauli_dist, pauli);
    if (sr.status != conic::Status::Optimal || free_bob.status != conic::Status::Optimal ||
        pauli_bob.status != conic::Status::Optimal) {
      continue;
    }
    if (free_bob.value <= sr.value + 1e-7 && pauli_bob.value <= sr.value + 1e-7) ++le_ok;
    if (std::abs(pauli_bob.value - sr.value) <= 1e-6) ++eq_ok;
    if (sr.verification.ok && free_bob.verification.ok && pauli_bob.verification.ok) ++verified;
    if (std::abs(evaluate_witness(pauli_bob.witness, pauli_dist) - pauli_bob.value) <= 1e-8 &&
        std::abs(evaluate_witness(free_bob.witness, joint_distribution(rho, alice, bob)) -
                 free_bob.value) <= 1e-8) {
      ++roundtrip;
    }
  }
  gate.sub(le_ok == cases, ok, "ASR <= SR + 1e-7 on %d/%d cases", le_ok, cases);
  gate.sub(eq_ok == cases, ok, "ASR = SR within 1e-6 for Pauli Bob on %d/%d cases", eq_ok, cases);
  gate.sub(verified == cases, ok, "certificates verified on %d/%d cases", verified, cases);
  gate.sub(roundtrip == cases, ok, "witness round-trip within 1e-8 on %d/%d cases", roundtrip,
           cases);

  // Unsteerable Werner inputs.
  int zero_ok = 0;
  for (int i = 0; i < cases; ++i) {
    RngStream stream = RngStream::for_trial(19, static_cast<std::uint64_t>(i));
    const double mu = stream.next_double() * (1.0 / std::sqrt(3.0) - 0.01);
    const MeasurementSet alice = triad_set(sample_triad(TriadSampler{}, stream));
    const MeasurementSet bob = triad_set(sample_triad(TriadSampler{}, stream));
    const SteeringResult asr = adapted_steering_robustness(
        joint_distribution(werner_state(WernerParams(mu)), alice, bob), bob);
    if (asr.status == conic::Status::Optimal && asr.value >= -1e-8 && asr.value <= 1e-6) {
      ++zero_ok;
    }
  }
  gate.sub(zero_ok == cases, ok, "ASR in [-1e-8, 1e-6] on %d/%d unsteerable cases", zero_ok,
           cases);

  // NSA idempotence and mixture identity on sampled data.
  int idem_ok = 0, mix_ok = 0;
  for (int i = 0; i < cases; ++i) {
    RngStream stream = RngStream::for_trial(23, static_cast<std::uint64_t>(i));
    const double mu = 0.5 + 0.5 * stream.next_double();
    const MeasurementSet alice = triad_set(sample_triad(TriadSampler{}, stream));
    const MeasurementSet bob = triad_set(sample_triad(TriadSampler{}, stream));
    const JointDistribution sampled = sample_counts(
        joint_distribution(werner_state(WernerParams(mu)), alice, bob), ShotModel(500), stream);
    const NsaResult nsa = nonsignalling_projection(sampled, bob);
    if (nonsignalling_projection(nsa.ns_dist, bob).t <= 1e-7) ++idem_ok;

    bool mix = true;
    for (int x = 0; x < 3 && mix; ++x) {
      for (int y = 0; y < 3 && mix; ++y) {
        double total = 0.0;
        for (int a = 0; a < 2; ++a) {
          for (int b = 0; b < 2; ++b) {
            const double q =
                (1.0 + nsa.t) * nsa.ns_dist.at(x, y, a, b) - sampled.at(x, y, a, b);
            if (q < -1e-7) mix = false;
            total += q;
          }
        }
        if (std::abs(total - nsa.t) > 1e-7) mix = false;
      }
    }
    if (mix) ++mix_ok;
  }
  gate.sub(idem_ok == cases, ok, "NSA idempotent (t <= 1e-7) on %d/%d cases", idem_ok, cases);
  gate.sub(mix_ok == cases, ok, "NSA mixture identity within 1e-7 on %d/%d cases", mix_ok,
           cases);

  gate.finish(7, ok, "randomized property suites");
}

}  // namespace

int main() {
  Gate gate;
  criterion_1(gate);
  criterion_2(gate);
  criterion_3(gate);
  criterion_4(gate);
  criterion_5(gate);
  criterion_6(gate);
  criterion_7(gate);
  std::printf("%d of 7 criteria failed\n", gate.failures);
  return gate.failures;
}
