#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "steerlab/sampling.hpp"

using namespace steerlab;

TEST_CASE("rng streams are deterministic and well ranged") {
  RngStream a = RngStream::for_trial(42, 7);
  RngStream b = RngStream::for_trial(42, 7);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

  RngStream c = RngStream::for_trial(42, 8);
  RngStream d = RngStream::for_trial(42, 7);
  int same = 0;
  for (int i = 0; i < 100; ++i) {
    if (c.next_u64() == d.next_u64()) ++same;
  }
  CHECK(same == 0);

  RngStream e(123);
  double sum = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double u = e.next_double();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    sum += u;
  }
  CHECK(sum / 10000 == doctest::Approx(0.5).epsilon(0.02));
  for (int i = 0; i < 1000; ++i) CHECK(e.next_below(13) < 13);
}

TEST_CASE("fibonacci lattice geometry") {
  const auto pts = fibonacci_points(1000);
  REQUIRE(pts.size() == 1000);
  for (const Vec3& p : pts) CHECK(std::abs(p.norm() - 1.0) < 1e-12);

  // Nearest-neighbor statistics: quasi-uniform coverage means no two points
  // collapse together and no point is isolated.
  double min_sep = std::numbers::pi;
  std::vector<double> nearest(pts.size(), std::numbers::pi);
  for (size_t i = 0; i < pts.size(); ++i) {
    for (size_t j = i + 1; j < pts.size(); ++j) {
      const double ang = std::acos(std::clamp(pts[i].dot(pts[j]), -1.0, 1.0));
      min_sep = std::min(min_sep, ang);
      nearest[i] = std::min(nearest[i], ang);
      nearest[j] = std::min(nearest[j], ang);
    }
  }
  CHECK(min_sep > 2.0 * std::numbers::pi / 180.0);
  double mean_gap = 0.0;
  for (double g : nearest) mean_gap += g;
  mean_gap /= nearest.size();
  for (double g : nearest) CHECK(g < 3.0 * mean_gap);

  const auto four = fibonacci_points(4);
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) CHECK((four[i] - four[j]).norm() > 1e-6);
  }
  CHECK_THROWS_AS(fibonacci_points(2), std::domain_error);
}

namespace {

void check_triad(const OrthogonalTriad& t) {
  for (int i = 0; i < 3; ++i) {
    CHECK(std::abs(t.axes[i].norm() - 1.0) < 1e-10);
    for (int j = i + 1; j < 3; ++j) CHECK(std::abs(t.axes[i].dot(t.axes[j])) < 1e-10);
  }
  Eigen::Matrix3d m;
  m << t.axes[0], t.axes[1], t.axes[2];
  CHECK(m.determinant() == doctest::Approx(1.0).epsilon(1e-9));
}

}  // namespace

TEST_CASE("haar triads are orthonormal, right-handed and unbiased") {
  TriadSampler sampler;
  RngStream stream(2024);
  Vec3 mean = Vec3::Zero();
  for (int i = 0; i < 10000; ++i) {
    const OrthogonalTriad t = sample_triad(sampler, stream);
    if (i < 50) check_triad(t);
    mean += t.axes[0] + t.axes[1] + t.axes[2];
  }
  mean /= 30000.0;
  for (int k = 0; k < 3; ++k) CHECK(std::abs(mean[k]) < 0.05);

  RngStream s1(99), s2(99);
  for (int i = 0; i < 10; ++i) {
    const OrthogonalTriad a = sample_triad(sampler, s1);
    const OrthogonalTriad b = sample_triad(sampler, s2);
    for (int k = 0; k < 3; ++k) CHECK((a.axes[k] - b.axes[k]).norm() == 0.0);
  }
}

TEST_CASE("fibonacci triads draw the first axis from the lattice") {
  TriadSampler sampler;
  sampler.mode = SamplerMode::FibonacciLattice;
  sampler.lattice_size = 50;
  const auto lattice = fibonacci_points(50);

  RngStream stream(7);
  for (int i = 0; i < 100; ++i) {
    const OrthogonalTriad t = sample_triad(sampler, stream);
    check_triad(t);
    double best = 10.0;
    for (const Vec3& p : lattice) best = std::min(best, (t.axes[0] - p).norm());
    CHECK(best < 1e-12);
  }

  TriadSampler bad = sampler;
  bad.lattice_size = 2;
  RngStream s(1);
  CHECK_THROWS_AS(sample_triad(bad, s), std::domain_error);
}

TEST_CASE("fibonacci lattice points are drawn uniformly") {
  const int K = 50;
  const int draws = 100000;
  TriadSampler sampler;
  sampler.mode = SamplerMode::FibonacciLattice;
  sampler.lattice_size = K;
  const auto lattice = fibonacci_points(K);

  RngStream stream(31);
  std::vector<int> counts(K, 0);
  for (int i = 0; i < draws; ++i) {
    const OrthogonalTriad t = sample_triad(sampler, stream);
    int best = 0;
    double best_d = 10.0;
    for (int k = 0; k < K; ++k) {
      const double d = (t.axes[0] - lattice[k]).norm();
      if (d < best_d) {
        best_d = d;
        best = k;
      }
    }
    ++counts[best];
  }
  const double p = 1.0 / K;
  const double sigma = std::sqrt(p * (1.0 - p) / draws);
  for (int k = 0; k < K; ++k) {
    CHECK(std::abs(static_cast<double>(counts[k]) / draws - p) <= 3.0 * sigma);
  }
}

TEST_CASE("pair combinations enumerate 3x3 omissions in a stable order") {
  const auto combos = pair_combinations();
  REQUIRE(combos.size() == 9);
  // Omission order is (axis 2, axis 1, axis 0) per side, Alice outer.
  int k = 0;
  for (int ao : {2, 1, 0}) {
    for (int bo : {2, 1, 0}) {
      CHECK(combos[k].alice_omitted == ao);
      CHECK(combos[k].bob_omitted == bo);
      for (int i : combos[k].alice_axes) CHECK(i != ao);
      for (int i : combos[k].bob_axes) CHECK(i != bo);
      CHECK(combos[k].alice_axes[0] < combos[k].alice_axes[1]);
      CHECK(combos[k].bob_axes[0] < combos[k].bob_axes[1]);
      ++k;
    }
  }
  CHECK(combos[0].alice_axes == std::array<int, 2>{0, 1});
  CHECK(combos[0].bob_axes == std::array<int, 2>{0, 1});
}

TEST_CASE("multinomial sampling matches the ideal distribution in the limit") {
  const JointDistribution ideal =
      joint_distribution(werner_state(WernerParams(1.0)), pauli_triad(), pauli_triad());

  RngStream stream(5);
  const JointDistribution big = sample_counts(ideal, ShotModel(10000000), stream);
  double worst = 0.0;
  for (size_t i = 0; i < ideal.p.size(); ++i) worst = std::max(worst, std::abs(big.p[i] - ideal.p[i]));
  CHECK(worst < 1e-3);

  const JointDistribution one = sample_counts(ideal, ShotModel(1), stream);
  for (int x = 0; x < 3; ++x) {
    for (int y = 0; y < 3; ++y) {
      int ones = 0;
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
          const double v = one.at(x, y, a, b);
          CHECK((v == 0.0 || v == 1.0));
          if (v == 1.0) ++ones;
        }
      }
      CHECK(ones == 1);
    }
  }

  RngStream s1(17), s2(17);
  const JointDistribution r1 = sample_counts(ideal, ShotModel(500), s1);
  const JointDistribution r2 = sample_counts(ideal, ShotModel(500), s2);
  CHECK(r1.p == r2.p);

  CHECK_THROWS_AS(ShotModel(0), std::domain_error);
}
