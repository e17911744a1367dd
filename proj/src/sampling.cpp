#include "steerlab/sampling.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace steerlab {

RngStream RngStream::for_trial(std::uint64_t seed, std::uint64_t trial_index) {
  // Mix the pair once through the stream itself so nearby trial indices
  // start from decorrelated states.
  RngStream mix(seed ^ (trial_index * 0x9e3779b97f4a7c15ULL));
  std::uint64_t s = mix.next_u64();
  return RngStream(s);
}

std::uint64_t RngStream::next_u64() {
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double RngStream::next_double() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t RngStream::next_below(std::uint64_t n) {
  return static_cast<std::uint64_t>(next_double() * static_cast<double>(n)) % n;
}

ShotModel::ShotModel(long long shots) : shots_per_pair(shots) {
  if (shots < 1) throw std::domain_error("ShotModel: shots_per_pair must be >= 1");
}

std::vector<Vec3> fibonacci_points(int K) {
  if (K < 3) throw std::domain_error("fibonacci_points: K must be >= 3");
  const double golden = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Vec3> pts;
  pts.reserve(K);
  for (int i = 0; i < K; ++i) {
    const double z = 1.0 - 2.0 * (i + 0.5) / K;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = 2.0 * std::numbers::pi * i / golden;
    pts.emplace_back(r * std::cos(phi), r * std::sin(phi), z);
  }
  return pts;
}

namespace {

Eigen::Matrix3d random_rotation(RngStream& stream) {
  // Shoemake's uniform unit quaternion.
  const double u1 = stream.next_double();
  const double u2 = stream.next_double();
  const double u3 = stream.next_double();
  const double two_pi = 2.0 * std::numbers::pi;
  const double a = std::sqrt(1.0 - u1), b = std::sqrt(u1);
  Eigen::Quaterniond q(b * std::cos(two_pi * u3), a * std::sin(two_pi * u2),
                       a * std::cos(two_pi * u2), b * std::sin(two_pi * u3));
  return q.toRotationMatrix();
}

Vec3 orthonormal_complement(const Vec3& a, RngStream& stream) {
  // Any fixed reference not parallel to a, then a random in-plane angle.
  Vec3 ref = std::abs(a.z()) < 0.9 ? Vec3::UnitZ() : Vec3::UnitX();
  Vec3 u = (ref - ref.dot(a) * a).normalized();
  Vec3 v = a.cross(u);
  const double theta = 2.0 * std::numbers::pi * stream.next_double();
  return std::cos(theta) * u + std::sin(theta) * v;
}

}  // namespace

OrthogonalTriad sample_triad(const TriadSampler& sampler, RngStream& stream) {
  if (sampler.mode == SamplerMode::HaarRotation) {
    Eigen::Matrix3d r = random_rotation(stream);
    return OrthogonalTriad{{Vec3(r.col(0)), Vec3(r.col(1)), Vec3(r.col(2))}};
  }
  if (sampler.lattice_size < 3) {
    throw std::domain_error("sample_triad: lattice_size must be >= 3 in fibonacci mode");
  }
  const std::vector<Vec3> lattice = fibonacci_points(sampler.lattice_size);
  Vec3 a1 = lattice[stream.next_below(lattice.size())];
  Vec3 a2 = orthonormal_complement(a1, stream);
  Vec3 a3 = a1.cross(a2);
  return OrthogonalTriad{{a1, a2, a3}};
}

std::vector<PairSelection> pair_combinations() {
  std::vector<PairSelection> out;
  out.reserve(9);
  const int omit_order[3] = {2, 1, 0};
  for (int ao : omit_order) {
    for (int bo : omit_order) {
      PairSelection s{};
      int k = 0;
      for (int i = 0; i < 3; ++i)
        if (i != ao) s.alice_axes[k++] = i;
      k = 0;
      for (int i = 0; i < 3; ++i)
        if (i != bo) s.bob_axes[k++] = i;
      s.alice_omitted = ao;
      s.bob_omitted = bo;
      out.push_back(s);
    }
  }
  return out;
}

JointDistribution sample_counts(const JointDistribution& ideal, const ShotModel& model,
                                RngStream& stream) {
  const int cells = ideal.n_a * ideal.n_b;
  std::vector<double> p(ideal.p.size(), 0.0);
  for (int x = 0; x < ideal.n_x; ++x) {
    for (int y = 0; y < ideal.n_y; ++y) {
      std::vector<double> cdf(cells);
      double acc = 0.0;
      for (int c = 0; c < cells; ++c) {
        acc += ideal.p[(x * ideal.n_y + y) * cells + c];
        cdf[c] = acc;
      }
      cdf[cells - 1] = 1.0;
      std::vector<long long> counts(cells, 0);
      for (long long s = 0; s < model.shots_per_pair; ++s) {
        const double u = stream.next_double();
        int c = 0;
        while (u >= cdf[c]) ++c;
        ++counts[c];
      }
      for (int c = 0; c < cells; ++c) {
        p[(x * ideal.n_y + y) * cells + c] =
            static_cast<double>(counts[c]) / static_cast<double>(model.shots_per_pair);
      }
    }
  }
  return JointDistribution(std::move(p), ideal.n_x, ideal.n_y, ideal.n_a, ideal.n_b);
}

}  // namespace steerlab
