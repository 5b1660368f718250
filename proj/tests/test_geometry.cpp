#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "e2mac/cluster_geometry.hpp"
#include "e2mac/mc_kernels.hpp"

using namespace e2mac;

namespace {

Vec2 uniform_disc_point(std::mt19937_64& rng, double radius) {
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  const double r = radius * std::sqrt(uni(rng));
  const double th = 2.0 * std::numbers::pi * uni(rng);
  return {r * std::cos(th), r * std::sin(th)};
}

}  // namespace

TEST_CASE("ppp deployment determinism and emptiness") {
  const auto a = deploy_ppp(1e-3, 50.0, 500.0, 42);
  const auto b = deploy_ppp(1e-3, 50.0, 500.0, 42);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].position.x == b[i].position.x);
    CHECK(a[i].position.y == b[i].position.y);
  }
  CHECK(deploy_ppp(0.0, 0.0, 100.0, 1).empty());
  CHECK_THROWS_AS(deploy_ppp(1e-3, 100.0, 50.0, 1), std::domain_error);
}

TEST_CASE("ppp mean count matches the intensity") {
  const double sigma = 2e-4, r_in = 50.0, r_out = 500.0;
  const double area = std::numbers::pi * (r_out * r_out - r_in * r_in);
  std::uint64_t total = 0;
  const int reps = 10000;
  for (int s = 0; s < reps; ++s) total += deploy_ppp(sigma, r_in, r_out, 1000 + s).size();
  const double mean = static_cast<double>(total) / reps;
  CHECK(mean == doctest::Approx(sigma * area).epsilon(0.01));
}

TEST_CASE("positions stay inside the annulus") {
  for (const auto& d : deploy_ppp(5e-4, 50.0, 500.0, 9)) {
    const double r = std::hypot(d.position.x, d.position.y);
    CHECK(r >= 50.0);
    CHECK(r <= 500.0);
  }
}

TEST_CASE("voronoi clusters: every member is attached to its nearest head") {
  auto devices = deploy_ppp(2e-3, 0.0, 400.0, 123);
  auto clusters = form_voronoi_clusters(devices, 0.05, 321);
  REQUIRE(!clusters.empty());
  std::size_t members = 0;
  for (const auto& cl : clusters) {
    for (int m : cl.member_ids) {
      ++members;
      const double attached = distance(devices[m].position, devices[cl.ch_id].position);
      for (const auto& other : clusters) {
        const double alt = distance(devices[m].position, devices[other.ch_id].position);
        CHECK(attached <= alt + 1e-12);
      }
    }
  }
  // partition: every non-head device appears exactly once
  std::size_t heads = clusters.size();
  CHECK(members + heads == devices.size());
}

TEST_CASE("p = 1 makes every device a singleton head") {
  auto devices = deploy_ppp(1e-3, 0.0, 300.0, 5);
  auto clusters = form_voronoi_clusters(devices, 1.0, 6);
  CHECK(clusters.size() == devices.size());
  for (const auto& cl : clusters) CHECK(cl.member_ids.empty());
}

TEST_CASE("mean members per cluster and member distance follow the closed forms") {
  // disc large enough that boundary distortion stays well inside the band
  const double sigma = 6.43e-3, p = 0.1;
  const auto st = mc::voronoi_stats(sigma, p, 0.0, 1000.0, 2000, 77);
  CHECK(st.mean_members_per_cluster() ==
        doctest::Approx((1.0 - p) / p).epsilon(0.03));
  CHECK(st.mean_member_distance() ==
        doctest::Approx(1.0 / (2.0 * std::sqrt(sigma * p))).epsilon(0.03));
}

TEST_CASE("serial and parallel deployment statistics agree") {
  const auto a = mc::voronoi_stats_serial(3e-3, 0.1, 0.0, 500.0, 64, 900);
  const auto b = mc::voronoi_stats(3e-3, 0.1, 0.0, 500.0, 64, 900);
  CHECK(a.devices == b.devices);
  CHECK(a.heads == b.heads);
  CHECK(a.members == b.members);
  CHECK(a.member_distance_sum == doctest::Approx(b.member_distance_sum).epsilon(1e-12));
}

TEST_CASE("closed-form mean distances") {
  // z = 4 sigma collapses the square root to 1 m
  CHECK(mean_member_distance(2.0, 0.5) == doctest::Approx(1.0));
  CHECK(mean_member_distance(100.0, 6.4305027511876904e-3) ==
        doctest::Approx(62.351591068852194).epsilon(1e-12));
  CHECK(mean_member_distance(400.0, 1e-3) ==
        doctest::Approx(2.0 * mean_member_distance(100.0, 1e-3)).epsilon(1e-12));
  CHECK(cluster_radius_estimate(100.0, 1e-3) ==
        doctest::Approx(1.5 * mean_member_distance(100.0, 1e-3)).epsilon(1e-12));
}

TEST_CASE("mean segment from a uniform disc point to the centre is 2R/3") {
  std::mt19937_64 rng(31);
  const double radius = 7.0;
  double sum = 0.0;
  const int n = 400000;
  for (int i = 0; i < n; ++i) {
    const Vec2 pt = uniform_disc_point(rng, radius);
    sum += std::hypot(pt.x, pt.y);
  }
  CHECK(sum / n == doctest::Approx(2.0 * radius / 3.0).epsilon(0.01));
}

TEST_CASE("off-centre mean distance approximation") {
  CHECK(avg_distance_to_offcenter_ch(0.0, 3.0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(avg_distance_to_offcenter_ch(3.0, 3.0) ==
        doctest::Approx(109.0 * 3.0 / 96.0).epsilon(1e-12));
  CHECK_THROWS_AS(avg_distance_to_offcenter_ch(4.0, 3.0), std::domain_error);

  // sampled check: < 4% error for r <= R
  std::mt19937_64 rng(33);
  const double radius = 5.0;
  for (double frac : {0.25, 0.5, 0.75, 1.0}) {
    const Vec2 anchor{frac * radius, 0.0};
    double sum = 0.0;
    const int n = 300000;
    for (int i = 0; i < n; ++i) {
      const Vec2 pt = uniform_disc_point(rng, radius);
      sum += std::hypot(pt.x - anchor.x, pt.y - anchor.y);
    }
    const double approx = avg_distance_to_offcenter_ch(frac * radius, radius);
    CHECK(approx == doctest::Approx(sum / n).epsilon(0.04));
  }
}

TEST_CASE("mean distance between two uniform disc points") {
  CHECK(mean_pairwise_distance_disc(45.0 * std::numbers::pi / 128.0) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(mean_pairwise_distance_disc(2.0) ==
        doctest::Approx(2.0 * mean_pairwise_distance_disc(1.0)).epsilon(1e-12));

  std::mt19937_64 rng(35);
  const double radius = 4.0;
  double sum = 0.0;
  const int n = 400000;
  for (int i = 0; i < n; ++i) {
    const Vec2 a = uniform_disc_point(rng, radius);
    const Vec2 b = uniform_disc_point(rng, radius);
    sum += std::hypot(a.x - b.x, a.y - b.y);
  }
  CHECK(mean_pairwise_distance_disc(radius) == doctest::Approx(sum / n).epsilon(0.01));
}

TEST_CASE("deployment snapshot export") {
  auto devices = deploy_ppp(1e-3, 0.0, 200.0, 2);
  form_voronoi_clusters(devices, 0.2, 3);
  std::ostringstream os;
  write_deployment_csv(os, devices);
  const std::string text = os.str();
  CHECK(text.rfind("id,x,y,role,cluster_id\n", 0) == 0);
  std::size_t lines = 0;
  for (char c : text)
    if (c == '\n') ++lines;
  CHECK(lines == devices.size() + 1);
}
