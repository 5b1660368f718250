// Serial vs OpenMP timing for the Monte-Carlo kernels.
#include <omp.h>

#include <chrono>
#include <cstdio>

#include "e2mac/mc_kernels.hpp"

using namespace e2mac;

namespace {

template <typename F>
double time_ms(F&& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  fn();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
  std::uint64_t arrivals = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 2'000'000ULL;
  std::uint64_t deployments = argc > 2 ? std::strtoull(argv[2], nullptr, 10) : 1000ULL;
  const int threads = omp_get_max_threads();
  std::printf("threads available: %d\n", threads);

  CsmaParams p;
  p.tau_p = 1.0;
  p.delta_d = 0.005;
  p.g = 13.7;
  mc::ChannelStats a, b;
  const double t_ch_serial = time_ms([&] { a = mc::simulate_channel_serial(p, arrivals, 1); });
  const double t_ch_par = time_ms([&] { b = mc::simulate_channel(p, arrivals, 1, threads); });
  std::printf("channel %llu arrivals: serial %.0f ms (p_is %.4f) | omp %.0f ms (p_is %.4f) | speedup %.2fx\n",
              static_cast<unsigned long long>(arrivals), t_ch_serial, a.p_is_hat(), t_ch_par,
              b.p_is_hat(), t_ch_serial / t_ch_par);

  mc::VoronoiStats va, vb;
  const double t_v_serial =
      time_ms([&] { va = mc::voronoi_stats_serial(6.43e-3, 0.1, 0.0, 1000.0, deployments, 1); });
  const double t_v_par =
      time_ms([&] { vb = mc::voronoi_stats(6.43e-3, 0.1, 0.0, 1000.0, deployments, 1); });
  std::printf("voronoi %llu deployments: serial %.0f ms (d %.3f) | omp %.0f ms (d %.3f) | speedup %.2fx\n",
              static_cast<unsigned long long>(deployments), t_v_serial, va.mean_member_distance(),
              t_v_par, vb.mean_member_distance(), t_v_serial / t_v_par);
  return 0;
}
