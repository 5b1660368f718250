#include "e2mac/csma_analysis.hpp"

#include <cmath>
#include <stdexcept>

namespace e2mac {

void CsmaParams::derive_energies() {
  e_s = (p_c + xi * p_t_m) * tau_p + p_l * tau_r;
  e_f = e_s + p_l * theta_f;
  e_b = p_l * theta_b;
}

CsmaParams CsmaParams::per_phase() const {
  CsmaParams q = *this;
  q.g = g / n;
  return q;
}

double busy_tail(double g, double delta_d) {
  if (g < 0.0 || delta_d < 0.0) throw std::domain_error("busy_tail: negative argument");
  if (g == 0.0 || delta_d == 0.0) return 0.0;
  const double x = g * delta_d;
  // delta_d * (1 - (1 - e^{-x})/x), stable for small x via expm1
  return delta_d * (1.0 + std::expm1(-x) / x);
}

ChannelProbs channel_probabilities(const CsmaParams& p) {
  if (p.g < 0.0) throw std::domain_error("channel_probabilities: negative load");
  const double t = p.big_t();
  if (t <= 0.0) throw std::domain_error("channel_probabilities: nonpositive T");
  ChannelProbs out;
  out.p_s = std::exp(-p.g * p.delta_d);
  out.p_i = 1.0 / (p.g * t + std::exp(-p.g * p.delta_d));
  // identical to 1/(gT e^{g delta_d} + 1); the product form keeps every
  // consumer bit-consistent
  out.p_is = out.p_i * out.p_s;
  return out;
}

double per_packet_energy(const CsmaParams& p) {
  const auto pr = channel_probabilities(p);
  return (1.0 - pr.p_i) * p.e_b + pr.p_i * (1.0 - pr.p_s) * p.e_f + pr.p_i * pr.p_s * p.e_s;
}

double energy_efficiency(const CsmaParams& p) {
  // d * p_is / e_cons expanded: the per-packet outcome weights divided by p_is
  const double x = p.g * p.delta_d;
  const double gt = p.g * p.big_t();
  const double denom =
      p.e_s + std::expm1(x) * p.e_f + (1.0 + (gt - 1.0) * std::exp(x)) * p.e_b;
  if (denom <= 0.0) throw std::domain_error("energy_efficiency: nonpositive energy");
  return p.d_tilde / denom;
}

double throughput(const CsmaParams& p, double r_in) {
  const double x = p.g * p.delta_d;
  return p.g * p.tau_p / (1.0 + p.g * p.big_t() * std::exp(x)) * r_in;
}

namespace {

double delay_sum(double p_i, double p_s, double p_is, double tau_p, double theta_b, double theta_f,
                 int k_m) {
  if (p_is <= 0.0) throw std::domain_error("mean_delay: zero success probability");
  if (p_is >= 1.0) return tau_p;
  const double busy_w = (1.0 - p_i) / (1.0 - p_is);
  const double coll_w = p_i * (1.0 - p_s) / (1.0 - p_is);
  const double per_retry = busy_w * theta_b + coll_w * (theta_f + tau_p);
  double sum = 0.0;
  double geo = p_is;  // (1 - p_is)^k * p_is
  for (int k = 0; k <= k_m; ++k) {
    sum += geo * (tau_p + k * per_retry);
    geo *= (1.0 - p_is);
    if (geo == 0.0) break;
  }
  return sum;
}

double delay_high_retry(double p_i, double p_s, double p_is, double tau_p, double theta_b,
                        double theta_f) {
  if (p_is <= 0.0) throw std::domain_error("mean_delay: zero success probability");
  if (p_is >= 1.0) return tau_p;
  const double busy_w = (1.0 - p_i) / (1.0 - p_is);
  const double coll_w = p_i * (1.0 - p_s) / (1.0 - p_is);
  return tau_p + (1.0 / p_is - 1.0) * (busy_w * theta_b + coll_w * (theta_f + tau_p));
}

}  // namespace

double mean_delay(const CsmaParams& p) {
  const auto pr = channel_probabilities(p);
  return delay_sum(pr.p_i, pr.p_s, pr.p_is, p.tau_p, p.theta_b, p.theta_f, p.k_m);
}

double mean_delay_high_retry(const CsmaParams& p) {
  const auto pr = channel_probabilities(p);
  return delay_high_retry(pr.p_i, pr.p_s, pr.p_is, p.tau_p, p.theta_b, p.theta_f);
}

CsmaMetrics n_phase_metrics(const CsmaParams& p, double r_in) {
  if (p.n < 1) throw std::domain_error("n_phase_metrics: need n >= 1");
  const CsmaParams q = p.per_phase();
  const auto pr = channel_probabilities(q);

  CsmaMetrics m;
  m.y_hat = busy_tail(q.g, q.delta_d);
  m.p_i = pr.p_i;
  m.p_s = pr.p_s;
  m.p_is = pr.p_is;
  m.e_cons = per_packet_energy(q);
  m.u_e = energy_efficiency(q);
  m.u_s = throughput(q, r_in);
  // the contending node sees its phase active 1/n of the time
  const double pt_i = pr.p_i / p.n;
  const double pt_is = pt_i * pr.p_s;
  m.delay = delay_sum(pt_i, pr.p_s, pt_is, q.tau_p, q.theta_b, q.theta_f, q.k_m);
  return m;
}

double zero_dd_energy_efficiency(const CsmaParams& p, double u_s_norm) {
  if (u_s_norm < 0.0 || u_s_norm >= 1.0)
    throw std::domain_error("zero_dd_energy_efficiency: u_s_norm must be in [0,1)");
  return p.d_tilde /
         (p.e_s + u_s_norm * p.e_f + u_s_norm / (1.0 - u_s_norm) * p.e_b);
}

double zero_dd_delay(const CsmaParams& p, double u_s_norm) {
  if (u_s_norm < 0.0 || u_s_norm >= 1.0)
    throw std::domain_error("zero_dd_delay: u_s_norm must be in [0,1)");
  return p.tau_p + (p.n - 1.0) * p.theta_b +
         p.n * p.theta_b * u_s_norm / (1.0 - u_s_norm);
}

std::vector<TradeoffPoint> zero_dd_tradeoffs(const CsmaParams& p, int num_points) {
  std::vector<TradeoffPoint> pts;
  pts.reserve(num_points);
  for (int i = 0; i < num_points; ++i) {
    const double u = (i + 0.5) / (num_points + 0.5);
    pts.push_back({u, zero_dd_energy_efficiency(p, u), zero_dd_delay(p, u)});
  }
  return pts;
}

double lambert_w(double x) {
  constexpr double inv_e = 0.36787944117144233;
  if (x < -inv_e) throw std::domain_error("lambert_w: argument below -1/e");
  if (x == 0.0) return 0.0;
  if (x == -inv_e) return -1.0;

  double w;
  if (x < -0.25) {
    // square-root expansion around the branch point
    const double eta = 2.0 + 2.0 * std::exp(1.0) * x;
    const double s = std::sqrt(eta);
    w = -1.0 + s - s * s / 3.0 + 11.0 / 72.0 * s * s * s;
  } else if (x < 3.0) {
    w = std::log1p(x);
  } else {
    const double l = std::log(x);
    const double ll = std::log(l);
    w = l - ll + ll / l;
  }

  // Halley iteration on f(w) = w e^w - x
  for (int it = 0; it < 64; ++it) {
    const double ew = std::exp(w);
    const double f = w * ew - x;
    const double wp1 = w + 1.0;
    const double step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1));
    w -= step;
    if (std::abs(step) <= 1e-15 * (std::abs(w) + 1e-300)) break;
  }
  return w;
}

}  // namespace e2mac
