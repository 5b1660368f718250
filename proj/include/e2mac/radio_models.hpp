#pragma once

#include <functional>

namespace e2mac {

enum class LogBase { base2, natural };

// Log-distance path loss: PL_dB(d) = intercept + slope * log10(d / d_ref).
struct PathLossModel {
  double intercept_db = 0.0;
  double slope_db_per_decade = 0.0;
  double reference_distance_m = 1.0;

  double loss_db(double d) const;
  double loss_linear(double d) const;
};

struct RadioEnvironment {
  double w_m = 180e3;  // intra-cluster bandwidth [Hz]
  double w_h = 180e3;  // inter-cluster bandwidth [Hz]
  double n0 = 3.9810717055349565e-21;     // noise PSD [W/Hz], -204 dBW/Hz
  double gamma_gap = 19.952623149688797;  // SNR gap, linear, 13 dB
  PathLossModel pl_inter{128.1, 37.6, 1000.0};
  PathLossModel pl_intra{38.5, 20.0, 1.0};
  LogBase log_base = LogBase::base2;

  // log(1 + x) in the configured base
  double cap_log(double x) const;
};

double path_loss_linear(const PathLossModel& model, double d);

// (w/u) log(1 + P / (N0 G omega (w/u)))
double fdma_rate(const RadioEnvironment& env, double w, double p_tx, double omega, double u);

// (w/u) log(1 + P / (N0 G omega w))
double tdma_rate(const RadioEnvironment& env, double w, double p_tx, double omega, double u);

// Reserved full-band link (scheduled uplink): w log(1 + P / (N0 G omega w)).
// The sharing factor u does not appear; it is accepted for signature
// compatibility with the other rate functions.
double dedicated_rate(const RadioEnvironment& env, double w, double p_tx, double omega,
                      double u = 1.0);

// Contention-thinned effective rate: p_is * w / (r_g t_ra) * log(1 + P/(N0 G omega w))
double csma_effective_rate(const RadioEnvironment& env, double w, double p_tx, double omega,
                           double p_is, double r_g, double t_ra);

// Pluggable expected-rate function F(w, P, omega, u).
using RateFn =
    std::function<double(const RadioEnvironment&, double w, double p_tx, double omega, double u)>;

RateFn make_fdma();
RateFn make_tdma();
RateFn make_dedicated();
RateFn make_csma_effective(double p_is, double r_g, double t_ra);

}  // namespace e2mac
