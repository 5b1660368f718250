#include "e2mac/radio_models.hpp"

#include <cmath>
#include <stdexcept>

namespace e2mac {

double PathLossModel::loss_db(double d) const {
  if (d <= 0.0) throw std::domain_error("path loss: distance must be positive");
  return intercept_db + slope_db_per_decade * std::log10(d / reference_distance_m);
}

double PathLossModel::loss_linear(double d) const { return std::pow(10.0, loss_db(d) / 10.0); }

double path_loss_linear(const PathLossModel& model, double d) { return model.loss_linear(d); }

double RadioEnvironment::cap_log(double x) const {
  return log_base == LogBase::base2 ? std::log2(1.0 + x) : std::log1p(x);
}

double fdma_rate(const RadioEnvironment& env, double w, double p_tx, double omega, double u) {
  if (u <= 0.0) throw std::domain_error("fdma_rate: sharing factor must be positive");
  if (omega <= 0.0) throw std::domain_error("fdma_rate: path loss must be positive");
  if (p_tx == 0.0) return 0.0;
  const double share = w / u;
  return share * env.cap_log(p_tx / (env.n0 * env.gamma_gap * omega * share));
}

double tdma_rate(const RadioEnvironment& env, double w, double p_tx, double omega, double u) {
  if (u <= 0.0) throw std::domain_error("tdma_rate: sharing factor must be positive");
  if (omega <= 0.0) throw std::domain_error("tdma_rate: path loss must be positive");
  if (p_tx == 0.0) return 0.0;
  return (w / u) * env.cap_log(p_tx / (env.n0 * env.gamma_gap * omega * w));
}

double dedicated_rate(const RadioEnvironment& env, double w, double p_tx, double omega,
                      double /*u*/) {
  if (omega <= 0.0) throw std::domain_error("dedicated_rate: path loss must be positive");
  if (p_tx == 0.0) return 0.0;
  return w * env.cap_log(p_tx / (env.n0 * env.gamma_gap * omega * w));
}

double csma_effective_rate(const RadioEnvironment& env, double w, double p_tx, double omega,
                           double p_is, double r_g, double t_ra) {
  if (r_g * t_ra <= 0.0) throw std::domain_error("csma_effective_rate: r_g * t_ra must be positive");
  if (p_is < 0.0 || p_is > 1.0) throw std::domain_error("csma_effective_rate: p_is out of [0,1]");
  if (omega <= 0.0) throw std::domain_error("csma_effective_rate: path loss must be positive");
  if (p_tx == 0.0 || p_is == 0.0) return 0.0;
  return p_is * w / (r_g * t_ra) * env.cap_log(p_tx / (env.n0 * env.gamma_gap * omega * w));
}

RateFn make_fdma() {
  return [](const RadioEnvironment& env, double w, double p, double omega, double u) {
    return fdma_rate(env, w, p, omega, u);
  };
}

RateFn make_tdma() {
  return [](const RadioEnvironment& env, double w, double p, double omega, double u) {
    return tdma_rate(env, w, p, omega, u);
  };
}

RateFn make_dedicated() {
  return [](const RadioEnvironment& env, double w, double p, double omega, double u) {
    return dedicated_rate(env, w, p, omega, u);
  };
}

RateFn make_csma_effective(double p_is, double r_g, double t_ra) {
  return [=](const RadioEnvironment& env, double w, double p, double omega, double /*u*/) {
    return csma_effective_rate(env, w, p, omega, p_is, r_g, t_ra);
  };
}

}  // namespace e2mac
