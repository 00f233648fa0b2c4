#include "qrwa/channel_model.hpp"

#include <cmath>
#include <numbers>

namespace qrwa {

void ChannelInputs::validate() const {
  if (!(alpha_q_db_per_km > 0.0))
    throw std::invalid_argument("channel: alpha_q_db_per_km must be > 0");
  if (!(alpha_c_db_per_km > 0.0))
    throw std::invalid_argument("channel: alpha_c_db_per_km must be > 0");
  if (!(p_tx_quantum > 0.0))
    throw std::invalid_argument("channel: p_tx_quantum must be > 0");
  if (!std::isfinite(qsnr_threshold_db))
    throw std::invalid_argument("channel: qsnr_threshold_db must be finite");
  if (!std::isfinite(snr_target_db))
    throw std::invalid_argument("channel: snr_target_db must be finite");
  if (!(n_ref > 0.0))
    throw std::invalid_argument("channel: n_ref must be > 0");
}

double to_db(double linear) { return 10.0 * std::log10(linear); }

double from_db(double db) { return std::pow(10.0, db / 10.0); }

double attenuation_factor(double alpha_db_per_km, double length_km) {
  return std::pow(10.0, -alpha_db_per_km * length_km / 10.0);
}

double db_to_natural(double alpha_db_per_km) {
  return alpha_db_per_km * std::numbers::ln10 / 10.0;
}

double effective_length(double alpha_c_db_per_km, double length_km) {
  const double a = db_to_natural(alpha_c_db_per_km);
  return -std::expm1(-a * length_km) / a;
}

double metric_length(const ChannelInputs& in, double length_km) {
  return in.length_metric == LengthMetric::Actual
             ? length_km
             : effective_length(in.alpha_c_db_per_km, length_km);
}

double required_launch_power(const ChannelInputs& in, double path_length_km) {
  return from_db(in.snr_target_db) * in.n_ref /
         attenuation_factor(in.alpha_c_db_per_km, path_length_km);
}

double qsnr_linear(const ChannelParams& params, double quantum_path_length_km,
                   std::span<const Interferer> interferers) {
  const double signal =
      attenuation_factor(params.in.alpha_q_db_per_km, quantum_path_length_km) *
      params.in.p_tx_quantum;
  double noise_sum = 0.0;
  for (const Interferer& i : interferers) {
    noise_sum += i.launch_power_at_span_start *
                 std::exp(-params.alpha_c_natural *
                          metric_length(params.in, i.shared_length_km));
  }
  return signal / (params.n_fixed + params.gamma_nl * noise_sum);
}

double qsnr_db(const ChannelParams& params, double quantum_path_length_km,
               std::span<const Interferer> interferers) {
  return to_db(qsnr_linear(params, quantum_path_length_km, interferers));
}

std::pair<double, double> calibrate_noise(const ChannelInputs& in) {
  in.validate();
  const double threshold_linear = from_db(in.qsnr_threshold_db);
  const double n_fixed =
      attenuation_factor(in.alpha_q_db_per_km, kCalibrationIsolatedKm) *
      in.p_tx_quantum / threshold_linear;
  const double noise_at_40 =
      attenuation_factor(in.alpha_q_db_per_km, kCalibrationSharedKm) *
      in.p_tx_quantum / threshold_linear;
  const double p_classical = required_launch_power(in, kCalibrationSharedKm);
  const double interference =
      p_classical * std::exp(-db_to_natural(in.alpha_c_db_per_km) *
                             metric_length(in, kCalibrationSharedKm));
  const double gamma_nl = (noise_at_40 - n_fixed) / interference;
  if (!(gamma_nl > 0.0))
    throw CalibrationError(
        "calibration infeasible: shared-channel constraint implies "
        "gamma_nl <= 0");
  return {n_fixed, gamma_nl};
}

ChannelParams make_channel_params(const ChannelInputs& in) {
  const auto [n_fixed, gamma_nl] = calibrate_noise(in);
  ChannelParams p;
  p.in = in;
  p.n_fixed = n_fixed;
  p.gamma_nl = gamma_nl;
  p.alpha_c_natural = db_to_natural(in.alpha_c_db_per_km);
  p.qsnr_threshold_linear = from_db(in.qsnr_threshold_db);
  return p;
}

}  // namespace qrwa
