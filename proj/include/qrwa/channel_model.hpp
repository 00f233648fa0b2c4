#pragma once

#include <span>
#include <stdexcept>
#include <utility>

namespace qrwa {

// How the shared length of an interfering span enters the nonlinear noise
// term: the geometric length as-is, or the effective length (the distance
// over which a constant-power signal would cause the same nonlinear effect).
enum class LengthMetric { Actual, Effective };

// Physical-layer inputs known before calibration.
struct ChannelInputs {
  double alpha_q_db_per_km = 0.32;   // quantum-band fiber attenuation
  double alpha_c_db_per_km = 0.17;   // classical-band fiber attenuation
  double p_tx_quantum = 1.0;         // normalized quantum launch power
  double qsnr_threshold_db = 15.0;   // quantum admission threshold
  double snr_target_db = 20.0;       // classical receiver SNR target
  double n_ref = 1.0;                // normalized classical receiver noise
  LengthMetric length_metric = LengthMetric::Actual;

  void validate() const;  // throws std::invalid_argument naming the field
};

// Inputs plus the calibrated noise model and a couple of cached derived
// quantities (pure functions of the inputs; cached because they sit on the
// admission hot path).
struct ChannelParams {
  ChannelInputs in;
  double n_fixed = 0.0;                // fixed noise floor, from calibration
  double gamma_nl = 0.0;               // nonlinear coefficient, from calibration
  double alpha_c_natural = 0.0;        // db_to_natural(alpha_c_db_per_km)
  double qsnr_threshold_linear = 0.0;  // 10^(threshold_db/10)
};

// One contiguous span of fiber shared between a quantum path and one
// classical lightpath.
struct Interferer {
  double launch_power_at_span_start = 0.0;
  double shared_length_km = 0.0;
};

class CalibrationError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

double to_db(double linear);
double from_db(double db);

// 10^(-alpha*L/10): the fraction of power left after L km.
double attenuation_factor(double alpha_db_per_km, double length_km);

// dB/km -> Np/km (natural units): alpha * ln(10)/10.
double db_to_natural(double alpha_db_per_km);

// (1 - e^(-a*L)) / a with a = db_to_natural(alpha).  Always < L.
double effective_length(double alpha_c_db_per_km, double length_km);

// The span length as it enters the noise term, per in.length_metric.
double metric_length(const ChannelInputs& in, double length_km);

// Launch power making a classical receiver at the end of a path of this
// length see exactly snr_target_db over noise n_ref.
double required_launch_power(const ChannelInputs& in, double path_length_km);

// QSNR of a quantum channel of the given length against a list of
// interfering spans.  The noise sum is accumulated left to right in list
// order (callers keep that order deterministic).
double qsnr_linear(const ChannelParams& params, double quantum_path_length_km,
                   std::span<const Interferer> interferers);
double qsnr_db(const ChannelParams& params, double quantum_path_length_km,
               std::span<const Interferer> interferers);

// Solves the two closed-form calibration constraints:
//   1. an isolated 60 km quantum channel sits exactly at the threshold
//      -> n_fixed;
//   2. a 40 km quantum channel whose full length is shared with one
//      classical channel launched at the power required for a 40 km path
//      (span starting at the classical transmitter) sits exactly at the
//      threshold -> gamma_nl.
// Throws CalibrationError if the implied gamma_nl is <= 0.
std::pair<double, double> calibrate_noise(const ChannelInputs& in);

// calibrate_noise plus the cached derived fields.
ChannelParams make_channel_params(const ChannelInputs& in);

inline constexpr double kCalibrationIsolatedKm = 60.0;
inline constexpr double kCalibrationSharedKm = 40.0;

}  // namespace qrwa
