#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace cogmux {

struct Transmitter {
  double power_w = 0.1;
  double distance = 1.0;
  double pathloss_exponent = 4.0;
};

enum class ChannelEstimation { mmse, perfect };
enum class SymbolModel { constant_modulus, gaussian };
enum class SensingModel { weakest, superposed };

/// Full scenario. Transmitters are ordered secondaries first, then primaries;
/// "global index" below means that order.
struct SystemConfig {
  std::string name;
  int n_rx_antennas = 1;  // N
  std::vector<Transmitter> secondaries;
  std::vector<Transmitter> primaries;
  double p_max_w = 0.1;
  double noise_var = 1.0;     // N0
  double residual_var = 0.0;  // sigma_eps^2
  double aging_alpha = 1.0;
  std::optional<double> doppler_product;  // f_D * T_s, set when alpha was derived from it
  ChannelEstimation estimation = ChannelEstimation::mmse;
  double primary_signal_var = 1.0;  // sigma_p^2
  int samples = 1;                  // L
  double pf_target = 0.1;           // tau
  double activity_prob = 0.5;       // P_A
  double w_th_w = 0.03;
  int stream_index = 1;  // 1-based secondary stream used by sinr/outage metrics
  SymbolModel primary_symbols = SymbolModel::constant_modulus;
  SensingModel sensing_model = SensingModel::weakest;
  /// q-bar: row j = primary node j, columns = secondaries then the receiver R.
  /// Empty when the scenario has no interference geometry.
  Eigen::MatrixXd interference_gains;

  int n_secondary() const { return static_cast<int>(secondaries.size()); }
  int n_primary() const { return static_cast<int>(primaries.size()); }
  int n_total() const { return n_secondary() + n_primary(); }
  double sensing_noise_var() const { return noise_var + residual_var; }
  double snr_db() const;
  bool has_interference_gains() const { return interference_gains.size() > 0; }

  /// Source line of each key that was read from text, for diagnostics.
  std::map<std::string, int> key_lines;
};

double dbm_to_watts(double dbm);
double watts_to_dbm(double w);

/// Throws ConfigError naming the violated invariant.
void validate(const SystemConfig& cfg);

/// Parses flat `key = value` text. `#` starts a comment. Lists are comma or
/// whitespace separated. Errors carry "source:line:" prefixes.
SystemConfig parse_config(std::string_view text, const std::string& source = "config");
SystemConfig load_config_file(const std::string& path);

/// Deterministic text form of every field (doubles printed round-trip exact).
std::string canonical_text(const SystemConfig& cfg);
/// 16 hex digits, FNV-1a 64 over canonical_text().
std::string config_digest(const SystemConfig& cfg);

/// Built-in scenarios: fig2 ... fig8, fig8-distance.
std::vector<std::string> preset_names();
std::string preset_text(const std::string& name);
SystemConfig load_preset(const std::string& name);

/// Same scenario with the transmit power of every node and p_max unchanged but
/// N0 set for the given SNR = p_max / N0 in dB.
SystemConfig with_snr_db(SystemConfig cfg, double snr_db);

/// Perfect CSI variant: alpha = 1, perfect estimation.
SystemConfig with_perfect_csi(SystemConfig cfg);

}  // namespace cogmux
