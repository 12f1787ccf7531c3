#include <map>

#include "cogmux/config.hpp"
#include "cogmux/errors.hpp"

namespace cogmux {

namespace {

// Shared numerics: omega = 4, P_A = 0.5, alpha = 0.1, sigma_p^2 = 1, p_max = 20 dBm.
constexpr const char* kCommon = R"(p_max_dbm = 20
pathloss_exponent = 4
activity_prob = 0.5
aging_alpha = 0.1
channel_estimation = mmse
primary_signal_var = 1
)";

const std::map<std::string, std::string>& table() {
  static const std::map<std::string, std::string> t = {
      {"fig2", R"(# ROC, four primaries at unequal distances
name = fig2
n_rx_antennas = 4
n_secondary = 1
n_primary = 4
secondary_distances = 0.5
primary_distances = 0.31, 0.1, 0.15, 0.2
snr_db = -30
samples = 10
pf_target = 0.1
)"},
      {"fig3", R"(# ROC vs number of primaries, identical distances
name = fig3
n_rx_antennas = 2
n_secondary = 1
n_primary = 4
secondary_distances = 0.5
primary_distances = 0.1
snr_db = -45
samples = 5
pf_target = 0.1
)"},
      {"fig4", R"(# AUC vs SNR
name = fig4
n_rx_antennas = 4
n_secondary = 1
n_primary = 2
secondary_distances = 1.0
primary_distances = 1.0
snr_db = 0
samples = 5
pf_target = 0.1
)"},
      {"fig5", R"(# detection probability vs SNR
name = fig5
n_rx_antennas = 4
n_secondary = 1
n_primary = 2
secondary_distances = 0.3
primary_distances = 0.3
snr_db = 5
samples = 5
pf_target = 0.01
)"},
      {"fig6", R"(# SINR CDF, 4 x 3 system, d_i = 0.8 + 0.05 i
name = fig6
n_rx_antennas = 4
n_secondary = 2
n_primary = 1
distance_base = 0.8
distance_step = 0.05
snr_db = 0
samples = 5
stream_index = 1
)"},
      {"fig7", R"(# outage, identical distances
name = fig7
n_rx_antennas = 4
n_secondary = 2
n_primary = 2
secondary_distances = 0.8
primary_distances = 0.8
snr_db = -10
samples = 5
pf_target = 0.1
stream_index = 1
)"},
      {"fig8", R"(# interference at primaries, q_ji = d1 (0.01 i + 0.01 j)
name = fig8
n_rx_antennas = 4
n_secondary = 1
n_primary = 4
secondary_distances = 0.5
primary_distances = 0.5
snr_db = 10
samples = 5
w_th_rel = 0.3
interference_rule = linear
interference_d1 = 0.6
)"},
      {"fig8-distance", R"(# interference at primaries, q_ji = (d1 (0.01 i + 0.01 j))^-omega
name = fig8-distance
n_rx_antennas = 4
n_secondary = 1
n_primary = 4
secondary_distances = 0.5
primary_distances = 0.5
snr_db = 10
samples = 5
w_th_rel = 0.3
interference_rule = inverse_distance
interference_d1 = 0.6
)"},
  };
  return t;
}

}  // namespace

std::vector<std::string> preset_names() {
  std::vector<std::string> out;
  for (const auto& [k, v] : table()) out.push_back(k);
  return out;
}

std::string preset_text(const std::string& name) {
  auto it = table().find(name);
  if (it == table().end()) throw ConfigError("unknown preset '" + name + "'");
  return it->second + kCommon;
}

SystemConfig load_preset(const std::string& name) { return parse_config(preset_text(name), "preset:" + name); }

}  // namespace cogmux
