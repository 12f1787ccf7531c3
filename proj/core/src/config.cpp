#include "cogmux/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "cogmux/channel_model.hpp"
#include "cogmux/errors.hpp"

namespace cogmux {

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
double watts_to_dbm(double w) { return 10.0 * std::log10(w) + 30.0; }

double SystemConfig::snr_db() const { return 10.0 * std::log10(p_max_w / noise_var); }

namespace {

struct Entry {
  std::string value;
  int line;
};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

class Reader {
 public:
  Reader(std::map<std::string, Entry> entries, std::string source)
      : entries_(std::move(entries)), source_(std::move(source)) {}

  bool has(const std::string& k) const { return entries_.count(k) != 0; }
  int line(const std::string& k) const {
    auto it = entries_.find(k);
    return it == entries_.end() ? 0 : it->second.line;
  }
  const std::string& raw(const std::string& k) {
    used_.insert(k);
    return entries_.at(k).value;
  }

  [[noreturn]] void fail(const std::string& k, const std::string& msg) const {
    const int ln = line(k);
    std::string where = source_ + ":" + (ln ? std::to_string(ln) + ":" : std::string());
    throw ConfigError(where + " " + k + ": " + msg, ln, k);
  }

  double number(const std::string& k) {
    const std::vector<double> v = list(k);
    if (v.size() != 1) fail(k, "expected a single number");
    return v[0];
  }

  int integer(const std::string& k) {
    const double v = number(k);
    if (v != std::floor(v) || std::abs(v) > 1e9) fail(k, "expected an integer");
    return static_cast<int>(v);
  }

  std::vector<double> list(const std::string& k) {
    std::string s = raw(k);
    std::replace(s.begin(), s.end(), ',', ' ');
    std::vector<double> out;
    std::istringstream is(s);
    std::string tok;
    while (is >> tok) {
      double v = 0.0;
      const char* first = tok.data();
      const char* last = tok.data() + tok.size();
      if (*first == '+') ++first;
      auto [p, ec] = std::from_chars(first, last, v);
      if (ec != std::errc() || p != last || !std::isfinite(v))
        fail(k, "'" + tok + "' is not a number");
      out.push_back(v);
    }
    if (out.empty()) fail(k, "missing value");
    return out;
  }

  std::string word(const std::string& k) {
    std::string s = raw(k);
    if (s.empty()) fail(k, "missing value");
    return s;
  }

  // Exactly one or none of the keys may appear; returns the one present.
  std::optional<std::string> one_of(std::initializer_list<std::string> keys) {
    std::optional<std::string> found;
    for (const auto& k : keys) {
      if (!has(k)) continue;
      if (found) {
        const std::string& later = line(k) > line(*found) ? k : *found;
        const std::string& first = later == k ? *found : k;
        fail(later, "conflicts with '" + first + "' (give exactly one)");
      }
      found = k;
    }
    return found;
  }

  void reject_unused() const {
    for (const auto& [k, e] : entries_)
      if (!used_.count(k)) fail(k, "key not used by this scenario");
  }

 private:
  std::map<std::string, Entry> entries_;
  std::set<std::string> used_;
  std::string source_;
};

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "name", "n_rx_antennas", "n_secondary", "n_primary", "p_max_dbm", "p_max_w",
      "secondary_power_dbm", "secondary_power_w", "primary_power_dbm", "primary_power_w",
      "secondary_distances", "primary_distances", "distance_base", "distance_step",
      "pathloss_exponent", "noise_var_w", "noise_var_dbm", "snr_db", "residual_var_w",
      "aging_alpha", "doppler_product", "channel_estimation", "primary_signal_var", "samples",
      "pf_target", "activity_prob", "w_th_w", "w_th_dbm", "w_th_rel", "stream_index",
      "primary_symbols", "sensing_model", "interference_gains", "interference_rule",
      "interference_d1"};
  return keys;
}

std::vector<double> broadcast(Reader& r, const std::string& key, std::size_t n) {
  std::vector<double> v = r.list(key);
  if (v.size() == 1) v.assign(n, v[0]);
  if (v.size() != n)
    r.fail(key, "expected 1 or " + std::to_string(n) + " values, got " + std::to_string(v.size()));
  return v;
}

}  // namespace

SystemConfig parse_config(std::string_view text, const std::string& source) {
  std::map<std::string, Entry> entries;
  int lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view ln = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++lineno;
    if (const auto h = ln.find('#'); h != std::string_view::npos) ln = ln.substr(0, h);
    const std::string line = trim(ln);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string prefix = source + ":" + std::to_string(lineno) + ": ";
    if (eq == std::string::npos) throw ConfigError(prefix + "expected 'key = value'", lineno);
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (key.empty()) throw ConfigError(prefix + "empty key", lineno);
    if (!known_keys().count(key)) throw ConfigError(prefix + "unknown key '" + key + "'", lineno, key);
    if (entries.count(key))
      throw ConfigError(prefix + "duplicate key '" + key + "' (first on line " +
                            std::to_string(entries[key].line) + ")",
                        lineno, key);
    entries[key] = {value, lineno};
  }

  Reader r(entries, source);
  SystemConfig c;
  for (const auto& [k, e] : entries) c.key_lines[k] = e.line;

  if (r.has("name")) c.name = r.word("name");
  if (!r.has("n_rx_antennas")) throw ConfigError(source + ": missing required key 'n_rx_antennas'");
  c.n_rx_antennas = r.integer("n_rx_antennas");

  int mc = 0, mp = 0;
  if (r.has("n_secondary")) mc = r.integer("n_secondary");
  else if (r.has("secondary_distances")) mc = static_cast<int>(r.list("secondary_distances").size());
  if (r.has("n_primary")) mp = r.integer("n_primary");
  else if (r.has("primary_distances")) mp = static_cast<int>(r.list("primary_distances").size());
  if (mc < 1) {
    if (r.has("n_secondary")) r.fail("n_secondary", "must be >= 1");
    throw ConfigError(source + ": need n_secondary or secondary_distances");
  }
  if (mp < 1) {
    if (r.has("n_primary")) r.fail("n_primary", "must be >= 1");
    throw ConfigError(source + ": need n_primary or primary_distances");
  }
  if (mc > 4096 || mp > 4096) throw ConfigError(source + ": node counts above 4096 are not supported");
  c.secondaries.resize(mc);
  c.primaries.resize(mp);

  if (auto k = r.one_of({"p_max_dbm", "p_max_w"})) {
    c.p_max_w = *k == "p_max_dbm" ? dbm_to_watts(r.number(*k)) : r.number(*k);
    if (!(c.p_max_w > 0)) r.fail(*k, "must be > 0");
  }

  auto powers = [&](const char* dbm_key, const char* w_key, std::vector<Transmitter>& tx) {
    if (auto k = r.one_of({dbm_key, w_key})) {
      std::vector<double> v = broadcast(r, *k, tx.size());
      for (std::size_t i = 0; i < tx.size(); ++i)
        tx[i].power_w = *k == dbm_key ? dbm_to_watts(v[i]) : v[i];
    } else {
      for (auto& t : tx) t.power_w = c.p_max_w;
    }
  };
  powers("secondary_power_dbm", "secondary_power_w", c.secondaries);
  powers("primary_power_dbm", "primary_power_w", c.primaries);

  const bool rule = r.has("distance_base") || r.has("distance_step");
  if (rule) {
    if (!r.has("distance_base")) r.fail("distance_step", "requires distance_base");
    const double base = r.number("distance_base");
    const double step = r.has("distance_step") ? r.number("distance_step") : 0.0;
    for (int i = 0; i < mc + mp; ++i) {
      Transmitter& t = i < mc ? c.secondaries[i] : c.primaries[i - mc];
      t.distance = base + step * (i + 1);
    }
  }
  auto distances = [&](const char* key, std::vector<Transmitter>& tx) {
    if (r.has(key)) {
      std::vector<double> v = broadcast(r, key, tx.size());
      for (std::size_t i = 0; i < tx.size(); ++i) tx[i].distance = v[i];
    } else if (!rule) {
      throw ConfigError(source + ": need " + std::string(key) + " or distance_base");
    }
  };
  distances("secondary_distances", c.secondaries);
  distances("primary_distances", c.primaries);

  if (r.has("pathloss_exponent")) {
    std::vector<double> v = broadcast(r, "pathloss_exponent", mc + mp);
    for (int i = 0; i < mc + mp; ++i) (i < mc ? c.secondaries[i] : c.primaries[i - mc]).pathloss_exponent = v[i];
  }

  if (auto k = r.one_of({"noise_var_w", "noise_var_dbm", "snr_db"})) {
    const double v = r.number(*k);
    if (*k == "noise_var_w") c.noise_var = v;
    else if (*k == "noise_var_dbm") c.noise_var = dbm_to_watts(v);
    else c.noise_var = c.p_max_w / std::pow(10.0, v / 10.0);
  } else {
    throw ConfigError(source + ": need one of noise_var_w, noise_var_dbm, snr_db");
  }
  if (r.has("residual_var_w")) c.residual_var = r.number("residual_var_w");

  if (auto k = r.one_of({"aging_alpha", "doppler_product"})) {
    if (*k == "aging_alpha") {
      c.aging_alpha = r.number(*k);
    } else {
      const double fd = r.number(*k);
      if (fd < 0) r.fail(*k, "must be >= 0");
      c.doppler_product = fd;
      c.aging_alpha = aging_alpha(fd);
    }
  }
  if (r.has("channel_estimation")) {
    const std::string w = r.word("channel_estimation");
    if (w == "mmse") c.estimation = ChannelEstimation::mmse;
    else if (w == "perfect") c.estimation = ChannelEstimation::perfect;
    else r.fail("channel_estimation", "expected mmse or perfect");
  }
  if (r.has("primary_signal_var")) c.primary_signal_var = r.number("primary_signal_var");
  if (r.has("samples")) c.samples = r.integer("samples");
  if (r.has("pf_target")) c.pf_target = r.number("pf_target");
  if (r.has("activity_prob")) c.activity_prob = r.number("activity_prob");
  if (auto k = r.one_of({"w_th_w", "w_th_dbm", "w_th_rel"})) {
    const double v = r.number(*k);
    c.w_th_w = *k == "w_th_w" ? v : *k == "w_th_dbm" ? dbm_to_watts(v) : v * c.p_max_w;
  } else {
    c.w_th_w = 0.3 * c.p_max_w;
  }
  if (r.has("stream_index")) c.stream_index = r.integer("stream_index");
  if (r.has("primary_symbols")) {
    const std::string w = r.word("primary_symbols");
    if (w == "constant_modulus") c.primary_symbols = SymbolModel::constant_modulus;
    else if (w == "gaussian") c.primary_symbols = SymbolModel::gaussian;
    else r.fail("primary_symbols", "expected constant_modulus or gaussian");
  }
  if (r.has("sensing_model")) {
    const std::string w = r.word("sensing_model");
    if (w == "weakest") c.sensing_model = SensingModel::weakest;
    else if (w == "superposed") c.sensing_model = SensingModel::superposed;
    else r.fail("sensing_model", "expected weakest or superposed");
  }

  if (r.has("interference_gains") && r.has("interference_rule"))
    r.fail(r.line("interference_rule") > r.line("interference_gains") ? "interference_rule" : "interference_gains",
           "give interference_gains or interference_rule, not both");
  if (r.has("interference_gains")) {
    const std::vector<double> v = r.list("interference_gains");
    if (v.size() != static_cast<std::size_t>(mp * (mc + 1)))
      r.fail("interference_gains", "expected n_primary x (n_secondary + 1) = " +
                                       std::to_string(mp * (mc + 1)) + " values (row per primary)");
    c.interference_gains.resize(mp, mc + 1);
    for (int j = 0; j < mp; ++j)
      for (int i = 0; i <= mc; ++i) c.interference_gains(j, i) = v[j * (mc + 1) + i];
  } else if (r.has("interference_rule")) {
    const std::string w = r.word("interference_rule");
    if (!r.has("interference_d1")) r.fail("interference_rule", "requires interference_d1");
    const double d1 = r.number("interference_d1");
    if (!(d1 > 0)) r.fail("interference_d1", "must be > 0");
    const double omega = c.primaries.front().pathloss_exponent;
    c.interference_gains.resize(mp, mc + 1);
    for (int j = 0; j < mp; ++j)
      for (int i = 0; i <= mc; ++i) {
        const double q = d1 * (0.01 * (i + 1) + 0.01 * (j + 1));
        if (w == "linear") c.interference_gains(j, i) = q;
        else if (w == "inverse_distance") c.interference_gains(j, i) = std::pow(q, -omega);
        else r.fail("interference_rule", "expected linear or inverse_distance");
      }
  } else if (r.has("interference_d1")) {
    r.fail("interference_d1", "requires interference_rule");
  }

  r.reject_unused();
  validate(c);
  return c;
}

SystemConfig load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

void validate(const SystemConfig& c) {
  auto fail = [&](const std::string& key, const std::string& msg) {
    auto it = c.key_lines.find(key);
    const int ln = it == c.key_lines.end() ? 0 : it->second;
    std::string where = c.name.empty() ? std::string("config") : c.name;
    if (ln) where += ":" + std::to_string(ln);
    throw ConfigError(where + ": invariant violated: " + msg, ln, key);
  };
  if (c.n_rx_antennas < 1) fail("n_rx_antennas", "n_rx_antennas (N) must be >= 1");
  if (c.n_secondary() < 1) fail("n_secondary", "n_secondary (m_c) must be >= 1");
  if (c.n_primary() < 1) fail("n_primary", "n_primary (m_p) must be >= 1");
  if (c.n_rx_antennas < c.n_secondary())
    fail("n_rx_antennas", "N >= m_c required (n_rx_antennas = " + std::to_string(c.n_rx_antennas) +
                              " < n_secondary = " + std::to_string(c.n_secondary()) + ")");
  if (!(c.p_max_w > 0)) fail("p_max_w", "p_max must be > 0");
  auto check_tx = [&](const std::vector<Transmitter>& tx, const char* what, const char* pkey, const char* dkey) {
    for (std::size_t i = 0; i < tx.size(); ++i) {
      if (!(tx[i].power_w > 0)) fail(pkey, std::string(what) + " power must be > 0");
      if (!(tx[i].distance > 0)) fail(dkey, std::string(what) + " distance must be > 0");
      if (!(tx[i].pathloss_exponent > 0)) fail("pathloss_exponent", "path-loss exponent must be > 0");
    }
  };
  check_tx(c.secondaries, "secondary", "secondary_power_dbm", "secondary_distances");
  check_tx(c.primaries, "primary", "primary_power_dbm", "primary_distances");
  if (!(c.noise_var > 0)) fail("noise_var_w", "noise variance N0 must be > 0");
  if (!(c.residual_var >= 0)) fail("residual_var_w", "residual variance must be >= 0");
  if (!(c.aging_alpha >= 0.0 && c.aging_alpha <= 1.0))
    fail(c.doppler_product ? "doppler_product" : "aging_alpha",
         "aging coefficient alpha must lie in [0, 1] (got " + std::to_string(c.aging_alpha) + ")");
  if (!(c.primary_signal_var >= 0)) fail("primary_signal_var", "primary signal variance must be >= 0");
  if (c.samples < 1) fail("samples", "samples (L) must be >= 1");
  if (!(c.pf_target > 0 && c.pf_target <= 1)) fail("pf_target", "pf_target must lie in (0, 1]");
  if (!(c.activity_prob >= 0 && c.activity_prob <= 1)) fail("activity_prob", "activity_prob must lie in [0, 1]");
  if (!(c.w_th_w > 0)) fail("w_th_w", "w_th must be > 0");
  if (c.stream_index < 1 || c.stream_index > c.n_secondary())
    fail("stream_index", "stream_index must lie in [1, n_secondary]");
  if (c.has_interference_gains()) {
    if (c.interference_gains.rows() != c.n_primary() || c.interference_gains.cols() != c.n_secondary() + 1)
      fail("interference_gains", "interference gain matrix must be n_primary x (n_secondary + 1)");
    if (!(c.interference_gains.array() > 0).all()) fail("interference_gains", "interference gains must be > 0");
  }
}

namespace {

std::string fmt(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

}  // namespace

std::string canonical_text(const SystemConfig& c) {
  std::ostringstream o;
  auto line = [&](const std::string& k, const std::string& v) { o << k << '=' << v << '\n'; };
  auto nodes = [&](const char* tag, const std::vector<Transmitter>& tx) {
    for (std::size_t i = 0; i < tx.size(); ++i)
      line(std::string(tag) + "[" + std::to_string(i) + "]",
           fmt(tx[i].power_w) + "," + fmt(tx[i].distance) + "," + fmt(tx[i].pathloss_exponent));
  };
  line("n_rx_antennas", std::to_string(c.n_rx_antennas));
  nodes("secondary", c.secondaries);
  nodes("primary", c.primaries);
  line("p_max_w", fmt(c.p_max_w));
  line("noise_var", fmt(c.noise_var));
  line("residual_var", fmt(c.residual_var));
  line("aging_alpha", fmt(c.aging_alpha));
  line("channel_estimation", c.estimation == ChannelEstimation::mmse ? "mmse" : "perfect");
  line("primary_signal_var", fmt(c.primary_signal_var));
  line("samples", std::to_string(c.samples));
  line("pf_target", fmt(c.pf_target));
  line("activity_prob", fmt(c.activity_prob));
  line("w_th_w", fmt(c.w_th_w));
  line("stream_index", std::to_string(c.stream_index));
  line("primary_symbols", c.primary_symbols == SymbolModel::constant_modulus ? "constant_modulus" : "gaussian");
  line("sensing_model", c.sensing_model == SensingModel::weakest ? "weakest" : "superposed");
  if (c.has_interference_gains()) {
    std::string g;
    for (Eigen::Index j = 0; j < c.interference_gains.rows(); ++j)
      for (Eigen::Index i = 0; i < c.interference_gains.cols(); ++i)
        g += (g.empty() ? "" : ",") + fmt(c.interference_gains(j, i));
    line("interference_gains", g);
  }
  return o.str();
}

std::string config_digest(const SystemConfig& c) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canonical_text(c)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  static const char* hex = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, h >>= 4) out[i] = hex[h & 0xF];
  return out;
}

SystemConfig with_snr_db(SystemConfig c, double snr_db) {
  c.noise_var = c.p_max_w / std::pow(10.0, snr_db / 10.0);
  return c;
}

SystemConfig with_perfect_csi(SystemConfig c) {
  c.aging_alpha = 1.0;
  c.doppler_product.reset();
  c.estimation = ChannelEstimation::perfect;
  return c;
}

}  // namespace cogmux
