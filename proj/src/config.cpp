#include "idrem/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <fmt/format.h>

namespace idrem {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double to_double(const std::string& key, std::string_view v) {
  try {
    return Signal::parse_number(v);
  } catch (const ConfigError&) {
    throw ConfigError(fmt::format("{}: expected a number, got '{}'", key, v));
  }
}

template <class Int>
Int to_int(const std::string& key, std::string_view v) {
  Int out{};
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) {
    throw ConfigError(fmt::format("{}: expected an integer, got '{}'", key, v));
  }
  return out;
}

std::vector<double> to_list(const std::string& key, std::string_view v) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t comma = v.find(',', pos);
    out.push_back(to_double(key, trim(v.substr(pos, comma - pos))));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

Signal to_signal(const std::string& key, std::string_view v) {
  try {
    return Signal::parse(v);
  } catch (const ConfigError& e) {
    throw ConfigError(fmt::format("{}: {}", key, e.what()));
  }
}

// Splits `prefix.a[.b]` into indices; returns false if key has another prefix.
bool indexed(const std::string& key, std::string_view prefix, std::vector<int>& idx) {
  if (key.rfind(prefix, 0) != 0 || key.size() <= prefix.size() || key[prefix.size()] != '.') return false;
  idx.clear();
  std::string_view rest = std::string_view(key).substr(prefix.size() + 1);
  while (true) {
    const std::size_t dot = rest.find('.');
    idx.push_back(to_int<int>(key, rest.substr(0, dot)));
    if (dot == std::string_view::npos) break;
    rest.remove_prefix(dot + 1);
  }
  return true;
}

}  // namespace

Scenario parse_config(std::string_view text) {
  std::map<std::string, std::string> kv;
  std::istringstream in{std::string(text)};
  std::size_t line_no = 0;
  for (std::string raw; std::getline(in, raw);) {
    ++line_no;
    std::string_view line(raw);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(fmt::format("line {}: expected 'key = value', got '{}'", line_no, line));
    }
    std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(fmt::format("line {}: empty key", line_no));
    if (value.empty()) throw ConfigError(fmt::format("{}: empty value", key));
    if (!kv.emplace(key, std::string(value)).second) throw ConfigError(fmt::format("{}: duplicate key", key));
  }

  auto require = [&kv](const std::string& key) -> const std::string& {
    auto it = kv.find(key);
    if (it == kv.end()) throw ConfigError(fmt::format("{}: missing required key", key));
    return it->second;
  };

  Scenario s;
  s.n = to_int<int>("n", require("n"));
  s.m = kv.count("m") ? to_int<int>("m", kv["m"]) : 1;
  if (s.n < 1 || s.m < 1 || s.m > s.n) throw ConfigError("n, m: need 1 <= m <= n");
  s.t_end = to_double("t_end", require("t_end"));
  s.dt = to_double("dt", require("dt"));
  s.seed = kv.count("seed") ? to_int<std::uint64_t>("seed", kv["seed"]) : 0;
  s.beta = to_double("beta", require("beta"));
  s.t_e = kv.count("t_e") ? to_double("t_e", kv["t_e"]) : s.t_end;
  s.grid.T = to_double("grid.T", require("grid.T"));
  s.grid.t_r_plus = kv.count("grid.t_r_plus") ? to_double("grid.t_r_plus", kv["grid.t_r_plus"]) : 0.0;
  s.gains.gamma0 = to_double("gains.gamma0", require("gains.gamma0"));
  s.gains.sigma = to_double("gains.sigma", require("gains.sigma"));
  s.gains.kappa = to_double("gains.kappa", require("gains.kappa"));

  const std::vector<double> gamma = to_list("gains.Gamma", require("gains.Gamma"));
  if (gamma.size() == 1) {
    s.gains.Gamma = gamma[0] * Matrix::Identity(s.n, s.n);
  } else if (gamma.size() == static_cast<std::size_t>(s.n * s.n)) {
    s.gains.Gamma = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
        gamma.data(), s.n, s.n);
  } else {
    throw ConfigError(fmt::format("gains.Gamma: expected 1 or {} values", s.n * s.n));
  }

  if (kv.count("theta_hat0")) {
    const std::vector<double> th = to_list("theta_hat0", kv["theta_hat0"]);
    if (th.size() != static_cast<std::size_t>(s.n)) throw ConfigError(fmt::format("theta_hat0: expected {} values", s.n));
    s.theta_hat0 = Eigen::Map<const Vector>(th.data(), s.n);
  } else {
    s.theta_hat0 = Vector::Zero(s.n);
  }

  if (kv.count("disturbance")) {
    const std::string& d = kv["disturbance"];
    if (d == "none") {
      s.disturbance = DisturbanceSpec::none();
    } else if (d.rfind("uniform", 0) == 0) {
      const auto open = d.find('('), close = d.rfind(')');
      if (open == std::string::npos || close == std::string::npos || close < open) {
        throw ConfigError("disturbance: expected uniform(lo, hi)");
      }
      const std::vector<double> lohi = to_list("disturbance", std::string_view(d).substr(open + 1, close - open - 1));
      if (lohi.size() != 2) throw ConfigError("disturbance: expected uniform(lo, hi)");
      s.disturbance = DisturbanceSpec::uniform(lohi[0], lohi[1]);
    } else {
      s.disturbance = DisturbanceSpec::from_signal(to_signal("disturbance", d));
    }
  }

  s.regressor.assign(static_cast<std::size_t>(s.n * s.m), Signal{});
  s.theta.assign(static_cast<std::size_t>(s.n), Signal{});
  std::set<std::string> seen_reg, seen_theta;
  static const std::set<std::string> scalar_keys = {
      "n", "m", "t_end", "dt", "seed", "beta", "t_e", "grid.T", "grid.t_r_plus", "gains.gamma0",
      "gains.sigma", "gains.kappa", "gains.Gamma", "theta_hat0", "disturbance"};
  std::vector<int> idx;
  for (const auto& [key, value] : kv) {
    if (scalar_keys.count(key)) continue;
    if (indexed(key, "regressor", idx)) {
      const int row = idx[0];
      const int col = idx.size() > 1 ? idx[1] : 0;
      if (idx.size() > 2 || (idx.size() == 1 && s.m != 1) || row < 0 || row >= s.n || col < 0 || col >= s.m) {
        throw ConfigError(fmt::format("{}: index out of range for n = {}, m = {}", key, s.n, s.m));
      }
      s.regressor[static_cast<std::size_t>(row * s.m + col)] = to_signal(key, value);
      if (!seen_reg.insert(fmt::format("{}.{}", row, col)).second) throw ConfigError(fmt::format("{}: duplicate entry", key));
    } else if (indexed(key, "theta", idx)) {
      if (idx.size() != 1 || idx[0] < 0 || idx[0] >= s.n) {
        throw ConfigError(fmt::format("{}: index out of range for n = {}", key, s.n));
      }
      s.theta[static_cast<std::size_t>(idx[0])] = to_signal(key, value);
      seen_theta.insert(key);
    } else {
      throw ConfigError(fmt::format("{}: unknown key", key));
    }
  }
  for (int r = 0; r < s.n; ++r) {
    for (int c = 0; c < s.m; ++c) {
      if (!seen_reg.count(fmt::format("{}.{}", r, c))) {
        throw ConfigError(s.m == 1 ? fmt::format("regressor.{}: missing required key", r)
                                   : fmt::format("regressor.{}.{}: missing required key", r, c));
      }
    }
    if (!seen_theta.count(fmt::format("theta.{}", r))) {
      throw ConfigError(fmt::format("theta.{}: missing required key", r));
    }
  }
  s.validate();
  return s;
}

Scenario load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError(fmt::format("cannot open config '{}'", path));
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

std::string to_config(const Scenario& s) {
  auto num = [](double v) { return fmt::format("{:.17g}", v); };
  std::string out;
  out += fmt::format("n = {}\nm = {}\n", s.n, s.m);
  out += fmt::format("t_end = {}\ndt = {}\nseed = {}\n", num(s.t_end), num(s.dt), s.seed);
  out += fmt::format("beta = {}\nt_e = {}\n", num(s.beta), num(s.t_e));
  out += fmt::format("grid.T = {}\ngrid.t_r_plus = {}\n", num(s.grid.T), num(s.grid.t_r_plus));
  out += fmt::format("gains.gamma0 = {}\ngains.sigma = {}\ngains.kappa = {}\n", num(s.gains.gamma0),
                     num(s.gains.sigma), num(s.gains.kappa));
  out += "gains.Gamma = ";
  for (int r = 0; r < s.n; ++r) {
    for (int c = 0; c < s.n; ++c) out += (r || c ? ", " : "") + num(s.gains.Gamma(r, c));
  }
  out += "\ntheta_hat0 = ";
  for (int r = 0; r < s.n; ++r) out += (r ? ", " : "") + num(s.theta_hat0[r]);
  out += "\n";
  switch (s.disturbance.kind) {
    case DisturbanceSpec::Kind::None:
      out += "disturbance = none\n";
      break;
    case DisturbanceSpec::Kind::Uniform:
      out += fmt::format("disturbance = uniform({}, {})\n", num(s.disturbance.lo), num(s.disturbance.hi));
      break;
    case DisturbanceSpec::Kind::Tabulated:
      out += fmt::format("disturbance = {}\n", s.disturbance.tabulated.to_string());
      break;
  }
  for (int r = 0; r < s.n; ++r) {
    for (int c = 0; c < s.m; ++c) {
      const std::string& sig = s.regressor[static_cast<std::size_t>(r * s.m + c)].to_string();
      out += s.m == 1 ? fmt::format("regressor.{} = {}\n", r, sig) : fmt::format("regressor.{}.{} = {}\n", r, c, sig);
    }
  }
  for (int r = 0; r < s.n; ++r) out += fmt::format("theta.{} = {}\n", r, s.theta[static_cast<std::size_t>(r)].to_string());
  return out;
}

}  // namespace idrem
