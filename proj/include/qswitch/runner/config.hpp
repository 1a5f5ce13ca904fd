#pragma once

// Sweep configuration and its `key = value` text format:
//
//   # comment
//   noise      = bitflip          # bitflip | phaseflip | bitphaseflip | depolarizing
//   axis       = 0, 1, 0          # unit rotation axis
//   probe      = 0, 0, 1          # Bloch vector of the probe
//   xi         = 0.628318530718   # radians
//   p_c        = 0.5
//   p          = 0:1:0.05         # start:stop:step, or a single value
//   quantities = qc, fq_con, fq_cas, fc_con, fq_joint

#include <charconv>
#include <cmath>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qswitch/channels.hpp"

namespace qswitch::runner {

enum class NoiseKind { bitflip, phaseflip, bitphaseflip, depolarizing };
enum class Quantity { qc, fq_con, fq_cas, fc_con, fq_joint };

inline std::string_view to_string(NoiseKind k) {
  switch (k) {
    case NoiseKind::bitflip: return "bitflip";
    case NoiseKind::phaseflip: return "phaseflip";
    case NoiseKind::bitphaseflip: return "bitphaseflip";
    case NoiseKind::depolarizing: return "depolarizing";
  }
  return "?";
}

inline std::string_view to_string(Quantity q) {
  switch (q) {
    case Quantity::qc: return "qc";
    case Quantity::fq_con: return "fq_con";
    case Quantity::fq_cas: return "fq_cas";
    case Quantity::fc_con: return "fc_con";
    case Quantity::fq_joint: return "fq_joint";
  }
  return "?";
}

inline std::optional<NoiseKind> parse_noise_kind(std::string_view s) {
  for (auto k : {NoiseKind::bitflip, NoiseKind::phaseflip, NoiseKind::bitphaseflip, NoiseKind::depolarizing})
    if (s == to_string(k)) return k;
  return std::nullopt;
}

inline std::optional<Quantity> parse_quantity(std::string_view s) {
  for (auto q : {Quantity::qc, Quantity::fq_con, Quantity::fq_cas, Quantity::fc_con, Quantity::fq_joint})
    if (s == to_string(q)) return q;
  return std::nullopt;
}

// Pauli direction for the Pauli noise kinds; none for depolarizing.
inline std::optional<PauliAxis> pauli_axis_of(NoiseKind k) {
  switch (k) {
    case NoiseKind::bitflip: return PauliAxis::x;
    case NoiseKind::phaseflip: return PauliAxis::z;
    case NoiseKind::bitphaseflip: return PauliAxis::y;
    case NoiseKind::depolarizing: return std::nullopt;
  }
  return std::nullopt;
}

inline KrausChannel make_noise(NoiseKind k, double p) {
  if (auto axis = pauli_axis_of(k)) return pauli_channel(*axis, p);
  return depolarizing_channel(p);
}

struct Range {
  double start = 0.0;
  double stop = 1.0;
  double step = 0.05;

  void validate() const {
    if (!(step > 0.0)) throw std::domain_error("range step must be positive");
    if (!(start <= stop)) throw std::domain_error("range start must not exceed stop");
  }

  // Points start + i*step up to stop. When the step divides the span, points
  // are placed at start + (stop - start) i / (n - 1) so the endpoint is exact.
  std::vector<double> values() const {
    validate();
    const double span = stop - start;
    const auto n = static_cast<std::size_t>(std::floor(span / step + 1e-9)) + 1;
    std::vector<double> out(n);
    const bool divides = n > 1 && std::abs(start + static_cast<double>(n - 1) * step - stop) <=
                                      1e-9 * std::max(1.0, std::abs(stop));
    for (std::size_t i = 0; i < n; ++i)
      out[i] = divides ? start + span * static_cast<double>(i) / static_cast<double>(n - 1)
                       : start + static_cast<double>(i) * step;
    return out;
  }
};

struct SweepConfig {
  NoiseKind noise = NoiseKind::bitflip;
  Vec3 axis{0.0, 1.0, 0.0};
  BlochVector probe{0.0, 0.0, 1.0};
  double xi = std::numbers::pi / 5.0;
  double p_c = 0.5;
  Range p_grid{};
  std::vector<Quantity> quantities{Quantity::qc, Quantity::fq_con, Quantity::fq_cas, Quantity::fc_con};

  void validate() const {
    p_grid.validate();
    require_probability(p_grid.start, "p grid start");
    require_probability(p_grid.stop, "p grid stop");
    require_probability(p_c, "p_c");
    require_unit_axis(axis);
    if (probe.norm() > 1.0 + bloch_norm_slack) throw std::domain_error("probe Bloch vector norm exceeds 1");
    if (!std::isfinite(xi)) throw std::domain_error("xi must be finite");
    if (quantities.empty()) throw std::domain_error("at least one quantity is required");
  }
};

class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::size_t line, const std::string& msg)
      : std::runtime_error("line " + std::to_string(line) + ": " + msg), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t pos = 0;
  while (true) {
    const auto next = s.find(sep, pos);
    parts.push_back(trim(s.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos)));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return parts;
}

inline std::optional<double> parse_double(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

inline std::optional<Vec3> parse_vec3(std::string_view s) {
  const auto parts = split(s, ',');
  if (parts.size() != 3) return std::nullopt;
  const auto x = parse_double(parts[0]), y = parse_double(parts[1]), z = parse_double(parts[2]);
  if (!x || !y || !z) return std::nullopt;
  return Vec3{*x, *y, *z};
}

inline std::optional<Range> parse_range(std::string_view s) {
  const auto parts = split(s, ':');
  if (parts.size() == 1) {
    const auto v = parse_double(parts[0]);
    if (!v) return std::nullopt;
    return Range{*v, *v, 1.0};
  }
  if (parts.size() != 3) return std::nullopt;
  const auto a = parse_double(parts[0]), b = parse_double(parts[1]), c = parse_double(parts[2]);
  if (!a || !b || !c) return std::nullopt;
  return Range{*a, *b, *c};
}

}  // namespace detail

inline SweepConfig parse_config(std::string_view text) {
  SweepConfig cfg;
  std::set<std::string, std::less<>> seen;
  std::size_t line_no = 0;
  std::size_t pos = 0;

  while (pos <= text.size()) {
    const auto eol = text.find('\n', pos);
    std::string_view line = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(line_no, "expected `key = value`");
    const std::string key(detail::trim(line.substr(0, eq)));
    const std::string_view value = detail::trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(line_no, "missing key");
    if (!seen.insert(key).second) throw ConfigError(line_no, "duplicate key '" + key + "'");

    auto bad = [&](const std::string& what) { return ConfigError(line_no, "malformed " + what + " '" + std::string(value) + "'"); };
    auto out_of_range = [&](const std::string& what) { return ConfigError(line_no, what); };

    if (key == "noise") {
      const auto k = parse_noise_kind(value);
      if (!k) throw bad("noise kind");
      cfg.noise = *k;
    } else if (key == "axis") {
      const auto v = detail::parse_vec3(value);
      if (!v) throw bad("vector");
      if (std::abs(v->norm() - 1.0) > axis_norm_tol) throw out_of_range("axis must be a unit vector");
      cfg.axis = *v;
    } else if (key == "probe") {
      const auto v = detail::parse_vec3(value);
      if (!v) throw bad("vector");
      if (v->norm() > 1.0 + bloch_norm_slack) throw out_of_range("probe Bloch vector norm exceeds 1");
      cfg.probe = *v;
    } else if (key == "xi") {
      const auto v = detail::parse_double(value);
      if (!v) throw bad("number");
      cfg.xi = *v;
    } else if (key == "p_c") {
      const auto v = detail::parse_double(value);
      if (!v) throw bad("number");
      if (!(*v >= 0.0 && *v <= 1.0)) throw out_of_range("p_c must lie in [0, 1], got " + std::string(value));
      cfg.p_c = *v;
    } else if (key == "p") {
      const auto r = detail::parse_range(value);
      if (!r) throw bad("range");
      if (!(r->step > 0.0)) throw out_of_range("range step must be positive");
      if (!(r->start <= r->stop)) throw out_of_range("range start must not exceed stop");
      if (!(r->start >= 0.0 && r->stop <= 1.0)) throw out_of_range("p range must lie within [0, 1]");
      cfg.p_grid = *r;
    } else if (key == "quantities") {
      std::vector<Quantity> qs;
      for (auto name : detail::split(value, ',')) {
        const auto q = parse_quantity(name);
        if (!q) throw ConfigError(line_no, "unknown quantity '" + std::string(name) + "'");
        qs.push_back(*q);
      }
      cfg.quantities = std::move(qs);
    } else {
      throw ConfigError(line_no, "unknown key '" + key + "'");
    }
  }

  cfg.validate();
  return cfg;
}

}  // namespace qswitch::runner
