#pragma once

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <variant>
#include <vector>

#include "qswitch/channels.hpp"
#include "qswitch/metrology.hpp"
#include "qswitch/runner/config.hpp"
#include "qswitch/switch_channel.hpp"

namespace qswitch::runner {

using Cell = std::variant<double, std::string>;

// One output record: named cells in column order.
struct SweepRow {
  std::vector<std::pair<std::string, Cell>> fields;

  void add(std::string name, Cell value) { fields.emplace_back(std::move(name), std::move(value)); }

  const Cell* find(std::string_view name) const {
    for (const auto& [n, v] : fields)
      if (n == name) return &v;
    return nullptr;
  }

  double number(std::string_view name) const {
    const Cell* c = find(name);
    if (!c) throw std::out_of_range("no column '" + std::string(name) + "'");
    if (const double* d = std::get_if<double>(c)) return *d;
    throw std::invalid_argument("column '" + std::string(name) + "' is not numeric");
  }
};

struct PointSpec {
  NoiseKind noise = NoiseKind::bitflip;
  double p = 0.0;
  double p_c = 0.5;
  double xi = std::numbers::pi / 5.0;
  Vec3 axis{0.0, 1.0, 0.0};
  BlochVector probe{0.0, 0.0, 1.0};
};

// Pauli noise uses the closed forms for the control qubit; depolarizing noise
// falls back to the numeric routes.
inline double evaluate(const PointSpec& pt, Quantity q) {
  const KrausChannel noise = make_noise(pt.noise, pt.p);
  const UnitaryParams u{pt.axis, pt.xi};
  const ControlSpec c{pt.p_c};
  const auto pauli = pauli_axis_of(pt.noise);

  switch (q) {
    case Quantity::qc:
      return qc_numeric(noisy_phase_channel(noise, u), bloch_to_density(pt.probe));
    case Quantity::fq_con:
      if (pauli) return qfi_control(c, pt.p, pt.xi, axis_component(pt.axis, *pauli)).value;
      return qfi_control_numeric(noise, u, bloch_to_density(pt.probe), c).value;
    case Quantity::fc_con:
      if (pauli) return cfi_control(c, pt.p, pt.xi, axis_component(pt.axis, *pauli)).value;
      return cfi_control_numeric(noise, u, bloch_to_density(pt.probe), c).value;
    case Quantity::fq_cas:
      return qfi_cascade(noise, u, pt.probe).value;
    case Quantity::fq_joint:
      return qfi_joint(noise, u, bloch_to_density(pt.probe), c).value;
  }
  throw std::invalid_argument("evaluate: unknown quantity");
}

// Evaluates make_row(i) for i in [0, n) on up to `threads` workers. Rows come
// back in index order; the first failing index (by order) is rethrown.
template <class MakeRow>
std::vector<SweepRow> evaluate_grid(std::size_t n, unsigned threads, MakeRow make_row) {
  std::vector<std::optional<SweepRow>> slots(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};

  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        slots[i] = make_row(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };

  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(work);
  }

  std::vector<SweepRow> rows;
  rows.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
    rows.push_back(std::move(*slots[i]));
  }
  return rows;
}

inline std::vector<SweepRow> run_sweep(const SweepConfig& cfg, unsigned threads = 1) {
  cfg.validate();
  const std::vector<double> grid = cfg.p_grid.values();

  return evaluate_grid(grid.size(), threads, [&](std::size_t i) {
    const PointSpec pt{cfg.noise, grid[i], cfg.p_c, cfg.xi, cfg.axis, cfg.probe};
    SweepRow row;
    row.add("p", pt.p);
    row.add("p_c", pt.p_c);
    row.add("xi", pt.xi);
    row.add("axis_x", pt.axis.x);
    row.add("axis_y", pt.axis.y);
    row.add("axis_z", pt.axis.z);
    row.add("probe_x", pt.probe.x);
    row.add("probe_y", pt.probe.y);
    row.add("probe_z", pt.probe.z);
    row.add("noise", std::string(to_string(pt.noise)));
    for (Quantity q : cfg.quantities) {
      try {
        row.add(std::string(to_string(q)), evaluate(pt, q));
      } catch (const std::exception& e) {
        throw std::runtime_error("grid point p=" + std::to_string(pt.p) + ", quantity " +
                                 std::string(to_string(q)) + ": " + e.what());
      }
    }
    return row;
  });
}

inline const std::vector<double>& fig2_default_radii() {
  static const std::vector<double> r{1.0, 0.8, 0.6, 0.4, 0.2};
  return r;
}

// Column name for the cascade curve at probe purity r, e.g. fq_cas_r0_8.
inline std::string cascade_column(double r) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "fq_cas_r%g", r);
  std::string name(buf);
  std::replace(name.begin(), name.end(), '.', '_');
  std::replace(name.begin(), name.end(), '-', 'm');
  return name;
}

// Bit-flip noise, axis e_y, probe r e_z; p on `steps` evenly spaced points of [0, 1].
inline std::vector<SweepRow> fig2_preset(std::size_t steps, const std::vector<double>& r_values = fig2_default_radii(),
                                         double xi = std::numbers::pi / 5.0, unsigned threads = 1) {
  if (steps < 2) throw std::invalid_argument("fig2_preset: need at least 2 steps, got " + std::to_string(steps));
  for (double r : r_values)
    if (!(r >= 0.0 && r <= 1.0)) throw std::domain_error("fig2_preset: probe purity must lie in [0, 1]");
  if (!std::isfinite(xi)) throw std::domain_error("fig2_preset: xi must be finite");

  const Vec3 axis{0.0, 1.0, 0.0};
  return evaluate_grid(steps, threads, [&](std::size_t i) {
    const double p = static_cast<double>(i) / static_cast<double>(steps - 1);
    SweepRow row;
    row.add("p", p);
    row.add("fq_con", qfi_control_opt(p, xi, axis_component(axis, PauliAxis::x)).value);
    const KrausChannel noise = pauli_channel(PauliAxis::x, p);
    for (double r : r_values) row.add(cascade_column(r), qfi_cascade(noise, {axis, xi}, {0.0, 0.0, r}).value);
    return row;
  });
}

}  // namespace qswitch::runner
