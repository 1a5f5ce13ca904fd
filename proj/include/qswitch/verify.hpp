#pragma once

// Oracle-equivalence and invariant checks over the whole stack. Shared by the
// `qswitch verify` subcommand and the acceptance test binary; each check
// reports pass/fail plus the worst observed deviation.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "qswitch/channels.hpp"
#include "qswitch/metrology.hpp"
#include "qswitch/qmat.hpp"
#include "qswitch/runner/emit.hpp"
#include "qswitch/runner/sweep.hpp"
#include "qswitch/sampling.hpp"
#include "qswitch/switch_channel.hpp"

namespace qswitch::verify {

struct CheckResult {
  std::string id;
  std::string name;
  bool passed = false;
  std::string detail;
};

// Control-qubit QFI optimum at p = 1/2, n_l = 0, xi = pi/5: u = 1/2 gives
// Q_c = 1 - (1 - cos(pi/5))/2 and F = (sin(pi/5)/2)^2 / (1 - Q_c^2).
inline constexpr double fig2_peak_anchor = 0.474930145244;

namespace detail {

inline std::string sci(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

// Tracks the worst value seen and the first failure message.
struct Tracker {
  bool ok = true;
  double worst = 0.0;
  std::string note;

  void observe(double deviation, double bound, const std::string& where) {
    worst = std::max(worst, deviation);
    if (!(deviation < bound)) fail(where + ": deviation " + sci(deviation) + " >= " + sci(bound));
  }
  void require(bool cond, const std::string& where) {
    if (!cond) fail(where);
  }
  void fail(const std::string& msg) {
    ok = false;
    if (++failures <= 5) note += (note.empty() ? "" : "; ") + msg;
  }
  int failures = 0;
  CheckResult result(std::string id, std::string name, const std::string& summary) const {
    return {std::move(id), std::move(name), ok, ok ? summary : note};
  }
};

inline KrausChannel random_noise(ParamSampler& s, double p) {
  const int kind = s.integer(0, 3);
  if (kind == 3) return depolarizing_channel(p);
  return pauli_channel(static_cast<PauliAxis>(kind), p);
}

inline double spread(const std::vector<double>& v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *hi - *lo;
}

}  // namespace detail

inline CheckResult check_switch_oracle(std::uint64_t seed = 101) {
  ParamSampler s(seed);
  detail::Tracker t;
  for (int i = 0; i < 200; ++i) {
    const double p = s.probability();
    const KrausChannel ch = noisy_phase_channel(detail::random_noise(s, p), {s.unit_vector(), s.phase()});
    const DensityOperator rho = bloch_to_density(s.bloch());
    const ControlSpec c{s.probability()};
    const SwitchResult res = switch_state(ch, rho, c);
    const DensityOperator oracle = switch_kraus_apply(ch, rho, c);
    t.observe(max_abs_diff(res.joint.matrix(), oracle.matrix()), 1e-12, "draw " + std::to_string(i));
  }
  return t.result("1", "Joint switch state equals W_jk Kraus oracle (200 draws, 1e-12)",
                  "max dev " + detail::sci(t.worst));
}

inline CheckResult check_qc_closed_form(std::uint64_t seed = 202) {
  ParamSampler s(seed);
  detail::Tracker t;
  double worst_spread = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double p = s.probability(), xi = s.phase();
    const Vec3 n = s.unit_vector();
    const PauliAxis ell = s.pauli_axis();
    const KrausChannel ch = noisy_phase_channel(pauli_channel(ell, p), {n, xi});
    const double closed = qc_closed_form(p, xi, axis_component(n, ell));

    std::vector<double> values;
    for (int k = 0; k < 50; ++k) values.push_back(qc_numeric(ch, bloch_to_density(s.bloch())));
    t.observe(std::abs(values.front() - closed), 1e-10, "draw " + std::to_string(i));
    const double sp = detail::spread(values);
    worst_spread = std::max(worst_spread, sp);
    if (!(sp < 1e-10)) t.fail("draw " + std::to_string(i) + ": probe spread " + detail::sci(sp));
  }
  return t.result("2", "Q_c numeric equals closed form (1000 draws, 1e-10); probe spread < 1e-10",
                  "max dev " + detail::sci(t.worst) + ", max spread " + detail::sci(worst_spread));
}

inline CheckResult check_qfi_closed_form(std::uint64_t seed = 303) {
  ParamSampler s(seed);
  detail::Tracker t;
  for (int i = 0; i < 200; ++i) {
    const double p = s.probability(), xi = s.phase();
    const Vec3 n = s.unit_vector();
    const PauliAxis ell = s.pauli_axis();
    const ControlSpec c{s.probability()};
    const BlochVector r = s.bloch();
    const double numeric =
        qfi_control_numeric(pauli_channel(ell, p), {n, xi}, bloch_to_density(r), c, 1e-5).value;
    const double closed = qfi_control(c, p, xi, axis_component(n, ell)).value;
    t.observe(std::abs(numeric - closed), 1e-6, "draw " + std::to_string(i));
  }
  return t.result("3", "SLD numeric control QFI equals closed form (200 draws, 1e-6)",
                  "max dev " + detail::sci(t.worst));
}

inline CheckResult check_measurement_optimality() {
  detail::Tracker t;
  for (double n_l : {0.0, 0.5}) {
    for (int i = 0; i < 20; ++i) {
      const double p = i / 19.0;
      for (int j = 0; j < 20; ++j) {
        const double xi = 2.0 * std::numbers::pi * (j + 0.5) / 20.0;
        const std::string where = "p=" + std::to_string(p) + " xi=" + std::to_string(xi);
        const double opt = qfi_control_opt(p, xi, n_l).value;
        t.observe(std::abs(cfi_control({0.5}, p, xi, n_l).value - opt), 1e-9, where);

        if (opt > 0.0) {
          double best = -1.0, arg = -1.0;
          for (int k = 1; k <= 19; ++k) {
            const double pc = k * 0.05;
            const double f = qfi_control({pc}, p, xi, n_l).value;
            if (f > best) best = f, arg = pc;
          }
          t.require(std::abs(arg - 0.5) < 1e-12, where + ": argmax p_c = " + std::to_string(arg));
        }
      }
    }
  }
  return t.result("4", "Hadamard CFI at p_c=1/2 equals optimal QFI (20x20 grid, 1e-9); argmax p_c = 0.5",
                  "max dev " + detail::sci(t.worst));
}

inline CheckResult check_fig2() {
  using runner::cascade_column;
  detail::Tracker t;
  const auto& radii = runner::fig2_default_radii();
  const auto rows = runner::fig2_preset(11, radii, std::numbers::pi / 5.0);

  auto at = [&](double p) -> const runner::SweepRow& {
    for (const auto& r : rows)
      if (std::abs(r.number("p") - p) < 1e-12) return r;
    throw std::logic_error("fig2 grid point missing");
  };

  t.require(at(0.0).number("fq_con") == 0.0, "fq_con(p=0) != 0");
  t.require(at(1.0).number("fq_con") == 0.0, "fq_con(p=1) != 0");
  t.observe(std::abs(at(0.5).number("fq_con") - fig2_peak_anchor), 1e-6, "fq_con(p=0.5)");
  for (double r : radii)
    t.observe(std::abs(at(0.0).number(cascade_column(r)) - 4.0 * r * r), 1e-6, "fq_cas(p=0, r=" + std::to_string(r) + ")");

  for (double r : radii) {
    const std::string col = cascade_column(r);
    for (std::size_t i = 1; i < rows.size(); ++i) {
      const double prev = rows[i - 1].number(col), cur = rows[i].number(col);
      if (cur > prev + 1e-9) {
        t.fail(col + " increases from p=" + std::to_string(rows[i - 1].number("p")) + " (" + detail::sci(prev) +
               ") to p=" + std::to_string(rows[i].number("p")) + " (" + detail::sci(cur) + ")");
        break;
      }
    }
  }
  for (double p : {0.6, 0.7, 0.8, 0.9})
    for (double r : radii)
      t.require(at(p).number("fq_con") > at(p).number(cascade_column(r)),
                "fq_con <= fq_cas at p=" + std::to_string(p) + ", r=" + std::to_string(r));

  return t.result("5", "Noise-level sweep (steps=11): anchors, cascade monotone, crossover at large p",
                  "fq_con(0.5) dev " + detail::sci(t.worst));
}

inline CheckResult check_degeneracy(std::uint64_t seed = 606) {
  ParamSampler s(seed);
  detail::Tracker t;
  const Vec3 ex{1.0, 0.0, 0.0}, ey{0.0, 1.0, 0.0};
  for (int i = 0; i < 50; ++i) {
    const double p = s.probability(), xi = s.phase();
    const DensityOperator rho = bloch_to_density(s.bloch());
    const KrausChannel ch = noisy_phase_channel(pauli_channel(PauliAxis::x, p), {ex, xi});
    t.observe(max_abs_diff(s01(ch, rho), s00(ch, rho).matrix()), 1e-12, "s01 vs s00, draw " + std::to_string(i));
    t.require(qfi_control_opt(p, xi, axis_component(ex, PauliAxis::x)).value == 0.0,
              "qfi_control_opt != 0 at n_l = 1");

    const double q_bit = qc_numeric(noisy_phase_channel(pauli_channel(PauliAxis::x, p), {ey, xi}), rho);
    const double q_phase = qc_numeric(noisy_phase_channel(pauli_channel(PauliAxis::z, p), {ey, xi}), rho);
    t.observe(std::abs(q_bit - q_phase), 1e-12, "bit vs phase flip Q_c, draw " + std::to_string(i));

    runner::PointSpec bit{runner::NoiseKind::bitflip, p, 0.5, xi, ey, {0.0, 0.0, 1.0}};
    runner::PointSpec phase = bit;
    phase.noise = runner::NoiseKind::phaseflip;
    for (auto q : {runner::Quantity::fq_con, runner::Quantity::fc_con})
      t.observe(std::abs(runner::evaluate(bit, q) - runner::evaluate(phase, q)), 1e-12,
                "bit vs phase flip efficiency, draw " + std::to_string(i));
  }
  return t.result("6", "Commuting-Kraus degeneracy at n_l=1; phase flip matches bit flip with axis e_y",
                  "max dev " + detail::sci(t.worst));
}

inline CheckResult check_cptp(std::uint64_t seed = 707) {
  ParamSampler s(seed);
  detail::Tracker t;
  double min_eig = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 50; ++i) {
    const double p = s.probability();
    const KrausChannel ch = noisy_phase_channel(detail::random_noise(s, p), {s.unit_vector(), s.phase()});
    const KrausChannel joint = switch_kraus_operators(ch);
    t.observe(joint.completeness_residual(), 1e-10, "completeness, draw " + std::to_string(i));
    const double lmin = min_eigenvalue(channel_choi(joint));
    min_eig = std::min(min_eig, lmin);
    t.require(lmin > -1e-10, "Choi min eigenvalue " + detail::sci(lmin) + ", draw " + std::to_string(i));
  }
  return t.result("7", "Switch channel CPTP: Choi PSD (> -1e-10) and W_jk completeness (< 1e-10), 50 draws",
                  "min Choi eig " + detail::sci(min_eig) + ", max completeness residual " + detail::sci(t.worst));
}

inline CheckResult check_depolarizing_independence(std::uint64_t seed = 808) {
  ParamSampler s(seed);
  detail::Tracker t;
  const double p = 0.4, xi = 1.0;
  const ControlSpec c{0.5};
  const KrausChannel noise = depolarizing_channel(p);

  std::vector<double> over_axes, over_probes;
  const DensityOperator fixed_probe = bloch_to_density({0.3, -0.2, 0.5});
  for (int i = 0; i < 20; ++i)
    over_axes.push_back(qfi_control_numeric(noise, {s.unit_vector(), xi}, fixed_probe, c).value);
  const Vec3 fixed_axis{0.0, 1.0, 0.0};
  for (int i = 0; i < 20; ++i)
    over_probes.push_back(qfi_control_numeric(noise, {fixed_axis, xi}, bloch_to_density(s.bloch()), c).value);

  t.observe(detail::spread(over_axes), 1e-8, "spread over axes");
  t.observe(detail::spread(over_probes), 1e-8, "spread over probes");
  return t.result("8", "Depolarizing control QFI independent of axis and probe (spread < 1e-8)",
                  "max spread " + detail::sci(t.worst) + ", value " + detail::sci(over_axes.front()));
}

inline CheckResult check_symmetry_and_limits(std::uint64_t seed = 909) {
  ParamSampler s(seed);
  detail::Tracker t;
  for (int i = 0; i < 200; ++i) {
    const double p = s.probability(), xi = s.phase(), n_l = s.uniform(-1.0, 1.0);
    t.observe(std::abs(qfi_control_opt(p, xi, n_l).value - qfi_control_opt(1.0 - p, xi, n_l).value), 1e-12,
              "p <-> 1-p, draw " + std::to_string(i));
  }
  const Vec3 ey{0.0, 1.0, 0.0};
  for (const auto& [p, ell] : {std::pair{0.5, PauliAxis::x}, {0.3, PauliAxis::x}, {0.2, PauliAxis::z}, {0.8, PauliAxis::y}}) {
    const double n_l = axis_component(ey, ell);
    const double limit = qfi_control_opt(p, 0.0, n_l).value;
    const double u = 2.0 * (1.0 - n_l * n_l) * (1.0 - p) * p;
    t.require(limit == u, "xi=0 branch does not return 2(1-n_l^2)(1-p)p at p=" + std::to_string(p));
    const double numeric =
        qfi_control_numeric(pauli_channel(ell, p), {ey, 1e-4}, bloch_to_density({0.0, 0.0, 1.0}), {0.5}).value;
    t.observe(std::abs(numeric - limit), 1e-4, "xi->0 limit vs numeric at p=" + std::to_string(p));
  }
  return t.result("9", "p <-> 1-p symmetry (1e-12); xi->0 branch matches numeric QFI at xi=1e-4 (1e-4)",
                  "max dev " + detail::sci(t.worst));
}

inline CheckResult check_determinism() {
  detail::Tracker t;
  const auto& radii = runner::fig2_default_radii();
  const std::string a = runner::to_csv(runner::fig2_preset(201, radii, std::numbers::pi / 5.0, 1));
  const std::string b = runner::to_csv(runner::fig2_preset(201, radii, std::numbers::pi / 5.0, 1));
  const std::string c = runner::to_csv(runner::fig2_preset(201, radii, std::numbers::pi / 5.0, 8));
  t.require(a == b, "two single-threaded runs differ");
  t.require(a == c, "1-thread and 8-thread runs differ");
  return t.result("10", "fig2 CSV byte-identical across runs and thread counts 1 and 8",
                  std::to_string(a.size()) + " bytes");
}

inline std::vector<CheckResult> run_acceptance() {
  return {check_switch_oracle(), check_qc_closed_form(),     check_qfi_closed_form(),
          check_measurement_optimality(), check_fig2(),     check_degeneracy(),
          check_cptp(),          check_depolarizing_independence(), check_symmetry_and_limits(),
          check_determinism()};
}

// Further invariants beyond the acceptance list.
inline std::vector<CheckResult> run_invariants(std::uint64_t seed = 1001) {
  std::vector<CheckResult> out;
  ParamSampler s(seed);

  {
    detail::Tracker t;
    for (int i = 0; i < 100; ++i) {
      const double p = s.probability();
      const KrausChannel ch = noisy_phase_channel(detail::random_noise(s, p), {s.unit_vector(), s.phase()});
      const DensityOperator rho = bloch_to_density(s.bloch());
      t.observe(hermiticity_residual(s01(ch, rho)), 1e-12, "S01 hermiticity");
      const SwitchResult res = switch_state(ch, rho, {s.probability()});
      t.observe(std::abs(trace(res.joint.matrix()) - 1.0), 1e-12, "joint trace");
      t.observe(max_abs_diff(partial_trace(res.joint.matrix(), Subsystem::probe), s00(ch, rho).matrix()), 1e-12,
                "tr_control joint vs S00");
    }
    out.push_back(t.result("P1", "S01 Hermitian, joint unit trace, probe marginal equals S00 (100 draws)",
                           "max dev " + detail::sci(t.worst)));
  }
  {
    detail::Tracker t;
    double best = -1.0, arg = -1.0;
    for (int i = 0; i <= 20; ++i) {
      const double p = i * 0.05;
      const double f = qfi_control_opt(p, std::numbers::pi / 5.0, 0.0).value;
      if (f > best) best = f, arg = p;
    }
    t.require(std::abs(arg - 0.5) < 1e-12, "control QFI peak at p=" + std::to_string(arg));
    out.push_back(t.result("P2", "Control QFI nonmonotone in p with its maximum at p = 1/2", "peak " + detail::sci(best)));
  }
  {
    detail::Tracker t;
    for (int i = 0; i < 200; ++i) {
      const double p = s.probability(), xi = s.phase(), n_l = s.uniform(-1.0, 1.0);
      const ControlSpec c{s.probability()};
      t.require(cfi_control(c, p, xi, n_l).value <= qfi_control(c, p, xi, n_l).value + 1e-9, "CFI > QFI");
    }
    out.push_back(t.result("P3", "Hadamard CFI never exceeds control QFI (200 draws)", "ok"));
  }
  {
    detail::Tracker t;
    const Vec3 ey{0.0, 1.0, 0.0};
    for (int k = 1; k <= 5; ++k) {
      const double r = 0.2 * k;
      double prev = std::numeric_limits<double>::infinity();
      for (int i = 0; i <= 10; ++i) {
        const double p = i / 10.0;
        const double f = qfi_cascade(pauli_channel(PauliAxis::x, p), {ey, std::numbers::pi / 5.0}, {0.0, 0.0, r}).value;
        if (f > prev + 1e-9 && t.ok)
          t.fail("cascade QFI rises for r=" + std::to_string(r) + " between p=" + std::to_string(p - 0.1) + " (" +
                 detail::sci(prev) + ") and p=" + std::to_string(p) + " (" + detail::sci(f) + ")");
        prev = f;
      }
    }
    out.push_back(t.result("P4", "Cascade QFI non-increasing in p (bit flip, axis e_y, xi = pi/5)", "ok"));
  }
  {
    detail::Tracker t;
    const double p = 0.35, xi = 2.1;
    for (auto ell : {PauliAxis::x, PauliAxis::y, PauliAxis::z}) {
      std::vector<double> vals;
      const Vec3 n = s.unit_vector();
      for (int i = 0; i < 10; ++i)
        vals.push_back(qfi_control_numeric(pauli_channel(ell, p), {n, xi}, bloch_to_density(s.bloch()), {0.5}).value);
      t.observe(detail::spread(vals), 1e-8, "Pauli probe spread");
      // Mirror the axis through the noise direction: same n_l, different axis.
      Vec3 m = n;
      if (ell == PauliAxis::x) m = {n.x, -n.z, n.y};
      if (ell == PauliAxis::y) m = {n.z, n.y, -n.x};
      if (ell == PauliAxis::z) m = {-n.y, n.x, n.z};
      const double other =
          qfi_control_numeric(pauli_channel(ell, p), {m, xi}, bloch_to_density({0.1, 0.2, 0.3}), {0.5}).value;
      t.observe(std::abs(other - vals.front()), 1e-8, "equal n_l axes");
    }
    out.push_back(t.result("P5", "Pauli-noise control QFI depends on the axis only through n_l, not on the probe",
                           "max dev " + detail::sci(t.worst)));
  }
  return out;
}

}  // namespace qswitch::verify
