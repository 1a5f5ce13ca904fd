#pragma once

// Fisher information for estimating the phase xi.
//
// Closed forms cover the control qubit alone (quantum and Hadamard-basis
// classical Fisher information). Everything else goes through qfi_numeric, the
// SLD spectral formula applied to a central-difference derivative of a state
// family; it also serves as the independent oracle for the closed forms.

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

#include "qswitch/channels.hpp"
#include "qswitch/qmat.hpp"
#include "qswitch/switch_channel.hpp"

namespace qswitch {

inline constexpr double default_fd_step = 1e-5;
inline constexpr double sld_cutoff = 1e-10;
inline constexpr double fisher_clamp_tol = 1e-12;
inline constexpr double degenerate_tol = 1e-12;  // on 1 - Q_c^2

enum class FisherMethod { closed_form, sld_numeric, classical };

struct FisherResult {
  double value = 0.0;
  FisherMethod method = FisherMethod::closed_form;
};

inline FisherResult make_fisher(double value, FisherMethod method) {
  if (!std::isfinite(value)) throw std::runtime_error("Fisher information is not finite");
  if (value < 0.0) {
    if (value < -fisher_clamp_tol)
      throw std::runtime_error("Fisher information is negative: " + std::to_string(value));
    value = 0.0;
  }
  return {value, method};
}

// Maps a phase to a state; every output must share one dimension.
using StateFamily = std::function<DensityOperator(double)>;

inline FisherResult qfi_numeric(const StateFamily& family, double xi0, double h = default_fd_step) {
  if (!(h > 0.0) || !std::isfinite(h)) throw std::invalid_argument("qfi_numeric: step must be positive");
  const DensityOperator rho = family(xi0);
  const DensityOperator plus = family(xi0 + h);
  const DensityOperator minus = family(xi0 - h);
  if (plus.dim() != rho.dim() || minus.dim() != rho.dim())
    throw std::invalid_argument("qfi_numeric: state family changes dimension");

  const CMatrix deriv = (plus.matrix() - minus.matrix()) * (1.0 / (2.0 * h));
  const EigDecomp eig = herm_eig(rho.matrix());
  const CMatrix m = adjoint(eig.eigenvectors) * deriv * eig.eigenvectors;

  double f = 0.0;
  const std::size_t n = rho.dim();
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k) {
      const double denom = eig.eigenvalues[j] + eig.eigenvalues[k];
      if (denom > sld_cutoff) f += 2.0 * std::norm(m(j, k)) / denom;
    }
  return make_fisher(f, FisherMethod::sld_numeric);
}

namespace detail {
// 1 - Q_c^2 computed as d (2 - d) with d = 1 - Q_c = 2 u sin^2(xi/2).
inline double one_minus_qc_squared(double u, double xi) {
  const double half = std::sin(xi / 2.0);
  const double d = 2.0 * u * half * half;
  return d * (2.0 - d);
}
}  // namespace detail

// 4 (1 - p_c) p_c [dQ_c]^2 / (1 - Q_c^2). At 1 - Q_c^2 -> 0 (xi -> 0) the ratio
// tends to u = 2(1 - n_l^2)(1 - p)p.
inline FisherResult qfi_control(const ControlSpec& c, double p, double xi, double n_l) {
  c.validate();
  const double u = coupling_strength(p, n_l);
  const double weight = 4.0 * (1.0 - c.p_c) * c.p_c;
  const double den = detail::one_minus_qc_squared(u, xi);
  if (den < degenerate_tol) return make_fisher(weight * u, FisherMethod::closed_form);
  const double dq = qc_derivative(p, xi, n_l);
  return make_fisher(weight * dq * dq / den, FisherMethod::closed_form);
}

// Optimum over p_c (attained at p_c = 1/2):
//   [u sin xi]^2 / (1 - {1 - u [1 - cos xi]}^2)
inline FisherResult qfi_control_opt(double p, double xi, double n_l) {
  const double u = coupling_strength(p, n_l);
  const double den = detail::one_minus_qc_squared(u, xi);
  if (den < degenerate_tol) return make_fisher(u, FisherMethod::closed_form);
  const double num = u * std::sin(xi);
  return make_fisher(num * num / den, FisherMethod::closed_form);
}

struct HadamardOutcome {
  double plus = 0.5;
  double minus = 0.5;
};

// P_+- = 1/2 +- sqrt((1 - p_c) p_c) Q_c
inline HadamardOutcome measure_control(const ControlSpec& c, double q_c) {
  c.validate();
  if (!(std::abs(q_c) <= 1.0 + tol::structural))
    throw std::domain_error("measure_control: |Q_c| must not exceed 1, got " + std::to_string(q_c));
  const double shift = c.coherence() * q_c;
  return {0.5 + shift, 0.5 - shift};
}

// (dP_+)^2 / [(1 - P_+) P_+] for the Hadamard-basis measurement of the control.
// (1 - P_+) P_+ is evaluated as (1 - 2p_c)^2/4 + p_c(1 - p_c)(1 - Q_c^2).
inline FisherResult cfi_control(const ControlSpec& c, double p, double xi, double n_l) {
  c.validate();
  const double u = coupling_strength(p, n_l);
  const double s2 = (1.0 - c.p_c) * c.p_c;
  const double bias = 0.25 * (1.0 - 2.0 * c.p_c) * (1.0 - 2.0 * c.p_c);
  const double one_minus_q2 = detail::one_minus_qc_squared(u, xi);

  if (one_minus_q2 < degenerate_tol) {
    // Small-xi series, dQ_c^2 ~ u (1 - Q_c^2).
    if (bias == 0.0) return make_fisher(4.0 * s2 * u, FisherMethod::classical);
    return make_fisher(s2 * u * one_minus_q2 / (bias + s2 * one_minus_q2), FisherMethod::classical);
  }

  const double dq = qc_derivative(p, xi, n_l);
  const double dp_plus = std::sqrt(s2) * dq;
  const double var = bias + s2 * one_minus_q2;
  if (var <= 0.0) {
    if (dp_plus != 0.0) throw std::domain_error("cfi_control: outcome probability is 0 or 1 with nonzero slope");
    return make_fisher(0.0, FisherMethod::classical);
  }
  return make_fisher(dp_plus * dp_plus / var, FisherMethod::classical);
}

// State families over the phase, for a fixed noise channel and rotation axis.
inline StateFamily cascade_family(KrausChannel noise, Vec3 axis, DensityOperator probe) {
  return [noise = std::move(noise), axis, probe = std::move(probe)](double xi) {
    return s00(noisy_phase_channel(noise, {axis, xi}), probe);
  };
}

inline StateFamily joint_family(KrausChannel noise, Vec3 axis, DensityOperator probe, ControlSpec c) {
  return [noise = std::move(noise), axis, probe = std::move(probe), c](double xi) {
    return switch_state(noisy_phase_channel(noise, {axis, xi}), probe, c).joint;
  };
}

// tr_probe of the full joint state; independent of the closed-form Q_c route.
inline StateFamily control_family(KrausChannel noise, Vec3 axis, DensityOperator probe, ControlSpec c) {
  return [noise = std::move(noise), axis, probe = std::move(probe), c](double xi) {
    return switch_state(noisy_phase_channel(noise, {axis, xi}), probe, c).control_reduced;
  };
}

inline FisherResult qfi_cascade(const KrausChannel& noise, const UnitaryParams& u, const BlochVector& r,
                                double h = default_fd_step) {
  require_unit_axis(u.axis);
  return qfi_numeric(cascade_family(noise, u.axis, bloch_to_density(r)), u.phase, h);
}

inline FisherResult qfi_joint(const KrausChannel& noise, const UnitaryParams& u, const DensityOperator& probe,
                              const ControlSpec& c, double h = default_fd_step) {
  require_unit_axis(u.axis);
  c.validate();
  return qfi_numeric(joint_family(noise, u.axis, probe, c), u.phase, h);
}

inline FisherResult qfi_control_numeric(const KrausChannel& noise, const UnitaryParams& u,
                                        const DensityOperator& probe, const ControlSpec& c,
                                        double h = default_fd_step) {
  require_unit_axis(u.axis);
  c.validate();
  return qfi_numeric(control_family(noise, u.axis, probe, c), u.phase, h);
}

// Hadamard-basis CFI with P_+ = <+|rho_con|+> and a central-difference slope.
// Used for noise models without a closed form for Q_c.
inline FisherResult cfi_control_numeric(const KrausChannel& noise, const UnitaryParams& u,
                                        const DensityOperator& probe, const ControlSpec& c,
                                        double h = default_fd_step) {
  require_unit_axis(u.axis);
  c.validate();
  const StateFamily fam = control_family(noise, u.axis, probe, c);
  auto p_plus = [&](double xi) {
    const DensityOperator rho = fam(xi);
    const CMatrix& m = rho.matrix();
    return 0.5 * (m(0, 0) + m(0, 1) + m(1, 0) + m(1, 1)).real();
  };
  const double p0 = p_plus(u.phase);
  const double slope = (p_plus(u.phase + h) - p_plus(u.phase - h)) / (2.0 * h);
  const double var = (1.0 - p0) * p0;
  if (var <= degenerate_tol) {
    if (std::abs(slope) > std::sqrt(degenerate_tol))
      throw std::domain_error("cfi_control_numeric: outcome probability is 0 or 1 with nonzero slope");
    return make_fisher(0.0, FisherMethod::classical);
  }
  return make_fisher(slope * slope / var, FisherMethod::classical);
}

}  // namespace qswitch
