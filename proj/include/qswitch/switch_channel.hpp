#pragma once

// Quantum switch of two copies of a qubit channel E, driven by a control qubit
// |psi_c> = sqrt(p_c)|0> + sqrt(1-p_c)|1>.
//
// The joint output is
//   S00(rho) (x) [p_c|0><0| + (1-p_c)|1><1|] + S01(rho) (x) sqrt(p_c(1-p_c)) (|0><1| + |1><0|)
// with S00 = E o E and S01(rho) = sum_{jk} K_j K_k rho K_j^dag K_k^dag. It is
// cross-checked against the joint Kraus construction
//   W_jk = K_j K_k (x) |0><0| + K_k K_j (x) |1><1|
// applied to rho (x) |psi_c><psi_c|.

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "qswitch/channels.hpp"
#include "qswitch/qmat.hpp"

namespace qswitch {

inline constexpr double imag_trace_tol = 1e-10;

struct ControlSpec {
  double p_c = 0.5;

  void validate() const { require_probability(p_c, "control weight p_c"); }

  // sqrt((1-p_c) p_c), the off-diagonal weight of |psi_c><psi_c|.
  double coherence() const { return std::sqrt((1.0 - p_c) * p_c); }

  DensityOperator state() const {
    validate();
    const double c = coherence();
    return DensityOperator(CMatrix{{p_c, c}, {c, 1.0 - p_c}});
  }
};

struct SwitchResult {
  DensityOperator joint;            // dim 4, probe (x) control
  DensityOperator control_reduced;  // tr_probe of joint
  double q_c = 0.0;                 // tr S01(rho)
};

namespace detail {
inline void require_qubit(const KrausChannel& ch, const DensityOperator& rho, const char* who) {
  if (ch.dim() != 2 || rho.dim() != 2)
    throw std::invalid_argument(std::string(who) + ": expected a qubit channel and qubit state");
}
}  // namespace detail

// Standard cascade E o E.
inline DensityOperator s00(const KrausChannel& ch, const DensityOperator& rho) {
  detail::require_qubit(ch, rho, "s00");
  return apply_channel(ch, apply_channel(ch, rho));
}

// Interference term; Hermitian but in general neither positive nor unit trace.
inline CMatrix s01(const KrausChannel& ch, const DensityOperator& rho) {
  detail::require_qubit(ch, rho, "s01");
  const auto ks = ch.operators();
  std::vector<CMatrix> adj;
  adj.reserve(ks.size());
  for (const auto& k : ks) adj.push_back(adjoint(k));

  CMatrix out(2);
  for (std::size_t j = 0; j < ks.size(); ++j)
    for (std::size_t k = 0; k < ks.size(); ++k) out += ks[j] * ks[k] * rho.matrix() * adj[j] * adj[k];
  return out;
}

inline double qc_numeric(const KrausChannel& ch, const DensityOperator& rho) {
  const Complex t = trace(s01(ch, rho));
  if (std::abs(t.imag()) >= imag_trace_tol)
    throw std::runtime_error("qc_numeric: tr S01 has imaginary part " + std::to_string(t.imag()) +
                             "; Kraus construction is inconsistent");
  return t.real();
}

inline SwitchResult switch_state(const KrausChannel& ch, const DensityOperator& rho, const ControlSpec& c) {
  c.validate();
  const DensityOperator cascade = s00(ch, rho);
  const CMatrix interference = s01(ch, rho);
  const double w = c.coherence();

  const CMatrix populations = CMatrix::diagonal({c.p_c, 1.0 - c.p_c});
  const CMatrix flip = CMatrix{{0.0, w}, {w, 0.0}};
  DensityOperator joint(kron(cascade.matrix(), populations) + kron(interference, flip));
  DensityOperator reduced(partial_trace(joint.matrix(), Subsystem::control));

  const Complex t = trace(interference);
  if (std::abs(t.imag()) >= imag_trace_tol)
    throw std::runtime_error("switch_state: tr S01 has imaginary part " + std::to_string(t.imag()));
  return SwitchResult{std::move(joint), std::move(reduced), t.real()};
}

// Joint Kraus operators {W_jk} on probe (x) control; a valid channel on dim 4.
inline KrausChannel switch_kraus_operators(const KrausChannel& ch) {
  if (ch.dim() != 2) throw std::invalid_argument("switch_kraus_operators: expected a qubit channel");
  const CMatrix p0 = CMatrix::basis_outer(2, 0, 0);
  const CMatrix p1 = CMatrix::basis_outer(2, 1, 1);
  const auto ks = ch.operators();
  std::vector<CMatrix> ws;
  ws.reserve(ks.size() * ks.size());
  for (std::size_t j = 0; j < ks.size(); ++j)
    for (std::size_t k = 0; k < ks.size(); ++k)
      ws.push_back(kron(ks[j] * ks[k], p0) + kron(ks[k] * ks[j], p1));
  return KrausChannel(std::move(ws));
}

inline DensityOperator switch_kraus_apply(const KrausChannel& ch, const DensityOperator& rho,
                                          const ControlSpec& c) {
  detail::require_qubit(ch, rho, "switch_kraus_apply");
  const KrausChannel joint = switch_kraus_operators(ch);
  const DensityOperator input(kron(rho.matrix(), c.state().matrix()));
  return apply_channel(joint, input);
}

// p_c|0><0| + (1-p_c)|1><1| + Q_c sqrt((1-p_c)p_c)(|0><1| + |1><0|)
inline DensityOperator reduced_control(const KrausChannel& ch, const DensityOperator& rho, const ControlSpec& c) {
  c.validate();
  const double off = qc_numeric(ch, rho) * c.coherence();
  return DensityOperator(CMatrix{{c.p_c, off}, {off, 1.0 - c.p_c}});
}

// 2 (1 - n_l^2)(1 - p) p: the noise-induced coupling strength of the control.
inline double coupling_strength(double p, double n_l) {
  require_probability(p, "noise probability p");
  if (!(std::abs(n_l) <= 1.0 + axis_norm_tol))
    throw std::domain_error("axis component n_l must lie in [-1, 1], got " + std::to_string(n_l));
  const double perp = std::max(0.0, 1.0 - n_l * n_l);
  return 2.0 * perp * ((1.0 - p) * p);
}

// Q_c = 1 - u (1 - cos xi), with 1 - cos xi evaluated as 2 sin^2(xi/2).
inline double qc_closed_form(double p, double xi, double n_l) {
  const double u = coupling_strength(p, n_l);
  const double half = std::sin(xi / 2.0);
  return 1.0 - 2.0 * u * half * half;
}

// d Q_c / d xi = -u sin xi
inline double qc_derivative(double p, double xi, double n_l) { return -coupling_strength(p, n_l) * std::sin(xi); }

}  // namespace qswitch
