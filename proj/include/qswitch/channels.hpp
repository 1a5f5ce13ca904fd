#pragma once

// Qubit states, the phase rotation U_xi = exp(-i xi n.sigma / 2) and the noise
// channels (Pauli family, depolarizing) that make up the noisy process
// E_xi(rho) = N(U_xi rho U_xi^dag).

#include <array>
#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qswitch/qmat.hpp"

namespace qswitch {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double norm() const noexcept { return std::sqrt(x * x + y * y + z * z); }
  double dot(const Vec3& o) const noexcept { return x * o.x + y * o.y + z * o.z; }
  Vec3 scaled(double s) const noexcept { return {x * s, y * s, z * s}; }
  bool operator==(const Vec3&) const = default;
};

// Bloch vector of a qubit; |r| <= 1.
using BlochVector = Vec3;

inline constexpr double bloch_norm_slack = 1e-12;
inline constexpr double axis_norm_tol = 1e-12;

inline void require_probability(double p, std::string_view name) {
  if (!(p >= 0.0 && p <= 1.0))
    throw std::domain_error(std::string(name) + " must lie in [0, 1], got " + std::to_string(p));
}

class DensityOperator {
 public:
  // Validates Hermiticity, unit trace and positivity (all at tol::structural).
  explicit DensityOperator(CMatrix m) : mat_(std::move(m)) {
    if (const double h = hermiticity_residual(mat_); h >= tol::structural)
      throw std::invalid_argument("DensityOperator: not Hermitian (residual " + std::to_string(h) + ")");
    if (const double t = std::abs(trace(mat_) - 1.0); t >= tol::structural)
      throw std::invalid_argument("DensityOperator: trace deviates from 1 by " + std::to_string(t));
    if (const double lmin = min_eigenvalue(mat_); lmin < -tol::structural)
      throw std::invalid_argument("DensityOperator: negative eigenvalue " + std::to_string(lmin));
  }

  const CMatrix& matrix() const noexcept { return mat_; }
  std::size_t dim() const noexcept { return mat_.dim(); }

 private:
  CMatrix mat_;
};

inline DensityOperator bloch_to_density(BlochVector r) {
  const double n = r.norm();
  if (n > 1.0 + bloch_norm_slack)
    throw std::domain_error("bloch_to_density: Bloch vector norm " + std::to_string(n) + " exceeds 1");
  if (n > 1.0) r = r.scaled(1.0 / n);
  CMatrix m = CMatrix::identity(2) + r.x * pauli_x() + r.y * pauli_y() + r.z * pauli_z();
  return DensityOperator(m * 0.5);
}

inline BlochVector density_to_bloch(const DensityOperator& rho) {
  if (rho.dim() != 2) throw std::invalid_argument("density_to_bloch: expected a qubit state");
  const CMatrix& m = rho.matrix();
  return {trace(m * pauli_x()).real(), trace(m * pauli_y()).real(), trace(m * pauli_z()).real()};
}

struct UnitaryParams {
  Vec3 axis{0.0, 1.0, 0.0};
  double phase = 0.0;  // radians
};

inline void require_unit_axis(const Vec3& n) {
  if (std::abs(n.norm() - 1.0) > axis_norm_tol)
    throw std::domain_error("rotation axis must have unit norm, got " + std::to_string(n.norm()));
}

// cos(xi/2) I - i sin(xi/2) n.sigma
inline CMatrix rotation_unitary(const UnitaryParams& u) {
  require_unit_axis(u.axis);
  const double c = std::cos(u.phase / 2.0), s = std::sin(u.phase / 2.0);
  const Complex a(c, -s * u.axis.z);
  const Complex b(-s * u.axis.y, -s * u.axis.x);
  const Complex d(s * u.axis.y, -s * u.axis.x);
  const Complex e(c, s * u.axis.z);
  return CMatrix{{a, b}, {d, e}};
}

enum class PauliAxis { x, y, z };

inline const CMatrix& pauli(PauliAxis axis) {
  switch (axis) {
    case PauliAxis::x: return pauli_x();
    case PauliAxis::y: return pauli_y();
    case PauliAxis::z: return pauli_z();
  }
  throw std::invalid_argument("pauli: bad axis");
}

// n_l: component of the rotation axis along the Pauli noise direction.
inline double axis_component(const Vec3& n, PauliAxis axis) {
  switch (axis) {
    case PauliAxis::x: return n.x;
    case PauliAxis::y: return n.y;
    case PauliAxis::z: return n.z;
  }
  throw std::invalid_argument("axis_component: bad axis");
}

class KrausChannel {
 public:
  explicit KrausChannel(std::vector<CMatrix> kraus) : kraus_(std::move(kraus)) {
    if (kraus_.empty()) throw std::invalid_argument("KrausChannel: empty Kraus set");
    const std::size_t d = kraus_.front().dim();
    for (const auto& k : kraus_)
      if (k.dim() != d) throw std::invalid_argument("KrausChannel: Kraus operators differ in dimension");
    if (const double r = completeness_residual(); r >= tol::structural)
      throw std::invalid_argument("KrausChannel: completeness violated (residual " + std::to_string(r) + ")");
  }

  std::span<const CMatrix> operators() const noexcept { return kraus_; }
  std::size_t dim() const noexcept { return kraus_.front().dim(); }
  std::size_t size() const noexcept { return kraus_.size(); }

  // max |sum K^dag K - I|
  double completeness_residual() const {
    CMatrix s(kraus_.front().dim());
    for (const auto& k : kraus_) s += adjoint(k) * k;
    return max_abs_diff(s, CMatrix::identity(s.dim()));
  }

 private:
  std::vector<CMatrix> kraus_;
};

inline CMatrix channel_choi(const KrausChannel& ch) { return channel_choi(ch.operators()); }

// Applies sigma_l with probability p: {sqrt(1-p) I, sqrt(p) sigma_l}.
inline KrausChannel pauli_channel(PauliAxis axis, double p) {
  require_probability(p, "pauli_channel: p");
  return KrausChannel({std::sqrt(1.0 - p) * CMatrix::identity(2), std::sqrt(p) * pauli(axis)});
}

// rho -> (1-p) rho + p I/2
inline KrausChannel depolarizing_channel(double p) {
  require_probability(p, "depolarizing_channel: p");
  const double w = std::sqrt(p / 4.0);
  return KrausChannel({std::sqrt(1.0 - 3.0 * p / 4.0) * CMatrix::identity(2), w * pauli_x(), w * pauli_y(),
                       w * pauli_z()});
}

// Kraus set {N_m U_xi} of E_xi(rho) = N(U_xi rho U_xi^dag).
inline KrausChannel noisy_phase_channel(const KrausChannel& noise, const UnitaryParams& u) {
  if (noise.dim() != 2) throw std::invalid_argument("noisy_phase_channel: noise must act on a qubit");
  const CMatrix rot = rotation_unitary(u);
  std::vector<CMatrix> ks;
  ks.reserve(noise.size());
  for (const auto& n : noise.operators()) ks.push_back(n * rot);
  return KrausChannel(std::move(ks));
}

inline CMatrix apply_kraus(std::span<const CMatrix> kraus, const CMatrix& rho) {
  CMatrix out(rho.dim());
  for (const auto& k : kraus) {
    if (k.dim() != rho.dim()) throw std::invalid_argument("apply_channel: dimension mismatch");
    out += k * rho * adjoint(k);
  }
  return out;
}

inline DensityOperator apply_channel(const KrausChannel& ch, const DensityOperator& rho) {
  if (ch.dim() != rho.dim())
    throw std::invalid_argument("apply_channel: channel dim " + std::to_string(ch.dim()) + " vs state dim " +
                                std::to_string(rho.dim()));
  return DensityOperator(apply_kraus(ch.operators(), rho.matrix()));
}

}  // namespace qswitch
