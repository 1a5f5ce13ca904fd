#pragma once

// Small dense complex matrices (dim 2, 4, 16 in practice) with the handful of
// operations the switch simulator needs: products, adjoint, Kronecker product,
// partial trace, a Jacobi Hermitian eigensolver and Choi matrices.
//
// Conventions used throughout the library:
//   * entries are stored row-major;
//   * in a bipartite operator the probe is the first (coarse) tensor factor and
//     the control the second, matching rho (x) rho_c.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qswitch {

using Complex = std::complex<double>;

namespace tol {
inline constexpr double structural = 1e-10;
inline constexpr double reconstruction = 1e-11;
inline constexpr double convergence = 1e-13;
inline constexpr int max_jacobi_sweeps = 100;
}  // namespace tol

class CMatrix {
 public:
  CMatrix() = default;

  explicit CMatrix(std::size_t dim) : dim_(dim), entries_(dim * dim) {
    if (dim == 0) throw std::invalid_argument("CMatrix: dimension must be positive");
  }

  CMatrix(std::size_t dim, std::vector<Complex> entries) : dim_(dim), entries_(std::move(entries)) {
    if (dim == 0) throw std::invalid_argument("CMatrix: dimension must be positive");
    if (entries_.size() != dim * dim)
      throw std::invalid_argument("CMatrix: expected " + std::to_string(dim * dim) + " entries, got " +
                                  std::to_string(entries_.size()));
    for (const auto& z : entries_)
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw std::invalid_argument("CMatrix: non-finite entry");
  }

  CMatrix(std::initializer_list<std::initializer_list<Complex>> rows) {
    dim_ = rows.size();
    entries_.reserve(dim_ * dim_);
    for (const auto& row : rows) {
      if (row.size() != dim_) throw std::invalid_argument("CMatrix: rows must form a square matrix");
      entries_.insert(entries_.end(), row.begin(), row.end());
    }
    *this = CMatrix(dim_, std::move(entries_));
  }

  static CMatrix identity(std::size_t dim) {
    CMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
  }

  static CMatrix diagonal(std::span<const double> values) {
    CMatrix m(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
    return m;
  }
  static CMatrix diagonal(std::initializer_list<double> values) {
    return diagonal(std::span<const double>(values.begin(), values.size()));
  }

  // |a><b| for computational basis states of the given dimension.
  static CMatrix basis_outer(std::size_t dim, std::size_t a, std::size_t b) {
    CMatrix m(dim);
    m(a, b) = 1.0;
    return m;
  }

  std::size_t dim() const noexcept { return dim_; }
  std::span<const Complex> entries() const noexcept { return entries_; }

  Complex& operator()(std::size_t r, std::size_t c) { return entries_[r * dim_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return entries_[r * dim_ + c]; }

  CMatrix& operator+=(const CMatrix& o) {
    require_same_dim(o, "addition");
    for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += o.entries_[i];
    return *this;
  }
  CMatrix& operator-=(const CMatrix& o) {
    require_same_dim(o, "subtraction");
    for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] -= o.entries_[i];
    return *this;
  }
  CMatrix& operator*=(Complex s) {
    for (auto& z : entries_) z *= s;
    return *this;
  }

  friend CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
  friend CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
  friend CMatrix operator*(CMatrix a, Complex s) { return a *= s; }
  friend CMatrix operator*(Complex s, CMatrix a) { return a *= s; }
  friend CMatrix operator*(CMatrix a, double s) { return a *= Complex(s); }
  friend CMatrix operator*(double s, CMatrix a) { return a *= Complex(s); }

  bool operator==(const CMatrix&) const = default;

 private:
  void require_same_dim(const CMatrix& o, const char* what) const {
    if (o.dim_ != dim_)
      throw std::invalid_argument(std::string("CMatrix ") + what + ": dimension mismatch (" +
                                  std::to_string(dim_) + " vs " + std::to_string(o.dim_) + ")");
  }

  std::size_t dim_ = 0;
  std::vector<Complex> entries_;
};

inline CMatrix mat_mul(const CMatrix& a, const CMatrix& b) {
  if (a.dim() != b.dim())
    throw std::invalid_argument("mat_mul: dimension mismatch (" + std::to_string(a.dim()) + " vs " +
                                std::to_string(b.dim()) + ")");
  const std::size_t n = a.dim();
  CMatrix out(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex{}) continue;
      for (std::size_t j = 0; j < n; ++j) out(i, j) += aik * b(k, j);
    }
  return out;
}

inline CMatrix operator*(const CMatrix& a, const CMatrix& b) { return mat_mul(a, b); }

inline CMatrix adjoint(const CMatrix& a) {
  const std::size_t n = a.dim();
  CMatrix out(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out(j, i) = std::conj(a(i, j));
  return out;
}

// a indexes the coarse blocks: (a (x) b)(i*nb + k, j*nb + l) = a(i,j) b(k,l).
inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
  const std::size_t na = a.dim(), nb = b.dim();
  CMatrix out(na * nb);
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < na; ++j) {
      const Complex aij = a(i, j);
      for (std::size_t k = 0; k < nb; ++k)
        for (std::size_t l = 0; l < nb; ++l) out(i * nb + k, j * nb + l) = aij * b(k, l);
    }
  return out;
}

inline Complex trace(const CMatrix& a) {
  Complex t{};
  for (std::size_t i = 0; i < a.dim(); ++i) t += a(i, i);
  return t;
}

// Largest entrywise modulus of a - b.
inline double max_abs_diff(const CMatrix& a, const CMatrix& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("max_abs_diff: dimension mismatch");
  double m = 0.0;
  const auto ea = a.entries();
  const auto eb = b.entries();
  for (std::size_t i = 0; i < ea.size(); ++i) m = std::max(m, std::abs(ea[i] - eb[i]));
  return m;
}

inline double frobenius_norm(const CMatrix& a) {
  double s = 0.0;
  for (const auto& z : a.entries()) s += std::norm(z);
  return std::sqrt(s);
}

inline double hermiticity_residual(const CMatrix& a) { return max_abs_diff(a, adjoint(a)); }

inline const CMatrix& pauli_x() {
  static const CMatrix m{{0.0, 1.0}, {1.0, 0.0}};
  return m;
}
inline const CMatrix& pauli_y() {
  static const CMatrix m{{0.0, Complex(0.0, -1.0)}, {Complex(0.0, 1.0), 0.0}};
  return m;
}
inline const CMatrix& pauli_z() {
  static const CMatrix m{{1.0, 0.0}, {0.0, -1.0}};
  return m;
}

// Tensor factor of a bipartite operator: probe is the first factor, control the second.
enum class Subsystem { probe, control };

struct SubsystemDims {
  std::size_t probe = 2;
  std::size_t control = 2;
};

inline CMatrix partial_trace(const CMatrix& m, Subsystem keep, SubsystemDims dims = {}) {
  const std::size_t da = dims.probe, db = dims.control;
  if (da == 0 || db == 0 || m.dim() != da * db)
    throw std::invalid_argument("partial_trace: matrix dimension " + std::to_string(m.dim()) +
                                " does not match subsystem dimensions " + std::to_string(da) + "x" +
                                std::to_string(db));
  if (keep == Subsystem::probe) {
    CMatrix out(da);
    for (std::size_t i = 0; i < da; ++i)
      for (std::size_t j = 0; j < da; ++j)
        for (std::size_t k = 0; k < db; ++k) out(i, j) += m(i * db + k, j * db + k);
    return out;
  }
  CMatrix out(db);
  for (std::size_t k = 0; k < db; ++k)
    for (std::size_t l = 0; l < db; ++l)
      for (std::size_t i = 0; i < da; ++i) out(k, l) += m(i * db + k, i * db + l);
  return out;
}

struct EigDecomp {
  std::vector<double> eigenvalues;  // ascending
  CMatrix eigenvectors;             // column j pairs with eigenvalues[j]
};

// Cyclic Jacobi for Hermitian matrices. Each (p,q) rotation first removes the
// phase of a_pq with a diagonal unitary, then applies the real symmetric Jacobi
// rotation, so A <- G^dag A G with G = P R. Sweeps run in fixed row-major
// (p<q) order; the result is bit-stable across runs.
inline EigDecomp herm_eig(const CMatrix& input) {
  const std::size_t n = input.dim();
  if (n == 0) throw std::invalid_argument("herm_eig: empty matrix");
  if (const double res = hermiticity_residual(input); res >= tol::structural)
    throw std::invalid_argument("herm_eig: input is not Hermitian (residual " + std::to_string(res) + ")");

  CMatrix a = (input + adjoint(input)) * 0.5;
  CMatrix v = CMatrix::identity(n);
  const double scale = frobenius_norm(a);

  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
  };

  int sweep = 0;
  while (off_norm() >= tol::convergence * scale && scale > 0.0) {
    if (sweep++ == tol::max_jacobi_sweeps)
      throw std::runtime_error("herm_eig: no convergence after " + std::to_string(tol::max_jacobi_sweeps) +
                               " sweeps");
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        const double mag = std::abs(a(p, q));
        if (mag == 0.0) continue;
        const Complex phase = a(p, q) / mag;  // e^{i phi}
        const double app = a(p, p).real(), aqq = a(q, q).real();
        const double theta = (aqq - app) / (2.0 * mag);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        // G is the identity outside the (p,q) block.
        const Complex gpp = c, gpq = s, gqp = -s * std::conj(phase), gqq = c * std::conj(phase);
        auto rotate_columns = [&](CMatrix& m) {
          for (std::size_t i = 0; i < n; ++i) {
            const Complex mp = m(i, p), mq = m(i, q);
            m(i, p) = mp * gpp + mq * gqp;
            m(i, q) = mp * gpq + mq * gqq;
          }
        };
        rotate_columns(a);
        for (std::size_t j = 0; j < n; ++j) {
          const Complex ap = a(p, j), aq = a(q, j);
          a(p, j) = std::conj(gpp) * ap + std::conj(gqp) * aq;
          a(q, j) = std::conj(gpq) * ap + std::conj(gqq) * aq;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        rotate_columns(v);
      }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

  EigDecomp out{std::vector<double>(n), CMatrix(n)};
  for (std::size_t col = 0; col < n; ++col) {
    out.eigenvalues[col] = a(order[col], order[col]).real();
    for (std::size_t row = 0; row < n; ++row) out.eigenvectors(row, col) = v(row, order[col]);
  }
  return out;
}

inline double min_eigenvalue(const CMatrix& a) { return herm_eig(a).eigenvalues.front(); }

// Choi matrix sum_{jk} |j><k| (x) E(|j><k|); the input copy is the first factor.
inline CMatrix channel_choi(std::span<const CMatrix> kraus) {
  if (kraus.empty()) throw std::invalid_argument("channel_choi: empty Kraus set");
  const std::size_t d = kraus.front().dim();
  for (const auto& k : kraus)
    if (k.dim() != d) throw std::invalid_argument("channel_choi: Kraus operators differ in dimension");

  std::vector<CMatrix> adj;
  adj.reserve(kraus.size());
  for (const auto& k : kraus) adj.push_back(adjoint(k));

  CMatrix choi(d * d);
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t k = 0; k < d; ++k) {
      const CMatrix jk = CMatrix::basis_outer(d, j, k);
      CMatrix image(d);
      for (std::size_t m = 0; m < kraus.size(); ++m) image += kraus[m] * jk * adj[m];
      choi += kron(jk, image);
    }
  return choi;
}

}  // namespace qswitch
