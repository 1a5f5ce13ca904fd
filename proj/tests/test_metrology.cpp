#include <cmath>
#include <numbers>

#include "gtest/gtest.h"
#include "oracles.hpp"
#include "qswitch/metrology.hpp"
#include "qswitch/sampling.hpp"

using namespace qswitch;

namespace {

constexpr double pi = std::numbers::pi;
const Vec3 ey{0, 1, 0};

// Frozen from a 40-digit mpmath evaluation of the control-qubit closed forms.
constexpr double peak_qfi = 0.474930145243892;     // p_c=1/2, p=1/2, n_l=0, xi=pi/5
constexpr double quarter_qfi = 0.356197608932919;  // p_c=1/4, same point
constexpr double quarter_cfi = 0.167649959843859;  // Hadamard CFI, p_c=1/4
constexpr double peak_p_plus = 0.952254248593737;

oracle::Vec as_array(const Vec3& v) { return {v.x, v.y, v.z}; }

// Cascade Bloch vector for Pauli noise via rotations and axis scalings only.
oracle::Vec cascade_bloch(int ell, double p, const Vec3& n, double xi, const BlochVector& r) {
  oracle::Vec v = as_array(r);
  for (int k = 0; k < 2; ++k) v = oracle::pauli_noise(oracle::rotate(v, as_array(n), xi), ell, p);
  return v;
}

double cascade_oracle(int ell, double p, const Vec3& n, double xi, const BlochVector& r) {
  auto f = [&](double x) { return cascade_bloch(ell, p, n, x, r); };
  return oracle::bloch_qfi(f(xi), oracle::derivative(f, xi));
}

// Control QFI from the Bloch form with Q_c = 1 - u(1 - cos xi) and a numeric slope.
double control_oracle(double pc, double p, double xi, double n_l) {
  const double u = 2 * (1 - n_l * n_l) * (1 - p) * p;
  auto f = [&](double x) { return oracle::control_bloch(1 - u * (1 - std::cos(x)), pc); };
  return oracle::bloch_qfi(f(xi), oracle::derivative(f, xi));
}

}  // namespace

TEST(qfi_numeric, constant_family_is_zero) {
  const DensityOperator rho = bloch_to_density({0.1, 0.2, 0.3});
  EXPECT_EQ(qfi_numeric([&](double) { return rho; }, 0.4).value, 0.0);
}

TEST(qfi_numeric, pure_rotation_has_unit_information) {
  ParamSampler s(41);
  for (int i = 0; i < 20; ++i) {
    const Vec3 n = s.unit_vector();
    Vec3 r = s.unit_vector();
    r = Vec3{r.x - n.dot(r) * n.x, r.y - n.dot(r) * n.y, r.z - n.dot(r) * n.z};
    r = r.scaled(1.0 / r.norm());
    const DensityOperator rho = bloch_to_density(r);
    const auto fam = [&](double xi) {
      const CMatrix u = rotation_unitary({n, xi});
      return DensityOperator(u * rho.matrix() * adjoint(u));
    };
    const FisherResult f = qfi_numeric(fam, s.phase());
    EXPECT_NEAR(f.value, 1.0, 1e-8);
    EXPECT_EQ(f.method, FisherMethod::sld_numeric);
  }
}

TEST(qfi_numeric, reduced_control_family_anchor) {
  const double f = qfi_control_numeric(pauli_channel(PauliAxis::x, 0.5), {ey, pi / 5}, bloch_to_density({0, 0, 1}), {0.5}).value;
  EXPECT_NEAR(f, peak_qfi, 1e-6);
}

TEST(qfi_numeric, step_must_be_positive) {
  const DensityOperator rho = bloch_to_density({0, 0, 0});
  EXPECT_THROW(qfi_numeric([&](double) { return rho; }, 0.0, 0.0), std::invalid_argument);
  EXPECT_THROW(qfi_numeric([&](double) { return rho; }, 0.0, -1e-5), std::invalid_argument);
}

TEST(qfi_numeric, rejects_dimension_change) {
  auto fam = [](double xi) {
    if (xi > 0.0) return DensityOperator(CMatrix::identity(4) * 0.25);
    return bloch_to_density({0, 0, 0});
  };
  EXPECT_THROW(qfi_numeric(fam, 0.0), std::invalid_argument);
}

TEST(qfi_control, anchors) {
  EXPECT_EQ(qfi_control({0.0}, 0.5, pi / 5, 0.0).value, 0.0);
  EXPECT_EQ(qfi_control({1.0}, 0.5, pi / 5, 0.0).value, 0.0);
  EXPECT_NEAR(qfi_control({0.5}, 0.5, pi / 5, 0.0).value, peak_qfi, 1e-12);
  EXPECT_NEAR(qfi_control({0.25}, 0.5, pi / 5, 0.0).value, quarter_qfi, 1e-12);
  EXPECT_THROW(qfi_control({1.5}, 0.5, 1.0, 0.0), std::domain_error);
  EXPECT_THROW(qfi_control({0.5}, 1.5, 1.0, 0.0), std::domain_error);
}

TEST(qfi_control, matches_bloch_vector_oracle) {
  ParamSampler s(42);
  for (int i = 0; i < 200; ++i) {
    const double pc = s.probability(), p = s.probability(), n_l = s.uniform(-1, 1);
    const double xi = s.uniform(0.05, 2 * pi - 0.05);
    EXPECT_NEAR(qfi_control({pc}, p, xi, n_l).value, control_oracle(pc, p, xi, n_l), 1e-8)
        << "pc=" << pc << " p=" << p << " xi=" << xi << " n_l=" << n_l;
  }
}

TEST(qfi_control, matches_sld_numeric_on_full_simulation) {
  ParamSampler s(43);
  for (int i = 0; i < 60; ++i) {
    const double p = s.probability(), xi = s.phase();
    const Vec3 n = s.unit_vector();
    const PauliAxis ell = s.pauli_axis();
    const ControlSpec c{s.probability()};
    const double numeric = qfi_control_numeric(pauli_channel(ell, p), {n, xi}, bloch_to_density(s.bloch()), c).value;
    EXPECT_NEAR(numeric, qfi_control(c, p, xi, axis_component(n, ell)).value, 1e-6);
  }
}

TEST(qfi_control, half_weight_is_optimal) {
  for (double p : {0.1, 0.3, 0.5, 0.85})
    for (double xi : {0.2, 1.0, 2.0, 4.0})
      for (double n_l : {0.0, 0.4}) {
        double best = -1, arg = -1;
        for (int k = 1; k <= 19; ++k) {
          const double f = qfi_control({k * 0.05}, p, xi, n_l).value;
          if (f > best) best = f, arg = k * 0.05;
        }
        EXPECT_NEAR(arg, 0.5, 1e-12);
        EXPECT_NEAR(best, qfi_control_opt(p, xi, n_l).value, 1e-12);
      }
}

TEST(qfi_control_opt, anchors_and_zeros) {
  ParamSampler s(44);
  for (int i = 0; i < 20; ++i) {
    const double xi = s.phase(), n_l = s.uniform(-1, 1);
    EXPECT_EQ(qfi_control_opt(0.0, xi, n_l).value, 0.0);
    EXPECT_EQ(qfi_control_opt(1.0, xi, n_l).value, 0.0);
    EXPECT_EQ(qfi_control_opt(s.probability(), xi, 1.0).value, 0.0);
    EXPECT_EQ(qfi_control_opt(s.probability(), xi, -1.0).value, 0.0);
  }
  EXPECT_NEAR(qfi_control_opt(0.5, pi / 5, 0.0).value, peak_qfi, 1e-12);
}

TEST(qfi_control_opt, equals_general_form_at_half_weight) {
  ParamSampler s(45);
  for (int i = 0; i < 200; ++i) {
    const double p = s.probability(), xi = s.phase(), n_l = s.uniform(-1, 1);
    EXPECT_NEAR(qfi_control_opt(p, xi, n_l).value, qfi_control({0.5}, p, xi, n_l).value, 1e-12);
  }
}

TEST(qfi_control_opt, symmetric_in_p) {
  ParamSampler s(46);
  for (int i = 0; i < 200; ++i) {
    const double p = s.probability(), xi = s.phase(), n_l = s.uniform(-1, 1);
    EXPECT_NEAR(qfi_control_opt(p, xi, n_l).value, qfi_control_opt(1 - p, xi, n_l).value, 1e-12);
  }
}

TEST(qfi_control_opt, peaks_at_half_noise) {
  for (double xi : {0.3, pi / 5, 1.7, 3.0}) {
    double best = -1, arg = -1;
    for (int i = 0; i <= 20; ++i) {
      const double f = qfi_control_opt(i * 0.05, xi, 0.0).value;
      if (f > best) best = f, arg = i * 0.05;
    }
    EXPECT_NEAR(arg, 0.5, 1e-12) << "xi=" << xi;
  }
}

TEST(qfi_control_opt, small_phase_limit) {
  for (double p : {0.1, 0.5, 0.7})
    for (double n_l : {0.0, 0.6}) {
      const double u = 2 * (1 - n_l * n_l) * (1 - p) * p;
      EXPECT_NEAR(qfi_control_opt(p, 0.0, n_l).value, u, 1e-15);
      EXPECT_NEAR(qfi_control_opt(p, 1e-9, n_l).value, u, 1e-12);
      // continuous across the switch-over to the direct formula
      EXPECT_NEAR(qfi_control_opt(p, 1e-4, n_l).value, u, 1e-7);
      EXPECT_NEAR(qfi_control({0.3}, p, 0.0, n_l).value, 4 * 0.3 * 0.7 * u, 1e-15);
    }
  const double numeric =
      qfi_control_numeric(pauli_channel(PauliAxis::x, 0.5), {ey, 1e-4}, bloch_to_density({0, 0, 1}), {0.5}).value;
  EXPECT_NEAR(numeric, 0.5, 1e-4);
}

TEST(measure_control, probabilities) {
  auto o = measure_control({0.3}, 0.0);
  EXPECT_EQ(o.plus, 0.5);
  EXPECT_EQ(o.minus, 0.5);
  o = measure_control({0.0}, 0.8);
  EXPECT_EQ(o.plus, 0.5);
  EXPECT_EQ(o.minus, 0.5);
  o = measure_control({0.5}, qc_closed_form(0.5, pi / 5, 0.0));
  EXPECT_NEAR(o.plus, peak_p_plus, 1e-15);
  EXPECT_NEAR(o.minus, 1 - peak_p_plus, 1e-15);
  EXPECT_DOUBLE_EQ(o.plus + o.minus, 1.0);
  EXPECT_THROW(measure_control({0.5}, 1.1), std::domain_error);
  EXPECT_THROW(measure_control({-0.1}, 0.5), std::domain_error);
}

TEST(measure_control, hadamard_expectation_of_reduced_state) {
  ParamSampler s(47);
  for (int i = 0; i < 30; ++i) {
    const double p = s.probability();
    const KrausChannel ch = noisy_phase_channel(depolarizing_channel(p), {s.unit_vector(), s.phase()});
    const DensityOperator rho = bloch_to_density(s.bloch());
    const ControlSpec c{s.probability()};
    const DensityOperator red = reduced_control(ch, rho, c);
    const CMatrix& m = red.matrix();
    const double p_plus = 0.5 * (m(0, 0) + m(0, 1) + m(1, 0) + m(1, 1)).real();
    EXPECT_NEAR(measure_control(c, qc_numeric(ch, rho)).plus, p_plus, 1e-14);
  }
}

TEST(cfi_control, anchors) {
  EXPECT_NEAR(cfi_control({0.5}, 0.5, pi / 5, 0.0).value, peak_qfi, 1e-12);
  EXPECT_EQ(cfi_control({0.0}, 0.5, pi / 5, 0.0).value, 0.0);
  const FisherResult q = cfi_control({0.25}, 0.5, pi / 5, 0.0);
  EXPECT_NEAR(q.value, quarter_cfi, 1e-12);
  EXPECT_EQ(q.method, FisherMethod::classical);
  EXPECT_LE(q.value, quarter_qfi);
}

TEST(cfi_control, optimal_at_half_weight_and_bounded_by_qfi) {
  ParamSampler s(48);
  for (int i = 0; i < 300; ++i) {
    const double p = s.probability(), xi = s.phase(), n_l = s.uniform(-1, 1), pc = s.probability();
    EXPECT_NEAR(cfi_control({0.5}, p, xi, n_l).value, qfi_control_opt(p, xi, n_l).value, 1e-9);
    EXPECT_LE(cfi_control({pc}, p, xi, n_l).value, qfi_control({pc}, p, xi, n_l).value + 1e-9);
  }
}

TEST(cfi_control, degenerate_phase) {
  EXPECT_NEAR(cfi_control({0.5}, 0.3, 0.0, 0.0).value, qfi_control_opt(0.3, 0.0, 0.0).value, 1e-15);
  EXPECT_EQ(cfi_control({0.2}, 0.3, 0.0, 0.0).value, 0.0);
  EXPECT_EQ(cfi_control({0.5}, 0.0, 1.0, 0.0).value, 0.0);
}

TEST(qfi_cascade, noiseless_rotation_values) {
  const KrausChannel clean = pauli_channel(PauliAxis::x, 0.0);
  EXPECT_NEAR(qfi_cascade(clean, {ey, pi / 5}, {0, 0, 1}).value, 4.0, 1e-6);
  EXPECT_NEAR(qfi_cascade(clean, {ey, pi / 5}, {0, 0, 0.6}).value, 1.44, 1e-6);
  EXPECT_NEAR(qfi_cascade(clean, {ey, 2.0}, {0.6, 0, 0}).value, 1.44, 1e-6);
}

TEST(qfi_cascade, full_bit_flip_carries_no_information) {
  for (double r : {1.0, 0.6, 0.2})
    EXPECT_NEAR(qfi_cascade(pauli_channel(PauliAxis::x, 1.0), {ey, pi / 5}, {0, 0, r}).value, 0.0, 1e-9);
}

TEST(qfi_cascade, matches_bloch_vector_oracle) {
  ParamSampler s(49);
  for (int i = 0; i < 100; ++i) {
    const double p = s.probability(), xi = s.phase();
    const Vec3 n = s.unit_vector();
    const PauliAxis ell = s.pauli_axis();
    BlochVector r = s.bloch();
    if (r.norm() > 0.98) r = r.scaled(0.98 / r.norm());
    EXPECT_NEAR(qfi_cascade(pauli_channel(ell, p), {n, xi}, r).value, cascade_oracle(static_cast<int>(ell), p, n, xi, r),
                1e-6);
  }
}

// The cascade QFI has a local rise between p=0.6 and p=0.7 for this setup; the
// two values below come from a 40-digit Bloch-vector evaluation.
TEST(qfi_cascade, bit_flip_curve_is_not_monotone) {
  const KrausChannel n6 = pauli_channel(PauliAxis::x, 0.6), n7 = pauli_channel(PauliAxis::x, 0.7);
  const double f6 = qfi_cascade(n6, {ey, pi / 5}, {0, 0, 1}).value;
  const double f7 = qfi_cascade(n7, {ey, pi / 5}, {0, 0, 1}).value;
  EXPECT_NEAR(f6, 0.0981931806604039, 1e-6);
  EXPECT_NEAR(f7, 0.100133445123272, 1e-6);
  EXPECT_GT(f7, f6);
  EXPECT_NEAR(qfi_cascade(n6, {ey, pi / 5}, {0, 0, 0.6}).value, 0.0319536143180193, 1e-6);
  EXPECT_NEAR(qfi_cascade(n7, {ey, pi / 5}, {0, 0, 0.6}).value, 0.0327339868520952, 1e-6);
}

TEST(qfi_cascade, decreasing_at_low_noise) {
  for (double r : {0.2, 0.4, 0.6, 0.8, 1.0}) {
    double prev = 1e300;
    for (int i = 0; i <= 6; ++i) {
      const double f = qfi_cascade(pauli_channel(PauliAxis::x, i / 10.0), {ey, pi / 5}, {0, 0, r}).value;
      EXPECT_LE(f, prev + 1e-9) << "r=" << r << " p=" << i / 10.0;
      prev = f;
    }
  }
}

TEST(qfi_cascade, control_wins_at_large_noise) {
  for (double p : {0.6, 0.7, 0.8, 0.9}) {
    const double con = qfi_control_opt(p, pi / 5, 0.0).value;
    for (double r : {1.0, 0.8, 0.6, 0.4, 0.2})
      EXPECT_GT(con, qfi_cascade(pauli_channel(PauliAxis::x, p), {ey, pi / 5}, {0, 0, r}).value);
  }
}

TEST(qfi_joint, reduces_to_cascade_without_interference) {
  const KrausChannel clean = pauli_channel(PauliAxis::x, 0.0);
  const double cas = qfi_cascade(clean, {ey, pi / 5}, {0, 0, 1}).value;
  EXPECT_NEAR(qfi_joint(clean, {ey, pi / 5}, bloch_to_density({0, 0, 1}), {0.5}).value, cas, 1e-6);

  const KrausChannel noisy = pauli_channel(PauliAxis::x, 0.3);
  EXPECT_NEAR(qfi_joint(noisy, {ey, pi / 5}, bloch_to_density({0, 0, 0.7}), {0.0}).value,
              qfi_cascade(noisy, {ey, pi / 5}, {0, 0, 0.7}).value, 1e-6);
}

TEST(qfi_joint, dominates_the_control_marginal) {
  const double joint = qfi_joint(pauli_channel(PauliAxis::x, 0.5), {ey, pi / 5}, bloch_to_density({0, 0, 0}), {0.5}).value;
  EXPECT_GE(joint, qfi_control_opt(0.5, pi / 5, 0.0).value - 1e-6);
  ParamSampler s(50);
  for (int i = 0; i < 20; ++i) {
    const double p = s.probability(), xi = s.uniform(0.1, 3.0);
    const Vec3 n = s.unit_vector();
    const PauliAxis ell = s.pauli_axis();
    const ControlSpec c{s.uniform(0.1, 0.9)};
    BlochVector r = s.bloch();
    if (r.norm() > 0.95) r = r.scaled(0.95 / r.norm());
    const double j = qfi_joint(pauli_channel(ell, p), {n, xi}, bloch_to_density(r), c).value;
    EXPECT_GE(j, qfi_control(c, p, xi, axis_component(n, ell)).value - 1e-6);
    EXPECT_GE(j, qfi_cascade(pauli_channel(ell, p), {n, xi}, r).value - 1e-6);
  }
}

TEST(control_qfi, depolarizing_noise_ignores_axis_and_probe) {
  ParamSampler s(51);
  const KrausChannel noise = depolarizing_channel(0.3);
  std::vector<double> vals;
  for (int i = 0; i < 10; ++i)
    vals.push_back(qfi_control_numeric(noise, {s.unit_vector(), 0.9}, bloch_to_density(s.bloch()), {0.4}).value);
  const auto [lo, hi] = std::minmax_element(vals.begin(), vals.end());
  EXPECT_LT(*hi - *lo, 1e-8);
  EXPECT_GT(*lo, 0.0);
}

TEST(control_qfi, pauli_noise_depends_on_axis_only_through_component) {
  const KrausChannel noise = pauli_channel(PauliAxis::z, 0.35);
  const double c = 0.6, t = std::sqrt(1 - c * c);
  const double a = qfi_control_numeric(noise, {{t, 0, c}, 1.2}, bloch_to_density({0.2, 0.1, 0.3}), {0.5}).value;
  const double b = qfi_control_numeric(noise, {{0, -t, c}, 1.2}, bloch_to_density({-0.5, 0.4, 0.0}), {0.5}).value;
  EXPECT_NEAR(a, b, 1e-8);
  EXPECT_NEAR(a, qfi_control_opt(0.35, 1.2, c).value, 1e-6);
  const double other = qfi_control_numeric(noise, {{1, 0, 0}, 1.2}, bloch_to_density({0.2, 0.1, 0.3}), {0.5}).value;
  EXPECT_GT(std::abs(other - a), 1e-3);
}

TEST(fisher_result, clamps_tiny_negatives_only) {
  EXPECT_EQ(make_fisher(-5e-13, FisherMethod::sld_numeric).value, 0.0);
  EXPECT_THROW(make_fisher(-1e-9, FisherMethod::sld_numeric), std::runtime_error);
  EXPECT_THROW(make_fisher(std::nan(""), FisherMethod::closed_form), std::runtime_error);
}

TEST(cfi_control_numeric, matches_closed_form_for_pauli_noise) {
  ParamSampler s(52);
  for (int i = 0; i < 40; ++i) {
    const double p = s.probability(), xi = s.uniform(0.2, 2 * pi - 0.2);
    const Vec3 n = s.unit_vector();
    const PauliAxis ell = s.pauli_axis();
    const ControlSpec c{s.uniform(0.05, 0.95)};
    const double numeric = cfi_control_numeric(pauli_channel(ell, p), {n, xi}, bloch_to_density(s.bloch()), c).value;
    EXPECT_NEAR(numeric, cfi_control(c, p, xi, axis_component(n, ell)).value, 1e-6);
  }
}
