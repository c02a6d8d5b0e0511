#pragma once

// Dephasing dynamics of the reduced d x d density matrix
//   d rho~ / dt = - R_{q''q'} [G_{q''}, [G_{q'}, rho~]]
// with exact closed forms for d = 2 and d = 3 (equal couplings on both
// qudits) and a fixed-step RK4 integrator for arbitrary symmetric PSD R.
// The S (dissipation) coefficients are excluded throughout; the time unit is
// dimensionless with 2 pi equal to one free-evolution period.
//
// The equation is the diagonal-sector block of the full master equation:
// components carrying ladder (off-diagonal) indices evolve independently and
// stay zero for the initial data handled here, so they are never integrated.

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "qudeph/cartan.hpp"
#include "qudeph/linalg.hpp"
#include "qudeph/state.hpp"

namespace qudeph {

inline std::vector<double> make_grid(double t_max, int steps) {
  if (!(t_max > 0.0)) throw validation_error("t_max: must be positive");
  if (steps < 1) throw validation_error("steps: must be >= 1");
  std::vector<double> g(static_cast<size_t>(steps) + 1);
  for (int i = 0; i <= steps; ++i) g[static_cast<size_t>(i)] = t_max * i / steps;
  return g;
}

// ---------------------------------------------------------------------------

struct CouplingSpec {
  RVec gamma1, gamma2;   // per-qudit coupling tuples, length d-1
  double f_const = 1.0;  // constant bath correlation, absorbed into zeta

  static CouplingSpec from_zeta(const RVec& zeta) {
    // zeta_q = sqrt(2 f) gamma_q with gamma_1 = gamma_2; keep f = 1/2 so that
    // gamma = zeta and R = zeta zeta^T
    CouplingSpec c;
    c.gamma1 = zeta;
    c.gamma2 = zeta;
    c.f_const = 0.5;
    return c;
  }

  bool symmetric() const { return gamma1 == gamma2; }
  RVec zeta() const {
    if (!symmetric()) throw validation_error("coupling: zeta form requires gamma1 == gamma2");
    RVec z(gamma1.size());
    for (size_t q = 0; q < z.size(); ++q) z[q] = std::sqrt(2.0 * f_const) * gamma1[q];
    return z;
  }
};

// R_{qp} = 1/2 (gamma1+gamma2)_q (gamma1+gamma2)_p f ; symmetric rank-1 PSD
inline Mat build_R_matrix(const CouplingSpec& c) {
  if (c.f_const < 0.0) throw validation_error("coupling.f: must be non-negative");
  if (c.gamma1.size() != c.gamma2.size())
    throw validation_error("coupling: gamma1/gamma2 length mismatch");
  const size_t n = c.gamma1.size();
  Mat r(static_cast<int>(n), static_cast<int>(n));
  for (size_t q = 0; q < n; ++q)
    for (size_t p = 0; p < n; ++p)
      r(static_cast<int>(q), static_cast<int>(p)) =
          0.5 * (c.gamma1[q] + c.gamma2[q]) * (c.gamma1[p] + c.gamma2[p]) * c.f_const;
  return r;
}

// ---------------------------------------------------------------------------

struct ReducedDensity {
  double t = 0.0;
  Mat rho;

  void check_contract(double tol_herm = 1e-10, double tol_trace = 1e-10,
                      double tol_eig = 1e-10) const {
    if (!rho.is_hermitian(tol_herm)) throw numeric_error("ReducedDensity: not Hermitian");
    if (std::abs(rho.trace().real() - 1.0) > tol_trace ||
        std::abs(rho.trace().imag()) > tol_trace)
      throw numeric_error("ReducedDensity: trace deviates from 1");
    const auto es = eigh(rho);
    if (es.values.front() < -tol_eig || es.values.back() > 1.0 + tol_eig)
      throw numeric_error("ReducedDensity: eigenvalue outside [0,1]");
  }
};

using Trajectory = std::vector<ReducedDensity>;

// ---------------------------------------------------------------------------
// d = 3: G(zeta) = zeta_1 G_1 + zeta_2 G_2 = R D R^T with a zeta-independent
// orthogonal R, so rho~(t) = R sigma(t) R^T with sigma_jk damped at rate
// (D_j - D_k)^2 and the sigma diagonal frozen.

struct DiagonalizerSU3 {
  static Mat R() {
    const double s2 = std::sqrt(2.0), s3 = std::sqrt(3.0), s6 = std::sqrt(6.0);
    Mat r(3, 3);
    r(0, 0) = -1.0 / s3; r(0, 1) = 1.0 / s3;  r(0, 2) = 1.0 / s3;
    r(1, 0) = 0.0;       r(1, 1) = -1.0 / s2; r(1, 2) = 1.0 / s2;
    r(2, 0) = s2 / s3;   r(2, 1) = 1.0 / s6;  r(2, 2) = 1.0 / s6;
    return r;
  }

  static std::array<double, 3> d_eigs(double zeta1, double zeta2) {
    const double s2 = std::sqrt(2.0), s6 = std::sqrt(6.0);
    return {-std::sqrt(2.0 / 3.0) * zeta2,
            (-3.0 * s2 * zeta1 + s6 * zeta2) / 6.0,
            (3.0 * s2 * zeta1 + s6 * zeta2) / 6.0};
  }

  // off-diagonal decay rates: sigma_jk ~ exp(-rate_jk * t)
  static std::array<double, 3> decay_rates(double zeta1, double zeta2) {
    const auto d = d_eigs(zeta1, zeta2);
    return {(d[0] - d[1]) * (d[0] - d[1]),   // = (zeta1 - sqrt3 zeta2)^2 / 2
            (d[0] - d[2]) * (d[0] - d[2]),   // = (zeta1 + sqrt3 zeta2)^2 / 2
            (d[1] - d[2]) * (d[1] - d[2])};  // = 2 zeta1^2
  }
};

inline ReducedDensity evolve_closed_su3(const DiagonalState& state0, double zeta1,
                                        double zeta2, double t) {
  if (state0.d != 3) throw validation_error("evolve_closed_su3: requires d = 3");
  if (!state0.normalized()) throw validation_error("evolve_closed_su3: state not normalized");
  if (t < 0.0) throw validation_error("evolve_closed_su3: t must be >= 0");

  const Mat r = DiagonalizerSU3::R();
  const DiagonalState b = b_coefficients(state0, r);
  Mat sigma = outer(b.a, b.a);
  const auto rate = DiagonalizerSU3::decay_rates(zeta1, zeta2);
  sigma(0, 1) *= std::exp(-rate[0] * t);
  sigma(1, 0) = std::conj(sigma(0, 1));
  sigma(0, 2) *= std::exp(-rate[1] * t);
  sigma(2, 0) = std::conj(sigma(0, 2));
  sigma(1, 2) *= std::exp(-rate[2] * t);
  sigma(2, 1) = std::conj(sigma(1, 2));

  ReducedDensity out;
  out.t = t;
  out.rho = r * sigma * r.transpose();
  out.rho.hermitize();
  return out;
}

inline Trajectory evolve_closed_su3_trajectory(const DiagonalState& state0, double zeta1,
                                               double zeta2, const std::vector<double>& grid) {
  Trajectory traj;
  traj.reserve(grid.size());
  for (double t : grid) traj.push_back(evolve_closed_su3(state0, zeta1, zeta2, t));
  return traj;
}

// ---------------------------------------------------------------------------
// d = 2: populations mix at rate 2 R11 toward 1/2, Re rho01 is frozen and
// Im rho01 decays at the same rate; the trace is conserved exactly.

inline ReducedDensity evolve_closed_su2(const DiagonalState& state0, double r11, double t) {
  if (state0.d != 2) throw validation_error("evolve_closed_su2: requires d = 2");
  if (!state0.normalized()) throw validation_error("evolve_closed_su2: state not normalized");
  if (r11 < 0.0) throw validation_error("evolve_closed_su2: R11 must be >= 0");

  const Mat rho0 = outer(state0.a, state0.a);
  const double p0 = rho0(0, 0).real(), q0 = rho0(1, 1).real();
  const double decay = std::exp(-2.0 * r11 * t);

  ReducedDensity out;
  out.t = t;
  out.rho = Mat(2, 2);
  out.rho(0, 0) = 0.5 * (p0 + q0) + 0.5 * (p0 - q0) * decay;
  out.rho(1, 1) = 0.5 * (p0 + q0) - 0.5 * (p0 - q0) * decay;
  out.rho(0, 1) = cplx(rho0(0, 1).real(), rho0(0, 1).imag() * decay);
  out.rho(1, 0) = std::conj(out.rho(0, 1));
  return out;
}

inline Trajectory evolve_closed_su2_trajectory(const DiagonalState& state0, double r11,
                                               const std::vector<double>& grid) {
  Trajectory traj;
  traj.reserve(grid.size());
  for (double t : grid) traj.push_back(evolve_closed_su2(state0, r11, t));
  return traj;
}

// ---------------------------------------------------------------------------
// general path: classical RK4 on the double-commutator equation, any d >= 2,
// arbitrary symmetric PSD R matrix. Each accepted step is re-Hermitized; the
// per-interval local error is estimated by step doubling.

inline constexpr double kDefaultOdeStep = 2.0 * kPi / 2000.0;
inline constexpr double kOdeLocalErrorTol = 1e-6;

namespace detail {

inline Mat dephasing_rhs(const Mat& rho, const Mat& r_matrix, const std::vector<Mat>& gs) {
  const int n = r_matrix.rows();
  Mat out(rho.rows(), rho.cols());
  for (int q = 0; q < n; ++q) {
    for (int p = 0; p < n; ++p) {
      const double w = r_matrix(q, p).real();
      if (w == 0.0) continue;
      out += (-w) * commutator(gs[static_cast<size_t>(q)],
                               commutator(gs[static_cast<size_t>(p)], rho));
    }
  }
  return out;
}

inline Mat rk4_step(const Mat& rho, double h, const Mat& r_matrix, const std::vector<Mat>& gs) {
  const Mat k1 = dephasing_rhs(rho, r_matrix, gs);
  const Mat k2 = dephasing_rhs(rho + (0.5 * h) * k1, r_matrix, gs);
  const Mat k3 = dephasing_rhs(rho + (0.5 * h) * k2, r_matrix, gs);
  const Mat k4 = dephasing_rhs(rho + h * k3, r_matrix, gs);
  Mat next = rho + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  next.hermitize();
  return next;
}

}  // namespace detail

inline Trajectory evolve_ode(const DiagonalState& state0, const Mat& r_matrix,
                             const CartanBasis& basis, const std::vector<double>& grid,
                             double max_step = kDefaultOdeStep) {
  const int d = basis.dim();
  if (state0.d != d) throw validation_error("evolve_ode: state dimension does not match basis");
  if (!state0.normalized()) throw validation_error("evolve_ode: state not normalized");
  if (r_matrix.rows() != d - 1 || r_matrix.cols() != d - 1)
    throw validation_error("evolve_ode: R matrix must be (d-1) x (d-1)");
  if ((r_matrix - r_matrix.transpose()).max_abs() > 1e-12)
    throw validation_error("evolve_ode: R matrix must be symmetric");
  if (grid.empty() || grid.front() != 0.0)
    throw validation_error("evolve_ode: grid must start at 0");
  for (size_t i = 1; i < grid.size(); ++i)
    if (grid[i] <= grid[i - 1])
      throw validation_error("evolve_ode: grid must be strictly increasing");

  std::vector<Mat> gs;
  for (int q = 1; q < d; ++q) gs.push_back(basis.coupling_matrix(q));

  Trajectory traj;
  traj.reserve(grid.size());
  Mat rho = outer(state0.a, state0.a);
  traj.push_back({grid[0], rho});

  for (size_t i = 1; i < grid.size(); ++i) {
    const double dt = grid[i] - grid[i - 1];
    const int nsub = std::max(1, static_cast<int>(std::ceil(dt / max_step)));
    const double h = dt / nsub;
    for (int s = 0; s < nsub; ++s) {
      const Mat full = detail::rk4_step(rho, h, r_matrix, gs);
      Mat half = detail::rk4_step(rho, 0.5 * h, r_matrix, gs);
      half = detail::rk4_step(half, 0.5 * h, r_matrix, gs);
      const double err = (full - half).max_abs() / 15.0;
      if (err > kOdeLocalErrorTol * std::max(1.0, rho.max_abs()))
        throw numeric_error(
            "evolve_ode: local error estimate " + std::to_string(err) +
            " exceeds 1e-6; reduce max_step to about " + std::to_string(h / 4.0));
      rho = half;
    }
    traj.push_back({grid[i], rho});
  }
  return traj;
}

// trace-preserving similarity transform into the Schroedinger picture
inline ReducedDensity interaction_to_schrodinger(const ReducedDensity& rho_prime,
                                                 const Mat& u_s) {
  const int d = rho_prime.rho.rows();
  if (u_s.rows() != d || u_s.cols() != d)
    throw validation_error("interaction_to_schrodinger: dimension mismatch");
  if ((u_s * u_s.adjoint() - Mat::identity(d)).max_abs() > 1e-10)
    throw validation_error("interaction_to_schrodinger: U_S is not unitary");
  ReducedDensity out;
  out.t = rho_prime.t;
  out.rho = u_s * rho_prime.rho * u_s.adjoint();
  return out;
}

// slowest off-diagonal decay time of the d=3 closed form (sigma_jk carries
// exp(-rate_jk t), so this is max_jk 1/rate_jk); the asymptotic-state
// extractor requires tracks longer than this
inline double slowest_decay_time_su3(double zeta1, double zeta2) {
  const auto r = DiagonalizerSU3::decay_rates(zeta1, zeta2);
  double horizon = 0.0;
  for (double rate : r)
    if (rate > 1e-15) horizon = std::max(horizon, 1.0 / rate);
  return horizon;
}

}  // namespace qudeph
