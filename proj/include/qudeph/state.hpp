#pragma once

// Two-qudit states restricted to the MES + Cartan diagonal sector: amplitude
// vectors a_qbar over {|T_0>, |T_q>}, the equivalent d x d matrix picture, and
// the entanglement measures I_p and the I-concurrence.

#include <vector>

#include "qudeph/cartan.hpp"
#include "qudeph/linalg.hpp"

namespace qudeph {

struct DiagonalState {
  int d = 0;
  CVec a;  // length d, amplitude on |T_0> first, then |T_1>..|T_{d-1}>

  DiagonalState() = default;
  DiagonalState(int dim, CVec amps) : d(dim), a(std::move(amps)) {
    if (static_cast<int>(a.size()) != d)
      throw validation_error("DiagonalState: amplitude count must equal d");
  }

  static DiagonalState mes(int d) {
    CVec a(static_cast<size_t>(d), cplx{});
    a[0] = 1.0;
    return DiagonalState(d, std::move(a));
  }

  // a_1 = a_2 = ... = sqrt((1-a0^2)/(d-1)); d=3 is the two-qutrit family
  static DiagonalState shorthand(int d, double a0) {
    if (a0 < 0.0 || a0 > 1.0)
      throw validation_error("initial.a0: must lie in [0,1]");
    CVec a(static_cast<size_t>(d), cplx{});
    a[0] = a0;
    const double rest = std::sqrt((1.0 - a0 * a0) / (d - 1));
    for (int q = 1; q < d; ++q) a[static_cast<size_t>(q)] = rest;
    return DiagonalState(d, std::move(a));
  }

  double norm() const { return norm2(a); }
  bool normalized(double tol = 1e-9) const { return std::abs(norm() - 1.0) < tol; }
  bool is_real(double tol = 1e-12) const {
    for (const auto& v : a)
      if (std::abs(v.imag()) > tol) return false;
    return true;
  }
};

// Psi = a_0 T_0 + sum_q a_q T_q  (diagonal d x d, Tr(Psi Psi^dag) = 1)
using StateMatrix = Mat;

inline StateMatrix to_matrix(const DiagonalState& state, const CartanBasis& basis) {
  if (state.d != basis.dim())
    throw validation_error("to_matrix: state dimension does not match basis");
  Mat psi = basis.t0() * state.a[0];
  for (int q = 1; q < state.d; ++q) psi += basis.generator(q) * state.a[static_cast<size_t>(q)];
  return psi;
}

// I_p = Tr[(Psi^dag Psi)^p], exposed for p = 1..d; higher orders are fixed by
// the degree-d characteristic polynomial of Psi^dag Psi and add nothing
inline double invariant_Ip(const StateMatrix& psi, int p) {
  if (p < 1) throw validation_error("invariant_Ip: p must be >= 1");
  if (p > psi.rows()) throw validation_error("invariant_Ip: p must not exceed d");
  const Mat m = psi.adjoint() * psi;
  Mat acc = m;
  for (int k = 1; k < p; ++k) acc = acc * m;
  return acc.trace().real();
}

// I-concurrence C = sqrt(2 (1 - I_2)); clamped at 0 against roundoff
inline double concurrence(const StateMatrix& psi) {
  const double i2 = invariant_Ip(psi, 2);
  return std::sqrt(std::max(0.0, 2.0 * (1.0 - i2)));
}

// b = R^T a for an orthogonal rotation R (the dephasing diagonalizer)
inline DiagonalState b_coefficients(const DiagonalState& state, const Mat& r_matrix) {
  const int d = state.d;
  if (r_matrix.rows() != d || r_matrix.cols() != d)
    throw validation_error("b_coefficients: R matrix dimension mismatch");
  const Mat gram = r_matrix.transpose() * r_matrix;
  if ((gram - Mat::identity(d)).max_abs() > 1e-10)
    throw validation_error("b_coefficients: R matrix is not orthogonal");
  CVec b(static_cast<size_t>(d), cplx{});
  for (int k = 0; k < d; ++k)
    for (int i = 0; i < d; ++i)
      b[static_cast<size_t>(k)] += r_matrix(i, k) * state.a[static_cast<size_t>(i)];
  return DiagonalState(d, std::move(b));
}

}  // namespace qudeph
