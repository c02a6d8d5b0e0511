#pragma once

// Local unitary operations generated by fundamental weights, the kinematic
// geometric phase (pure-initial-state and general mixed forms), coupling
// region classification in the (zeta1, zeta2) plane, and Weyl transport of
// whole scenarios.

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "qudeph/cartan.hpp"
#include "qudeph/linalg.hpp"
#include "qudeph/spectral.hpp"
#include "qudeph/state.hpp"

namespace qudeph {

struct undefined_phase_error : numeric_error {
  using numeric_error::numeric_error;
};

inline constexpr double kVisibilityFloor = 1e-12;

// ---------------------------------------------------------------------------
// H_S = w . T on the first qudit; U_S(t) = exp(-i t w . T) is diagonal and
// satisfies U_S(2 pi) = exp(+-2 pi i / d) I for every fundamental weight.
// Operating the second qudit instead would act on the transposed state
// matrix (Psi -> Psi U^T); only first-qudit operations are provided.

struct OperationSpec {
  int weight_index = 1;  // 1..d
  RVec weight;           // length d-1
  RVec hs_diag;          // diagonal of w . T, length d
};

inline OperationSpec make_operation(const CartanBasis& basis, int weight_index) {
  const int d = basis.dim();
  if (weight_index < 1 || weight_index > d)
    throw validation_error("weight_index: must lie in 1..d");
  OperationSpec op;
  op.weight_index = weight_index;
  op.weight = basis.weight(weight_index);
  op.hs_diag.assign(static_cast<size_t>(d), 0.0);
  for (int q = 1; q < d; ++q) {
    const RVec tq = basis.generator_diag(q);
    for (int i = 0; i < d; ++i)
      op.hs_diag[static_cast<size_t>(i)] += op.weight[static_cast<size_t>(q - 1)] * tq[static_cast<size_t>(i)];
  }
  return op;
}

inline Mat operation_hamiltonian(const OperationSpec& op) {
  Mat h(static_cast<int>(op.hs_diag.size()), static_cast<int>(op.hs_diag.size()));
  for (int i = 0; i < h.rows(); ++i) h(i, i) = op.hs_diag[static_cast<size_t>(i)];
  return h;
}

inline Mat free_unitary(const OperationSpec& op, double t) {
  const int d = static_cast<int>(op.hs_diag.size());
  Mat u(d, d);
  for (int i = 0; i < d; ++i)
    u(i, i) = std::exp(cplx(0.0, -t * op.hs_diag[static_cast<size_t>(i)]));
  return u;
}

// ---------------------------------------------------------------------------
// geometric phase series on the track grid
//
//   phi_g(t) = arg Tr[Psi'(0)^dag U_S(t) Psi'(t)]
//            + int_0^t Tr[Psi'(s)^dag H_S Psi'(s)] ds
//            + i int_0^t <Psi'|dPsi'/ds> ds        (complex amplitudes only)
//
// The unwrapped series accumulates principal-value increments between
// consecutive defined grid points; times where the visibility drops below
// 1e-12 are reported as gaps, and the principal value is kept alongside.

struct GeoPhaseSeries {
  std::vector<double> t;
  std::vector<double> unwrapped;
  std::vector<double> principal;
  std::vector<std::uint8_t> defined;
  std::vector<double> visibility;  // |Tr[Psi'(0)^dag U_S Psi']|; conditions the arg

  double at(size_t index) const {
    if (!defined[index])
      throw undefined_phase_error("geometric phase undefined at t = " + std::to_string(t[index]) +
                                  " (visibility below 1e-12)");
    return unwrapped[index];
  }
};

namespace detail {

// Im<u|du/dt> by central differences (one-sided at the ends)
inline std::vector<double> connection_integrand(const SpectralTrack& track, int branch) {
  const size_t n = track.t_grid.size();
  std::vector<double> conn(n, 0.0);
  for (size_t i = 0; i < n; ++i) {
    const size_t lo = (i == 0) ? 0 : i - 1;
    const size_t hi = (i + 1 == n) ? n - 1 : i + 1;
    const double dt = track.t_grid[hi] - track.t_grid[lo];
    const CVec u = track.branch_vector(branch, i);
    const CVec ulo = track.branch_vector(branch, lo);
    const CVec uhi = track.branch_vector(branch, hi);
    CVec du(static_cast<size_t>(track.d));
    for (int k = 0; k < track.d; ++k)
      du[static_cast<size_t>(k)] = (uhi[static_cast<size_t>(k)] - ulo[static_cast<size_t>(k)]) / dt;
    conn[i] = dot(u, du).imag();
  }
  return conn;
}

inline std::vector<double> cumulative_trapezoid(const std::vector<double>& t,
                                                const std::vector<double>& f) {
  std::vector<double> acc(t.size(), 0.0);
  for (size_t i = 1; i < t.size(); ++i)
    acc[i] = acc[i - 1] + 0.5 * (f[i] + f[i - 1]) * (t[i] - t[i - 1]);
  return acc;
}

inline bool track_is_real(const SpectralTrack& track) {
  for (const auto& m : track.vectors)
    if (m.max_imag() > 1e-12) return false;
  return true;
}

}  // namespace detail

inline GeoPhaseSeries geometric_phase_pure_series(const SpectralTrack& track,
                                                  const OperationSpec& op,
                                                  const CartanBasis& basis) {
  const size_t n = track.t_grid.size();
  const Mat hs = operation_hamiltonian(op);
  const Mat psi0 = to_matrix(DiagonalState(track.d, track.effective_vector(0)), basis);

  std::vector<cplx> vis(n);
  std::vector<double> dyn(n);
  for (size_t i = 0; i < n; ++i) {
    const Mat psi = to_matrix(DiagonalState(track.d, track.effective_vector(i)), basis);
    vis[i] = (psi0.adjoint() * free_unitary(op, track.t_grid[i]) * psi).trace();
    dyn[i] = (psi.adjoint() * hs * psi).trace().real();
  }
  const std::vector<double> dyn_int = detail::cumulative_trapezoid(track.t_grid, dyn);

  std::vector<double> conn_int(n, 0.0);
  if (!detail::track_is_real(track)) {
    const std::vector<double> conn = detail::connection_integrand(track, 0);
    conn_int = detail::cumulative_trapezoid(track.t_grid, conn);
  }

  GeoPhaseSeries out;
  out.t = track.t_grid;
  out.unwrapped.assign(n, 0.0);
  out.principal.assign(n, 0.0);
  out.defined.assign(n, 0);
  out.visibility.assign(n, 0.0);

  double acc = 0.0, last_arg = 0.0;
  bool have_last = false;
  for (size_t i = 0; i < n; ++i) {
    out.visibility[i] = std::abs(vis[i]);
    if (std::abs(vis[i]) < kVisibilityFloor) continue;
    const double a = std::arg(vis[i]);
    if (!have_last) {
      acc = a;
      have_last = true;
    } else {
      acc += wrap_angle_increment(a - last_arg);
    }
    last_arg = a;
    out.unwrapped[i] = acc + dyn_int[i] - conn_int[i];
    out.principal[i] = wrap_angle_increment(out.unwrapped[i]);
    out.defined[i] = 1;
  }
  return out;
}

inline double geometric_phase_pure(const SpectralTrack& track, const OperationSpec& op,
                                   const CartanBasis& basis, size_t time_index) {
  return geometric_phase_pure_series(track, op, basis).at(time_index);
}

// Tong form for a general mixed state:
//   phi_g = arg sum_k sqrt(eps_k(0) eps_k(tau)) <Psi_k(0)|Psi_k(tau)>
//                 exp(-int_0^tau <Psi_k|dPsi_k/dt> dt)
// with the full-picture eigenvectors Psi_k = U_S Psi'_k; for a pure initial
// state only the effective branch survives and the pure form is recovered.
inline double geometric_phase_mixed(const SpectralTrack& track, const OperationSpec& op,
                                    const CartanBasis& basis, size_t tau_index) {
  const Mat hs = operation_hamiltonian(op);
  const Mat us = free_unitary(op, track.t_grid[tau_index]);

  cplx total{};
  for (int k = 0; k < track.d; ++k) {
    const double e0 = track.eigenvalues[static_cast<size_t>(k)][0];
    const double etau = track.eigenvalues[static_cast<size_t>(k)][tau_index];
    if (e0 <= 0.0 || etau <= 0.0) continue;

    const Mat psi0 = to_matrix(DiagonalState(track.d, track.branch_vector(k, 0)), basis);
    const Mat psit = to_matrix(DiagonalState(track.d, track.branch_vector(k, tau_index)), basis);
    const cplx overlap = (psi0.adjoint() * us * psit).trace();

    // theta_k = int (Im<u_k|du_k> - <u_k|H_S|u_k>)
    std::vector<double> integrand = detail::connection_integrand(track, k);
    for (size_t i = 0; i <= tau_index; ++i) {
      const Mat psi = to_matrix(DiagonalState(track.d, track.branch_vector(k, i)), basis);
      integrand[i] -= (psi.adjoint() * hs * psi).trace().real();
    }
    double theta = 0.0;
    for (size_t i = 1; i <= tau_index; ++i)
      theta += 0.5 * (integrand[i] + integrand[i - 1]) * (track.t_grid[i] - track.t_grid[i - 1]);

    total += std::sqrt(e0 * etau) * overlap * std::exp(cplx(0.0, -theta));
  }
  if (std::abs(total) < kVisibilityFloor)
    throw undefined_phase_error("geometric_phase_mixed: vanishing argument at tau = " +
                                std::to_string(track.t_grid[tau_index]));
  return std::arg(total);
}

// ---------------------------------------------------------------------------
// coupling-region classification (d = 3): the sigma off-diagonals decay as
// exp(-A t/2), exp(-B t/2), exp(-C t/2); each open region of the coupling
// plane is dominated by the slowest exponential and is tagged by the
// fundamental weight direction it contains (A -> w3, C -> w1 anchored, B -> w2
// by elimination, reported as inferred).

enum class RateChannel { A, B, C };
enum class PatternType { a, b };

struct RegionLabel {
  std::optional<RateChannel> dominant;  // nullopt on an exact rate tie
  double rate_a = 0.0, rate_b = 0.0, rate_c = 0.0;
  int weight_label = 0;  // 0 on a boundary
  bool label_inferred = false;
};

inline RegionLabel classify_region(double zeta1, double zeta2) {
  if (zeta1 == 0.0 && zeta2 == 0.0)
    throw validation_error("classify_region: (0,0) has no decay rates");
  const double s3 = std::sqrt(3.0);
  RegionLabel r;
  r.rate_a = (zeta1 - s3 * zeta2) * (zeta1 - s3 * zeta2);
  r.rate_b = (zeta1 + s3 * zeta2) * (zeta1 + s3 * zeta2);
  r.rate_c = 4.0 * zeta1 * zeta1;

  const double scale = std::max({r.rate_a, r.rate_b, r.rate_c, 1e-300});
  const double tie_tol = 1e-12 * scale;
  const std::array<std::pair<double, RateChannel>, 3> rates = {
      std::make_pair(r.rate_a, RateChannel::A), std::make_pair(r.rate_b, RateChannel::B),
      std::make_pair(r.rate_c, RateChannel::C)};
  int imin = 0;
  for (int i = 1; i < 3; ++i)
    if (rates[static_cast<size_t>(i)].first < rates[static_cast<size_t>(imin)].first) imin = i;
  for (int i = 0; i < 3; ++i) {
    if (i == imin) continue;
    if (std::abs(rates[static_cast<size_t>(i)].first - rates[static_cast<size_t>(imin)].first) <= tie_tol)
      return r;  // boundary: no strict minimizer
  }
  r.dominant = rates[static_cast<size_t>(imin)].second;
  switch (*r.dominant) {
    case RateChannel::A: r.weight_label = 3; break;
    case RateChannel::C: r.weight_label = 1; break;
    case RateChannel::B:
      r.weight_label = 2;
      r.label_inferred = true;
      break;
  }
  return r;
}

// pattern (b): operating weight matches the region label and decoherence
// destroys the stepwise pattern; pattern (a): the fractional staircase
// survives, moving to pi jumps at late times
inline PatternType pattern_type(const RegionLabel& region, const OperationSpec& op) {
  if (!region.dominant)
    throw validation_error("pattern_type: boundary region is indeterminate");
  return region.weight_label == op.weight_index ? PatternType::b : PatternType::a;
}

// ---------------------------------------------------------------------------
// Weyl transport of a scenario: reflect the couplings, permute the operating
// weight, and reflect the q-sector of the initial amplitudes (a_0 is fixed).
// All observable series of the transported scenario coincide with the
// originals, with the geometric phase taken against the mapped weight.

struct WeylTransported {
  std::array<double, 2> zeta{};
  int weight_index = 1;
  CVec amplitudes;
};

inline WeylTransported weyl_transport(const CartanBasis& basis, std::array<double, 2> zeta,
                                      int weight_index, const CVec& amplitudes,
                                      const RootVector& alpha) {
  if (basis.dim() != 3) throw validation_error("weyl_transport: requires d = 3");
  WeylTransported out;

  const RVec z = weyl_reflect({zeta[0], zeta[1]}, alpha);
  out.zeta = {z[0], z[1]};

  const auto perm = weyl_map_weights(basis, alpha);
  out.weight_index = perm[static_cast<size_t>(weight_index)];

  out.amplitudes = amplitudes;
  RVec re(amplitudes.size() - 1), im(amplitudes.size() - 1);
  for (size_t q = 1; q < amplitudes.size(); ++q) {
    re[q - 1] = amplitudes[q].real();
    im[q - 1] = amplitudes[q].imag();
  }
  const RVec re_r = weyl_reflect(re, alpha);
  const RVec im_r = weyl_reflect(im, alpha);
  for (size_t q = 1; q < amplitudes.size(); ++q)
    out.amplitudes[q] = cplx(re_r[q - 1], im_r[q - 1]);
  return out;
}

}  // namespace qudeph
