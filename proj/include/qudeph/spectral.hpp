#pragma once

// Continuous eigen-decomposition tracking of rho~(t): branch matching by
// maximum overlap with phase fixed to a real positive overlap, projection
// onto quasi-degenerate subspaces where the spectrum collapses, and the
// derived time series (effective concurrence, purity, kink report,
// asymptotic effective state).

#include <optional>
#include <vector>

#include "qudeph/dephasing.hpp"
#include "qudeph/linalg.hpp"
#include "qudeph/state.hpp"

namespace qudeph {

struct SpectralTrack {
  int d = 0;
  std::vector<double> t_grid;
  std::vector<std::vector<double>> eigenvalues;  // [branch][time]; branch 0 = effective
  std::vector<Mat> vectors;                      // per time, column k = branch k
  int effective_index = 0;
  std::vector<int> degeneracy_events;  // time indices where clusters were projected through
  double min_continuity_overlap = 1.0;

  CVec branch_vector(int branch, size_t time_index) const {
    CVec u(static_cast<size_t>(d));
    for (int i = 0; i < d; ++i) u[static_cast<size_t>(i)] = vectors[time_index](i, branch);
    return u;
  }
  CVec effective_vector(size_t time_index) const { return branch_vector(0, time_index); }
};

struct KinkReport {
  double t_peak = 0.0;
  double c_peak = 0.0;
  double t_min_gap = 0.0;
  double gap_min = 0.0;
  size_t peak_index = 0;
  size_t min_gap_index = 0;
  size_t separation_steps = 0;
};

namespace detail {

// cluster boundaries of an ascending eigenvalue list; entries closer than tol
// belong to one quasi-degenerate cluster
inline std::vector<std::vector<int>> eigen_clusters(const std::vector<double>& w, double tol) {
  std::vector<std::vector<int>> clusters;
  std::vector<int> cur{0};
  for (size_t m = 1; m < w.size(); ++m) {
    if (w[m] - w[m - 1] < tol) {
      cur.push_back(static_cast<int>(m));
    } else {
      clusters.push_back(cur);
      cur = {static_cast<int>(m)};
    }
  }
  clusters.push_back(cur);
  return clusters;
}

inline void phase_fix(CVec& v, const CVec& reference) {
  const cplx ov = dot(reference, v);
  const double mag = std::abs(ov);
  if (mag > 1e-14) {
    const cplx ph = std::conj(ov) / mag;
    for (auto& x : v) x *= ph;
  }
}

}  // namespace detail

inline constexpr double kClusterTol = 1e-8;
inline constexpr double kOverlapTieTol = 1e-6;

inline SpectralTrack track_spectrum(const Trajectory& trajectory, const DiagonalState& a0) {
  if (trajectory.size() < 2) throw validation_error("track_spectrum: trajectory too short");
  const int d = trajectory.front().rho.rows();
  if (a0.d != d) throw validation_error("track_spectrum: state dimension mismatch");
  if ((trajectory.front().rho - outer(a0.a, a0.a)).max_abs() > 1e-9)
    throw validation_error("track_spectrum: trajectory must start at the pure state a a^dag");

  const size_t n = trajectory.size();
  SpectralTrack track;
  track.d = d;
  track.t_grid.resize(n);
  track.eigenvalues.assign(static_cast<size_t>(d), std::vector<double>(n, 0.0));
  track.vectors.assign(n, Mat(d, d));

  // working branch state: current vectors (columns) and eigenvalues
  std::vector<CVec> u(static_cast<size_t>(d));
  std::vector<double> eps(static_cast<size_t>(d));

  // t = 0: effective branch is the eigenvalue-1 vector, pinned to a exactly;
  // the degenerate zero cluster gets a provisional basis, re-seeded from the
  // first resolved step below
  {
    const auto es = eigh(trajectory[0].rho);
    std::vector<int> order(static_cast<size_t>(d));
    for (int k = 0; k < d; ++k) order[static_cast<size_t>(k)] = d - 1 - k;  // descending
    int eff = 0;
    double best = -1.0;
    for (int k = 0; k < d; ++k) {
      CVec v(static_cast<size_t>(d));
      for (int i = 0; i < d; ++i) v[static_cast<size_t>(i)] = es.vectors(i, order[static_cast<size_t>(k)]);
      const double ov = std::abs(dot(a0.a, v));
      if (ov > best) {
        best = ov;
        eff = k;
      }
    }
    std::swap(order[0], order[static_cast<size_t>(eff)]);
    for (int k = 0; k < d; ++k) {
      CVec v(static_cast<size_t>(d));
      for (int i = 0; i < d; ++i) v[static_cast<size_t>(i)] = es.vectors(i, order[static_cast<size_t>(k)]);
      eps[static_cast<size_t>(k)] = es.values[static_cast<size_t>(order[static_cast<size_t>(k)])];
      u[static_cast<size_t>(k)] = std::move(v);
    }
    u[0] = a0.a;  // exact pin, eigenvalue 1 up to trajectory tolerance
  }

  const auto store = [&](size_t idx) {
    track.t_grid[idx] = trajectory[idx].t;
    double sum = 0.0;
    for (int k = 0; k < d; ++k) {
      track.eigenvalues[static_cast<size_t>(k)][idx] = eps[static_cast<size_t>(k)];
      sum += eps[static_cast<size_t>(k)];
      if (eps[static_cast<size_t>(k)] < -1e-9 || eps[static_cast<size_t>(k)] > 1.0 + 1e-9)
        throw numeric_error("track_spectrum: eigenvalue outside [0,1]");
      for (int i = 0; i < d; ++i) track.vectors[idx](i, k) = u[static_cast<size_t>(k)][static_cast<size_t>(i)];
    }
    if (std::abs(sum - 1.0) > 1e-9)
      throw numeric_error("track_spectrum: eigenvalues do not sum to 1");
  };
  store(0);

  for (size_t idx = 1; idx < n; ++idx) {
    if (trajectory[idx].t <= trajectory[idx - 1].t)
      throw validation_error("track_spectrum: grid must be strictly increasing");
    const auto es = eigh(trajectory[idx].rho);

    std::vector<CVec> v(static_cast<size_t>(d));
    for (int m = 0; m < d; ++m) {
      CVec col(static_cast<size_t>(d));
      for (int i = 0; i < d; ++i) col[static_cast<size_t>(i)] = es.vectors(i, m);
      v[static_cast<size_t>(m)] = std::move(col);
    }

    // greedy global assignment on |overlap|
    std::vector<std::vector<double>> ov(static_cast<size_t>(d), std::vector<double>(static_cast<size_t>(d)));
    for (int k = 0; k < d; ++k)
      for (int m = 0; m < d; ++m)
        ov[static_cast<size_t>(k)][static_cast<size_t>(m)] =
            std::abs(dot(u[static_cast<size_t>(k)], v[static_cast<size_t>(m)]));
    std::vector<int> assign(static_cast<size_t>(d), -1);
    std::vector<bool> used_k(static_cast<size_t>(d), false), used_m(static_cast<size_t>(d), false);
    bool ambiguous = false;
    for (int pick = 0; pick < d; ++pick) {
      int bk = -1, bm = -1;
      double best = -1.0;
      for (int k = 0; k < d; ++k) {
        if (used_k[static_cast<size_t>(k)]) continue;
        for (int m = 0; m < d; ++m) {
          if (used_m[static_cast<size_t>(m)]) continue;
          if (ov[static_cast<size_t>(k)][static_cast<size_t>(m)] > best) {
            best = ov[static_cast<size_t>(k)][static_cast<size_t>(m)];
            bk = k;
            bm = m;
          }
        }
      }
      // ambiguity: a second unused column matches bk nearly as well and is
      // spectrally degenerate with the winner
      for (int m = 0; m < d; ++m) {
        if (m == bm || used_m[static_cast<size_t>(m)]) continue;
        if (std::abs(ov[static_cast<size_t>(bk)][static_cast<size_t>(m)] - best) < kOverlapTieTol &&
            std::abs(es.values[static_cast<size_t>(m)] - es.values[static_cast<size_t>(bm)]) < kClusterTol)
          ambiguous = true;
      }
      assign[static_cast<size_t>(bk)] = bm;
      used_k[static_cast<size_t>(bk)] = true;
      used_m[static_cast<size_t>(bm)] = true;
    }

    // quasi-degenerate clusters: continue the previous vectors by projection
    const auto clusters = detail::eigen_clusters(es.values, kClusterTol);
    bool projected = false;
    std::vector<CVec> next(static_cast<size_t>(d));
    std::vector<double> next_eps(static_cast<size_t>(d));
    for (const auto& cluster : clusters) {
      if (cluster.size() == 1) {
        const int m = cluster[0];
        int k = 0;
        while (assign[static_cast<size_t>(k)] != m) ++k;
        next[static_cast<size_t>(k)] = v[static_cast<size_t>(m)];
        detail::phase_fix(next[static_cast<size_t>(k)], u[static_cast<size_t>(k)]);
        next_eps[static_cast<size_t>(k)] = es.values[static_cast<size_t>(m)];
        continue;
      }
      projected = true;
      std::vector<int> branches;
      for (int k = 0; k < d; ++k)
        for (int m : cluster)
          if (assign[static_cast<size_t>(k)] == m) branches.push_back(k);
      // project previous branch vectors onto the cluster subspace, then
      // orthonormalize in branch order
      std::vector<CVec> done;
      for (int k : branches) {
        CVec p(static_cast<size_t>(d), cplx{});
        for (int m : cluster) {
          const cplx c = dot(v[static_cast<size_t>(m)], u[static_cast<size_t>(k)]);
          for (int i = 0; i < d; ++i) p[static_cast<size_t>(i)] += c * v[static_cast<size_t>(m)][static_cast<size_t>(i)];
        }
        for (const auto& q : done) {
          const cplx c = dot(q, p);
          for (int i = 0; i < d; ++i) p[static_cast<size_t>(i)] -= c * q[static_cast<size_t>(i)];
        }
        normalize(p);
        detail::phase_fix(p, u[static_cast<size_t>(k)]);
        done.push_back(p);
        next[static_cast<size_t>(k)] = std::move(p);
        next_eps[static_cast<size_t>(k)] = es.values[static_cast<size_t>(assign[static_cast<size_t>(k)])];
      }
    }

    if (ambiguous || projected) {
      if (track.degeneracy_events.empty() || track.degeneracy_events.back() != static_cast<int>(idx))
        track.degeneracy_events.push_back(static_cast<int>(idx));
    }

    for (int k = 0; k < d; ++k) {
      const double cont = std::abs(dot(u[static_cast<size_t>(k)], next[static_cast<size_t>(k)]));
      track.min_continuity_overlap = std::min(track.min_continuity_overlap, cont);
    }
    u = std::move(next);
    eps = std::move(next_eps);

    // re-seed the provisional t=0 basis of an exactly degenerate initial
    // cluster so branch continuity holds from the first step
    if (idx == 1) {
      const auto es0 = eigh(trajectory[0].rho);
      const auto clusters0 = detail::eigen_clusters(es0.values, kClusterTol);
      for (const auto& cluster : clusters0) {
        if (cluster.size() == 1) continue;
        std::vector<CVec> basis;
        for (int m : cluster) {
          CVec col(static_cast<size_t>(d));
          for (int i = 0; i < d; ++i) col[static_cast<size_t>(i)] = es0.vectors(i, m);
          basis.push_back(std::move(col));
        }
        // identify branches living in this cluster (by eigenvalue at t=0)
        std::vector<int> branches;
        for (int k = 0; k < d; ++k) {
          if (k == 0) continue;  // effective branch is pinned to a exactly
          const double e0 = track.eigenvalues[static_cast<size_t>(k)][0];
          if (std::abs(e0 - es0.values[static_cast<size_t>(cluster[0])]) < kClusterTol)
            branches.push_back(k);
        }
        if (branches.size() != cluster.size()) continue;
        std::vector<CVec> done;
        for (int k : branches) {
          CVec p(static_cast<size_t>(d), cplx{});
          for (const auto& b : basis) {
            const cplx c = dot(b, u[static_cast<size_t>(k)]);
            for (int i = 0; i < d; ++i) p[static_cast<size_t>(i)] += c * b[static_cast<size_t>(i)];
          }
          for (const auto& q : done) {
            const cplx c = dot(q, p);
            for (int i = 0; i < d; ++i) p[static_cast<size_t>(i)] -= c * q[static_cast<size_t>(i)];
          }
          normalize(p);
          detail::phase_fix(p, u[static_cast<size_t>(k)]);
          done.push_back(p);
          for (int i = 0; i < d; ++i) track.vectors[0](i, k) = p[static_cast<size_t>(i)];
        }
      }
      // recompute continuity floor across the re-seeded step
      track.min_continuity_overlap = 1.0;
      for (int k = 0; k < d; ++k) {
        const CVec u0 = track.branch_vector(k, 0);
        const double cont = std::abs(dot(u0, u[static_cast<size_t>(k)]));
        track.min_continuity_overlap = std::min(track.min_continuity_overlap, cont);
      }
    }

    store(idx);
  }
  return track;
}

// C(t) of the effective branch through its matrix representation
inline std::vector<double> effective_concurrence_series(const SpectralTrack& track,
                                                        const CartanBasis& basis) {
  std::vector<double> c(track.t_grid.size());
  for (size_t i = 0; i < c.size(); ++i) {
    DiagonalState s(track.d, track.effective_vector(i));
    c[i] = concurrence(to_matrix(s, basis));
  }
  return c;
}

// gamma(t) = Tr[rho~^2], computed directly from the trajectory
inline std::vector<double> purity_series(const Trajectory& trajectory) {
  std::vector<double> g(trajectory.size());
  for (size_t i = 0; i < g.size(); ++i)
    g[i] = (trajectory[i].rho * trajectory[i].rho).trace().real();
  return g;
}

// same quantity from the tracked spectrum, sum_k eps_k^2
inline std::vector<double> purity_from_track(const SpectralTrack& track) {
  std::vector<double> g(track.t_grid.size(), 0.0);
  for (size_t i = 0; i < g.size(); ++i)
    for (int k = 0; k < track.d; ++k) {
      const double e = track.eigenvalues[static_cast<size_t>(k)][i];
      g[i] += e * e;
    }
  return g;
}

inline std::vector<double> effective_gap_series(const SpectralTrack& track) {
  std::vector<double> gap(track.t_grid.size());
  for (size_t i = 0; i < gap.size(); ++i) {
    double g = 1e300;
    for (int k = 1; k < track.d; ++k)
      g = std::min(g, std::abs(track.eigenvalues[0][i] - track.eigenvalues[static_cast<size_t>(k)][i]));
    gap[i] = g;
  }
  return gap;
}

inline constexpr double kKinkProminence = 1e-3;

// interior local maximum of C(t) (3-point stencil, prominence >= 1e-3) and
// the closest approach of any other branch to the effective eigenvalue;
// empty when C has no qualifying interior peak
inline std::optional<KinkReport> detect_kink(const SpectralTrack& track,
                                             const std::vector<double>& c_series) {
  const size_t n = c_series.size();
  if (n != track.t_grid.size()) throw validation_error("detect_kink: series length mismatch");
  if (n < 3) return std::nullopt;

  size_t best = 0;
  double best_c = -1.0;
  for (size_t i = 1; i + 1 < n; ++i) {
    if (!(c_series[i] > c_series[i - 1] && c_series[i] >= c_series[i + 1])) continue;
    double valley_left = c_series[i];
    for (size_t j = i; j-- > 0;) {
      if (c_series[j] > c_series[i]) break;
      valley_left = std::min(valley_left, c_series[j]);
    }
    double valley_right = c_series[i];
    for (size_t j = i + 1; j < n; ++j) {
      if (c_series[j] > c_series[i]) break;
      valley_right = std::min(valley_right, c_series[j]);
    }
    const double prominence = c_series[i] - std::max(valley_left, valley_right);
    if (prominence < kKinkProminence) continue;
    if (c_series[i] > best_c) {
      best_c = c_series[i];
      best = i;
    }
  }
  if (best_c < 0.0) return std::nullopt;

  const auto gap = effective_gap_series(track);
  size_t imin = 0;
  for (size_t i = 1; i < n; ++i)
    if (gap[i] < gap[imin]) imin = i;

  KinkReport rep;
  rep.peak_index = best;
  rep.t_peak = track.t_grid[best];
  rep.c_peak = best_c;
  rep.min_gap_index = imin;
  rep.t_min_gap = track.t_grid[imin];
  rep.gap_min = gap[imin];
  rep.separation_steps = best > imin ? best - imin : imin - best;
  return rep;
}

struct AsymptoticState {
  DiagonalState state;
  double max_deviation = 0.0;  // over the averaging window, max-abs per component
};

// trailing-window average of the effective eigenvector; required_horizon is
// the slowest decay time of the scenario (0 disables the check)
inline AsymptoticState asymptotic_effective_state(const SpectralTrack& track, double window,
                                                  double required_horizon = 0.0) {
  const double t_end = track.t_grid.back();
  if (t_end < required_horizon)
    throw numeric_error("asymptotic_effective_state: track horizon " + std::to_string(t_end) +
                        " is below the slowest decay time " + std::to_string(required_horizon));
  if (!(window > 0.0) || window >= t_end)
    throw validation_error("asymptotic_effective_state: window must lie inside the track");

  const double t_from = t_end - window;
  CVec acc(static_cast<size_t>(track.d), cplx{});
  size_t count = 0;
  for (size_t i = 0; i < track.t_grid.size(); ++i) {
    if (track.t_grid[i] < t_from) continue;
    const CVec u = track.effective_vector(i);
    for (int k = 0; k < track.d; ++k) acc[static_cast<size_t>(k)] += u[static_cast<size_t>(k)];
    ++count;
  }
  if (count < 2) throw numeric_error("asymptotic_effective_state: window contains too few samples");
  for (auto& x : acc) x /= static_cast<double>(count);
  normalize(acc);

  double dev = 0.0;
  for (size_t i = 0; i < track.t_grid.size(); ++i) {
    if (track.t_grid[i] < t_from) continue;
    const CVec u = track.effective_vector(i);
    for (int k = 0; k < track.d; ++k)
      dev = std::max(dev, std::abs(u[static_cast<size_t>(k)] - acc[static_cast<size_t>(k)]));
  }
  AsymptoticState out;
  out.state = DiagonalState(track.d, std::move(acc));
  out.max_deviation = dev;
  return out;
}

}  // namespace qudeph
