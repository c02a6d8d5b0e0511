#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "qudeph/spectral.hpp"

using namespace qudeph;

namespace {
const double s2 = std::sqrt(2.0), s3 = std::sqrt(3.0), s6 = std::sqrt(6.0);

SpectralTrack tracked(const DiagonalState& s, double z1, double z2, double t_max, int steps) {
  const auto grid = make_grid(t_max, steps);
  return track_spectrum(evolve_closed_su3_trajectory(s, z1, z2, grid), s);
}
}  // namespace

TEST_CASE("separable |11> stays pure: u(t) = a, eps(t) = 1") {
  const DiagonalState sep(3, {1.0 / s3, 1.0 / s2, 1.0 / s6});
  const auto track = tracked(sep, 0.3, 0.3, 4.0 * kPi, 250);
  for (size_t i = 0; i < track.t_grid.size(); i += 25) {
    CHECK(track.eigenvalues[0][i] == doctest::Approx(1.0).epsilon(1e-12));
    const CVec u = track.effective_vector(i);
    for (int k = 0; k < 3; ++k)
      CHECK(std::abs(u[static_cast<size_t>(k)] - sep.a[static_cast<size_t>(k)]) < 1e-9);
  }
}

TEST_CASE("frozen couplings keep the effective branch at a with zero companions") {
  const DiagonalState s = DiagonalState::shorthand(3, 0.97);
  const auto track = tracked(s, 0.0, 0.0, 2.0 * kPi, 150);
  for (size_t i = 0; i < track.t_grid.size(); i += 10) {
    CHECK(track.eigenvalues[0][i] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(track.eigenvalues[1][i]) < 1e-10);
    CHECK(std::abs(track.eigenvalues[2][i]) < 1e-10);
    const CVec u = track.effective_vector(i);
    for (int k = 0; k < 3; ++k)
      CHECK(std::abs(u[static_cast<size_t>(k)] - s.a[static_cast<size_t>(k)]) < 1e-9);
  }
  // the exactly degenerate zero cluster is resolved by projection throughout
  CHECK(!track.degeneracy_events.empty());
  CHECK(track.min_continuity_overlap > 0.999);
}

TEST_CASE("MES effective branch reaches the two-qubit coefficients") {
  const auto track = tracked(DiagonalState::mes(3), 0.3, 0.3, 32.0 * kPi, 3200);
  const CVec u = track.effective_vector(track.t_grid.size() - 1);
  CHECK(std::abs(u[0].real() - std::sqrt(2.0 / 3.0)) < 1e-5);
  CHECK(std::abs(u[1].real() - (-0.5)) < 1e-5);
  CHECK(std::abs(u[2].real() - (-1.0 / std::sqrt(12.0))) < 1e-5);
  CHECK(track.min_continuity_overlap > 0.9);
}

TEST_CASE("track reconstruction and orthonormality on a generic scenario") {
  const DiagonalState s = DiagonalState::shorthand(3, 0.93);
  const auto grid = make_grid(6.0 * kPi, 400);
  const auto traj = evolve_closed_su3_trajectory(s, 0.25, -0.15, grid);
  const auto track = track_spectrum(traj, s);
  for (size_t i = 0; i < grid.size(); i += 20) {
    Mat rec(3, 3);
    for (int k = 0; k < 3; ++k) {
      const CVec u = track.branch_vector(k, i);
      rec += track.eigenvalues[static_cast<size_t>(k)][i] * outer(u, u);
    }
    CHECK((rec - traj[i].rho).max_abs() < 1e-9);
    const Mat gram = track.vectors[i].adjoint() * track.vectors[i];
    CHECK((gram - Mat::identity(3)).max_abs() < 1e-9);
  }
  CHECK(track.min_continuity_overlap > 0.9);
}

TEST_CASE("purity: track route equals the direct trace route") {
  const DiagonalState s = DiagonalState::shorthand(3, 0.95);
  const auto grid = make_grid(8.0 * kPi, 500);
  const auto traj = evolve_closed_su3_trajectory(s, 0.3, 0.3, grid);
  const auto track = track_spectrum(traj, s);
  const auto direct = purity_series(traj);
  const auto viaeig = purity_from_track(track);
  CHECK(direct[0] == doctest::Approx(1.0).epsilon(1e-12));
  for (size_t i = 0; i < direct.size(); i += 10)
    CHECK(std::abs(direct[i] - viaeig[i]) < 1e-10);
}

TEST_CASE("MES purity falls to the sector floor 1/3") {
  const auto grid = make_grid(80.0 * kPi, 2000);
  const auto traj = evolve_closed_su3_trajectory(DiagonalState::mes(3), 0.3, 0.3, grid);
  const auto purity = purity_series(traj);
  CHECK(std::abs(purity.back() - 1.0 / 3.0) < 1e-4);
  for (size_t i = 1; i < purity.size(); ++i) CHECK(purity[i] <= purity[i - 1] + 1e-10);
}

TEST_CASE("effective concurrence: start value, MES asymptote, decay regime") {
  const CartanBasis basis(3);

  const auto mes_track = tracked(DiagonalState::mes(3), 0.3, 0.3, 32.0 * kPi, 3200);
  const auto c_mes = effective_concurrence_series(mes_track, basis);
  CHECK(c_mes.front() == doctest::Approx(2.0 / s3).epsilon(1e-12));
  CHECK(std::abs(c_mes.back() - 1.0) < 1e-6);

  const auto dec_track = tracked(DiagonalState::shorthand(3, 0.9), 0.3, 0.3, 12.0 * kPi, 1200);
  const auto c_dec = effective_concurrence_series(dec_track, basis);
  CHECK(std::abs(c_dec.front() - 0.9) < 5e-3);
  CHECK(c_dec.back() < 0.05);

  const auto frozen = tracked(DiagonalState::shorthand(3, 0.9), 0.0, 0.0, 2.0 * kPi, 200);
  const auto c_frozen = effective_concurrence_series(frozen, basis);
  for (double c : c_frozen) CHECK(c == doctest::Approx(c_frozen.front()).epsilon(1e-10));
}

TEST_CASE("detect_kink finds the 0.995 kink and stays silent on monotone decay") {
  const CartanBasis basis(3);

  const auto track995 = tracked(DiagonalState::shorthand(3, 0.995), 0.3, 0.3, 12.0 * kPi, 4000);
  const auto c995 = effective_concurrence_series(track995, basis);
  const auto kink = detect_kink(track995, c995);
  REQUIRE(kink.has_value());
  CHECK(kink->t_peak > 9.0 * kPi);
  CHECK(kink->t_peak < 10.0 * kPi);
  CHECK(kink->t_min_gap > 9.0 * kPi);
  CHECK(kink->t_min_gap < 10.0 * kPi);
  CHECK(kink->gap_min < 0.01);
  CHECK(kink->c_peak == doctest::Approx(1.1507).epsilon(1e-3));

  const auto track90 = tracked(DiagonalState::shorthand(3, 0.9), 0.3, 0.3, 12.0 * kPi, 1500);
  CHECK(!detect_kink(track90, effective_concurrence_series(track90, basis)).has_value());

  const auto frozen = tracked(DiagonalState::shorthand(3, 0.995), 0.0, 0.0, 2.0 * kPi, 200);
  CHECK(!detect_kink(frozen, effective_concurrence_series(frozen, basis)).has_value());
}

TEST_CASE("asymptotic effective state: generic initial data lands on a column of R") {
  const auto track = tracked(DiagonalState::shorthand(3, 0.9), 0.3, 0.3, 32.0 * kPi, 2000);
  const double horizon = slowest_decay_time_su3(0.3, 0.3);
  const auto asym = asymptotic_effective_state(track, 0.1 * 32.0 * kPi, horizon);
  CHECK(std::abs(asym.state.a[0].real() - 1.0 / s3) < 1e-6);
  CHECK(std::abs(asym.state.a[1].real() - 1.0 / s2) < 1e-6);
  CHECK(std::abs(asym.state.a[2].real() - 1.0 / s6) < 1e-6);
  CHECK(asym.max_deviation < 1e-4);

  const CartanBasis basis(3);
  CHECK(concurrence(to_matrix(asym.state, basis)) < 1e-5);

  const auto short_track = tracked(DiagonalState::shorthand(3, 0.9), 0.3, 0.3, 2.0 * kPi, 150);
  CHECK_THROWS_AS(asymptotic_effective_state(short_track, kPi, horizon), numeric_error);
}

TEST_CASE("MES branch concurrences tend to {1, 0, 1} with the expected vectors") {
  const CartanBasis basis(3);
  const auto track = tracked(DiagonalState::mes(3), 0.3, 0.3, 32.0 * kPi, 3200);
  const size_t last = track.t_grid.size() - 1;

  const DiagonalState eff(3, track.effective_vector(last));
  CHECK(concurrence(to_matrix(eff, basis)) == doctest::Approx(1.0).epsilon(1e-5));

  // companions: one drains into |11> (C = 0), the other into (|33>-|22>)/sqrt2 (C = 1)
  std::vector<double> cs;
  std::vector<CVec> us;
  for (int k = 1; k <= 2; ++k) {
    us.push_back(track.branch_vector(k, last));
    cs.push_back(concurrence(to_matrix(DiagonalState(3, us.back()), basis)));
  }
  const int sepidx = cs[0] < cs[1] ? 0 : 1;
  const int mesidx = 1 - sepidx;
  CHECK(cs[static_cast<size_t>(sepidx)] < 1e-3);
  CHECK(cs[static_cast<size_t>(mesidx)] == doctest::Approx(1.0).epsilon(1e-3));

  // |11> has coefficients (1/s3, 1/s2, 1/s6) up to sign
  const CVec& usep = us[static_cast<size_t>(sepidx)];
  const double sgn = usep[0].real() > 0 ? 1.0 : -1.0;
  CHECK(std::abs(sgn * usep[0].real() - 1.0 / s3) < 1e-3);
  CHECK(std::abs(sgn * usep[1].real() - 1.0 / s2) < 1e-3);
  CHECK(std::abs(sgn * usep[2].real() - 1.0 / s6) < 1e-3);
  // (|33>-|22>)/sqrt2 has coefficients (0, -+1/2, +-s3/2)
  const CVec& umes = us[static_cast<size_t>(mesidx)];
  CHECK(std::abs(umes[0].real()) < 1e-3);
  CHECK(std::abs(std::abs(umes[1].real()) - 0.5) < 1e-3);
  CHECK(std::abs(std::abs(umes[2].real()) - s3 / 2.0) < 1e-3);
}

TEST_CASE("track_spectrum validates its inputs") {
  const DiagonalState mes = DiagonalState::mes(3);
  const auto grid = make_grid(kPi, 50);
  auto traj = evolve_closed_su3_trajectory(DiagonalState::shorthand(3, 0.9), 0.3, 0.3, grid);
  CHECK_THROWS_AS(track_spectrum(traj, mes), validation_error);  // wrong initial state

  auto ok = evolve_closed_su3_trajectory(mes, 0.3, 0.3, grid);
  ok[10].t = ok[9].t;
  CHECK_THROWS_AS(track_spectrum(ok, mes), validation_error);  // grid not increasing
}
