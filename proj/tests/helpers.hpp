#pragma once

#include <random>

#include "qudeph/linalg.hpp"
#include "qudeph/state.hpp"

namespace qudeph::testing {

inline DiagonalState random_real_state(int d, std::mt19937& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  CVec a(static_cast<size_t>(d));
  for (auto& x : a) x = gauss(rng);
  normalize(a);
  return DiagonalState(d, std::move(a));
}

inline DiagonalState random_complex_state(int d, std::mt19937& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  CVec a(static_cast<size_t>(d));
  for (auto& x : a) x = cplx(gauss(rng), gauss(rng));
  normalize(a);
  return DiagonalState(d, std::move(a));
}

inline Mat random_hermitian(int d, std::mt19937& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Mat m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = cplx(gauss(rng), gauss(rng));
  m = 0.5 * (m + m.adjoint());
  return m;
}

}  // namespace qudeph::testing
