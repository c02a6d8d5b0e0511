#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "qudeph/cartan.hpp"

using namespace qudeph;

namespace {
const double s2 = std::sqrt(2.0), s3 = std::sqrt(3.0), s6 = std::sqrt(6.0);
}

TEST_CASE("diagonal generators match the d=3 Gell-Mann pair and the qubit case") {
  const CartanBasis b3(3);
  const RVec t1 = b3.generator_diag(1);
  const RVec t2 = b3.generator_diag(2);
  CHECK(t1[0] == doctest::Approx(1.0 / s2).epsilon(1e-15));
  CHECK(t1[1] == doctest::Approx(-1.0 / s2).epsilon(1e-15));
  CHECK(t1[2] == doctest::Approx(0.0));
  CHECK(t2[0] == doctest::Approx(1.0 / s6).epsilon(1e-15));
  CHECK(t2[1] == doctest::Approx(1.0 / s6).epsilon(1e-15));
  CHECK(t2[2] == doctest::Approx(-2.0 / s6).epsilon(1e-15));

  const CartanBasis b2(2);
  CHECK(b2.generator_diag(1)[0] == doctest::Approx(1.0 / s2));
  CHECK(b2.generator_diag(1)[1] == doctest::Approx(-1.0 / s2));
}

TEST_CASE("generator normalization Tr(T_q T_p) = delta_qp for d in 2..6") {
  for (int d = 2; d <= 6; ++d) {
    const CartanBasis b(d);
    for (int q = 1; q < d; ++q)
      for (int p = 1; p < d; ++p) {
        const double tr = (b.generator(q) * b.generator(p)).trace().real();
        CHECK(std::abs(tr - (q == p ? 1.0 : 0.0)) < 1e-12);
      }
  }
}

TEST_CASE("weights: d=3 values and the general Gram relations") {
  const CartanBasis b3(3);
  CHECK(b3.weight(1)[0] == doctest::Approx(0.0));
  CHECK(b3.weight(1)[1] == doctest::Approx(-2.0 / s6).epsilon(1e-15));
  CHECK(b3.weight(2)[0] == doctest::Approx(-1.0 / s2).epsilon(1e-15));
  CHECK(b3.weight(2)[1] == doctest::Approx(1.0 / s6).epsilon(1e-15));
  CHECK(b3.weight(3)[0] == doctest::Approx(1.0 / s2).epsilon(1e-15));
  CHECK(b3.weight(3)[1] == doctest::Approx(1.0 / s6).epsilon(1e-15));

  for (int d = 2; d <= 6; ++d) {
    const CartanBasis b(d);
    RVec sum(static_cast<size_t>(d - 1), 0.0);
    for (int i = 1; i <= d; ++i)
      for (int q = 0; q < d - 1; ++q) sum[static_cast<size_t>(q)] += b.weight(i)[static_cast<size_t>(q)];
    for (double s : sum) CHECK(std::abs(s) < 1e-12);
    for (int i = 1; i <= d; ++i)
      for (int j = 1; j <= d; ++j) {
        const double want = (i == j) ? (d - 1.0) / d : -1.0 / d;
        CHECK(std::abs(rdot(b.weight(i), b.weight(j)) - want) < 1e-12);
      }
  }
}

TEST_CASE("roots: alpha_ij = w_i - w_j, squared length 2, positive iff i<j") {
  for (int d = 2; d <= 5; ++d) {
    const CartanBasis b(d);
    CHECK(b.roots().size() == static_cast<size_t>(d * (d - 1)));
    for (const auto& r : b.roots()) {
      CHECK(std::abs(rdot(r.components, r.components) - 2.0) < 1e-12);
      CHECK(r.positive() == (r.i < r.j));
      for (int q = 0; q < d - 1; ++q)
        CHECK(r.components[static_cast<size_t>(q)] ==
              doctest::Approx(b.weight(r.i)[static_cast<size_t>(q)] -
                              b.weight(r.j)[static_cast<size_t>(q)])
                  .epsilon(1e-15));
    }
  }
}

TEST_CASE("structure tensor: d=3 paper values, symmetry, qubit vanishing") {
  const CartanBasis b3(3);
  CHECK(b3.g(2, 1, 1) == doctest::Approx(1.0 / s6).epsilon(1e-14));
  CHECK(b3.g(1, 1, 2) == doctest::Approx(1.0 / s6).epsilon(1e-14));
  CHECK(b3.g(2, 2, 2) == doctest::Approx(-1.0 / s6).epsilon(1e-14));
  CHECK(b3.g(1, 1, 1) == doctest::Approx(0.0));
  CHECK(b3.g(2, 1, 2) == doctest::Approx(0.0));
  CHECK(b3.g(1, 2, 2) == doctest::Approx(0.0));

  const CartanBasis b2(2);
  CHECK(b2.g(1, 1, 1) == doctest::Approx(0.0));

  for (int d = 2; d <= 6; ++d) {
    const CartanBasis b(d);
    for (int q = 1; q < d; ++q) {
      CHECK(std::abs(b.g(q, 0, 0)) < 1e-12);
      for (int p = 1; p < d; ++p)
        CHECK(std::abs(b.g(q, 0, p) - (q == p ? 1.0 / std::sqrt(double(d)) : 0.0)) < 1e-12);
    }
    for (int a = 0; a < d; ++a)
      for (int bb = 0; bb < d; ++bb)
        for (int c = 0; c < d; ++c) {
          const double v = b.g(a, bb, c);
          CHECK(std::abs(v - b.g(a, c, bb)) < 1e-12);
          CHECK(std::abs(v - b.g(bb, a, c)) < 1e-12);
          CHECK(std::abs(v - b.g(bb, c, a)) < 1e-12);
          CHECK(std::abs(v - b.g(c, a, bb)) < 1e-12);
          CHECK(std::abs(v - b.g(c, bb, a)) < 1e-12);
        }
  }
}

TEST_CASE("structure_tensor recomputation agrees with the cached tensor") {
  for (int d : {2, 3, 5}) {
    const CartanBasis b(d);
    const auto g = structure_tensor(b);
    for (int a = 0; a < d; ++a)
      for (int bb = 0; bb < d; ++bb)
        for (int c = 0; c < d; ++c)
          CHECK(std::abs(g[(static_cast<size_t>(a) * d + bb) * d + c] - b.g(a, bb, c)) < 1e-14);
  }
}

TEST_CASE("operator identity T_q T_p = sum_r g_qpr T_r over the diagonal algebra") {
  for (int d = 2; d <= 6; ++d) {
    const CartanBasis b(d);
    for (int q = 0; q < d; ++q)
      for (int p = 0; p < d; ++p) {
        const Mat lhs = b.basis_element(q) * b.basis_element(p);
        Mat rhs(d, d);
        for (int r = 0; r < d; ++r) rhs += b.g(q, p, r) * b.basis_element(r);
        CHECK((lhs - rhs).max_abs() < 1e-12);
      }
  }
}

TEST_CASE("coupling matrices match the d=3 and d=2 displays") {
  const CartanBasis b3(3);
  const Mat& g1 = b3.coupling_matrix(1);
  const Mat& g2 = b3.coupling_matrix(2);
  CHECK(g1(0, 0).real() == doctest::Approx(0.0));
  CHECK(g1(0, 1).real() == doctest::Approx(1.0 / s3).epsilon(1e-14));
  CHECK(g1(0, 2).real() == doctest::Approx(0.0));
  CHECK(g1(1, 2).real() == doctest::Approx(1.0 / s6).epsilon(1e-14));
  CHECK(g1(1, 1).real() == doctest::Approx(0.0));
  CHECK(g2(0, 2).real() == doctest::Approx(1.0 / s3).epsilon(1e-14));
  CHECK(g2(1, 1).real() == doctest::Approx(1.0 / s6).epsilon(1e-14));
  CHECK(g2(2, 2).real() == doctest::Approx(-1.0 / s6).epsilon(1e-14));
  CHECK(g2(0, 1).real() == doctest::Approx(0.0));
  for (int q = 1; q <= 2; ++q)
    CHECK((b3.coupling_matrix(q) - b3.coupling_matrix(q).transpose()).max_abs() < 1e-15);

  const CartanBasis b2(2);
  const Mat& h1 = b2.coupling_matrix(1);
  CHECK(h1(0, 0).real() == doctest::Approx(0.0));
  CHECK(h1(0, 1).real() == doctest::Approx(1.0 / s2).epsilon(1e-14));
  CHECK(h1(1, 0).real() == doctest::Approx(1.0 / s2).epsilon(1e-14));
  CHECK(h1(1, 1).real() == doctest::Approx(0.0));
}

TEST_CASE("weyl_reflect: anchored value, involution, norm, fixed line") {
  const CartanBasis b(3);
  // ahat = (1/2, sqrt3/2) spans the alpha_31 direction
  const RootVector alpha = b.root(3, 1);
  const RVec xi{0.3, 0.3};
  const RVec r = weyl_reflect(xi, alpha);
  CHECK(r[0] == doctest::Approx(0.15 - 0.15 * s3).epsilon(1e-12));            // -0.10980762...
  CHECK(r[1] == doctest::Approx(0.3 - (0.3 + 0.3 * s3) * s3 / 2).epsilon(1e-12));  // -0.40980762...

  std::mt19937 rng(7);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (int rep = 0; rep < 50; ++rep) {
    const RVec x{uni(rng), uni(rng)};
    for (const auto& root : b.roots()) {
      const RVec once = weyl_reflect(x, root);
      const RVec twice = weyl_reflect(once, root);
      CHECK(std::abs(once[0] * once[0] + once[1] * once[1] - (x[0] * x[0] + x[1] * x[1])) < 1e-12);
      CHECK(std::abs(twice[0] - x[0]) < 1e-12);
      CHECK(std::abs(twice[1] - x[1]) < 1e-12);
    }
  }

  // a vector on the reflection line is fixed; the unit normal is negated
  const RVec ahat{0.5, s3 / 2.0};
  const RVec parallel{-ahat[1], ahat[0]};
  const RVec fixed = weyl_reflect(parallel, alpha);
  CHECK(fixed[0] == doctest::Approx(parallel[0]).epsilon(1e-13));
  CHECK(fixed[1] == doctest::Approx(parallel[1]).epsilon(1e-13));
  const RVec flipped = weyl_reflect(ahat, alpha);
  CHECK(flipped[0] == doctest::Approx(-ahat[0]).epsilon(1e-13));
  CHECK(flipped[1] == doctest::Approx(-ahat[1]).epsilon(1e-13));

  RootVector zero;
  zero.components = {0.0, 0.0};
  CHECK_THROWS_AS(weyl_reflect(xi, zero), validation_error);
}

TEST_CASE("weyl_map_weights: every root acts as the transposition (i j)") {
  for (int d = 2; d <= 5; ++d) {
    const CartanBasis b(d);
    for (const auto& root : b.roots()) {
      const auto perm = weyl_map_weights(b, root);
      for (int i = 1; i <= d; ++i) {
        const int expect = (i == root.i) ? root.j : (i == root.j) ? root.i : i;
        CHECK(perm[static_cast<size_t>(i)] == expect);
      }
    }
  }
}

TEST_CASE("ladder matrices satisfy [T_q, E_alpha] = alpha_q E_alpha") {
  // E for the root alpha_ij has its single unit entry at the matrix slot of
  // the (i, j) weight pair; with weight labels counted from the highest
  // level, that slot is (d - i, d - j) in 0-based indices
  for (int d : {2, 3, 4}) {
    const CartanBasis b(d);
    for (const auto& root : b.roots()) {
      Mat e(d, d);
      e(d - root.i, d - root.j) = 1.0;
      for (int q = 1; q < d; ++q) {
        const Mat comm = commutator(b.generator(q), e);
        const Mat want = e * root.components[static_cast<size_t>(q - 1)];
        CHECK((comm - want).max_abs() < 1e-14);
      }
    }
  }
}

TEST_CASE("invalid dimension is rejected") {
  CHECK_THROWS_AS(CartanBasis(1), validation_error);
  CHECK_THROWS_AS(build_cartan_basis(0), validation_error);
}
