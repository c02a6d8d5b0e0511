#pragma once

// Cartan-sector algebra of su(d): diagonal generators T_q, fundamental
// weights, roots, the symmetric structure tensor g and the coupling
// matrices G_q that drive the dephasing dynamics.
//
// Index convention: basis index 0 is T_0 = I/sqrt(d), indices 1..d-1 are the
// diagonal generators in the standard order (first q diagonal entries equal,
// then -q, then zeros). Everything is built eagerly and immutable afterwards.

#include <vector>

#include "qudeph/linalg.hpp"

namespace qudeph {

struct RootVector {
  int i = 0, j = 0;        // level indices, 1-based, i != j
  RVec components;         // w_i - w_j, length d-1
  bool positive() const { return i < j; }
};

class CartanBasis {
 public:
  explicit CartanBasis(int d) : d_(d) {
    if (d < 2) throw validation_error("CartanBasis: dimension must be >= 2");
    build_generators();
    build_weights();
    build_roots();
    build_structure_tensor();
    build_coupling_matrices();
  }

  int dim() const { return d_; }

  // T_q, q = 1..d-1 (real diagonal, Tr(T_q T_p) = delta_qp)
  const std::vector<RVec>& generators_diag() const { return t_diag_; }
  RVec generator_diag(int q) const { return t_diag_.at(static_cast<size_t>(q - 1)); }
  Mat generator(int q) const {
    RVec dg = generator_diag(q);
    Mat m(d_, d_);
    for (int i = 0; i < d_; ++i) m(i, i) = dg[static_cast<size_t>(i)];
    return m;
  }
  Mat t0() const {
    Mat m = Mat::identity(d_);
    return m * (1.0 / std::sqrt(static_cast<double>(d_)));
  }
  // basis element by Cartan index 0..d-1 (0 -> T_0)
  Mat basis_element(int qbar) const { return qbar == 0 ? t0() : generator(qbar); }

  // fundamental weights w_1..w_d (1-based accessor), each of length d-1
  const std::vector<RVec>& weights() const { return weights_; }
  const RVec& weight(int i) const { return weights_.at(static_cast<size_t>(i - 1)); }

  const std::vector<RootVector>& roots() const { return roots_; }
  RootVector root(int i, int j) const {
    for (const auto& r : roots_)
      if (r.i == i && r.j == j) return r;
    throw validation_error("root(i,j): no such root");
  }

  // g_{qbar pbar rbar} = Tr(T_qbar T_pbar T_rbar), indices 0..d-1
  double g(int q, int p, int r) const {
    return g_[(static_cast<size_t>(q) * d_ + p) * d_ + r];
  }
  // G_q, q = 1..d-1: d x d real symmetric, (G_q)_{rs} = g_{q r s}
  const std::vector<Mat>& coupling_matrices() const { return big_g_; }
  const Mat& coupling_matrix(int q) const { return big_g_.at(static_cast<size_t>(q - 1)); }

 private:
  void build_generators() {
    t_diag_.resize(static_cast<size_t>(d_ - 1));
    for (int q = 1; q < d_; ++q) {
      RVec dg(static_cast<size_t>(d_), 0.0);
      const double norm = 1.0 / std::sqrt(static_cast<double>(q) * (q + 1));
      for (int i = 0; i < q; ++i) dg[static_cast<size_t>(i)] = norm;
      dg[static_cast<size_t>(q)] = -q * norm;
      t_diag_[static_cast<size_t>(q - 1)] = std::move(dg);
    }
  }

  // Weight labels follow the two-qutrit conventions used downstream:
  // w_1 is the weight of the highest level, w_d of the lowest, i.e. the
  // reverse of the per-level reading of the T_q diagonals. For d = 3 this
  // gives w_1 = (0, -2/sqrt6), w_2 = (-1/sqrt2, 1/sqrt6), w_3 = (1/sqrt2, 1/sqrt6).
  void build_weights() {
    weights_.resize(static_cast<size_t>(d_));
    for (int i = 1; i <= d_; ++i) {
      const int level = d_ - i;  // 0-based matrix row
      RVec w(static_cast<size_t>(d_ - 1));
      for (int q = 1; q < d_; ++q)
        w[static_cast<size_t>(q - 1)] = t_diag_[static_cast<size_t>(q - 1)][static_cast<size_t>(level)];
      weights_[static_cast<size_t>(i - 1)] = std::move(w);
    }
  }

  void build_roots() {
    for (int i = 1; i <= d_; ++i)
      for (int j = 1; j <= d_; ++j) {
        if (i == j) continue;
        RootVector r;
        r.i = i;
        r.j = j;
        r.components.resize(static_cast<size_t>(d_ - 1));
        for (int q = 0; q < d_ - 1; ++q)
          r.components[static_cast<size_t>(q)] =
              weights_[static_cast<size_t>(i - 1)][static_cast<size_t>(q)] -
              weights_[static_cast<size_t>(j - 1)][static_cast<size_t>(q)];
        roots_.push_back(std::move(r));
      }
  }

  // all T_qbar are diagonal, so the trace is a sum over diagonal products
  void build_structure_tensor() {
    std::vector<RVec> diag(static_cast<size_t>(d_));
    diag[0] = RVec(static_cast<size_t>(d_), 1.0 / std::sqrt(static_cast<double>(d_)));
    for (int q = 1; q < d_; ++q) diag[static_cast<size_t>(q)] = t_diag_[static_cast<size_t>(q - 1)];

    g_.assign(static_cast<size_t>(d_) * d_ * d_, 0.0);
    for (int a = 0; a < d_; ++a)
      for (int b = 0; b < d_; ++b)
        for (int c = 0; c < d_; ++c) {
          double s = 0.0;
          for (int i = 0; i < d_; ++i)
            s += diag[static_cast<size_t>(a)][static_cast<size_t>(i)] *
                 diag[static_cast<size_t>(b)][static_cast<size_t>(i)] *
                 diag[static_cast<size_t>(c)][static_cast<size_t>(i)];
          g_[(static_cast<size_t>(a) * d_ + b) * d_ + c] = s;
        }
  }

  void build_coupling_matrices() {
    for (int q = 1; q < d_; ++q) {
      Mat m(d_, d_);
      for (int r = 0; r < d_; ++r)
        for (int s = 0; s < d_; ++s) m(r, s) = g(q, r, s);
      big_g_.push_back(std::move(m));
    }
  }

  int d_;
  std::vector<RVec> t_diag_;
  std::vector<RVec> weights_;
  std::vector<RootVector> roots_;
  std::vector<double> g_;
  std::vector<Mat> big_g_;
};

inline CartanBasis build_cartan_basis(int d) { return CartanBasis(d); }

// recompute g from the generator matrices; the cached tensor must agree
inline std::vector<double> structure_tensor(const CartanBasis& basis) {
  const int d = basis.dim();
  std::vector<double> g(static_cast<size_t>(d) * d * d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int c = 0; c < d; ++c)
        g[(static_cast<size_t>(a) * d + b) * d + c] =
            (basis.basis_element(a) * basis.basis_element(b) * basis.basis_element(c))
                .trace()
                .real();
  return g;
}

// xi -> xi - 2 (xi . ahat) ahat, reflection across the line orthogonal to alpha
inline RVec weyl_reflect(const RVec& xi, const RootVector& alpha) {
  const double n2 = rdot(alpha.components, alpha.components);
  if (n2 < 1e-24) throw validation_error("weyl_reflect: zero root vector");
  const double proj = 2.0 * rdot(xi, alpha.components) / n2;
  RVec out(xi.size());
  for (size_t k = 0; k < xi.size(); ++k) out[k] = xi[k] - proj * alpha.components[k];
  return out;
}

// permutation p with reflect(w_i) = w_{p[i]}; for root alpha_ij this is the
// transposition i <-> j with all other weights fixed
inline std::vector<int> weyl_map_weights(const CartanBasis& basis, const RootVector& alpha) {
  const int d = basis.dim();
  std::vector<int> perm(static_cast<size_t>(d) + 1, 0);  // 1-based
  for (int i = 1; i <= d; ++i) {
    const RVec r = weyl_reflect(basis.weight(i), alpha);
    int match = 0;
    for (int j = 1; j <= d; ++j) {
      double dev = 0.0;
      for (size_t k = 0; k < r.size(); ++k)
        dev = std::max(dev, std::abs(r[k] - basis.weight(j)[k]));
      if (dev < 1e-10) {
        match = j;
        break;
      }
    }
    if (match == 0) throw numeric_error("weyl_map_weights: reflected weight is not a weight");
    perm[static_cast<size_t>(i)] = match;
  }
  return perm;
}

}  // namespace qudeph
