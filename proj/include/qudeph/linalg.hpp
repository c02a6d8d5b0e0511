#pragma once

// Small dense complex linear algebra for d x d problems (d <= ~8):
// column-major matrix type, Hermitian Jacobi eigensolver, helpers.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace qudeph {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

// ---------------------------------------------------------------------------
// error types (mapped to CLI exit codes: validation=2, numeric=3, io=4)

struct validation_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct numeric_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct io_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------

class Mat {
 public:
  Mat() = default;
  Mat(int rows, int cols) : r_(rows), c_(cols), a_(static_cast<size_t>(rows) * cols) {}

  static Mat identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }
  static Mat diag(const std::vector<cplx>& d) {
    Mat m(static_cast<int>(d.size()), static_cast<int>(d.size()));
    for (int i = 0; i < m.rows(); ++i) m(i, i) = d[static_cast<size_t>(i)];
    return m;
  }
  static Mat diag_real(const std::vector<double>& d) {
    Mat m(static_cast<int>(d.size()), static_cast<int>(d.size()));
    for (int i = 0; i < m.rows(); ++i) m(i, i) = d[static_cast<size_t>(i)];
    return m;
  }

  int rows() const { return r_; }
  int cols() const { return c_; }

  cplx& operator()(int i, int j) { return a_[static_cast<size_t>(j) * r_ + i]; }
  const cplx& operator()(int i, int j) const { return a_[static_cast<size_t>(j) * r_ + i]; }

  Mat operator+(const Mat& o) const {
    Mat m(r_, c_);
    for (size_t k = 0; k < a_.size(); ++k) m.a_[k] = a_[k] + o.a_[k];
    return m;
  }
  Mat operator-(const Mat& o) const {
    Mat m(r_, c_);
    for (size_t k = 0; k < a_.size(); ++k) m.a_[k] = a_[k] - o.a_[k];
    return m;
  }
  Mat operator*(const Mat& o) const {
    Mat m(r_, o.c_);
    for (int j = 0; j < o.c_; ++j)
      for (int k = 0; k < c_; ++k) {
        const cplx f = o(k, j);
        if (f == cplx{}) continue;
        for (int i = 0; i < r_; ++i) m(i, j) += (*this)(i, k) * f;
      }
    return m;
  }
  Mat operator*(cplx s) const {
    Mat m(r_, c_);
    for (size_t k = 0; k < a_.size(); ++k) m.a_[k] = a_[k] * s;
    return m;
  }
  Mat operator*(double s) const { return *this * cplx(s, 0.0); }
  Mat& operator+=(const Mat& o) {
    for (size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
    return *this;
  }

  Mat adjoint() const {
    Mat m(c_, r_);
    for (int i = 0; i < r_; ++i)
      for (int j = 0; j < c_; ++j) m(j, i) = std::conj((*this)(i, j));
    return m;
  }
  Mat transpose() const {
    Mat m(c_, r_);
    for (int i = 0; i < r_; ++i)
      for (int j = 0; j < c_; ++j) m(j, i) = (*this)(i, j);
    return m;
  }

  cplx trace() const {
    cplx t{};
    for (int i = 0; i < std::min(r_, c_); ++i) t += (*this)(i, i);
    return t;
  }

  double max_abs() const {
    double m = 0.0;
    for (const auto& v : a_) m = std::max(m, std::abs(v));
    return m;
  }
  double frobenius_norm() const {
    double s = 0.0;
    for (const auto& v : a_) s += std::norm(v);
    return std::sqrt(s);
  }
  double max_imag() const {
    double m = 0.0;
    for (const auto& v : a_) m = std::max(m, std::abs(v.imag()));
    return m;
  }

  bool is_hermitian(double tol) const {
    if (r_ != c_) return false;
    for (int i = 0; i < r_; ++i)
      for (int j = i; j < c_; ++j)
        if (std::abs((*this)(i, j) - std::conj((*this)(j, i))) > tol) return false;
    return true;
  }

  void hermitize() {
    for (int i = 0; i < r_; ++i)
      for (int j = i; j < c_; ++j) {
        const cplx v = 0.5 * ((*this)(i, j) + std::conj((*this)(j, i)));
        (*this)(i, j) = v;
        (*this)(j, i) = std::conj(v);
      }
  }

 private:
  int r_ = 0, c_ = 0;
  std::vector<cplx> a_;
};

inline Mat operator*(double s, const Mat& m) { return m * s; }

inline Mat commutator(const Mat& a, const Mat& b) { return a * b - b * a; }

// ---------------------------------------------------------------------------
// complex vectors

using CVec = std::vector<cplx>;
using RVec = std::vector<double>;

inline cplx dot(const CVec& x, const CVec& y) {  // <x|y>, conjugate-linear in x
  cplx s{};
  for (size_t i = 0; i < x.size(); ++i) s += std::conj(x[i]) * y[i];
  return s;
}

inline double norm2(const CVec& x) { return std::sqrt(std::abs(dot(x, x))); }

inline void normalize(CVec& x) {
  const double n = norm2(x);
  if (n == 0.0) throw numeric_error("cannot normalize zero vector");
  for (auto& v : x) v /= n;
}

inline double rdot(const RVec& x, const RVec& y) {
  return std::inner_product(x.begin(), x.end(), y.begin(), 0.0);
}

inline double rnorm(const RVec& x) { return std::sqrt(rdot(x, x)); }

inline Mat outer(const CVec& x, const CVec& y) {  // |x><y|
  Mat m(static_cast<int>(x.size()), static_cast<int>(y.size()));
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) m(i, j) = x[static_cast<size_t>(i)] * std::conj(y[static_cast<size_t>(j)]);
  return m;
}

inline CVec mat_vec(const Mat& m, const CVec& x) {
  CVec y(static_cast<size_t>(m.rows()));
  for (int j = 0; j < m.cols(); ++j)
    for (int i = 0; i < m.rows(); ++i) y[static_cast<size_t>(i)] += m(i, j) * x[static_cast<size_t>(j)];
  return y;
}

// ---------------------------------------------------------------------------
// Hermitian eigensolver: cyclic Jacobi with complex rotations.
// Eigenvalues ascending, V columns are the corresponding orthonormal vectors.

struct EigenSystem {
  std::vector<double> values;
  Mat vectors;  // column k <-> values[k]
};

inline EigenSystem eigh(Mat a, double tol = 1e-15) {
  const int n = a.rows();
  if (n != a.cols()) throw numeric_error("eigh: matrix not square");
  if (!a.is_hermitian(1e-9 * std::max(1.0, a.max_abs())))
    throw numeric_error("eigh: matrix not Hermitian");
  a.hermitize();

  Mat v = Mat::identity(n);
  const double scale = std::max(a.max_abs(), 1e-300);

  for (int sweep = 0; sweep < 60; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off = std::max(off, std::abs(a(p, q)));
    if (off <= tol * scale) break;

    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const cplx apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag <= 1e-2 * tol * scale) continue;
        const cplx phase = apq / mag;  // a_pq = mag * phase
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double tau = (aqq - app) / (2.0 * mag);
        const double t = (tau >= 0.0) ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                      : 1.0 / (tau - std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const cplx s = t * c * phase;  // rotation: p' = c p - conj(s) q ; q' = s p + c q

        for (int k = 0; k < n; ++k) {  // A <- J^dag A J on rows/cols p,q
          const cplx akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - std::conj(s) * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const cplx apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = std::conj(s) * apk + c * aqk;
        }
        for (int k = 0; k < n; ++k) {
          const cplx vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - std::conj(s) * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
      }
    }
  }

  EigenSystem es;
  es.values.resize(static_cast<size_t>(n));
  std::vector<int> order(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    es.values[static_cast<size_t>(i)] = a(i, i).real();
    order[static_cast<size_t>(i)] = i;
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](int i, int j) { return a(i, i).real() < a(j, j).real(); });
  std::vector<double> sorted(static_cast<size_t>(n));
  Mat vs(n, n);
  for (int k = 0; k < n; ++k) {
    sorted[static_cast<size_t>(k)] = a(order[static_cast<size_t>(k)], order[static_cast<size_t>(k)]).real();
    for (int i = 0; i < n; ++i) vs(i, k) = v(i, order[static_cast<size_t>(k)]);
  }
  es.values = std::move(sorted);
  es.vectors = std::move(vs);
  return es;
}

// principal-value angle difference mapped into (-pi, pi]
inline double wrap_angle_increment(double d) {
  while (d <= -kPi) d += 2.0 * kPi;
  while (d > kPi) d -= 2.0 * kPi;
  return d;
}

}  // namespace qudeph
