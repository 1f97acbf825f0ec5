#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "error.hpp"
#include "rng.hpp"

namespace gsynch {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

/// Largest |A - A*| entry.
inline double hermitian_defect(const CMatrix& a) {
  if (a.rows() != a.cols()) return INFINITY;
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

inline bool is_hermitian(const CMatrix& a, double tol = 0.0) {
  return a.rows() == a.cols() && (a.rows() == 0 || hermitian_defect(a) <= tol);
}

inline double unitarity_defect(const CMatrix& u) {
  const auto n = u.rows();
  return (u * u.adjoint() - CMatrix::Identity(n, n)).cwiseAbs().maxCoeff();
}

/// Exact L-th roots of unity at the points where cos/sin are exactly
/// representable, so real-type frequencies stay real.
inline cplx root_of_unity(std::int64_t order, std::int64_t power) {
  std::int64_t m = power % order;
  if (m < 0) m += order;
  if (m == 0) return {1.0, 0.0};
  if (2 * m == order) return {-1.0, 0.0};
  if (4 * m == order) return {0.0, 1.0};
  if (4 * m == 3 * order) return {0.0, -1.0};
  const double angle = 2.0 * M_PI * static_cast<double>(m) / static_cast<double>(order);
  return {std::cos(angle), std::sin(angle)};
}

/// All eigenvalues of a Hermitian matrix in ascending order.
inline RVector hermitian_eigenvalues(const CMatrix& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    fail(ErrorKind::numerical_nonconvergence, "Hermitian eigensolver failed");
  return solver.eigenvalues();
}

struct LanczosOptions {
  double tol = 1e-8;
  int max_iter = 600;
  /// Below this size the dense solver is used.
  Eigen::Index dense_cutoff = 96;
};

namespace detail {

inline CVector deterministic_start(Eigen::Index n) {
  CVector v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const std::uint64_t h = splitmix64(static_cast<std::uint64_t>(i) + 1);
    const double re = static_cast<double>(h >> 11) * 0x1.0p-53 - 0.5;
    const double im = static_cast<double>(splitmix64(h) >> 11) * 0x1.0p-53 - 0.5;
    v(i) = {re + 1e-3, im};
  }
  return v.normalized();
}

}  // namespace detail

/// Largest eigenvalue of a Hermitian matrix.
///
/// Small inputs go to the dense solver. Larger ones run Lanczos with full
/// reorthogonalisation from a fixed start vector; the Ritz value is accepted
/// once min(r, r^2/gap) drops below tol * max(1, |theta|), where r is the
/// residual norm of the top Ritz pair and gap its distance to the next one.
inline double top_eigenvalue(const CMatrix& h, const LanczosOptions& opt = {}) {
  const Eigen::Index n = h.rows();
  if (n == 0 || h.cols() != n) fail(ErrorKind::invalid_parameter, "top_eigenvalue: matrix must be square and non-empty");
  if (hermitian_defect(h) > 1e-8) fail(ErrorKind::invalid_parameter, "top_eigenvalue: matrix is not Hermitian");
  if (n <= opt.dense_cutoff) return hermitian_eigenvalues(h).maxCoeff();

  const int kmax = static_cast<int>(std::min<Eigen::Index>(n, opt.max_iter));
  CMatrix basis(n, kmax + 1);
  std::vector<double> alpha;
  std::vector<double> beta;
  basis.col(0) = detail::deterministic_start(n);
  CVector w(n);
  double last_theta = 0.0;

  for (int k = 0; k < kmax; ++k) {
    w.noalias() = h * basis.col(k);
    const double a = basis.col(k).dot(w).real();
    alpha.push_back(a);
    // two passes of classical Gram-Schmidt against the whole basis
    for (int pass = 0; pass < 2; ++pass) {
      const CVector coeff = basis.leftCols(k + 1).adjoint() * w;
      w.noalias() -= basis.leftCols(k + 1) * coeff;
    }
    const double b = w.norm();

    const bool check = (k + 1) % 5 == 0 || k + 1 == kmax || b < 1e-13;
    if (check) {
      const int m = k + 1;
      RVector diag = Eigen::Map<const RVector>(alpha.data(), m);
      RVector sub(std::max(m - 1, 1));
      for (int i = 0; i + 1 < m; ++i) sub(i) = beta[i];
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
      tri.computeFromTridiagonal(diag, sub.head(std::max(m - 1, 0)), Eigen::ComputeEigenvectors);
      const double theta = tri.eigenvalues()(m - 1);
      const double resid = std::abs(b * tri.eigenvectors()(m - 1, m - 1));
      const double gap = m > 1 ? theta - tri.eigenvalues()(m - 2) : INFINITY;
      const double err = std::min(resid, gap > 0 ? resid * resid / gap : resid);
      const double scale = std::max(1.0, std::abs(theta));
      if (err < opt.tol * scale || b < 1e-13 || m == n) return theta;
      last_theta = theta;
    }
    beta.push_back(b);
    basis.col(k + 1) = w / b;
  }
  (void)last_theta;
  fail(ErrorKind::numerical_nonconvergence,
       "top_eigenvalue: Lanczos did not converge in " + std::to_string(kmax) + " iterations");
}

/// Kahan-Babuska compensated accumulator.
class KahanSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace gsynch
