// Small dense complex kernel shared by every precoder in the simulator.
//
// All matrices here are at most a handful of rows/columns, so everything is
// dynamic-size Eigen and templated on the expression type; callers normally
// pass CMatrix (complex<double>) but complex<float> or long double work too.
#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace relaysim {

template <typename Real>
using CMatrixT = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using CVectorT = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;

using CMatrix = CMatrixT<double>;
using CVector = CVectorT<double>;
using RVector = Eigen::VectorXd;
using Complex = std::complex<double>;

// Raised when a Gram matrix HH^H is numerically singular; signals a
// degenerate channel draw or a rank-deficient user selection.
class SingularChannel : public std::runtime_error {
 public:
  explicit SingularChannel(const std::string& what) : std::runtime_error(what) {}
};

// Reciprocal condition estimate of HH^H below which a channel is rejected.
inline constexpr double kMinGramRcond = 1e-12;

// Right pseudo-inverse W = H^H (H H^H)^{-1} of a full-row-rank H.
//
// Solved through a Cholesky factorization of the Gram matrix followed by one
// step of iterative refinement, so H*W = I holds to a few ulps times cond(H)
// rather than cond(H)^2.
template <typename Derived>
CMatrixT<typename Eigen::NumTraits<typename Derived::Scalar>::Real> rightPseudoInverse(
    const Eigen::MatrixBase<Derived>& h) {
  using Real = typename Eigen::NumTraits<typename Derived::Scalar>::Real;
  using Mat = CMatrixT<Real>;

  if (h.rows() < 1 || h.rows() > h.cols()) {
    throw std::invalid_argument("rightPseudoInverse: need 1 <= rows <= cols, got " +
                                std::to_string(h.rows()) + "x" + std::to_string(h.cols()));
  }
  const Mat hm = h.template cast<std::complex<Real>>();
  const Mat gram = hm * hm.adjoint();
  const Eigen::LLT<Mat> llt(gram);
  if (llt.info() != Eigen::Success || !(llt.rcond() >= Real(kMinGramRcond))) {
    throw SingularChannel("Gram matrix is numerically singular");
  }
  const auto n = gram.rows();
  const Mat identity = Mat::Identity(n, n);
  Mat x = llt.solve(identity);
  x += llt.solve(identity - gram * x);
  return hm.adjoint() * x;
}

// Squared Euclidean norm of every column of W.
template <typename Derived>
Eigen::Matrix<typename Eigen::NumTraits<typename Derived::Scalar>::Real, Eigen::Dynamic, 1>
columnSquaredNorms(const Eigen::MatrixBase<Derived>& w) {
  if (w.size() == 0) {
    throw std::invalid_argument("columnSquaredNorms: empty matrix");
  }
  return w.colwise().squaredNorm().transpose();
}

// max_{k,l} |A_kl - I_kl| for a square A.
template <typename Derived>
auto maxAbsDeviationFromIdentity(const Eigen::MatrixBase<Derived>& a) {
  using Real = typename Eigen::NumTraits<typename Derived::Scalar>::Real;
  using Mat = CMatrixT<Real>;
  const Mat m = a.template cast<std::complex<Real>>();
  return (m - Mat::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff();
}

}  // namespace relaysim
