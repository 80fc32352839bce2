#include "mvboot/linalg.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mvboot/error.hpp"

namespace mvboot {

namespace {

double max_abs(const Mat& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

Mat from_eigen(const Mat& vectors, const Vec& values) {
  return vectors * values.asDiagonal() * vectors.transpose();
}

void require_square(const Mat& a, const char* what) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    std::ostringstream msg;
    msg << what << ": expected a nonempty square matrix, got " << a.rows() << "x" << a.cols();
    throw Error(ErrorKind::DimensionMismatch, msg.str());
  }
}

}  // namespace

Vec vec(const Mat& a) {
  Vec out(a.size());
  for (Index j = 0; j < a.cols(); ++j)
    for (Index i = 0; i < a.rows(); ++i) out(i + a.rows() * j) = a(i, j);
  return out;
}

Mat unvec(const Vec& v, Index rows, Index cols) {
  if (rows * cols != v.size())
    throw Error(ErrorKind::DimensionMismatch, "unvec: length does not match target shape");
  Mat out(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) out(i, j) = v(i + rows * j);
  return out;
}

double max_asymmetry(const Mat& a) {
  if (a.rows() != a.cols()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (Index j = 0; j < a.cols(); ++j)
    for (Index i = j + 1; i < a.rows(); ++i) worst = std::max(worst, std::abs(a(i, j) - a(j, i)));
  return worst;
}

void require_symmetric(const Mat& a) {
  require_square(a, "symmetric input");
  const double defect = max_asymmetry(a);
  if (defect > kSymmetryRelativeTolerance * max_abs(a)) {
    std::ostringstream msg;
    msg << "matrix is not symmetric (max |a_ij - a_ji| = " << defect << ")";
    throw Error(ErrorKind::AsymmetricInput, msg.str());
  }
}

Mat symmetrized(const Mat& a) { return 0.5 * (a + a.transpose()); }

Vec vech(const Mat& a) {
  require_symmetric(a);
  const Index p = a.rows();
  Vec out(p * (p + 1) / 2);
  Index k = 0;
  for (Index j = 0; j < p; ++j)
    for (Index i = j; i < p; ++i) out(k++) = a(i, j);
  return out;
}

Mat unvech(const Vec& v) {
  // Solve p(p+1)/2 = len for p.
  const auto len = static_cast<double>(v.size());
  const auto p = static_cast<Index>(std::llround((std::sqrt(8.0 * len + 1.0) - 1.0) / 2.0));
  if (p * (p + 1) / 2 != v.size() || p == 0)
    throw Error(ErrorKind::DimensionMismatch, "unvech: length is not triangular");
  Mat out(p, p);
  Index k = 0;
  for (Index j = 0; j < p; ++j)
    for (Index i = j; i < p; ++i) {
      out(i, j) = v(k);
      out(j, i) = v(k);
      ++k;
    }
  return out;
}

Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index j = 0; j < a.cols(); ++j)
    for (Index i = 0; i < a.rows(); ++i)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

SpdMat::SpdMat(Unchecked, Mat a, Vec evals, Mat evecs)
    : a_(std::move(a)), evals_(std::move(evals)), evecs_(std::move(evecs)), llt_(a_) {}

std::optional<SpdMat> SpdMat::try_make(const Mat& a) {
  if (a.rows() != a.cols() || a.rows() == 0) return std::nullopt;
  if (max_asymmetry(a) > kSymmetryRelativeTolerance * max_abs(a)) return std::nullopt;
  Mat sym = symmetrized(a);
  if (!sym.allFinite()) return std::nullopt;
  const double scale = sym.diagonal().maxCoeff();
  if (!(scale > 0.0)) return std::nullopt;
  Eigen::SelfAdjointEigenSolver<Mat> es(sym);
  if (es.info() != Eigen::Success) return std::nullopt;
  if (!(es.eigenvalues()(0) > kSpdRelativeTolerance * scale)) return std::nullopt;
  SpdMat out(Unchecked{}, std::move(sym), es.eigenvalues(), es.eigenvectors());
  if (out.llt_.info() != Eigen::Success) return std::nullopt;
  return out;
}

SpdMat::SpdMat(const Mat& a) : SpdMat([&] {
  require_symmetric(a);
  auto made = try_make(a);
  if (!made) {
    std::ostringstream msg;
    msg << "matrix is not positive definite within tolerance (smallest eigenvalue "
        << min_eigenvalue(symmetrized(a)) << ", largest diagonal " << a.diagonal().maxCoeff() << ")";
    throw Error(ErrorKind::NearSingular, msg.str());
  }
  return std::move(*made);
}()) {}

Mat SpdMat::solve(const Mat& rhs) const {
  if (rhs.rows() != dim()) throw Error(ErrorKind::DimensionMismatch, "SpdMat::solve: row count mismatch");
  return llt_.solve(rhs);
}

SpdMat spd_inverse(const SpdMat& a) {
  return SpdMat(symmetrized(a.solve(Mat::Identity(a.dim(), a.dim()))));
}

SpdMat spd_sqrt(const SpdMat& a) {
  return SpdMat(symmetrized(from_eigen(a.eigenvectors(), a.eigenvalues().cwiseSqrt())));
}

SpdMat spd_inv_sqrt(const SpdMat& a) {
  return SpdMat(symmetrized(from_eigen(a.eigenvectors(), a.eigenvalues().cwiseSqrt().cwiseInverse())));
}

double min_eigenvalue(const Mat& symmetric) {
  require_square(symmetric, "min_eigenvalue");
  Eigen::SelfAdjointEigenSolver<Mat> es(symmetrized(symmetric), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

Mat psd_sqrt(const Mat& a) {
  require_symmetric(a);
  Eigen::SelfAdjointEigenSolver<Mat> es(symmetrized(a));
  Vec values = es.eigenvalues();
  const double scale = std::max(1.0, max_abs(a));
  for (Index i = 0; i < values.size(); ++i) {
    if (values(i) < -1e-10 * scale)
      throw Error(ErrorKind::NotPositiveDefinite, "psd_sqrt: matrix has a negative eigenvalue");
    values(i) = std::sqrt(std::max(values(i), 0.0));
  }
  return symmetrized(from_eigen(es.eigenvectors(), values));
}

}  // namespace mvboot
