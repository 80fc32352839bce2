#pragma once

// Dense kernel shared by every other module. Matrices are Eigen's dynamic
// double matrices, which store entries column-major: entry (i, j) of an
// m-by-n matrix lives at offset i + m*j.

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include <optional>

namespace mvboot {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using Index = Eigen::Index;

// Smallest eigenvalue must exceed this multiple of the largest diagonal entry.
inline constexpr double kSpdRelativeTolerance = 1e-10;
// Asymmetry allowed before a matrix is rejected, relative to its largest entry.
inline constexpr double kSymmetryRelativeTolerance = 1e-10;

// Column stacking: output[i + rows*j] = a(i, j).
Vec vec(const Mat& a);
// Inverse of vec for a rows-by-cols target.
Mat unvec(const Vec& v, Index rows, Index cols);

// Lower triangle including the diagonal, stacked column by column:
// [a00, a10, ..., a(p-1)0, a11, a21, ...]. Throws AsymmetricInput.
Vec vech(const Mat& a);
// Rebuilds the symmetric matrix whose vech is v (the duplication map).
Mat unvech(const Vec& v);

// Block (i, j) of the result is a(i, j) * b.
Mat kron(const Mat& a, const Mat& b);

double max_asymmetry(const Mat& a);
void require_symmetric(const Mat& a);
Mat symmetrized(const Mat& a);

// Symmetric positive definite matrix. The input is symmetrized on
// construction and its eigendecomposition and Cholesky factor are kept, so
// the object is immutable and safe to share between threads.
class SpdMat {
 public:
  // Throws AsymmetricInput or NearSingular.
  explicit SpdMat(const Mat& a);

  static std::optional<SpdMat> try_make(const Mat& a);

  const Mat& matrix() const noexcept { return a_; }
  Index dim() const noexcept { return a_.rows(); }
  // Ascending.
  const Vec& eigenvalues() const noexcept { return evals_; }
  const Mat& eigenvectors() const noexcept { return evecs_; }

  // a^{-1} * rhs through the Cholesky factor.
  Mat solve(const Mat& rhs) const;

 private:
  struct Unchecked {};
  SpdMat(Unchecked, Mat a, Vec evals, Mat evecs);

  Mat a_;
  Vec evals_;
  Mat evecs_;
  Eigen::LLT<Mat> llt_;
};

SpdMat spd_inverse(const SpdMat& a);
// Symmetric square root from the eigendecomposition.
SpdMat spd_sqrt(const SpdMat& a);
// Symmetric inverse square root, a^{-1/2}.
SpdMat spd_inv_sqrt(const SpdMat& a);

// Symmetric root of a symmetric nonnegative definite matrix. Eigenvalues
// down to -1e-10 * scale are clamped to zero; anything more negative throws
// NotPositiveDefinite.
Mat psd_sqrt(const Mat& a);

double min_eigenvalue(const Mat& symmetric);

}  // namespace mvboot
