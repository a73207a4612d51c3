// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Dense linear-algebra kernel: symmetric matrices, Cholesky log-determinant,
// Schur complement, cross-product matrices and extreme eigenvalues.
//
// Everything here is a pure function of its arguments.

#ifndef FEATSEL_NUMERICS_HPP_
#define FEATSEL_NUMERICS_HPP_

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>

#include "featsel/errors.hpp"

namespace featsel {

using Index = Eigen::Index;

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using Matrix3 = Eigen::Matrix<Scalar, 3, 3>;
template <typename Scalar>
using Vector3 = Eigen::Matrix<Scalar, 3, 1>;

using MatrixXd = MatrixX<double>;
using VectorXd = VectorX<double>;
using Matrix3d = Matrix3<double>;
using Vector3d = Vector3<double>;

inline constexpr double kSymmetryTolerance = 1e-10;
inline constexpr double kUnitNormTolerance = 1e-9;
inline constexpr double kMaxCondition = 1e12;
inline constexpr double kCholeskyJitter = 1e-12;

template <typename Derived>
bool is_symmetric(const Eigen::MatrixBase<Derived>& m,
                  double tol = kSymmetryTolerance) {
  using std::abs;
  using std::max;
  if (m.rows() != m.cols()) return false;
  for (Index j = 0; j < m.cols(); ++j) {
    for (Index i = j + 1; i < m.rows(); ++i) {
      const double a = static_cast<double>(m(i, j));
      const double b = static_cast<double>(m(j, i));
      if (!(abs(a - b) <= tol * max(1.0, abs(a)))) return false;
    }
  }
  return true;
}

// (M + M^T) / 2
template <typename Derived>
MatrixX<typename Derived::Scalar> symmetrize(
    const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  return Scalar(0.5) * (m + m.transpose());
}

// Square matrix that is symmetric up to kSymmetryTolerance. Entries are stored
// exactly symmetric; sums of exactly symmetric matrices stay exactly symmetric
// because floating-point addition is commutative.
template <typename Scalar_>
class SymmetricMatrix {
 public:
  using Scalar = Scalar_;
  using Matrix = MatrixX<Scalar>;

  SymmetricMatrix() = default;

  static SymmetricMatrix Zero(Index dim) {
    return SymmetricMatrix(Matrix::Zero(dim, dim), Unchecked{});
  }
  static SymmetricMatrix Identity(Index dim) {
    return SymmetricMatrix(Matrix::Identity(dim, dim), Unchecked{});
  }

  // Throws InvalidArgument if `m` is not square or not symmetric.
  template <typename Derived>
  explicit SymmetricMatrix(const Eigen::MatrixBase<Derived>& m) {
    if (m.rows() != m.cols()) {
      throw InvalidArgument("SymmetricMatrix: matrix is not square");
    }
    if (!is_symmetric(m)) {
      throw InvalidArgument("SymmetricMatrix: matrix is not symmetric");
    }
    entries_ = symmetrize(m);
  }

  // Accepts any square matrix and averages it with its transpose.
  template <typename Derived>
  static SymmetricMatrix Symmetrized(const Eigen::MatrixBase<Derived>& m) {
    if (m.rows() != m.cols()) {
      throw InvalidArgument("SymmetricMatrix: matrix is not square");
    }
    return SymmetricMatrix(symmetrize(m), Unchecked{});
  }

  Index dim() const { return entries_.rows(); }
  const Matrix& matrix() const { return entries_; }
  Scalar operator()(Index i, Index j) const { return entries_(i, j); }
  Scalar trace() const { return entries_.trace(); }

  SymmetricMatrix& operator+=(const SymmetricMatrix& other) {
    if (other.dim() != dim()) {
      throw InvalidArgument("SymmetricMatrix: dimension mismatch in sum");
    }
    entries_ += other.entries_;
    return *this;
  }
  friend SymmetricMatrix operator+(SymmetricMatrix a,
                                   const SymmetricMatrix& b) {
    a += b;
    return a;
  }
  SymmetricMatrix& operator*=(Scalar s) {
    entries_ *= s;
    return *this;
  }
  friend SymmetricMatrix operator*(Scalar s, SymmetricMatrix a) {
    a *= s;
    return a;
  }

 private:
  struct Unchecked {};
  SymmetricMatrix(Matrix m, Unchecked) : entries_(std::move(m)) {}

  Matrix entries_;
};

using SymmetricMatrixd = SymmetricMatrix<double>;

// Cross-product matrix: skew(u) * v == u.cross(v).
template <typename Derived>
Matrix3<typename Derived::Scalar> skew(const Eigen::MatrixBase<Derived>& u) {
  using Scalar = typename Derived::Scalar;
  EIGEN_STATIC_ASSERT_VECTOR_SPECIFIC_SIZE(Derived, 3);
  using std::abs;
  if (!(abs(static_cast<double>(u.norm()) - 1.0) <= kUnitNormTolerance)) {
    throw NormalizationError("skew: input vector is not unit norm");
  }
  Matrix3<Scalar> out;
  out << Scalar(0), -u(2), u(1),
         u(2), Scalar(0), -u(0),
         -u(1), u(0), Scalar(0);
  return out;
}

// Index of the first pivot at which an unblocked lower Cholesky breaks down,
// or -1 when the factorization runs to completion.
template <typename Derived>
Index cholesky_failing_pivot(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  MatrixX<Scalar> l = m;
  const Index n = l.rows();
  for (Index j = 0; j < n; ++j) {
    Scalar d = l(j, j) - l.row(j).head(j).squaredNorm();
    if (!(d > Scalar(0))) return j;
    d = std::sqrt(d);
    l(j, j) = d;
    for (Index i = j + 1; i < n; ++i) {
      l(i, j) = (l(i, j) - l.row(i).head(j).dot(l.row(j).head(j))) / d;
    }
  }
  return -1;
}

enum class Jitter {
  kNone,
  // Retry once with kCholeskyJitter * I added before failing.
  kOnce,
};

namespace internal {

template <typename Scalar>
bool llt_logdet(const MatrixX<Scalar>& m, Scalar* out) {
  Eigen::LLT<MatrixX<Scalar>> llt(m);
  if (llt.info() != Eigen::Success) return false;
  *out = Scalar(2) * llt.matrixLLT().diagonal().array().log().sum();
  return true;
}

}  // namespace internal

// log det M = 2 * sum(log diag(L)) for M = L L^T. Throws NotPositiveDefinite
// with the failing pivot.
template <typename Derived>
typename Derived::Scalar cholesky_logdet(const Eigen::MatrixBase<Derived>& m,
                                         Jitter jitter = Jitter::kNone) {
  using Scalar = typename Derived::Scalar;
  if (m.rows() != m.cols()) {
    throw InvalidArgument("cholesky_logdet: matrix is not square");
  }
  MatrixX<Scalar> work = m;
  Scalar out{};
  if (internal::llt_logdet(work, &out)) return out;
  if (jitter == Jitter::kOnce) {
    work.diagonal().array() += Scalar(kCholeskyJitter);
    if (internal::llt_logdet(work, &out)) return out;
  }
  const Index pivot = cholesky_failing_pivot(work);
  throw NotPositiveDefinite(static_cast<std::size_t>(pivot < 0 ? 0 : pivot));
}

template <typename Scalar>
Scalar cholesky_logdet(const SymmetricMatrix<Scalar>& m,
                       Jitter jitter = Jitter::kNone) {
  return cholesky_logdet(m.matrix(), jitter);
}

// Inverse of a positive-definite matrix through its Cholesky factor.
template <typename Scalar>
SymmetricMatrix<Scalar> spd_inverse(const SymmetricMatrix<Scalar>& m) {
  Eigen::LLT<MatrixX<Scalar>> llt(m.matrix());
  if (llt.info() != Eigen::Success) {
    const Index pivot = cholesky_failing_pivot(m.matrix());
    throw NotPositiveDefinite(static_cast<std::size_t>(pivot < 0 ? 0 : pivot));
  }
  return SymmetricMatrix<Scalar>::Symmetrized(
      llt.solve(MatrixX<Scalar>::Identity(m.dim(), m.dim())));
}

// Spectral condition number of a symmetric matrix; +inf when the smallest
// eigenvalue is not positive.
template <typename Derived>
double spd_condition(const Eigen::MatrixBase<Derived>& c) {
  using Scalar = typename Derived::Scalar;
  Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>> es(
      MatrixX<Scalar>(c), Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  const double lo = static_cast<double>(ev(0));
  const double hi = static_cast<double>(ev(ev.size() - 1));
  if (!(lo > 0.0)) return std::numeric_limits<double>::infinity();
  return hi / lo;
}

// A - B C^{-1} B^T, symmetrized. C must be symmetric positive definite with
// condition number below `max_condition`, otherwise TriangulationFailure.
template <typename DA, typename DB, typename DC>
MatrixX<typename DA::Scalar> schur_complement(
    const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b,
    const Eigen::MatrixBase<DC>& c, double max_condition = kMaxCondition) {
  using Scalar = typename DA::Scalar;
  if (a.rows() != a.cols() || c.rows() != c.cols() || b.rows() != a.rows() ||
      b.cols() != c.rows()) {
    throw InvalidArgument("schur_complement: non-conformable blocks");
  }
  const double cond = spd_condition(c);
  if (!(cond < max_condition)) throw TriangulationFailure(cond);
  Eigen::LLT<MatrixX<Scalar>> llt{MatrixX<Scalar>(c)};
  if (llt.info() != Eigen::Success) throw TriangulationFailure(cond);
  const MatrixX<Scalar> c_inv_bt = llt.solve(b.transpose());
  return symmetrize(a - b * c_inv_bt);
}

template <typename Scalar>
struct EigenExtremes {
  Scalar min;
  Scalar max;
};

template <typename Scalar>
EigenExtremes<Scalar> eig_extremes(const SymmetricMatrix<Scalar>& m) {
  if (m.dim() == 0) throw InvalidArgument("eig_extremes: empty matrix");
  Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>> es(m.matrix(),
                                                    Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  return {ev(0), ev(ev.size() - 1)};
}

}  // namespace featsel

#endif  // FEATSEL_NUMERICS_HPP_
