#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <optional>
#include <utility>
#include <vector>

#include "spectral/matrix.hpp"

namespace spectral {

inline Eigen::MatrixXcd to_eigen(const Matrix<Complex>& m) {
  Eigen::MatrixXcd out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(static_cast<long>(i), static_cast<long>(j)) = m(i, j);
  return out;
}

inline Matrix<Complex> from_eigen(const Eigen::MatrixXcd& m) {
  Matrix<Complex> out(static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols()));
  for (long i = 0; i < m.rows(); ++i)
    for (long j = 0; j < m.cols(); ++j) out(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = m(i, j);
  return out;
}

inline std::vector<double> singular_values(const Matrix<Complex>& m) {
  if (m.empty()) return {};
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(to_eigen(m));
  std::vector<double> out(svd.singularValues().data(),
                          svd.singularValues().data() + svd.singularValues().size());
  return out;
}

namespace detail {

// Fraction-free (Bareiss) elimination in echelon form. Returns the pivot
// columns; `sign_flips` counts row swaps; on exit `a` holds the transformed
// matrix whose last pivot equals det for square full-rank input.
template <typename T>
std::vector<std::size_t> bareiss_echelon(Matrix<T>& a, int& sign_flips) {
  static_assert(scalar_traits<T>::is_exact);
  sign_flips = 0;
  std::vector<std::size_t> pivots;
  T prev = scalar_traits<T>::one();
  std::size_t row = 0;
  for (std::size_t col = 0; col < a.cols() && row < a.rows(); ++col) {
    std::size_t p = row;
    while (p < a.rows() && scalar_traits<T>::is_zero(a(p, col))) ++p;
    if (p == a.rows()) continue;
    if (p != row) {
      for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(p, j), a(row, j));
      ++sign_flips;
    }
    for (std::size_t i = row + 1; i < a.rows(); ++i) {
      for (std::size_t j = col + 1; j < a.cols(); ++j)
        a(i, j) = (a(row, col) * a(i, j) - a(i, col) * a(row, j)) / prev;
      a(i, col) = scalar_traits<T>::zero();
    }
    prev = a(row, col);
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

}  // namespace detail

template <typename T>
T det(const Matrix<T>& m) {
  if (!m.is_square()) throw Error("det: matrix not square");
  if (m.rows() == 0) return scalar_traits<T>::one();
  if constexpr (scalar_traits<T>::is_exact) {
    Matrix<T> a = m;
    int flips = 0;
    auto pivots = detail::bareiss_echelon(a, flips);
    if (pivots.size() < m.rows()) return scalar_traits<T>::zero();
    T d = a(m.rows() - 1, m.cols() - 1);
    return flips % 2 ? -d : d;
  } else {
    return to_eigen(m).determinant();
  }
}

/// Rank. Exact backend: true rank by fraction-free elimination. Float backend:
/// number of singular values >= rank_rel_tol * max(sigma_max, scale_floor);
/// the scale floor lets callers measure near-zero matrices against the scale
/// of the data they came from.
template <typename T>
std::size_t rank(const Matrix<T>& m, const ToleranceConfig& tol = {}, double scale_floor = 0.0) {
  if (m.empty()) return 0;
  if constexpr (scalar_traits<T>::is_exact) {
    Matrix<T> a = m;
    int flips = 0;
    return detail::bareiss_echelon(a, flips).size();
  } else {
    auto sv = singular_values(m);
    if (sv.empty() || std::max(sv[0], scale_floor) == 0.0) return 0;
    double thresh = tol.rank_rel_tol * std::max(sv[0], scale_floor);
    std::size_t r = 0;
    for (double s : sv)
      if (s >= thresh) ++r;
    return r;
  }
}

/// Reduced row-echelon form (exact backend). Returns pivot columns.
template <typename T>
std::vector<std::size_t> rref(Matrix<T>& a) {
  static_assert(scalar_traits<T>::is_exact);
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < a.cols() && row < a.rows(); ++col) {
    std::size_t p = row;
    while (p < a.rows() && scalar_traits<T>::is_zero(a(p, col))) ++p;
    if (p == a.rows()) continue;
    if (p != row)
      for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(p, j), a(row, j));
    T inv = scalar_traits<T>::one() / a(row, col);
    for (std::size_t j = col; j < a.cols(); ++j) a(row, j) *= inv;
    for (std::size_t i = 0; i < a.rows(); ++i) {
      if (i == row || scalar_traits<T>::is_zero(a(i, col))) continue;
      T f = a(i, col);
      for (std::size_t j = col; j < a.cols(); ++j) a(i, j) -= f * a(row, j);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

/// Basis of the right kernel, returned as columns of a cols x dim matrix.
template <typename T>
Matrix<T> kernel(const Matrix<T>& m, const ToleranceConfig& tol = {}, double scale_floor = 0.0) {
  if (m.cols() == 0) return Matrix<T>(0, 0);
  if (m.rows() == 0) return Matrix<T>::identity(m.cols());
  if constexpr (scalar_traits<T>::is_exact) {
    Matrix<T> a = m;
    auto pivots = rref(a);
    std::vector<std::size_t> free_cols;
    {
      std::size_t pi = 0;
      for (std::size_t c = 0; c < m.cols(); ++c) {
        if (pi < pivots.size() && pivots[pi] == c)
          ++pi;
        else
          free_cols.push_back(c);
      }
    }
    Matrix<T> out(m.cols(), free_cols.size());
    for (std::size_t fj = 0; fj < free_cols.size(); ++fj) {
      std::size_t fc = free_cols[fj];
      out(fc, fj) = scalar_traits<T>::one();
      for (std::size_t pi = 0; pi < pivots.size(); ++pi) out(pivots[pi], fj) = -a(pi, fc);
    }
    return out;
  } else {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(to_eigen(m), Eigen::ComputeFullV);
    auto sv = svd.singularValues();
    double smax = sv.size() ? std::max(sv[0], scale_floor) : scale_floor;
    std::size_t r = 0;
    if (smax > 0.0) {
      double thresh = tol.rank_rel_tol * smax;
      for (long i = 0; i < sv.size(); ++i)
        if (sv[i] >= thresh) ++r;
    }
    std::size_t dim = m.cols() - r;
    Matrix<Complex> out(m.cols(), dim);
    for (std::size_t j = 0; j < dim; ++j)
      for (std::size_t i = 0; i < m.cols(); ++i)
        out(i, j) = svd.matrixV()(static_cast<long>(i), static_cast<long>(r + j));
    return out;
  }
}

/// Exact inverse (Gauss-Jordan) or float inverse (LU). Throws
/// SingularMatrixError when the matrix is singular (float: rank-deficient
/// under the supplied tolerances).
template <typename T>
Matrix<T> inverse(const Matrix<T>& m, const ToleranceConfig& tol = {}) {
  if (!m.is_square()) throw Error("inverse: matrix not square");
  if (m.rows() == 0) return m;
  if constexpr (scalar_traits<T>::is_exact) {
    Matrix<T> a = hstack(m, Matrix<T>::identity(m.rows()));
    auto pivots = rref(a);
    if (pivots.size() < m.rows() || pivots.back() >= m.rows())
      throw SingularMatrixError("inverse: singular matrix");
    return a.block(0, m.rows(), m.rows(), m.rows());
  } else {
    if (rank(m, tol) < m.rows()) throw SingularMatrixError("inverse: singular matrix");
    return from_eigen(to_eigen(m).inverse());
  }
}

/// Rank-revealing factorization m = C * E with C (rows x r) and E (r x cols).
/// Exact backend: pivot columns of m times the nonzero rows of its RREF.
/// Float backend: truncated SVD.
template <typename T>
std::pair<Matrix<T>, Matrix<T>> cr_factorization(const Matrix<T>& m,
                                                 const ToleranceConfig& tol = {}) {
  if constexpr (scalar_traits<T>::is_exact) {
    Matrix<T> a = m;
    auto pivots = rref(a);
    std::size_t r = pivots.size();
    Matrix<T> c(m.rows(), r), e(r, m.cols());
    for (std::size_t j = 0; j < r; ++j)
      for (std::size_t i = 0; i < m.rows(); ++i) c(i, j) = m(i, pivots[j]);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) e(i, j) = a(i, j);
    return {c, e};
  } else {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(to_eigen(m), Eigen::ComputeThinU | Eigen::ComputeThinV);
    auto sv = svd.singularValues();
    double smax = sv.size() ? sv[0] : 0.0;
    std::size_t r = 0;
    if (smax > 0.0) {
      double thresh = tol.rank_rel_tol * smax;
      for (long i = 0; i < sv.size(); ++i)
        if (sv[i] >= thresh) ++r;
    }
    Matrix<Complex> c(m.rows(), r), e(r, m.cols());
    for (std::size_t j = 0; j < r; ++j) {
      for (std::size_t i = 0; i < m.rows(); ++i)
        c(i, j) = svd.matrixU()(static_cast<long>(i), static_cast<long>(j)) * sv[static_cast<long>(j)];
      for (std::size_t i = 0; i < m.cols(); ++i)
        e(j, i) = std::conj(svd.matrixV()(static_cast<long>(i), static_cast<long>(j)));
    }
    return {c, e};
  }
}

}  // namespace spectral
