#pragma once

// Central finite-difference gradients of Hamiltonians on quadruples; the
// test-side oracle for the analytic gradients. All registered Hamiltonians
// are polynomial in the matrix entries, so one real-direction difference
// recovers the complex derivative.

#include "spectral/poisson.hpp"

namespace finite_diff {

using spectral::Complex;
using spectral::HamiltonianFn;
using spectral::Matrix;
using spectral::QGrad;
using spectral::Quadruple;

inline QGrad<Complex> gradient(const HamiltonianFn<Complex>& h, const Quadruple<Complex>& q,
                               double eps = 1e-5) {
  QGrad<Complex> out = QGrad<Complex>::zeros(q.k, q.l);
  auto probe = [&](auto select, Matrix<Complex>& slot, std::size_t i, std::size_t j) {
    Quadruple<Complex> qp = q, qm = q;
    select(qp)(i, j) += eps;
    select(qm)(i, j) -= eps;
    Complex d = (h.value(qp) - h.value(qm)) / (2 * eps);
    // df = tr(grad dB) means the (j, i) entry of grad is d value / d B_ij
    slot(j, i) = d;
  };
  for (std::size_t i = 0; i < q.k; ++i)
    for (std::size_t j = 0; j < q.k; ++j)
      probe([](Quadruple<Complex>& qq) -> Matrix<Complex>& { return qq.x; }, out.dx, i, j);
  for (std::size_t i = 0; i < q.l; ++i)
    for (std::size_t j = 0; j < q.l; ++j)
      probe([](Quadruple<Complex>& qq) -> Matrix<Complex>& { return qq.y; }, out.dy, i, j);
  for (std::size_t i = 0; i < q.k; ++i)
    for (std::size_t j = 0; j < q.l; ++j)
      probe([](Quadruple<Complex>& qq) -> Matrix<Complex>& { return qq.f; }, out.df, i, j);
  for (std::size_t i = 0; i < q.l; ++i)
    for (std::size_t j = 0; j < q.k; ++j)
      probe([](Quadruple<Complex>& qq) -> Matrix<Complex>& { return qq.g; }, out.dg, i, j);
  return out;
}

inline double max_diff(const QGrad<Complex>& a, const QGrad<Complex>& b) {
  auto block = [](const Matrix<Complex>& x, const Matrix<Complex>& y) {
    double m = 0;
    for (std::size_t i = 0; i < x.rows(); ++i)
      for (std::size_t j = 0; j < x.cols(); ++j) m = std::max(m, std::abs(x(i, j) - y(i, j)));
    return m;
  };
  return std::max({block(a.dx, b.dx), block(a.dy, b.dy), block(a.df, b.df), block(a.dg, b.dg)});
}

}  // namespace finite_diff
