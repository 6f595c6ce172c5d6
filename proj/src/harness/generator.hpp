#pragma once

#include <optional>
#include <vector>

#include "harness/rng.hpp"
#include "spectral/eigensolve.hpp"
#include "spectral/pencil.hpp"

namespace spectral::harness {

/// Constraints for random quadruple generation.
struct GenConstraints {
  std::optional<std::size_t> rank_f;            // target rank of F
  std::optional<std::size_t> rank_g;            // target rank of G
  std::optional<std::vector<int>> x_mults;      // diagonalizable X with these multiplicities
  std::optional<std::vector<int>> y_mults;      // same for Y
  bool require_det = true;                      // retry until det M != 0
};

template <typename T>
T random_scalar(Rng& rng) {
  if constexpr (scalar_traits<T>::is_exact) {
    // numerators and denominators bounded by 10
    return GaussianRational(rng.int_in(-10, 10), rng.int_in(1, 10), rng.int_in(-10, 10),
                            rng.int_in(1, 10));
  } else {
    return rng.cnormal();
  }
}

template <typename T>
Matrix<T> random_matrix(Rng& rng, std::size_t r, std::size_t c) {
  Matrix<T> m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = random_scalar<T>(rng);
  return m;
}

template <typename T>
Matrix<T> random_invertible(Rng& rng, std::size_t n, const ToleranceConfig& tol = {}) {
  for (int tries = 0; tries < 100; ++tries) {
    Matrix<T> m = random_matrix<T>(rng, n, n);
    if (rank(m, tol) == n) return m;
  }
  throw GenerationFailedError("random_invertible: no invertible draw in 100 tries");
}

/// Random matrix of exactly the requested rank, as a product of full-rank
/// factors.
template <typename T>
Matrix<T> random_matrix_of_rank(Rng& rng, std::size_t r, std::size_t c, std::size_t target,
                                const ToleranceConfig& tol = {}) {
  if (target > std::min(r, c)) throw Error("random_matrix_of_rank: rank too large");
  if (target == 0) return Matrix<T>(r, c);
  for (int tries = 0; tries < 100; ++tries) {
    Matrix<T> a = random_matrix<T>(rng, r, target);
    Matrix<T> b = random_matrix<T>(rng, target, c);
    Matrix<T> m = a * b;
    if (rank(m, tol) == target) return m;
  }
  throw GenerationFailedError("random_matrix_of_rank: no full-rank factors in 100 tries");
}

/// Diagonalizable matrix with prescribed eigenvalue multiplicities; the
/// eigenvalues are distinct small integers, so the result splits exactly on
/// the exact backend.
template <typename T>
Matrix<T> random_diagonalizable(Rng& rng, const std::vector<int>& mults,
                                const ToleranceConfig& tol = {}) {
  std::size_t n = 0;
  for (int m : mults) n += static_cast<std::size_t>(m);
  // distinct integer eigenvalues drawn from a small pool
  std::vector<long> pool;
  for (long v = -6; v <= 6; ++v) pool.push_back(v);
  std::vector<long> eigs;
  for (std::size_t i = 0; i < mults.size(); ++i) {
    std::size_t pick = rng.below(pool.size());
    eigs.push_back(pool[pick]);
    pool.erase(pool.begin() + static_cast<long>(pick));
  }
  Matrix<T> d(n, n);
  std::size_t off = 0;
  for (std::size_t i = 0; i < mults.size(); ++i)
    for (int c = 0; c < mults[i]; ++c, ++off) d(off, off) = scalar_traits<T>::from_int(eigs[i]);
  Matrix<T> v = random_invertible<T>(rng, n, tol);
  return v * d * inverse(v, tol);
}

template <typename T>
Quadruple<T> random_quadruple(Rng& rng, std::size_t k, std::size_t l,
                              const GenConstraints& cons = {},
                              const ToleranceConfig& tol = {}) {
  if (k < 1 || l < 1) throw Error("random_quadruple: k, l >= 1 required");
  for (int tries = 0; tries < 100; ++tries) {
    Quadruple<T> q;
    q.k = k;
    q.l = l;
    q.x = cons.x_mults ? random_diagonalizable<T>(rng, *cons.x_mults, tol)
                       : random_matrix<T>(rng, k, k);
    q.y = cons.y_mults ? random_diagonalizable<T>(rng, *cons.y_mults, tol)
                       : random_matrix<T>(rng, l, l);
    q.f = cons.rank_f ? random_matrix_of_rank<T>(rng, k, l, *cons.rank_f, tol)
                      : random_matrix<T>(rng, k, l);
    q.g = cons.rank_g ? random_matrix_of_rank<T>(rng, l, k, *cons.rank_g, tol)
                      : random_matrix<T>(rng, l, k);
    if (!cons.require_det) return q;
    try {
      spectral_det(q);
      return q;
    } catch (const ZeroDeterminantError&) {
      continue;
    }
  }
  throw GenerationFailedError("random_quadruple: det M == 0 after 100 retries");
}

}  // namespace spectral::harness
