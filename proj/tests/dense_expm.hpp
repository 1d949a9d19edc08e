// Test-only brute-force matrix exponential: scaling and squaring with a
// long-double Taylor series. Independent of the uniformization path it is
// used to check.
#ifndef EPIBATCH_TESTS_DENSE_EXPM_HPP
#define EPIBATCH_TESTS_DENSE_EXPM_HPP

#include <cmath>
#include <cstddef>
#include <vector>

#include "epibatch/qbd.hpp"

namespace epibatch::testing {

using DenseMatrix = std::vector<std::vector<long double>>;

inline DenseMatrix dense_of(const TruncatedGenerator& gen) {
  const std::size_t n = static_cast<std::size_t>(gen.n_max()) + 1;
  DenseMatrix q(n, std::vector<long double>(n, 0.0L));
  for (std::size_t row = 0; row < n; ++row) {
    q[row][row] = gen.diagonal(static_cast<std::int64_t>(row));
    for (const auto& e : gen.off_diagonal(static_cast<std::int64_t>(row))) {
      q[row][static_cast<std::size_t>(e.col)] += e.rate;
    }
  }
  return q;
}

inline DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
  const std::size_t n = a.size();
  DenseMatrix c(n, std::vector<long double>(n, 0.0L));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      const long double aik = a[i][k];
      if (aik == 0.0L) continue;
      for (std::size_t j = 0; j < n; ++j) c[i][j] += aik * b[k][j];
    }
  }
  return c;
}

// exp(Q t) with scaling so the scaled matrix has small norm, then a Taylor
// series run to long-double convergence, then repeated squaring.
inline DenseMatrix dense_expm(const TruncatedGenerator& gen, double t) {
  const std::size_t n = static_cast<std::size_t>(gen.n_max()) + 1;
  DenseMatrix q = dense_of(gen);
  long double norm = 0.0L;
  for (const auto& row : q) {
    long double s = 0.0L;
    for (long double v : row) s += std::fabs(static_cast<double>(v));
    norm = std::max(norm, s);
  }
  int squarings = 0;
  long double scale = t;
  while (norm * scale > 0.5L) {
    scale /= 2.0L;
    ++squarings;
  }
  for (auto& row : q) {
    for (auto& v : row) v *= scale;
  }
  DenseMatrix result(n, std::vector<long double>(n, 0.0L));
  for (std::size_t i = 0; i < n; ++i) result[i][i] = 1.0L;
  DenseMatrix term = result;
  for (int j = 1; j <= 48; ++j) {
    term = matmul(term, q);
    long double term_norm = 0.0L;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t c = 0; c < n; ++c) {
        term[i][c] /= j;
        term_norm = std::max(term_norm, std::fabs(term[i][c]));
        result[i][c] += term[i][c];
      }
    }
    if (term_norm < 1e-24L) break;
  }
  for (int s = 0; s < squarings; ++s) result = matmul(result, result);
  return result;
}

// Mean of a linear batch birth-death process: k * exp((lambda*d - mu) * t).
inline double branching_mean(double k, double lambda_event, int d, double mu,
                             double t) {
  return k * std::exp((lambda_event * d - mu) * t);
}

}  // namespace epibatch::testing

#endif
