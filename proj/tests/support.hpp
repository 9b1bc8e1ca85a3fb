#pragma once

// Shared helpers for the unit tests.

#include <cmath>
#include <complex>

#include "transduce/linalg.hpp"
#include "transduce/query.hpp"
#include "transduce/random.hpp"

namespace tlab::test {

inline double gap(const Mat& a, const Mat& b) { return (a - b).cwiseAbs().maxCoeff(); }

inline Mat real_mat(std::initializer_list<std::initializer_list<double>> rows) {
  Mat m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& r : rows) {
    Eigen::Index j = 0;
    for (double v : r) m(i, j++) = v;
    ++i;
  }
  return m;
}

inline Vec real_vec(std::initializer_list<double> xs) {
  Vec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

// Pr[Bin(n, q) >= k], summed term by term.
inline double binomial_upper(std::size_t n, double q, std::size_t k) {
  double s = 0.0;
  for (std::size_t j = k; j <= n; ++j) {
    s += std::exp(std::lgamma(n + 1.0) - std::lgamma(j + 1.0) - std::lgamma(n - j + 1.0)) *
         std::pow(q, static_cast<double>(j)) * std::pow(1.0 - q, static_cast<double>(n - j));
  }
  return s;
}

// Haar-random steps on C^n with the oracle slot at [offset, offset + up*m).
inline QueryAlgorithm random_algorithm(std::size_t n, std::size_t Q, std::size_t offset,
                                       std::size_t up, std::size_t m, Rng& rng) {
  std::vector<Step> steps;
  for (std::size_t t = 0; t <= Q; ++t) steps.emplace_back(random_unitary(n, rng));
  return QueryAlgorithm(Space::flat(n), std::move(steps), BulletSplit::contiguous(offset, up, m));
}

}  // namespace tlab::test
