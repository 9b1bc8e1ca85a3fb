#include "transduce/random.hpp"

#include <cmath>

namespace tlab {

Vec random_gaussian(std::size_t n, Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Vec v(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = cplx(g(rng), g(rng));
  return v;
}

Vec random_unit(std::size_t n, Rng& rng) {
  Vec v = random_gaussian(n, rng);
  return v / v.norm();
}

Mat random_unitary(std::size_t n, Rng& rng) {
  auto N = static_cast<Eigen::Index>(n);
  Mat a(N, N);
  for (Eigen::Index c = 0; c < N; ++c) a.col(c) = random_gaussian(n, rng);
  Eigen::HouseholderQR<Mat> qr(a);
  Mat q = qr.householderQ() * Mat::Identity(N, N);
  Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < N; ++i) {
    cplx d = r(i, i);
    double ad = std::abs(d);
    if (ad > 0) q.col(i) *= d / ad;
  }
  return q;
}

}  // namespace tlab
