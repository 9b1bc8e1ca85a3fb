#include "transduce/qsp.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace tlab {

namespace {

const cplx kI(0.0, 1.0);

template <class T>
T clenshaw_T(const std::vector<T>& c, double x) {
  if (c.empty()) return T(0);
  T b1(0), b2(0);
  for (std::size_t j = c.size(); j-- > 1;) {
    T b0 = c[j] + 2.0 * x * b1 - b2;
    b2 = b1;
    b1 = b0;
  }
  return c[0] + x * b1 - b2;
}

template <class T>
T clenshaw_U(const std::vector<T>& c, double x) {
  T b1(0), b2(0);
  for (std::size_t j = c.size(); j-- > 0;) {
    T b0 = c[j] + 2.0 * x * b1 - b2;
    b2 = b1;
    b1 = b0;
  }
  return b1;
}

// Laurent polynomial in z with coefficients for z^{-deg} .. z^{deg}.
struct Laurent {
  int deg = 0;
  std::vector<cplx> c;

  explicit Laurent(int d) : deg(d), c(static_cast<std::size_t>(2 * d + 1), 0.0) {}
  cplx& at(int j) { return c[static_cast<std::size_t>(j + deg)]; }
  cplx at(int j) const { return std::abs(j) > deg ? cplx(0.0) : c[static_cast<std::size_t>(j + deg)]; }

  // x = (z + 1/z)/2 and y = (z - 1/z)/(2i) raise the degree by one.
  Laurent times_x() const {
    Laurent out(deg + 1);
    for (int j = -deg - 1; j <= deg + 1; ++j) out.at(j) = 0.5 * (at(j - 1) + at(j + 1));
    return out;
  }
  Laurent times_y() const {
    Laurent out(deg + 1);
    for (int j = -deg - 1; j <= deg + 1; ++j) out.at(j) = (at(j - 1) - at(j + 1)) / (2.0 * kI);
    return out;
  }
  Laurent operator+(const Laurent& o) const {
    Laurent out(std::max(deg, o.deg));
    for (int j = -out.deg; j <= out.deg; ++j) out.at(j) = at(j) + o.at(j);
    return out;
  }
  Laurent operator*(cplx s) const {
    Laurent out = *this;
    for (auto& v : out.c) v *= s;
    return out;
  }
  /// Largest coefficient with |j| > d.
  double beyond(int d) const {
    double m = 0.0;
    for (int j = -deg; j <= deg; ++j) {
      if (std::abs(j) > d) m = std::max(m, std::abs(at(j)));
    }
    return m;
  }
  Laurent truncated(int d) const {
    Laurent out(d);
    for (int j = -d; j <= d; ++j) out.at(j) = at(j);
    return out;
  }
};

Laurent laurent_from_T(const std::vector<cplx>& c) {
  const int n = c.empty() ? 0 : static_cast<int>(c.size()) - 1;
  Laurent a(n);
  if (c.empty()) return a;
  a.at(0) = c[0];
  for (int j = 1; j <= n; ++j) a.at(j) = a.at(-j) = 0.5 * c[static_cast<std::size_t>(j)];
  return a;
}

// y * sum d_j U_j  has z^{j+1} coefficient d_j/(2i) and z^{-(j+1)} its negative.
Laurent laurent_from_yU(const std::vector<cplx>& d) {
  Laurent b(static_cast<int>(d.size()));
  for (std::size_t j = 0; j < d.size(); ++j) {
    const int m = static_cast<int>(j) + 1;
    b.at(m) = d[j] / (2.0 * kI);
    b.at(-m) = -d[j] / (2.0 * kI);
  }
  return b;
}

PolynomialPair pair_from_laurent(const Laurent& a, const Laurent& b, std::size_t k) {
  PolynomialPair pq;
  pq.k = k;
  pq.P.assign(k + 1, 0.0);
  pq.Q.assign(k, 0.0);
  const int K = static_cast<int>(k);
  pq.P[0] = a.at(0);
  for (int j = 1; j <= K; ++j) pq.P[static_cast<std::size_t>(j)] = a.at(j) + a.at(-j);
  for (int j = 0; j < K; ++j) pq.Q[static_cast<std::size_t>(j)] = kI * (b.at(j + 1) - b.at(-j - 1));
  return pq;
}

std::vector<double> cheb_square(const std::vector<double>& c) {
  std::vector<double> out(c.empty() ? 1 : 2 * c.size() - 1, 0.0);
  for (std::size_t i = 0; i < c.size(); ++i) {
    for (std::size_t j = 0; j < c.size(); ++j) {
      const double v = 0.5 * c[i] * c[j];
      out[i + j] += v;
      out[i > j ? i - j : j - i] += v;
    }
  }
  return out;
}

// Roots of sum c_j T_j via the colleague matrix.
std::vector<cplx> cheb_roots(std::vector<double> c) {
  double scale = 0.0;
  for (double v : c) scale = std::max(scale, std::abs(v));
  while (c.size() > 1 && std::abs(c.back()) <= 1e-15 * scale) c.pop_back();
  const std::size_t m = c.size() - 1;
  if (m == 0) return {};
  if (m == 1) return {cplx(-c[0] / c[1])};
  const auto M = static_cast<Eigen::Index>(m);
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(M, M);
  C(0, 1) = 1.0;
  for (Eigen::Index j = 1; j + 1 < M; ++j) {
    C(j, j - 1) = 0.5;
    C(j, j + 1) = 0.5;
  }
  C(M - 1, M - 2) += 0.5;
  for (Eigen::Index j = 0; j < M; ++j) C(M - 1, j) -= c[static_cast<std::size_t>(j)] / (2.0 * c[m]);
  Eigen::EigenSolver<Eigen::MatrixXd> es(C, false);
  std::vector<cplx> roots;
  for (Eigen::Index j = 0; j < M; ++j) roots.push_back(es.eigenvalues()(j));
  return roots;
}

// sum c_j T_j and its derivative at complex x.
std::pair<cplx, cplx> cheb_eval_d(const std::vector<double>& c, cplx x) {
  cplx t0 = 1.0, t1 = x, d0 = 0.0, d1 = 1.0;
  cplx f = c[0], fp = 0.0;
  if (c.size() > 1) {
    f += c[1] * x;
    fp += c[1];
  }
  for (std::size_t j = 2; j < c.size(); ++j) {
    const cplx t2 = 2.0 * x * t1 - t0;
    const cplx d2 = 2.0 * t1 + 2.0 * x * d1 - d0;
    f += c[j] * t2;
    fp += c[j] * d2;
    t0 = t1;
    t1 = t2;
    d0 = d1;
    d1 = d2;
  }
  return {f, fp};
}

// Colleague roots refined by a few Newton steps.
std::vector<cplx> polished_roots(const std::vector<double>& c) {
  std::vector<cplx> roots = cheb_roots(c);
  for (cplx& x : roots) {
    for (int it = 0; it < 20; ++it) {
      const auto [f, fp] = cheb_eval_d(c, x);
      if (std::abs(fp) == 0.0) break;
      const cplx step = f / fp;
      if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) break;
      x -= step;
      if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(x))) break;
    }
  }
  return roots;
}

Operator phase_diag(cplx a, std::size_t n) {
  Mat d = Mat::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  const auto h = static_cast<Eigen::Index>(n / 2);
  for (Eigen::Index i = 0; i < h; ++i) {
    d(i, i) = a;
    d(h + i, h + i) = -std::conj(a);
  }
  return {Space::flat(n, "AW"), std::move(d)};
}

}  // namespace

// ---- polynomials ----

double RealPolynomial::operator()(double x) const { return clenshaw_T(cheb, x); }

std::size_t RealPolynomial::degree() const {
  std::size_t d = cheb.size();
  while (d > 1 && cheb[d - 1] == 0.0) --d;
  return d == 0 ? 0 : d - 1;
}

double RealPolynomial::parity_defect() const {
  double m = 0.0;
  for (std::size_t j = 0; j < cheb.size(); ++j) {
    if (static_cast<int>(j % 2) != parity) m = std::max(m, std::abs(cheb[j]));
  }
  return m;
}

cplx PolynomialPair::P_at(double x) const { return clenshaw_T(P, x); }
cplx PolynomialPair::Q_at(double x) const { return clenshaw_U(Q, x); }

double PolynomialPair::condition_residual(std::size_t points) const {
  double worst = 0.0;
  for (std::size_t i = 0; i < points; ++i) {
    const double x = points == 1 ? 0.0 : -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(points - 1);
    const double v = std::norm(P_at(x)) + (1.0 - x * x) * std::norm(Q_at(x));
    worst = std::max(worst, std::abs(v - 1.0));
  }
  return worst;
}

double PolynomialPair::parity_defect() const {
  double m = 0.0;
  for (std::size_t j = 0; j < P.size(); ++j) {
    if (j % 2 != k % 2) m = std::max(m, std::abs(P[j]));
  }
  for (std::size_t j = 0; j < Q.size(); ++j) {
    if (j % 2 == k % 2) m = std::max(m, std::abs(Q[j]));
  }
  return m;
}

double PhaseSequence::unimodularity_defect() const {
  double m = 0.0;
  for (cplx a : alpha) m = std::max(m, std::abs(std::abs(a) - 1.0));
  return m;
}

// ---- QSP algebra ----

Operator signal_unitary(double x, double y) {
  if (std::abs(x * x + y * y - 1.0) > 1e-10) {
    throw NormalizationError("signal unitary needs x^2 + y^2 = 1");
  }
  Mat w(2, 2);
  w << x, y, y, -x;
  return {Space::flat(2, "A"), std::move(w)};
}

Operator qsp_assemble(const PhaseSequence& alpha, const Operator& W) {
  if (alpha.alpha.empty()) throw StructureError("empty phase sequence");
  if (alpha.unimodularity_defect() > 1e-10) throw NormalizationError("phases must be unimodular");
  const std::size_t n = W.dim();
  if (n == 0 || n % 2 != 0) throw DimensionError("the signal operator must act on a leading qubit");
  Mat m = phase_diag(alpha.alpha[0], n).mat();
  for (std::size_t j = 1; j < alpha.alpha.size(); ++j) {
    m = phase_diag(alpha.alpha[j], n).mat() * (W.mat() * m);
  }
  return {W.space(), std::move(m)};
}

PolynomialPair pair_from_phases(const PhaseSequence& alpha) {
  if (alpha.alpha.empty()) throw StructureError("empty phase sequence");
  Laurent a(0), b(0);
  a.at(0) = alpha.alpha[0];
  for (std::size_t j = 1; j < alpha.alpha.size(); ++j) {
    const cplx s = alpha.alpha[j];
    Laurent na = (a.times_x() + b.times_y()) * s;
    Laurent nb = (a.times_y() + b.times_x() * -1.0) * -std::conj(s);
    a = std::move(na);
    b = std::move(nb);
  }
  return pair_from_laurent(a, b, alpha.k());
}

double qsp_main_residual(const PhaseSequence& alpha, const PolynomialPair& PQ, std::size_t points) {
  double worst = 0.0;
  for (std::size_t i = 0; i < points; ++i) {
    const double x = -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(points - 1);
    const double y = std::sqrt(std::max(0.0, 1.0 - x * x));
    const Mat u = qsp_assemble(alpha, signal_unitary(x, y)).mat();
    const cplx p = PQ.P_at(x), q = PQ.Q_at(x);
    Mat want(2, 2);
    want << p, y * std::conj(q), y * q, -std::conj(p);
    worst = std::max(worst, (u - want).cwiseAbs().maxCoeff());
  }
  return worst;
}

// ---- sign polynomial ----

RealPolynomial sign_polynomial(double delta_prime, double eps_prime) {
  if (!(delta_prime > 0.0 && delta_prime < 1.0 && eps_prime > 0.0 && eps_prime < 1.0)) {
    throw DomainError("sign polynomial needs 0 < delta', eps' < 1");
  }
  // erf(kappa delta') >= 1 - eps'/4
  double lo = 0.0, hi = 1.0;
  while (std::erf(hi * delta_prime) < 1.0 - eps_prime / 4.0) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (std::erf(mid * delta_prime) < 1.0 - eps_prime / 4.0 ? lo : hi) = mid;
  }
  const double kappa = hi;

  constexpr std::size_t N = 512;
  std::vector<double> coef(N, 0.0);
  for (std::size_t j = 0; j < N; ++j) {
    double s = 0.0;
    for (std::size_t m = 0; m < N; ++m) {
      const double th = std::numbers::pi * (static_cast<double>(m) + 0.5) / static_cast<double>(N);
      s += std::erf(kappa * std::cos(th)) * std::cos(static_cast<double>(j) * th);
    }
    coef[j] = (j % 2 == 1) ? 2.0 * s / static_cast<double>(N) : 0.0;
  }

  const double scale = 1.0 - eps_prime / 2.0;
  for (std::size_t n = 1; n <= kQspDegreeCap; n += 2) {
    RealPolynomial R;
    R.parity = 1;
    R.cheb.assign(coef.begin(), coef.begin() + static_cast<std::ptrdiff_t>(n + 1));
    for (double& v : R.cheb) v *= scale;
    bool ok = true;
    for (std::size_t i = 0; i < 2001 && ok; ++i) {
      const double x = -1.0 + 2.0 * static_cast<double>(i) / 2000.0;
      const double r = R(x);
      if (std::abs(r) > 1.0) ok = false;
      if (x >= delta_prime && r < 1.0 - eps_prime) ok = false;
      if (x <= -delta_prime && r > -1.0 + eps_prime) ok = false;
    }
    if (ok) return R;
  }
  std::ostringstream os;
  os << "sign polynomial for delta' = " << delta_prime << ", eps' = " << eps_prime
     << " needs degree above " << kQspDegreeCap << "; use a larger eps'";
  throw DegreeCapError(os.str(), kQspDegreeCap + 1);
}

// ---- completion ----

PolynomialPair complete(const RealPolynomial& R, std::size_t k) {
  if (k == 0) k = R.degree();
  if (R.degree() > k) throw CompletionError("deg R exceeds k", 0.0);
  if (R.parity != static_cast<int>(k % 2) || R.parity_defect() > 1e-14) {
    throw CompletionError("parity of R does not match k", R.parity_defect());
  }
  for (std::size_t i = 0; i <= 2000; ++i) {
    const double x = -1.0 + 2.0 * static_cast<double>(i) / 2000.0;
    if (std::abs(R(x)) > 1.0 + 1e-12) throw CompletionError("|R| exceeds 1 on [-1, 1]", std::abs(R(x)) - 1.0);
  }

  // A = 1 - R^2 >= 0 on [-1, 1]; with x = (z + 1/z)/2 it factors as |g(z)|^2
  // on the circle, g having one root inside the disk per root of A in x.
  std::vector<double> A = cheb_square(R.cheb);
  for (double& v : A) v = -v;
  A[0] += 1.0;
  // Roots of 1 - R and 1 + R separately: 1 - R^2 has near-double roots
  // when |R| comes close to 1, which the colleague matrix resolves poorly.
  std::vector<double> lo(R.cheb), hi(R.cheb);
  if (lo.empty()) lo = hi = {0.0};
  for (double& v : lo) v = -v;
  lo[0] += 1.0;
  hi[0] += 1.0;
  std::vector<cplx> xr = polished_roots(lo);
  for (cplx x : polished_roots(hi)) xr.push_back(x);

  std::vector<cplx> zeta;
  std::vector<double> on_interval;
  for (cplx x : xr) {
    if (std::abs(x.imag()) < 1e-5 && std::abs(x.real()) <= 1.0 + 1e-5) {
      if (std::abs(std::abs(x.real()) - 1.0) < 1e-5) {
        zeta.push_back(x.real() > 0 ? 1.0 : -1.0);
      } else {
        on_interval.push_back(x.real());
      }
      continue;
    }
    const cplx s = std::sqrt(x * x - 1.0);
    const cplx z1 = x + s, z2 = x - s;
    zeta.push_back(std::abs(z1) <= std::abs(z2) ? z1 : z2);
  }
  // Interior real roots are double; split the pair between e^{i t} and e^{-i t}.
  if (on_interval.size() % 2 != 0) {
    throw CompletionError("unpaired root of 1 - R^2 on [-1, 1]", 0.0);
  }
  std::sort(on_interval.begin(), on_interval.end());
  for (std::size_t i = 0; i < on_interval.size(); i += 2) {
    const double t = std::acos(0.5 * (on_interval[i] + on_interval[i + 1]));
    zeta.push_back(std::polar(1.0, t));
    zeta.push_back(std::polar(1.0, -t));
  }

  const std::size_t N = 4 * k + 4;
  std::vector<cplx> z(N), prod(N);
  double best = -1.0, c2 = 1.0;
  for (std::size_t m = 0; m < N; ++m) {
    const double th = 2.0 * std::numbers::pi * static_cast<double>(m) / static_cast<double>(N);
    z[m] = std::polar(1.0, th);
    cplx p = 1.0;
    for (cplx r : zeta) p *= z[m] - r;
    prod[m] = p;
    const double a = clenshaw_T(A, std::cos(th));
    if (a > best && std::norm(p) > 0.0) {
      best = a;
      c2 = a / std::norm(p);
    }
  }
  const double c = std::sqrt(std::max(c2, 0.0));
  const int K = static_cast<int>(k);
  Laurent h(K);
  for (int j = -K; j <= K; ++j) {
    cplx s = 0.0;
    for (std::size_t m = 0; m < N; ++m) {
      s += c * prod[m] * std::pow(z[m], -K - j);
    }
    h.at(j) = (s / static_cast<double>(N)).real();
  }

  PolynomialPair pq;
  pq.k = k;
  pq.P.assign(k + 1, 0.0);
  pq.Q.assign(k, 0.0);
  for (std::size_t j = 0; j <= k && j < R.cheb.size(); ++j) pq.P[j] = R.cheb[j];
  pq.P[0] += kI * h.at(0);
  for (int j = 1; j <= K; ++j) pq.P[static_cast<std::size_t>(j)] += kI * (h.at(j) + h.at(-j));
  for (int j = 0; j < K; ++j) pq.Q[static_cast<std::size_t>(j)] = h.at(j + 1) - h.at(-j - 1);

  const double res = pq.condition_residual();
  if (res > 1e-8) {
    std::ostringstream os;
    os << "completion residual " << res << " at degree " << k;
    throw CompletionError(os.str(), res);
  }
  return pq;
}

// ---- layer stripping ----

PhaseSequence phase_factors(const PolynomialPair& PQ) {
  if (PQ.P.size() != PQ.k + 1 || PQ.Q.size() != PQ.k) {
    throw StructureError("polynomial pair sizes do not match k");
  }
  Laurent a = laurent_from_T(PQ.P);
  Laurent b = laurent_from_yU(PQ.Q);
  std::vector<cplx> alpha(PQ.k + 1);
  for (int d = static_cast<int>(PQ.k); d >= 1; --d) {
    const cplx ad = a.at(d), bd = b.at(d);
    const double big = std::max(std::abs(ad), std::abs(bd));
    cplx s = 1.0;
    if (big > 1e-12) {
      if (std::abs(std::abs(ad) - std::abs(bd)) > 1e-6 * big + 1e-12) {
        throw StrippingError("leading coefficients do not cancel at degree " + std::to_string(d),
                             static_cast<std::size_t>(d));
      }
      cplx s2 = kI * ad / bd;
      s2 /= std::abs(s2);
      s = std::sqrt(s2);
    }
    alpha[static_cast<std::size_t>(d)] = s;
    Laurent na = a.times_x() * std::conj(s) + b.times_y() * -s;
    Laurent nb = a.times_y() * std::conj(s) + b.times_x() * s;
    if (std::max(na.beyond(d - 1), nb.beyond(d - 1)) > 1e-8) {
      throw StrippingError("layer at degree " + std::to_string(d) + " does not peel",
                           static_cast<std::size_t>(d));
    }
    a = na.truncated(d - 1);
    b = nb.truncated(d - 1);
  }
  if (b.beyond(-1) > 1e-8 || std::abs(std::abs(a.at(0)) - 1.0) > 1e-8) {
    throw StrippingError("residual layer at degree 0 is not a phase", 0);
  }
  alpha[0] = a.at(0) / std::abs(a.at(0));
  PhaseSequence out{std::move(alpha)};
  const double res = qsp_main_residual(out, PQ);
  if (res > 1e-8) {
    throw StrippingError("reassembly residual " + std::to_string(res), PQ.k);
  }
  return out;
}

// ---- error reduction ----

QspReduction qsp_error_reduction(const Operator& O_ref, const OracleSpec& spec, double delta,
                                 double eps) {
  if (!(delta > 0.0 && delta <= 0.5)) throw DomainError("delta must lie in (0, 1/2]");
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("eps must lie in (0, 1)");
  if (spec.delta() < delta - 1e-12) throw DomainError("oracle bias is inside the gap");
  if (O_ref.dim() != 2 * spec.dW()) throw DimensionError("O_ref does not act on A (x) W");
  QspReduction out;
  out.eps_prime = eps * eps / 6.0;
  // delta' = 2 delta may reach 1 at delta = 1/2; cap just below.
  out.R = sign_polynomial(std::min(2.0 * delta, 1.0 - 1e-9), out.eps_prime);
  out.PQ = complete(out.R);
  out.alpha = phase_factors(out.PQ);
  out.degree = out.alpha.k();
  Mat z = Mat::Identity(static_cast<Eigen::Index>(O_ref.dim()), static_cast<Eigen::Index>(O_ref.dim()));
  const auto h = static_cast<Eigen::Index>(O_ref.dim() / 2);
  z.bottomRightCorner(h, h) *= -1.0;
  out.U = Operator(O_ref.space(), z * qsp_assemble(out.alpha, O_ref).mat());
  return out;
}

}  // namespace tlab
