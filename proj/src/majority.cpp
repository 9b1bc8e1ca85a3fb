#include "transduce/majority.hpp"

#include <cmath>
#include <functional>

namespace tlab {

namespace {

std::size_t ceil_log2(std::size_t n) {
  std::size_t b = 0;
  while ((std::size_t{1} << b) < n) ++b;
  return b;
}

bool power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// Flat layout: ((dir*2 + out)*Rdim + R)*P^l + pairs, pair_1 most significant.
struct Layout {
  std::size_t ell, P, Rdim, pairs;

  std::size_t pairs_of(std::size_t i) const { return i % pairs; }
  std::size_t R_of(std::size_t i) const { return (i / pairs) % Rdim; }
  std::size_t out_of(std::size_t i) const { return (i / pairs / Rdim) % 2; }
  std::size_t dir_of(std::size_t i) const { return i / pairs / Rdim / 2; }
  std::size_t make(std::size_t dir, std::size_t out, std::size_t R, std::size_t pr) const {
    return ((dir * 2 + out) * Rdim + R) * pairs + pr;
  }
  std::size_t weight(std::size_t pr) const {
    std::size_t w = 0;
    for (std::size_t k = 0; k < ell; ++k, pr /= P) w += (pr % P) / (P / 2);
    return w;
  }
};

Permutation from_map(std::size_t n, const std::function<std::size_t(std::size_t)>& f) {
  Permutation p = Permutation::identity(n);
  for (std::size_t i = 0; i < n; ++i) p.target[i] = f(i);
  return p;
}

}  // namespace

std::size_t MajorityCircuit::output_index(int bit) const {
  const std::size_t P = 2 * dW;
  std::size_t pairs = 1;
  for (std::size_t k = 0; k < ell; ++k) pairs *= P;
  return static_cast<std::size_t>(bit) * (std::size_t{1} << sum_bits) * pairs;
}

MajorityCircuit build_majority(std::size_t ell, std::size_t dW) {
  if (ell == 0 || (ell % 2 == 0 && !power_of_two(ell))) {
    throw DomainError("majority needs l odd or a power of two");
  }
  if (dW == 0) throw DomainError("majority needs d_W >= 1");
  MajorityCircuit c;
  c.ell = ell;
  c.dW = dW;
  c.sum_bits = std::max<std::size_t>(ceil_log2(ell + 1), 1);

  Layout lay{ell, 2 * dW, std::size_t{1} << c.sum_bits, 1};
  double log_dim = std::log2(4.0 * static_cast<double>(lay.Rdim));
  for (std::size_t k = 0; k < ell; ++k) {
    lay.pairs *= lay.P;
    log_dim += std::log2(static_cast<double>(lay.P));
  }
  if (log_dim > std::log2(static_cast<double>(kMajorityDimCap)) + 1e-9) {
    throw DomainError("majority circuit of dimension 2^" + std::to_string(log_dim) +
                      " exceeds the simulation cap");
  }
  const std::size_t n = 4 * lay.Rdim * lay.pairs;
  const std::size_t tail = lay.pairs / lay.P;

  std::vector<Register> regs{{"dir", 2}, {"out", 2}, {"R", lay.Rdim}};
  for (std::size_t k = 1; k <= ell; ++k) {
    regs.push_back({"A" + std::to_string(k), 2});
    regs.push_back({"W" + std::to_string(k), dW});
  }

  auto rot_left = [&](std::size_t i) {
    std::size_t pr = lay.pairs_of(i);
    pr = (pr % tail) * lay.P + pr / tail;
    return i - lay.pairs_of(i) + pr;
  };
  auto rot_right = [&](std::size_t i) {
    std::size_t pr = lay.pairs_of(i);
    pr = (pr % lay.P) * tail + pr / lay.P;
    return i - lay.pairs_of(i) + pr;
  };
  auto flip_dir = [&](std::size_t i) {
    return lay.make(lay.dir_of(i) ^ 1, lay.out_of(i), lay.R_of(i), lay.pairs_of(i));
  };

  std::vector<Step> steps;
  steps.emplace_back(Permutation::identity(n));
  const Permutation left = from_map(n, rot_left);
  const Permutation right = from_map(n, rot_right);
  for (std::size_t t = 1; t < ell; ++t) steps.emplace_back(left);
  auto sum_in = [&](std::size_t i) {
    const std::size_t w = lay.weight(lay.pairs_of(i));
    return lay.make(lay.dir_of(i), lay.out_of(i), (lay.R_of(i) + w) % lay.Rdim, lay.pairs_of(i));
  };
  auto copy_high = [&](std::size_t i) {
    const std::size_t R = lay.R_of(i);
    const std::size_t flip = 2 * R >= ell ? 1 : 0;
    return lay.make(lay.dir_of(i), lay.out_of(i) ^ flip, R, lay.pairs_of(i));
  };
  auto sum_out = [&](std::size_t i) {
    const std::size_t w = lay.weight(lay.pairs_of(i));
    return lay.make(lay.dir_of(i), lay.out_of(i), (lay.R_of(i) + lay.Rdim - w) % lay.Rdim,
                    lay.pairs_of(i));
  };
  steps.emplace_back(left.then(from_map(n, sum_in))
                         .then(from_map(n, copy_high))
                         .then(from_map(n, sum_out))
                         .then(from_map(n, flip_dir))
                         .then(right));
  for (std::size_t t = 1; t < ell; ++t) steps.emplace_back(right);
  steps.emplace_back(from_map(n, flip_dir));

  BulletSplit split{2 * lay.Rdim * tail, 2 * lay.P, {}};
  split.index.reserve(n);
  for (std::size_t out = 0; out < 2; ++out) {
    for (std::size_t R = 0; R < lay.Rdim; ++R) {
      for (std::size_t rest = 0; rest < tail; ++rest) {
        for (std::size_t dir = 0; dir < 2; ++dir) {
          for (std::size_t p1 = 0; p1 < lay.P; ++p1) {
            split.index.push_back(lay.make(dir, out, R, p1 * tail + rest));
          }
        }
      }
    }
  }
  c.alg = QueryAlgorithm(Space::tensor(std::move(regs)), std::move(steps), std::move(split));
  return c;
}

std::size_t majority_qubits(std::size_t ell, std::size_t dW) {
  return ell * (1 + ceil_log2(dW)) + ceil_log2(ell + 1) + 1;
}

double majority_tail(std::size_t ell, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("p outside [0, 1]");
  if (p == 0.5) throw DomainError("p = 1/2 has no majority answer");
  const int r = p > 0.5 ? 1 : 0;
  double tail = 0.0;
  for (std::size_t k = 0; k <= ell; ++k) {
    const int bit = 2 * k >= ell ? 1 : 0;
    if (bit == r) continue;
    const double logc = std::lgamma(static_cast<double>(ell) + 1) -
                        std::lgamma(static_cast<double>(k) + 1) -
                        std::lgamma(static_cast<double>(ell - k) + 1);
    tail += std::exp(logc) * std::pow(p, static_cast<double>(k)) *
            std::pow(1.0 - p, static_cast<double>(ell - k));
  }
  return tail;
}

double imprecision_exact(std::size_t ell, double p) {
  return std::sqrt(2.0) * std::sqrt(majority_tail(ell, p));
}

double hoeffding_bound(std::size_t ell, double p) {
  const double delta = std::abs(0.5 - p);
  return std::sqrt(2.0) * std::exp(-static_cast<double>(ell) * delta * delta);
}

MajorityRun simulate_majority(const MajorityCircuit& c, const OracleSpec& spec) {
  spec.validate();
  if (spec.dW() != c.dW) throw DimensionError("oracle workspace does not match the circuit");
  if (spec.p == 0.5) throw DomainError("p = 1/2 has no majority answer");
  MajorityRun res;
  res.r = spec.r();
  res.queries = c.alg.queries();
  const Operator slot = bidirectional(state_generating_oracle(spec));
  const auto n = static_cast<Eigen::Index>(c.alg.dim());
  StateVector out = run(c.alg, slot, StateVector(c.alg.space(), Vec::Unit(n, 0)));
  Vec ideal = Vec::Unit(n, static_cast<Eigen::Index>(c.output_index(res.r)));
  res.imprecision = (out.amp() - ideal).norm();
  return res;
}

}  // namespace tlab
