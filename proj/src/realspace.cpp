#include "jch/realspace.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "jch/error.hpp"

namespace jch {

namespace {

using cplx = std::complex<double>;

std::vector<cplx> unit_roots(int n) {
  std::vector<cplx> w(static_cast<std::size_t>(n));
  for (int q = 0; q < n; ++q) {
    w[q] = std::polar(1.0, 2.0 * std::numbers::pi * q / n);
  }
  return w;
}

}  // namespace

double RealSpaceState::total_probability() const {
  return ff.squaredNorm() + fa.squaredNorm() + aa.squaredNorm();
}

double physical_norm(const PairSet& pairs, const Eigen::Ref<const Eigen::VectorXd>& coeffs) {
  // Atomic kets overlap as <k'j'|kj>_A = w_i delta - 2/N inside a sector,
  // with w_i = 1 (2 for k = j) and sum_i 1/w_i = N/2. The quadratic form is
  // then sum_i (w_i gamma_i - t)^2 / w_i with t = 2/N sum gamma, which stays
  // accurate for vectors close to the null direction.
  const double n = pairs.n();
  double gamma_total = 0.0;
  for (std::size_t i = 0; i < pairs.size(); ++i) gamma_total += coeffs[pairs.gamma_index(i)];
  const double t = 2.0 / n * gamma_total;

  double sum = 0.0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const double weight = pairs[i].diagonal() ? 2.0 : 1.0;
    const double alpha = coeffs[pairs.alpha_index(i)];
    const double beta = coeffs[pairs.beta_index(i)];
    const double gamma_dev = weight * coeffs[pairs.gamma_index(i)] - t;
    sum += weight * alpha * alpha + beta * beta + gamma_dev * gamma_dev / weight;
    if (const int bp = pairs.beta_prime_index(i); bp >= 0) {
      sum += coeffs[bp] * coeffs[bp];
    }
  }
  return std::sqrt(sum);
}

RealSpaceState expand_real_space(const PairSet& pairs, const Eigen::Ref<const Eigen::VectorXd>& coeffs) {
  const int n = pairs.n();
  if (coeffs.size() != pairs.dimension()) {
    throw Error(ErrorCode::IndexOutOfRange,
                "coefficient vector has length " + std::to_string(coeffs.size()) + ", sector dimension is " +
                    std::to_string(pairs.dimension()));
  }
  const auto w = unit_roots(n);
  auto phase = [&](long long q) { return w[static_cast<std::size_t>(((q % n) + n) % n)]; };

  RealSpaceState state;
  state.n = n;
  state.ff = Eigen::MatrixXcd::Zero(n, n);
  state.fa = Eigen::MatrixXcd::Zero(n, n);
  state.aa = Eigen::MatrixXcd::Zero(n, n);

  const double inv_n = 1.0 / n;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto [k, j] = pairs[i];
    const double alpha = coeffs[pairs.alpha_index(i)] * inv_n;
    const double beta = coeffs[pairs.beta_index(i)] * inv_n;
    const int bp = pairs.beta_prime_index(i);
    const double beta_prime = bp >= 0 ? coeffs[bp] * inv_n : 0.0;
    const double gamma = coeffs[pairs.gamma_index(i)] * inv_n;

    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        const cplx kj = phase(static_cast<long long>(k) * a + static_cast<long long>(j) * b);
        if (beta != 0.0) state.fa(a, b) += beta * kj;
        if (beta_prime != 0.0) {
          state.fa(a, b) += beta_prime * phase(static_cast<long long>(j) * a + static_cast<long long>(k) * b);
        }
        if (b < a) continue;
        if (a == b) {
          state.ff(a, a) += alpha * std::numbers::sqrt2 * kj;
        } else {
          const cplx sym = kj + phase(static_cast<long long>(k) * b + static_cast<long long>(j) * a);
          state.ff(a, b) += alpha * sym;
          state.aa(a, b) += gamma * sym;
        }
      }
    }
  }
  state.norm = std::sqrt(state.total_probability());
  return state;
}

RealSpaceState to_real_space(const PairSet& pairs, const Eigen::Ref<const Eigen::VectorXd>& coeffs) {
  RealSpaceState state = expand_real_space(pairs, coeffs);
  if (state.norm < kSpuriousNormTolerance) {
    throw Error(ErrorCode::ZeroNormVector,
                "coefficient vector maps to a state of norm " + std::to_string(state.norm));
  }
  const double inv = 1.0 / state.norm;
  state.ff *= inv;
  state.fa *= inv;
  state.aa *= inv;
  return state;
}

RealSpaceState to_real_space(const ModelParams& params, SectorIndex sector,
                             const Eigen::Ref<const Eigen::VectorXd>& coeffs) {
  return to_real_space(sector_pairs(params.n(), make_sector(params, sector.value)), coeffs);
}

JointProbabilities joint_probabilities(const RealSpaceState& state) {
  const int n = state.n;
  const double total = state.total_probability();
  if (std::abs(total - 1.0) > 1e-10) {
    throw Error(ErrorCode::UnnormalizedInput, "total probability " + std::to_string(total));
  }
  JointProbabilities out;
  out.n = n;
  out.p_ff.assign(n, 0.0);
  out.p_fa.assign(n, 0.0);
  out.p_aa.assign(n, 0.0);
  auto sep = [n](int a, int b) { return ((a - b) % n + n) % n; };
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      out.p_fa[sep(a, b)] += std::norm(state.fa(a, b));
      if (b < a) continue;
      if (a == b) {
        out.p_ff[0] += std::norm(state.ff(a, a));
        continue;
      }
      const double pff = 0.5 * std::norm(state.ff(a, b));
      const double paa = 0.5 * std::norm(state.aa(a, b));
      out.p_ff[sep(a, b)] += pff;
      out.p_ff[sep(b, a)] += pff;
      out.p_aa[sep(a, b)] += paa;
      out.p_aa[sep(b, a)] += paa;
    }
  }
  const auto loc = localization_metrics(out);
  out.nn_mass = loc.nn_mass;
  out.width = loc.width;
  return out;
}

Localization localization_metrics(const JointProbabilities& probs) {
  const int n = probs.n;
  Localization loc;
  loc.nn_mass = probs.total(0) + probs.total(1) + (n - 1 != 1 ? probs.total(n - 1) : 0.0);
  double second_moment = 0.0;
  for (int d = 0; d < n; ++d) {
    const double dist = std::min(d, n - d);
    second_moment += probs.total(d) * dist * dist;
  }
  loc.width = std::sqrt(second_moment);
  return loc;
}

}  // namespace jch
