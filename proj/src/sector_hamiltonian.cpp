#include "jch/sector_hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>

#include "jch/error.hpp"
#include "jch/realspace.hpp"

namespace jch {

SectorMatrix assemble_sector_matrix(const ModelParams& params, SectorIndex sector) {
  const int n = params.n();
  SectorMatrix m{make_sector(params, sector.value), sector_pairs(n, sector), {}};
  const PairSet& ps = m.pair_set;
  const double g = params.rabi();
  const double exchange = -2.0 * g / n;

  m.entries = Eigen::MatrixXd::Zero(ps.dimension(), ps.dimension());
  auto& h = m.entries;

  std::vector<int> gammas(ps.size());
  for (std::size_t i = 0; i < ps.size(); ++i) gammas[i] = ps.gamma_index(i);

  for (std::size_t i = 0; i < ps.size(); ++i) {
    const auto [k, j] = ps[i];
    const double wk = normal_mode_frequency(params, k);
    const double wj = normal_mode_frequency(params, j);
    const int a = ps.alpha_index(i);
    const int b = ps.beta_index(i);
    const int c = ps.gamma_index(i);

    // Every beta row sees the gamma sum over the whole sector.
    for (int gi : gammas) h(b, gi) += exchange;

    if (ps[i].diagonal()) {
      h(a, a) = 2.0 * wk;
      h(a, b) = g;
      h(b, a) = 2.0 * g;
      h(b, b) = wk;
      h(b, c) += 2.0 * g;
      h(c, b) = g;
    } else {
      const int bp = ps.beta_prime_index(i);
      for (int gi : gammas) h(bp, gi) += exchange;
      h(a, a) = wk + wj;
      h(a, b) = g;
      h(a, bp) = g;
      h(b, a) = g;
      h(b, b) = wk;
      h(b, c) += g;
      h(bp, a) = g;
      h(bp, bp) = wj;
      h(bp, c) += g;
      h(c, b) = g;
      h(c, bp) = g;
    }
  }
  return m;
}

Eigen::VectorXd null_direction(const PairSet& pairs) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(pairs.dimension());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    v[pairs.gamma_index(i)] = pairs[i].diagonal() ? 0.5 : 1.0;
  }
  return v;
}

std::vector<double> SectorSolution::physical_eigenvalues() const {
  std::vector<double> out;
  out.reserve(eigenvalues.size());
  for (std::size_t i = 0; i < eigenvalues.size(); ++i) {
    if (!spurious_flags[i]) out.push_back(eigenvalues[i]);
  }
  return out;
}

namespace {

void fix_sign(Eigen::VectorXd& v) {
  Eigen::Index imax = 0;
  v.cwiseAbs().maxCoeff(&imax);
  if (v[imax] < 0.0) v = -v;
}

bool lexicographic_less(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
}

}  // namespace

SectorSolution solve_sector_matrix(const SectorMatrix& matrix, const SolveOptions& opts) {
  const PairSet& ps = matrix.pair_set;
  const Eigen::MatrixXd& h = matrix.entries;
  const Eigen::Index dim = h.rows();

  // The momentum kets are overcomplete by exactly one direction. Its span is
  // invariant and carries eigenvalue 0; solving on the quotient space avoids
  // the defective (Jordan) structure that appears whenever the physical
  // spectrum also contains 0.
  const Eigen::VectorXd null = null_direction(ps);
  Eigen::Index pivot = 0;
  null.cwiseAbs().maxCoeff(&pivot);
  const double null_pivot = null[pivot];

  std::vector<Eigen::Index> keep;
  keep.reserve(static_cast<std::size_t>(dim - 1));
  for (Eigen::Index i = 0; i < dim; ++i) {
    if (i != pivot) keep.push_back(i);
  }
  const Eigen::Index q = dim - 1;
  Eigen::MatrixXd reduced(q, q);
  for (Eigen::Index r = 0; r < q; ++r) {
    for (Eigen::Index c = 0; c < q; ++c) {
      reduced(r, c) = h(keep[r], keep[c]) - null[keep[r]] / null_pivot * h(pivot, keep[c]);
    }
  }

  Eigen::EigenSolver<Eigen::MatrixXd> es(reduced, true);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorCode::EigensolverFailure, "sector P = " + std::to_string(matrix.sector.value));
  }
  const Eigen::VectorXcd evals = es.eigenvalues();
  const Eigen::MatrixXcd evecs = es.eigenvectors();

  const double radius = q > 0 ? evals.cwiseAbs().maxCoeff() : 0.0;
  const double tol_imag = opts.tol_reality * std::max(1.0, radius);

  struct Pair {
    double value;
    Eigen::VectorXd vec;
    double norm;
    bool spurious;
  };
  std::vector<Pair> eig;
  eig.reserve(static_cast<std::size_t>(dim));
  double max_imag = 0.0;

  for (Eigen::Index e = 0; e < q; ++e) {
    const double im = evals[e].imag();
    max_imag = std::max(max_imag, std::abs(im));
    if (std::abs(im) > tol_imag) {
      throw Error(ErrorCode::ComplexEigenvalueBeyondTolerance,
                  "sector P = " + std::to_string(matrix.sector.value) + ": Im(lambda) = " + std::to_string(im));
    }
    const double lambda = evals[e].real();
    // A numerically split conjugate pair shares one real 2-plane; take the
    // real part for one member and the imaginary part for the other.
    Eigen::VectorXd y = (im < 0.0) ? Eigen::VectorXd(evecs.col(e).imag()) : Eigen::VectorXd(evecs.col(e).real());
    if (y.norm() == 0.0) y = evecs.col(e).real();

    Eigen::VectorXd x = Eigen::VectorXd::Zero(dim);
    for (Eigen::Index r = 0; r < q; ++r) x[keep[r]] = y[r];
    if (std::abs(lambda) > 1e-9 * std::max(1.0, radius)) {
      // H x = lambda x + c * null; shift along the null direction to make x
      // an eigenvector of the full block. Its physical image is unchanged.
      const double c = h.row(pivot).dot(x) / null_pivot;
      x += (c / lambda) * null;
    }
    x.normalize();
    fix_sign(x);
    const double norm = physical_norm(ps, x);
    eig.push_back({lambda, std::move(x), norm, norm < opts.tol_spurious});
  }

  Eigen::VectorXd nv = null.normalized();
  const double null_norm = physical_norm(ps, nv);
  eig.push_back({0.0, std::move(nv), null_norm, null_norm < opts.tol_spurious});

  std::sort(eig.begin(), eig.end(), [](const Pair& a, const Pair& b) {
    if (a.value != b.value) return a.value < b.value;
    return lexicographic_less(a.vec, b.vec);
  });

  SectorSolution sol;
  sol.sector = matrix.sector;
  sol.pair_set = ps;
  sol.max_imaginary = max_imag;
  sol.eigenvalues.reserve(eig.size());
  for (auto& p : eig) {
    sol.eigenvalues.push_back(p.value);
    sol.coefficient_vectors.push_back(std::move(p.vec));
    sol.physical_norms.push_back(p.norm);
    sol.spurious_flags.push_back(p.spurious);
  }
  return sol;
}

SectorSolution solve_sector(const ModelParams& params, SectorIndex sector, const SolveOptions& opts) {
  return solve_sector_matrix(assemble_sector_matrix(params, sector), opts);
}

std::vector<SectorSolution> sector_sweep(std::span<const ModelParams> params_grid,
                                         std::span<const SectorIndex> sectors, const SolveOptions& opts,
                                         Execution exec) {
  const std::size_t count = params_grid.size() * sectors.size();
  std::vector<SectorSolution> out(count);
  for_each_index(count, exec, [&](std::size_t item) {
    const std::size_t gi = item / sectors.size();
    const std::size_t si = item % sectors.size();
    try {
      out[item] = solve_sector(params_grid[gi], sectors[si], opts);
    } catch (const Error& e) {
      throw Error(e.code(), "sweep item " + std::to_string(item) + " (params #" + std::to_string(gi) +
                                ", P = " + std::to_string(sectors[si].value) + "): " + e.what());
    }
  });
  return out;
}

}  // namespace jch
