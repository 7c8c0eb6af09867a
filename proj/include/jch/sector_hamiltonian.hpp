#pragma once

// Quasi-momentum block of the two-excitation Hamiltonian written in the
// (non-orthogonal) momentum basis |kj>_F, |k>_F|j>_A, |j>_F|k>_A, |kj>_A.
// The block is real but not symmetric; it is solved with a general real
// eigensolver.

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "jch/model.hpp"
#include "jch/parallel.hpp"

namespace jch {

struct SectorMatrix {
  SectorIndex sector;
  PairSet pair_set;
  Eigen::MatrixXd entries;

  int dimension() const noexcept { return pair_set.dimension(); }
};

SectorMatrix assemble_sector_matrix(const ModelParams& params, SectorIndex sector);

/// Coefficient vector of the one linear combination of atomic kets that
/// vanishes identically: gamma = 1 on off-diagonal pairs, 1/2 on diagonal
/// pairs, all other components zero. It is an exact eigenvector of every
/// sector matrix with eigenvalue 0.
Eigen::VectorXd null_direction(const PairSet& pairs);

struct SolveOptions {
  double tol_reality = 1e-9;
  double tol_spurious = 1e-8;
};

// Eigenpairs sorted by ascending eigenvalue. Coefficient vectors have unit
// Euclidean norm and a fixed sign (largest component positive).
struct SectorSolution {
  SectorIndex sector;
  PairSet pair_set;
  std::vector<double> eigenvalues;
  std::vector<Eigen::VectorXd> coefficient_vectors;
  std::vector<double> physical_norms;
  std::vector<bool> spurious_flags;
  /// Largest |Im lambda| seen before truncation to real.
  double max_imaginary = 0.0;

  std::size_t size() const noexcept { return eigenvalues.size(); }
  /// Non-spurious eigenvalues, ascending.
  std::vector<double> physical_eigenvalues() const;
};

SectorSolution solve_sector(const ModelParams& params, SectorIndex sector, const SolveOptions& opts = {});

/// Solves an already assembled (possibly modified) sector matrix.
SectorSolution solve_sector_matrix(const SectorMatrix& matrix, const SolveOptions& opts = {});

/// Cartesian product params_grid x sectors, params-major, input order.
/// A failing item is rethrown as jch::Error naming the item.
std::vector<SectorSolution> sector_sweep(std::span<const ModelParams> params_grid,
                                         std::span<const SectorIndex> sectors, const SolveOptions& opts = {},
                                         Execution exec = Execution::parallel);

}  // namespace jch
