#pragma once

// Brute-force reference: the full two-excitation Hamiltonian in the
// orthonormal real-space occupation basis, resolved into translation sectors
// by exact orbit Fourier sums. Desk scale only (N <= 16).

#include <complex>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "jch/model.hpp"
#include "jch/parallel.hpp"
#include "jch/realspace.hpp"

namespace jch {

inline constexpr int kOracleMaxSites = 16;

using SparseOp = Eigen::SparseMatrix<std::complex<double>>;

/// Occupation configuration: photon count per site and a set of excited atoms.
struct FockConfig {
  std::vector<int> photons;
  std::vector<bool> atoms;

  int excitations() const;
  int atom_count() const;
};

// Truncated Fock space of photons plus two-level atoms on a ring, holding
// every configuration with at most max_excitations quanta. States are ordered
// by excitation number; inside the two-excitation shell the order is
// FF (n <= m), FA (photon n, atom m), AA (n < m), each lexicographic.
// Raising operators that would leave the space are truncated to zero.
class FockSpace {
 public:
  FockSpace(int n, int max_excitations);

  int n() const noexcept { return n_; }
  int dim() const noexcept { return static_cast<int>(configs_.size()); }
  int max_excitations() const noexcept { return max_exc_; }
  const FockConfig& config(int idx) const { return configs_[idx]; }
  /// -1 if the configuration is not in the space.
  int index_of(const FockConfig& c) const;
  /// Indices of the states with exactly e quanta, ascending.
  std::vector<int> shell(int e) const;

  SparseOp photon_lowering(int site) const;
  SparseOp atom_lowering(int site) const;
  SparseOp atom_inversion(int site) const;
  /// b_k = N^{-1/2} sum_n exp(-2 pi i k n / N) a_n
  SparseOp photon_mode_lowering(int k) const;
  /// s_k = N^{-1/2} sum_n exp(-2 pi i k n / N) sigma_n^-
  SparseOp atom_mode_lowering(int k) const;
  SparseOp identity() const;

  Eigen::VectorXcd vacuum() const;

  /// Reads the two-excitation shell of a state into real-space amplitudes
  /// (no normalization; norm is filled in).
  RealSpaceState to_real_space(const Eigen::Ref<const Eigen::VectorXcd>& state) const;

 private:
  std::uint64_t key(const FockConfig& c) const;

  int n_;
  int max_exc_;
  std::vector<FockConfig> configs_;
  std::unordered_map<std::uint64_t, int> index_;
};

/// The 2N^2 two-excitation states in canonical order.
struct TwoExcitationBasis {
  int n = 0;
  std::vector<std::pair<int, int>> ff_states;
  std::vector<std::pair<int, int>> fa_states;
  std::vector<std::pair<int, int>> aa_states;

  int total_dim() const noexcept {
    return static_cast<int>(ff_states.size() + fa_states.size() + aa_states.size());
  }
};

TwoExcitationBasis two_excitation_basis(int n);

/// Dense real symmetric matrix over TwoExcitationBasis order.
Eigen::MatrixXd build_full_hamiltonian(const ModelParams& params);

struct SectorSpectrum {
  int n = 0;
  std::vector<std::vector<double>> by_sector;
  /// Real-space eigenvectors (2N^2 x d_P, canonical basis order), filled
  /// only when requested.
  std::vector<Eigen::MatrixXcd> eigenvectors;
  /// max || T v - exp(-2 pi i P / N) v || over all sector basis vectors.
  double translation_residual = 0.0;

  std::size_t total_count() const;
};

SectorSpectrum sector_project_spectrum(const ModelParams& params, bool with_vectors = false,
                                       Execution exec = Execution::parallel);

/// Ascending spectrum of the unprojected matrix.
std::vector<double> full_spectrum(const ModelParams& params);

struct IdentityResidual {
  std::string name;
  double max_residual = 0.0;
};

/// Checks the mode-operator commutators and the three two-excitation
/// operator actions with explicit matrices; N <= 8.
std::vector<IdentityResidual> verify_operator_identities(int n);

}  // namespace jch
