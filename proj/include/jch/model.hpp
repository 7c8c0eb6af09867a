#pragma once

// Model parameters, quasi-momentum sectors and normal-mode frequencies of the
// one-dimensional Jaynes-Cummings-Hubbard chain with periodic boundaries.
//
// Frequencies are measured in the frame rotating at the atomic frequency, so
// the only single-site scale is the detuning (cavity minus atom).

#include <vector>

namespace jch {

/// Unvalidated parameter record, e.g. straight from the command line.
struct RawParams {
  int n_cavities = 0;
  double detuning = 0.0;
  double tunneling = 1.0;
  double rabi = 0.0;
  bool allow_zero_tunneling = false;
};

class ModelParams {
 public:
  int n() const noexcept { return n_; }
  double detuning() const noexcept { return detuning_; }
  double tunneling() const noexcept { return tunneling_; }
  double rabi() const noexcept { return rabi_; }

  /// Same chain with a different coupling; re-validated.
  ModelParams with_rabi(double rabi) const;

  RawParams raw() const noexcept {
    return {n_, detuning_, tunneling_, rabi_, tunneling_ == 0.0};
  }

 private:
  friend ModelParams validate_params(const RawParams& raw);
  ModelParams(int n, double detuning, double tunneling, double rabi)
      : n_(n), detuning_(detuning), tunneling_(tunneling), rabi_(rabi) {}

  int n_;
  double detuning_;
  double tunneling_;
  double rabi_;
};

/// Throws jch::Error on any violated invariant; never clamps.
ModelParams validate_params(const RawParams& raw);

struct SectorIndex {
  int value = 0;
  friend bool operator==(SectorIndex, SectorIndex) = default;
};

/// Checks 0 <= p < N.
SectorIndex make_sector(const ModelParams& params, int p);

/// Omega_k = Delta + 2 J cos(2 pi k / N).
double normal_mode_frequency(const ModelParams& params, int k);

struct ModePair {
  int k = 0;
  int j = 0;
  bool diagonal() const noexcept { return k == j; }
  friend bool operator==(ModePair, ModePair) = default;
};

// Pairs (k, j) with k + j = P mod N and k <= j, ascending. Each pair owns a
// coefficient block (alpha, beta, beta', gamma); diagonal pairs have no beta'.
class PairSet {
 public:
  PairSet() = default;
  PairSet(int n, SectorIndex sector, std::vector<ModePair> pairs);

  int n() const noexcept { return n_; }
  SectorIndex sector() const noexcept { return sector_; }
  const std::vector<ModePair>& pairs() const noexcept { return pairs_; }
  std::size_t size() const noexcept { return pairs_.size(); }
  const ModePair& operator[](std::size_t i) const { return pairs_[i]; }

  int off_diagonal_count() const noexcept { return off_diagonal_; }
  int diagonal_count() const noexcept { return diagonal_; }

  /// 4 * off-diagonal + 3 * diagonal.
  int dimension() const noexcept { return dimension_; }
  int block_offset(std::size_t i) const { return offsets_[i]; }
  int block_size(std::size_t i) const { return pairs_[i].diagonal() ? 3 : 4; }

  int alpha_index(std::size_t i) const { return offsets_[i]; }
  int beta_index(std::size_t i) const { return offsets_[i] + 1; }
  /// -1 for diagonal pairs.
  int beta_prime_index(std::size_t i) const {
    return pairs_[i].diagonal() ? -1 : offsets_[i] + 2;
  }
  int gamma_index(std::size_t i) const { return offsets_[i] + block_size(i) - 1; }

 private:
  int n_ = 0;
  SectorIndex sector_{};
  std::vector<ModePair> pairs_;
  std::vector<int> offsets_;
  int off_diagonal_ = 0;
  int diagonal_ = 0;
  int dimension_ = 0;
};

PairSet sector_pairs(int n, SectorIndex sector);

}  // namespace jch
