#pragma once

// Secular-function view of a sector: non-zero eigenvalues are the roots of
//
//   G(lambda) = 1 - (2 g^2 / N) sum_{(k,j)} C_kj / ((1 + delta_kj) D_kj),
//   C_kj = (2 lambda - Omega_k - Omega_j)(lambda - Omega_k - Omega_j),
//   D_kj = g^2 (2 lambda - Omega_k - Omega_j)^2
//          - lambda (lambda - Omega_k)(lambda - Omega_j)(lambda - Omega_k - Omega_j).
//
// D_kj vanishes exactly at sums of two dressed single-polariton energies, so
// as N grows its roots fill three continua (both lower, mixed, both upper).
// Bound states are the roots of G left in the gaps between them.

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "jch/model.hpp"
#include "jch/parallel.hpp"

namespace jch {

struct SecularTerms {
  double c_value = 0.0;
  double d_value = 0.0;
};

SecularTerms secular_terms(double omega_k, double omega_j, double rabi, double lambda);
SecularTerms eval_secular_terms(const ModelParams& params, int k, int j, double lambda);

/// Single-polariton energies {lower, upper} of one mode: roots of
/// e^2 - omega e - g^2 = 0. For g = 0 this is {min(omega, 0), max(omega, 0)}.
std::array<double, 2> dressed_energies(double omega, double rabi);

/// The four roots of D for given mode frequencies, ascending.
std::array<double, 4> pair_roots(double omega_k, double omega_j, double rabi);

/// Roots of D_kj, ascending; throws NumericalRootFailure if a root does not
/// satisfy the quartic to 1e-8 of its coefficient scale.
std::array<double, 4> unperturbed_pair_roots(const ModelParams& params, int k, int j);

/// Throws PoleEvaluation when lambda sits on a root of some D_kj.
double eval_G(const ModelParams& params, SectorIndex sector, double lambda);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double width() const noexcept { return hi - lo; }
  bool contains(double x) const noexcept { return x >= lo && x <= hi; }
};

// Range of one continuum branch over the pair angle theta, with the angles
// where the extremes are attained.
struct BranchRange {
  double lo = 0.0;
  double lo_theta = 0.0;
  double hi = 0.0;
  double hi_theta = 0.0;

  Interval interval() const noexcept { return {lo, hi}; }
};

enum class Branch { lower, upper };

/// Relative slack on band edges: eigenvalues of decoupled pair states sit
/// exactly on a continuum edge and must not read as isolated.
inline constexpr double kBandEdgeTolerance = 1e-9;

struct BandStructure {
  std::optional<SectorIndex> sector;
  /// Total pair angle 2 pi P / N.
  double angle = 0.0;
  int resolution = 0;
  double detuning = 0.0;
  double tunneling = 1.0;
  double rabi = 0.0;

  BranchRange lower;  ///< both polaritons on the lower branch
  BranchRange mixed;  ///< one lower, one upper
  BranchRange upper;  ///< both upper

  std::vector<Interval> intervals;  ///< merged, ascending, disjoint
  std::vector<Interval> gaps;       ///< open gaps between consecutive intervals

  /// Width of the gap below the both-upper continuum (negative when closed).
  double upper_gap_width() const noexcept;
  /// Width of the gap above the both-lower continuum (negative when closed).
  double lower_gap_width() const noexcept;

  /// Inside (or within kBandEdgeTolerance of) some interval.
  bool in_band(double lambda) const noexcept;
  /// Distance to the nearest band edge when outside every band, else 0.
  double edge_distance(double lambda) const noexcept;
  /// Which bound branch an isolated eigenvalue belongs to: above the middle
  /// of the mixed continuum is upper.
  Branch branch_of(double lambda) const noexcept;
};

inline constexpr int kDefaultBandResolution = 2048;

/// N -> infinity bands at total pair angle `angle`: Omega_k = Delta + 2J cos(theta),
/// Omega_j = Delta + 2J cos(angle - theta), theta sampled on `resolution`
/// points and every branch extreme polished by Brent minimization.
BandStructure continuum_bands(double detuning, double tunneling, double rabi, double angle,
                              int resolution = kDefaultBandResolution, Execution exec = Execution::serial);

/// Continuum bands for sector P of the given chain.
BandStructure band_intervals(const ModelParams& params, SectorIndex sector,
                             int resolution = kDefaultBandResolution, Execution exec = Execution::serial);

struct BoundStateRecord {
  SectorIndex sector;
  double lambda_b = 0.0;
  Interval gap;  ///< host region; exterior regions use the outer search bound
  double margin = 0.0;
  Branch branch = Branch::upper;
};

/// Roots of G outside every band of `bands`, ascending. Zero is never reported.
std::vector<BoundStateRecord> find_bound_eigenvalues(const ModelParams& params, SectorIndex sector,
                                                     const BandStructure& bands, double tol_root = 1e-12);

/// Every non-zero root of G for the finite chain (bands and gaps alike).
std::vector<double> secular_roots(const ModelParams& params, SectorIndex sector, double tol_root = 1e-12);

/// Finite-N poles of G: all roots of every D_kj in the sector, ascending,
/// near-duplicates merged.
std::vector<double> secular_poles(const ModelParams& params, SectorIndex sector);

/// Radius enclosing the whole two-excitation spectrum.
double spectral_bound(const ModelParams& params);

/// Leading strong-coupling estimate {-, +} of the two bound energies:
/// +-sqrt(2) [g - J^2/(2g) (4 + 5 cos(2 pi P / N))].
std::array<double, 2> strong_coupling_estimate(const ModelParams& params, SectorIndex sector);

struct CriticalCoupling {
  double angle = 0.0;
  double upper = 0.0;  ///< g_c / J where the gap below the both-upper continuum opens
  double lower = 0.0;  ///< same for the gap above the both-lower continuum
  double max() const noexcept { return upper > lower ? upper : lower; }
};

inline constexpr double kCriticalSearchCeiling = 10.0;
inline constexpr double kCriticalTolerance = 1e-10;

/// Critical ratio g_c / J at the given total pair angle (J = 1 units),
/// bisected to `tol`. A gap that never closes for g > 0 gives 0. Throws
/// BisectionBracketFailure if a gap is still closed at the search ceiling.
CriticalCoupling critical_coupling(double angle, double detuning_over_j,
                                   int resolution = kDefaultBandResolution, double tol = kCriticalTolerance);

struct CriticalCouplingResult {
  CriticalCoupling value;
  bool ok = true;
  std::string error;  ///< set when ok is false
};

/// One entry per angle, input order; a failing angle does not stop the curve.
std::vector<CriticalCouplingResult> critical_coupling_curve(std::span<const double> angles,
                                                            double detuning_over_j,
                                                            int resolution = kDefaultBandResolution,
                                                            double tol = kCriticalTolerance,
                                                            Execution exec = Execution::parallel);

}  // namespace jch
