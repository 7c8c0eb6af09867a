#pragma once

// Real-space view of two-excitation states built from momentum-space
// coefficient vectors, and the joint probabilities derived from it.

#include <vector>

#include <Eigen/Dense>

#include "jch/model.hpp"

namespace jch {

// Amplitudes on the orthonormal real-space basis (sites 0..N-1):
//   ff(n, m), n <= m : a_n^+ a_m^+ / sqrt(1 + delta_nm) |vac>
//   fa(n, m), all    : a_n^+ sigma_m^+ |vac>   (photon at n, atom at m)
//   aa(n, m), n < m  : sigma_n^+ sigma_m^+ |vac>
// Entries outside those index sets are zero.
struct RealSpaceState {
  int n = 0;
  Eigen::MatrixXcd ff;
  Eigen::MatrixXcd fa;
  Eigen::MatrixXcd aa;
  /// Norm before normalization.
  double norm = 0.0;

  double total_probability() const;
};

/// Default threshold below which a coefficient vector has no physical content.
inline constexpr double kSpuriousNormTolerance = 1e-8;

/// Norm of the state a coefficient vector represents, evaluated with the
/// closed-form Gram matrix of the momentum kets. Cheap: O(dimension).
double physical_norm(const PairSet& pairs, const Eigen::Ref<const Eigen::VectorXd>& coeffs);

/// Expands a coefficient vector into real-space amplitudes and normalizes.
/// Throws ZeroNormVector when the vector lies in the null direction of the
/// momentum basis.
RealSpaceState to_real_space(const ModelParams& params, SectorIndex sector,
                             const Eigen::Ref<const Eigen::VectorXd>& coeffs);
RealSpaceState to_real_space(const PairSet& pairs, const Eigen::Ref<const Eigen::VectorXd>& coeffs);

/// Unnormalized expansion; norm is filled in but amplitudes are left as is.
RealSpaceState expand_real_space(const PairSet& pairs, const Eigen::Ref<const Eigen::VectorXd>& coeffs);

// Probabilities aggregated by separation d = (n - m) mod N. FF and AA pairs
// are unordered, so each off-site pair contributes half to d and half to N-d;
// FA keeps the photon site first.
struct JointProbabilities {
  int n = 0;
  std::vector<double> p_ff;
  std::vector<double> p_fa;
  std::vector<double> p_aa;
  double nn_mass = 0.0;
  double width = 0.0;

  double total(int d) const { return p_ff[d] + p_fa[d] + p_aa[d]; }
};

JointProbabilities joint_probabilities(const RealSpaceState& state);

struct Localization {
  double nn_mass = 0.0;  ///< probability at d in {0, 1, N-1}
  double width = 0.0;    ///< rms of min(d, N-d)
};

Localization localization_metrics(const JointProbabilities& probs);

}  // namespace jch
