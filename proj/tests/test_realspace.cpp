#include <doctest.h>

#include <cmath>
#include <random>

#include "jch/error.hpp"
#include "jch/oracle.hpp"
#include "jch/realspace.hpp"
#include "jch/sector_hamiltonian.hpp"
#include "jch/secular.hpp"
#include "test_support.hpp"

using namespace jch;
using namespace jch_test;

namespace {

Eigen::VectorXcd flatten(const RealSpaceState& s) {
  const int n = s.n;
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(2 * n * n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      if (a <= b) v[ff_slot(n, a, b)] = s.ff(a, b);
      v[fa_slot(n, a, b)] = s.fa(a, b);
      if (a < b) v[aa_slot(n, a, b)] = s.aa(a, b);
    }
  }
  return v;
}

Eigen::VectorXcd ket_combination(const PairSet& ps, const Eigen::VectorXd& x) {
  const int n = ps.n();
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(2 * n * n);
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const auto [k, j] = ps[i];
    v += x[ps.alpha_index(i)] * photon_pair_ket(n, k, j);
    v += x[ps.beta_index(i)] * photon_atom_ket(n, k, j);
    if (ps.beta_prime_index(i) >= 0) v += x[ps.beta_prime_index(i)] * photon_atom_ket(n, j, k);
    v += x[ps.gamma_index(i)] * atom_pair_ket(n, k, j);
  }
  return v;
}

// Isolated eigenvectors of one sector, normalized in real space.
std::vector<RealSpaceState> bound_states(const ModelParams& params, int p) {
  const auto sol = solve_sector(params, SectorIndex{p});
  const auto bands = band_intervals(params, SectorIndex{p});
  std::vector<RealSpaceState> out;
  for (std::size_t i = 0; i < sol.size(); ++i) {
    if (sol.spurious_flags[i] || bands.in_band(sol.eigenvalues[i])) continue;
    out.push_back(to_real_space(sol.pair_set, sol.coefficient_vectors[i]));
  }
  return out;
}

}  // namespace

TEST_SUITE("realspace") {
  TEST_CASE("expansion of single coefficients matches the operator definitions") {
    for (int n : {4, 5}) {
      for (int p = 0; p < n; ++p) {
        const auto ps = sector_pairs(n, SectorIndex{p});
        for (int c = 0; c < ps.dimension(); ++c) {
          Eigen::VectorXd x = Eigen::VectorXd::Zero(ps.dimension());
          x[c] = 1.0;
          const auto state = expand_real_space(ps, x);
          const Eigen::VectorXcd reference = ket_combination(ps, x);
          CAPTURE(n);
          CAPTURE(p);
          CAPTURE(c);
          CHECK((flatten(state) - reference).cwiseAbs().maxCoeff() < 1e-14);
          CHECK(state.norm == doctest::Approx(reference.norm()).epsilon(1e-13));
        }
      }
    }
  }

  TEST_CASE("diagonal atomic ket norm follows the overlap formula") {
    // <kk|kk>_A = 1 + 1 - 2/N for the pure gamma input on a diagonal pair.
    const auto ps = sector_pairs(4, SectorIndex{2});
    for (std::size_t i = 0; i < ps.size(); ++i) {
      Eigen::VectorXd x = Eigen::VectorXd::Zero(ps.dimension());
      x[ps.gamma_index(i)] = 1.0;
      const double expected = ps[i].diagonal() ? 2.0 - 2.0 / 4 : 1.0 - 2.0 / 4;
      CHECK(expand_real_space(ps, x).norm * expand_real_space(ps, x).norm == doctest::Approx(expected).epsilon(1e-13));
      CHECK(physical_norm(ps, x) * physical_norm(ps, x) == doctest::Approx(expected).epsilon(1e-13));
    }
  }

  TEST_CASE("closed-form physical norm agrees with the explicit expansion") {
    std::mt19937 rng(99);
    std::normal_distribution<double> nd;
    for (int n : {3, 6, 9}) {
      for (int p = 0; p < n; ++p) {
        const auto ps = sector_pairs(n, SectorIndex{p});
        Eigen::VectorXd x(ps.dimension());
        for (int t = 0; t < 5; ++t) {
          for (int c = 0; c < x.size(); ++c) x[c] = nd(rng);
          CHECK(physical_norm(ps, x) == doctest::Approx(expand_real_space(ps, x).norm).epsilon(1e-12));
        }
        CHECK(physical_norm(ps, null_direction(ps)) < 1e-14);
      }
    }
  }

  TEST_CASE("the null direction cannot be normalized") {
    const auto ps = sector_pairs(6, SectorIndex{0});
    try {
      to_real_space(ps, null_direction(ps));
      FAIL("expected ZeroNormVector");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::ZeroNormVector);
    }
  }

  TEST_CASE("bound states agree with brute-force eigenvectors up to a phase") {
    for (int n : {6, 8}) {
      const auto params = validate_params({n, 0.0, 1.0, 5.0});
      const auto oracle = sector_project_spectrum(params, true);
      for (int p = 0; p < n; ++p) {
        for (const auto& state : bound_states(params, p)) {
          const Eigen::VectorXcd v = flatten(state);
          // Pick the brute-force eigenvector with the largest overlap.
          double best = 0.0;
          const auto& vecs = oracle.eigenvectors[p];
          for (int c = 0; c < vecs.cols(); ++c) best = std::max(best, std::abs(vecs.col(c).dot(v)));
          CAPTURE(n);
          CAPTURE(p);
          CHECK(best == doctest::Approx(1.0).epsilon(1e-8));
        }
      }
    }
  }

  TEST_CASE("bound-state probabilities: normalization, separation-only dependence, translation covariance") {
    const int n = 12;
    const auto params = validate_params({n, 0.0, 1.0, 5.0});
    for (int p : {1, 4, 6}) {
      const auto states = bound_states(params, p);
      REQUIRE(states.size() == 2);
      for (const auto& s : states) {
        CHECK(s.total_probability() == doctest::Approx(1.0).epsilon(1e-12));
        const auto probs = joint_probabilities(s);
        double total = 0.0;
        for (int d = 0; d < n; ++d) total += probs.total(d);
        CHECK(std::abs(total - 1.0) < 1e-12);
        CHECK(probs.p_aa[0] == 0.0);

        // Every translate of a pair (a, b) carries the same probability.
        for (int a = 0; a < n; ++a) {
          for (int b = 0; b < n; ++b) {
            const int a1 = (a + 1) % n, b1 = (b + 1) % n;
            CHECK(std::norm(s.fa(a1, b1)) == doctest::Approx(std::norm(s.fa(a, b))).epsilon(1e-10).scale(1e-12));
            if (a < b && a1 < b1) {
              CHECK(std::norm(s.ff(a1, b1)) == doctest::Approx(std::norm(s.ff(a, b))).epsilon(1e-10).scale(1e-12));
              // Shifting by one site multiplies the amplitude by a fixed phase.
              if (std::abs(s.aa(a, b)) > 1e-6) {
                const auto ratio = s.aa(a1, b1) / s.aa(a, b);
                CHECK(std::abs(ratio - unit_phase(p, n)) < 1e-9);
              }
            }
          }
        }
      }
    }
  }

  TEST_CASE("separation histograms under the sector mirror") {
    // Sector N - P holds the complex conjugates of the sector P states, so
    // the histograms coincide; FF and AA are symmetric in d by construction.
    const int n = 10;
    const auto params = validate_params({n, 0.0, 1.0, 4.0});
    const auto a = bound_states(params, 3), b = bound_states(params, n - 3);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      const auto pa = joint_probabilities(a[i]), pb = joint_probabilities(b[i]);
      for (int d = 0; d < n; ++d) {
        CHECK(pa.p_fa[d] == doctest::Approx(pb.p_fa[d]).epsilon(1e-9).scale(1e-12));
        CHECK(pa.p_ff[d] == doctest::Approx(pa.p_ff[(n - d) % n]).epsilon(1e-9).scale(1e-12));
        CHECK(pa.p_aa[d] == doctest::Approx(pa.p_aa[(n - d) % n]).epsilon(1e-9).scale(1e-12));
      }
    }
  }

  TEST_CASE("localization metrics on synthetic distributions") {
    JointProbabilities delta;
    delta.n = 10;
    delta.p_ff.assign(10, 0.0);
    delta.p_fa.assign(10, 0.0);
    delta.p_aa.assign(10, 0.0);
    delta.p_ff[0] = 1.0;
    auto m = localization_metrics(delta);
    CHECK(m.nn_mass == 1.0);
    CHECK(m.width == 0.0);

    JointProbabilities uniform = delta;
    uniform.p_ff.assign(10, 0.1);
    m = localization_metrics(uniform);
    CHECK(m.nn_mass == doctest::Approx(3.0 / 10));
    double w2 = 0.0;
    for (int d = 0; d < 10; ++d) w2 += 0.1 * std::pow(std::min(d, 10 - d), 2);
    CHECK(m.width == doctest::Approx(std::sqrt(w2)));
  }

  TEST_CASE("unnormalized input is rejected") {
    const auto ps = sector_pairs(5, SectorIndex{1});
    Eigen::VectorXd x = Eigen::VectorXd::Zero(ps.dimension());
    x[0] = 3.0;
    const auto raw = expand_real_space(ps, x);
    CHECK_THROWS_AS(joint_probabilities(raw), Error);
    CHECK_NOTHROW(joint_probabilities(to_real_space(ps, x)));
  }

  TEST_CASE("strongly bound pairs: photons and atoms sit together, atoms never on one site") {
    const auto params = validate_params({50, 0.0, 1.0, 5.0});
    for (const auto& s : bound_states(params, 1)) {
      const auto probs = joint_probabilities(s);
      CHECK(probs.nn_mass >= 0.985);
      CHECK(probs.p_aa[0] == 0.0);
      // The atomic pair peaks at nearest neighbours.
      for (int d = 2; d < 49; ++d) {
        CHECK(probs.p_aa[1] > probs.p_aa[d]);
        CHECK(probs.p_aa[49] > probs.p_aa[d]);
      }
    }
  }

  TEST_CASE("binding weakens towards the critical coupling") {
    auto width = [](double g) {
      const auto params = validate_params({50, 0.0, 1.0, g});
      const auto states = bound_states(params, 1);
      REQUIRE(states.size() == 2);
      return localization_metrics(joint_probabilities(states[1])).width;
    };
    const double w5 = width(5.0), w2 = width(2.0), w18 = width(1.8);
    CHECK(w2 > w5);
    CHECK(w18 > w2);
  }
}
