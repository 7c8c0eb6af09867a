#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "jch/error.hpp"
#include "jch/oracle.hpp"
#include "jch/sector_hamiltonian.hpp"
#include "test_support.hpp"

using namespace jch;
using namespace jch_test;

namespace {

// Columns are the momentum kets in block-coefficient order.
Eigen::MatrixXcd ket_matrix(const PairSet& ps) {
  const int n = ps.n();
  Eigen::MatrixXcd k(2 * n * n, ps.dimension());
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const auto [a, b] = ps[i];
    k.col(ps.alpha_index(i)) = photon_pair_ket(n, a, b);
    k.col(ps.beta_index(i)) = photon_atom_ket(n, a, b);
    if (ps.beta_prime_index(i) >= 0) k.col(ps.beta_prime_index(i)) = photon_atom_ket(n, b, a);
    k.col(ps.gamma_index(i)) = atom_pair_ket(n, a, b);
  }
  return k;
}

double max_deviation(std::vector<double> a, std::vector<double> b) {
  if (a.size() != b.size()) return 1e300;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

}  // namespace

TEST_SUITE("sector_hamiltonian") {
  TEST_CASE("block matrix represents H on the momentum kets") {
    // H K = K M holds entry by entry when M is the exact action of H on the
    // (over-complete) ket set, independently of the redundancy.
    for (int n : {4, 5, 6}) {
      for (double delta : {0.0, 0.7}) {
        const auto params = validate_params({n, delta, 1.3, 0.9});
        const Eigen::MatrixXd h = build_full_hamiltonian(params);
        for (int p = 0; p < n; ++p) {
          const auto m = assemble_sector_matrix(params, SectorIndex{p});
          const Eigen::MatrixXcd k = ket_matrix(m.pair_set);
          const Eigen::MatrixXcd lhs = h.cast<cplx>() * k;
          const Eigen::MatrixXcd rhs = k * m.entries.cast<cplx>();
          CAPTURE(n);
          CAPTURE(p);
          CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
        }
      }
    }
  }

  TEST_CASE("null direction is an exact zero mode and an empty ket") {
    for (int n : {4, 5, 8}) {
      const auto params = validate_params({n, 0.2, 1.0, 1.7});
      for (int p = 0; p < n; ++p) {
        const auto m = assemble_sector_matrix(params, SectorIndex{p});
        const Eigen::VectorXd v = null_direction(m.pair_set);
        CHECK((m.entries * v).cwiseAbs().maxCoeff() < 1e-13);
        CHECK((ket_matrix(m.pair_set) * v.cast<cplx>()).cwiseAbs().maxCoeff() < 1e-14);
        for (std::size_t i = 0; i < m.pair_set.size(); ++i) {
          CHECK(v[m.pair_set.gamma_index(i)] == (m.pair_set[i].diagonal() ? 0.5 : 1.0));
          CHECK(v[m.pair_set.alpha_index(i)] == 0.0);
        }
      }
    }
  }

  TEST_CASE("block spectra agree with the brute-force sector spectra on random parameters") {
    std::mt19937 rng(20240917);
    std::uniform_real_distribution<double> delta_dist(-2.0, 2.0), j_dist(0.2, 2.0), g_dist(0.0, 6.0);
    std::uniform_int_distribution<int> n_dist(3, 8);
    for (int trial = 0; trial < 25; ++trial) {
      const auto params = validate_params({n_dist(rng), delta_dist(rng), j_dist(rng), g_dist(rng)});
      const auto oracle = sector_project_spectrum(params);
      for (int p = 0; p < params.n(); ++p) {
        const auto sol = solve_sector(params, SectorIndex{p});
        CAPTURE(params.n());
        CAPTURE(params.detuning());
        CAPTURE(params.rabi());
        CAPTURE(p);
        CHECK(max_deviation(sol.physical_eigenvalues(), oracle.by_sector[p]) < 1e-9);
      }
    }
  }

  TEST_CASE("exactly one spurious pair per sector and it is the null direction") {
    for (int n : {4, 6, 7}) {
      const auto params = validate_params({n, 0.5, 1.0, 2.0});
      for (int p = 0; p < n; ++p) {
        const auto sol = solve_sector(params, SectorIndex{p});
        CHECK(std::count(sol.spurious_flags.begin(), sol.spurious_flags.end(), true) == 1);
        for (std::size_t i = 0; i < sol.size(); ++i) {
          if (sol.spurious_flags[i]) {
            CHECK(sol.eigenvalues[i] == 0.0);
            CHECK(sol.physical_norms[i] < 1e-12);
          } else {
            CHECK(sol.physical_norms[i] > kSpuriousNormTolerance);
          }
        }
      }
    }
  }

  TEST_CASE("physical zero modes survive next to the null direction") {
    // At resonance the P = N/2 block has genuine lambda = 0 states sharing
    // the eigenvalue with the null direction.
    for (int n : {4, 6, 8}) {
      const auto params = validate_params({n, 0.0, 1.0, 2.0});
      const auto oracle = sector_project_spectrum(params);
      for (int p = 0; p < n; ++p) {
        const auto sol = solve_sector(params, SectorIndex{p});
        const auto phys = sol.physical_eigenvalues();
        const auto zeros = [](const std::vector<double>& v) {
          return std::count_if(v.begin(), v.end(), [](double x) { return std::abs(x) < 1e-8; });
        };
        CAPTURE(n);
        CAPTURE(p);
        CHECK(zeros(phys) == zeros(oracle.by_sector[p]));
      }
    }
  }

  TEST_CASE("eigenpairs satisfy M x = lambda x with the documented normalization") {
    const auto params = validate_params({7, -0.3, 1.0, 1.4});
    for (int p = 0; p < 7; ++p) {
      const auto m = assemble_sector_matrix(params, SectorIndex{p});
      const auto sol = solve_sector_matrix(m);
      CHECK(std::is_sorted(sol.eigenvalues.begin(), sol.eigenvalues.end()));
      for (std::size_t i = 0; i < sol.size(); ++i) {
        const auto& x = sol.coefficient_vectors[i];
        CHECK(x.norm() == doctest::Approx(1.0).epsilon(1e-12));
        Eigen::Index arg = 0;
        x.cwiseAbs().maxCoeff(&arg);
        CHECK(x[arg] > 0.0);
        CHECK((m.entries * x - sol.eigenvalues[i] * x).cwiseAbs().maxCoeff() < 1e-10);
      }
    }
  }

  TEST_CASE("complex eigenvalues beyond tolerance are reported") {
    const auto params = validate_params({4, 0.0, 1.0, 2.0});
    auto m = assemble_sector_matrix(params, SectorIndex{1});
    m.entries(m.pair_set.alpha_index(0), m.pair_set.beta_index(0)) *= -1.0;
    CHECK_THROWS_AS(solve_sector_matrix(m), Error);
    try {
      solve_sector_matrix(m);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::ComplexEigenvalueBeyondTolerance);
    }
  }

  TEST_CASE("sector sweep is params-major and matches single solves") {
    std::vector<ModelParams> grid{validate_params({5, 0.0, 1.0, 1.0}), validate_params({5, 0.0, 1.0, 3.0})};
    std::vector<SectorIndex> sectors{SectorIndex{0}, SectorIndex{3}};
    const auto sweep = sector_sweep(grid, sectors);
    REQUIRE(sweep.size() == 4);
    CHECK(sweep[1].sector.value == 3);
    CHECK(sweep[2].eigenvalues == solve_sector(grid[1], SectorIndex{0}).eigenvalues);
    std::vector<SectorIndex> bad{SectorIndex{7}};
    CHECK_THROWS_AS(sector_sweep(grid, bad), Error);
  }

  TEST_CASE("decoupled limit") {
    // g = 0: photons and atoms separate; eigenvalues are Omega_k + Omega_j,
    // Omega_k and Omega_j for the photon-atom kets, and 0.
    const auto params = validate_params({5, 0.4, 1.0, 0.0});
    for (int p = 0; p < 5; ++p) {
      std::vector<double> expected;
      const auto ps = sector_pairs(5, SectorIndex{p});
      for (const auto& pr : ps.pairs()) {
        const double wk = normal_mode_frequency(params, pr.k), wj = normal_mode_frequency(params, pr.j);
        expected.push_back(wk + wj);
        expected.push_back(wk);
        if (!pr.diagonal()) expected.push_back(wj);
        expected.push_back(0.0);
      }
      expected.pop_back();  // one atomic state is the redundant direction
      CHECK(max_deviation(solve_sector(params, SectorIndex{p}).physical_eigenvalues(), expected) < 1e-12);
    }
  }
}
