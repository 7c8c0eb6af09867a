#include "jch/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <tuple>

#include <Eigen/Eigenvalues>

#include "jch/error.hpp"

namespace jch {

namespace {

using cplx = std::complex<double>;
using Triplet = Eigen::Triplet<cplx>;

std::vector<int> photon_sites(const FockConfig& c) {
  std::vector<int> out;
  for (int s = 0; s < static_cast<int>(c.photons.size()); ++s) {
    for (int q = 0; q < c.photons[s]; ++q) out.push_back(s);
  }
  return out;
}

std::vector<int> atom_sites(const FockConfig& c) {
  std::vector<int> out;
  for (int s = 0; s < static_cast<int>(c.atoms.size()); ++s) {
    if (c.atoms[s]) out.push_back(s);
  }
  return out;
}

void enumerate(int site, int budget, FockConfig& cur, std::vector<FockConfig>& out) {
  const int n = static_cast<int>(cur.photons.size());
  if (site == n) {
    out.push_back(cur);
    return;
  }
  for (int p = 0; p <= budget; ++p) {
    cur.photons[site] = p;
    enumerate(site + 1, budget - p, cur, out);
    if (budget - p >= 1) {
      cur.atoms[site] = true;
      enumerate(site + 1, budget - p - 1, cur, out);
      cur.atoms[site] = false;
    }
  }
  cur.photons[site] = 0;
}

FockConfig shifted(const FockConfig& c) {
  const int n = static_cast<int>(c.photons.size());
  FockConfig out{std::vector<int>(n, 0), std::vector<bool>(n, false)};
  for (int s = 0; s < n; ++s) {
    out.photons[(s + 1) % n] = c.photons[s];
    out.atoms[(s + 1) % n] = c.atoms[s];
  }
  return out;
}

void check_oracle_size(int n) {
  if (n < 3) throw Error(ErrorCode::NTooSmall, "N = " + std::to_string(n));
  if (n > kOracleMaxSites) {
    throw Error(ErrorCode::DimensionGuardExceeded,
                "oracle limited to N <= " + std::to_string(kOracleMaxSites) + ", got " + std::to_string(n));
  }
}

// Calls emit(target, amplitude) for every off-diagonal term of the
// Hamiltonian acting on c, and returns the diagonal element.
double hamiltonian_terms(const ModelParams& params, const FockConfig& c,
                         const std::function<void(const FockConfig&, double)>& emit) {
  const int n = params.n();
  double diag = 0.0;
  for (int s = 0; s < n; ++s) diag += params.detuning() * c.photons[s];

  for (int s = 0; s < n; ++s) {
    const int p = c.photons[s];
    if (p == 0) continue;
    // a_t^+ a_s for both neighbours t of s covers each hopping term once.
    for (int t : {(s + 1) % n, (s + n - 1) % n}) {
      FockConfig d = c;
      d.photons[s] -= 1;
      const double amp = std::sqrt(static_cast<double>(p)) * std::sqrt(static_cast<double>(d.photons[t] + 1));
      d.photons[t] += 1;
      emit(d, params.tunneling() * amp);
    }
  }
  for (int s = 0; s < n; ++s) {
    if (c.photons[s] > 0 && !c.atoms[s]) {
      FockConfig d = c;
      const double amp = std::sqrt(static_cast<double>(d.photons[s]));
      d.photons[s] -= 1;
      d.atoms[s] = true;
      emit(d, params.rabi() * amp);
    }
    if (c.atoms[s]) {
      FockConfig d = c;
      d.atoms[s] = false;
      d.photons[s] += 1;
      emit(d, params.rabi() * std::sqrt(static_cast<double>(d.photons[s])));
    }
  }
  return diag;
}

}  // namespace

int FockConfig::excitations() const {
  int total = 0;
  for (int p : photons) total += p;
  return total + atom_count();
}

int FockConfig::atom_count() const { return static_cast<int>(std::count(atoms.begin(), atoms.end(), true)); }

FockSpace::FockSpace(int n, int max_excitations) : n_(n), max_exc_(max_excitations) {
  check_oracle_size(n);
  FockConfig cur{std::vector<int>(n, 0), std::vector<bool>(n, false)};
  enumerate(0, max_excitations, cur, configs_);
  auto order = [](const FockConfig& c) {
    return std::make_tuple(c.excitations(), c.atom_count(), photon_sites(c), atom_sites(c));
  };
  std::sort(configs_.begin(), configs_.end(),
            [&](const FockConfig& a, const FockConfig& b) { return order(a) < order(b); });
  for (int i = 0; i < dim(); ++i) index_.emplace(key(configs_[i]), i);
}

std::uint64_t FockSpace::key(const FockConfig& c) const {
  std::uint64_t k = 0;
  for (int s = 0; s < n_; ++s) {
    k |= static_cast<std::uint64_t>(c.photons[s] & 3) << (2 * s);
    if (c.atoms[s]) k |= std::uint64_t{1} << (32 + s);
  }
  return k;
}

int FockSpace::index_of(const FockConfig& c) const {
  for (int p : c.photons) {
    if (p < 0 || p > 3) return -1;
  }
  if (c.excitations() > max_exc_) return -1;
  const auto it = index_.find(key(c));
  return it == index_.end() ? -1 : it->second;
}

std::vector<int> FockSpace::shell(int e) const {
  std::vector<int> out;
  for (int i = 0; i < dim(); ++i) {
    if (configs_[i].excitations() == e) out.push_back(i);
  }
  return out;
}

SparseOp FockSpace::photon_lowering(int site) const {
  std::vector<Triplet> trips;
  for (int i = 0; i < dim(); ++i) {
    const int p = configs_[i].photons[site];
    if (p == 0) continue;
    FockConfig d = configs_[i];
    d.photons[site] -= 1;
    trips.emplace_back(index_of(d), i, std::sqrt(static_cast<double>(p)));
  }
  SparseOp op(dim(), dim());
  op.setFromTriplets(trips.begin(), trips.end());
  return op;
}

SparseOp FockSpace::atom_lowering(int site) const {
  std::vector<Triplet> trips;
  for (int i = 0; i < dim(); ++i) {
    if (!configs_[i].atoms[site]) continue;
    FockConfig d = configs_[i];
    d.atoms[site] = false;
    trips.emplace_back(index_of(d), i, 1.0);
  }
  SparseOp op(dim(), dim());
  op.setFromTriplets(trips.begin(), trips.end());
  return op;
}

SparseOp FockSpace::atom_inversion(int site) const {
  std::vector<Triplet> trips;
  for (int i = 0; i < dim(); ++i) trips.emplace_back(i, i, configs_[i].atoms[site] ? 1.0 : -1.0);
  SparseOp op(dim(), dim());
  op.setFromTriplets(trips.begin(), trips.end());
  return op;
}

SparseOp FockSpace::identity() const {
  SparseOp op(dim(), dim());
  op.setIdentity();
  return op;
}

SparseOp FockSpace::photon_mode_lowering(int k) const {
  SparseOp op(dim(), dim());
  for (int s = 0; s < n_; ++s) {
    const cplx ph = std::polar(1.0 / std::sqrt(static_cast<double>(n_)), -2.0 * std::numbers::pi * k * s / n_);
    op += ph * photon_lowering(s);
  }
  return op;
}

SparseOp FockSpace::atom_mode_lowering(int k) const {
  SparseOp op(dim(), dim());
  for (int s = 0; s < n_; ++s) {
    const cplx ph = std::polar(1.0 / std::sqrt(static_cast<double>(n_)), -2.0 * std::numbers::pi * k * s / n_);
    op += ph * atom_lowering(s);
  }
  return op;
}

Eigen::VectorXcd FockSpace::vacuum() const {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim());
  v[0] = 1.0;
  return v;
}

RealSpaceState FockSpace::to_real_space(const Eigen::Ref<const Eigen::VectorXcd>& state) const {
  RealSpaceState rs;
  rs.n = n_;
  rs.ff = Eigen::MatrixXcd::Zero(n_, n_);
  rs.fa = Eigen::MatrixXcd::Zero(n_, n_);
  rs.aa = Eigen::MatrixXcd::Zero(n_, n_);
  for (int i : shell(2)) {
    const auto& c = configs_[i];
    const auto ph = photon_sites(c);
    const auto at = atom_sites(c);
    if (ph.size() == 2) {
      rs.ff(ph[0], ph[1]) = state[i];
    } else if (ph.size() == 1) {
      rs.fa(ph[0], at[0]) = state[i];
    } else {
      rs.aa(at[0], at[1]) = state[i];
    }
  }
  rs.norm = std::sqrt(rs.total_probability());
  return rs;
}

TwoExcitationBasis two_excitation_basis(int n) {
  check_oracle_size(n);
  TwoExcitationBasis b;
  b.n = n;
  for (int a = 0; a < n; ++a) {
    for (int c = a; c < n; ++c) b.ff_states.emplace_back(a, c);
  }
  for (int a = 0; a < n; ++a) {
    for (int c = 0; c < n; ++c) b.fa_states.emplace_back(a, c);
  }
  for (int a = 0; a < n; ++a) {
    for (int c = a + 1; c < n; ++c) b.aa_states.emplace_back(a, c);
  }
  return b;
}

namespace {

struct ShellData {
  FockSpace space;
  std::vector<int> states;      // FockSpace indices of the shell, canonical order
  std::vector<int> position;    // FockSpace index -> shell position or -1
};

ShellData two_excitation_shell(int n) {
  ShellData d{FockSpace(n, 2), {}, {}};
  d.states = d.space.shell(2);
  d.position.assign(d.space.dim(), -1);
  for (int i = 0; i < static_cast<int>(d.states.size()); ++i) d.position[d.states[i]] = i;
  return d;
}

Eigen::MatrixXd hamiltonian_on_shell(const ModelParams& params, const ShellData& sh) {
  const int dim = static_cast<int>(sh.states.size());
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  for (int col = 0; col < dim; ++col) {
    const FockConfig& c = sh.space.config(sh.states[col]);
    h(col, col) += hamiltonian_terms(params, c, [&](const FockConfig& target, double amp) {
      const int idx = sh.space.index_of(target);
      const int row = idx >= 0 ? sh.position[idx] : -1;
      if (row < 0) {
        throw Error(ErrorCode::ProjectorRankMismatch, "Hamiltonian left the two-excitation shell");
      }
      h(row, col) += amp;
    });
  }
  return h;
}

}  // namespace

Eigen::MatrixXd build_full_hamiltonian(const ModelParams& params) {
  check_oracle_size(params.n());
  return hamiltonian_on_shell(params, two_excitation_shell(params.n()));
}

std::vector<double> full_spectrum(const ModelParams& params) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(build_full_hamiltonian(params), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw Error(ErrorCode::EigensolverFailure, "full oracle matrix");
  const auto& v = es.eigenvalues();
  return {v.data(), v.data() + v.size()};
}

std::size_t SectorSpectrum::total_count() const {
  std::size_t total = 0;
  for (const auto& s : by_sector) total += s.size();
  return total;
}

SectorSpectrum sector_project_spectrum(const ModelParams& params, bool with_vectors, Execution exec) {
  const int n = params.n();
  check_oracle_size(n);
  const ShellData sh = two_excitation_shell(n);
  const Eigen::MatrixXcd h = hamiltonian_on_shell(params, sh).cast<cplx>();
  const int dim = static_cast<int>(sh.states.size());

  std::vector<int> shift(dim);
  for (int i = 0; i < dim; ++i) {
    shift[i] = sh.position[sh.space.index_of(shifted(sh.space.config(sh.states[i])))];
  }

  // Translation orbits; representative = smallest member.
  std::vector<std::vector<int>> orbits;
  std::vector<bool> seen(dim, false);
  for (int i = 0; i < dim; ++i) {
    if (seen[i]) continue;
    std::vector<int> orbit;
    for (int s = i; !seen[s]; s = shift[s]) {
      seen[s] = true;
      orbit.push_back(s);
    }
    orbits.push_back(std::move(orbit));
  }

  SectorSpectrum out;
  out.n = n;
  out.by_sector.resize(n);
  if (with_vectors) out.eigenvectors.resize(n);
  std::vector<double> residuals(n, 0.0);

  for_each_index(static_cast<std::size_t>(n), exec, [&](std::size_t pidx) {
    const int p = static_cast<int>(pidx);
    std::vector<const std::vector<int>*> members;
    for (const auto& o : orbits) {
      if ((static_cast<long long>(p) * static_cast<long long>(o.size())) % n == 0) members.push_back(&o);
    }
    const int dp = static_cast<int>(members.size());
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(dim, dp);
    for (int col = 0; col < dp; ++col) {
      const auto& o = *members[col];
      const double scale = 1.0 / std::sqrt(static_cast<double>(o.size()));
      for (std::size_t t = 0; t < o.size(); ++t) {
        u(o[t], col) = std::polar(scale, 2.0 * std::numbers::pi * p * static_cast<double>(t) / n);
      }
    }
    // T v must equal exp(-2 pi i P / N) v.
    const cplx eig = std::polar(1.0, -2.0 * std::numbers::pi * p / n);
    double res = 0.0;
    for (int col = 0; col < dp; ++col) {
      Eigen::VectorXcd tv = Eigen::VectorXcd::Zero(dim);
      for (int s = 0; s < dim; ++s) tv[shift[s]] = u(s, col);
      res = std::max(res, (tv - eig * u.col(col)).cwiseAbs().maxCoeff());
    }
    residuals[pidx] = res;

    const Eigen::MatrixXcd hp = u.adjoint() * h * u;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(
        hp, with_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) {
      throw Error(ErrorCode::EigensolverFailure, "oracle sector P = " + std::to_string(p));
    }
    const auto& ev = es.eigenvalues();
    out.by_sector[pidx].assign(ev.data(), ev.data() + ev.size());
    if (with_vectors) out.eigenvectors[pidx] = u * es.eigenvectors();
  });

  out.translation_residual = *std::max_element(residuals.begin(), residuals.end());
  if (out.total_count() != static_cast<std::size_t>(dim)) {
    throw Error(ErrorCode::ProjectorRankMismatch,
                "sector dimensions sum to " + std::to_string(out.total_count()) + ", expected " +
                    std::to_string(dim));
  }
  return out;
}

std::vector<IdentityResidual> verify_operator_identities(int n) {
  if (n > 8) {
    throw Error(ErrorCode::DimensionGuardExceeded, "operator identities checked for N <= 8 only");
  }
  const FockSpace fs(n, 3);
  const int dim = fs.dim();

  std::vector<SparseOp> b(n), bd(n), s(n), sd(n), sz(n);
  for (int k = 0; k < n; ++k) {
    b[k] = fs.photon_mode_lowering(k);
    bd[k] = SparseOp(b[k].adjoint());
    s[k] = fs.atom_mode_lowering(k);
    sd[k] = SparseOp(s[k].adjoint());
    sz[k] = fs.atom_inversion(k);
  }

  // Commutators are exact on states with at most two quanta.
  std::vector<int> low;
  for (int e = 0; e <= 2; ++e) {
    const auto sh = fs.shell(e);
    low.insert(low.end(), sh.begin(), sh.end());
  }
  Eigen::MatrixXcd domain = Eigen::MatrixXcd::Zero(dim, static_cast<Eigen::Index>(low.size()));
  for (std::size_t c = 0; c < low.size(); ++c) domain(low[c], static_cast<Eigen::Index>(c)) = 1.0;

  double res_bb = 0.0;
  double res_ss = 0.0;
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < n; ++j) {
      const Eigen::MatrixXcd bb = b[k] * (bd[j] * domain) - bd[j] * (b[k] * domain);
      const Eigen::MatrixXcd expect_bb = (k == j ? 1.0 : 0.0) * domain;
      res_bb = std::max(res_bb, (bb - expect_bb).cwiseAbs().maxCoeff());

      const Eigen::MatrixXcd ss = s[k] * (sd[j] * domain) - sd[j] * (s[k] * domain);
      SparseOp rhs(dim, dim);
      for (int site = 0; site < n; ++site) {
        rhs += std::polar(-1.0 / n, 2.0 * std::numbers::pi * site * (j - k) / n) * sz[site];
      }
      res_ss = std::max(res_ss, (ss - rhs * domain).cwiseAbs().maxCoeff());
    }
  }

  const Eigen::VectorXcd vac = fs.vacuum();
  auto ket_ff = [&](int k, int j) -> Eigen::VectorXcd { return bd[k] * (bd[j] * vac); };
  auto ket_fa = [&](int k, int j) -> Eigen::VectorXcd { return bd[k] * (sd[j] * vac); };
  auto ket_aa = [&](int k, int j) -> Eigen::VectorXcd { return sd[k] * (sd[j] * vac); };
  auto delta = [](int x, int y) { return x == y ? 1.0 : 0.0; };
  auto mod = [n](int x) { return ((x % n) + n) % n; };

  double res7 = 0.0;
  double res8 = 0.0;
  double res9 = 0.0;
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < n; ++j) {
      const Eigen::VectorXcd ff = ket_ff(k, j);
      const Eigen::VectorXcd fa = ket_fa(k, j);
      const Eigen::VectorXcd aa = ket_aa(k, j);
      for (int l = 0; l < n; ++l) {
        const Eigen::VectorXcd lhs7 = b[l] * (sd[l] * ff);
        const Eigen::VectorXcd rhs7 = delta(l, j) * fa + delta(l, k) * ket_fa(j, k);
        res7 = std::max(res7, (lhs7 - rhs7).cwiseAbs().maxCoeff());

        const Eigen::VectorXcd lhs8 = bd[l] * (s[l] * fa) + b[l] * (sd[l] * fa);
        const Eigen::VectorXcd rhs8 = delta(l, j) * ff + delta(l, k) * aa;
        res8 = std::max(res8, (lhs8 - rhs8).cwiseAbs().maxCoeff());

        const Eigen::VectorXcd lhs9 = bd[l] * (s[l] * aa);
        const Eigen::VectorXcd rhs9 =
            delta(k, l) * fa + delta(j, l) * ket_fa(j, k) - (2.0 / n) * ket_fa(l, mod(k + j - l));
        res9 = std::max(res9, (lhs9 - rhs9).cwiseAbs().maxCoeff());
      }
    }
  }

  double res_overlap = 0.0;
  for (int k = 0; k < n; ++k) {
    for (int j = k; j < n; ++j) {
      const Eigen::VectorXcd aa = ket_aa(k, j);
      for (int k2 = 0; k2 < n; ++k2) {
        for (int j2 = k2; j2 < n; ++j2) {
          const cplx overlap = ket_aa(k2, j2).dot(aa);
          const double expect = delta(k, k2) * delta(j, j2) + delta(k, j) * delta(k, k2) * delta(k, j2) -
                                (mod(k + j) == mod(k2 + j2) ? 2.0 / n : 0.0);
          res_overlap = std::max(res_overlap, std::abs(overlap - expect));
        }
      }
    }
  }

  return {
      {"commutator_photon_modes", res_bb},
      {"commutator_atom_modes", res_ss},
      {"action_photon_pair", res7},
      {"action_photon_atom", res8},
      {"action_atom_pair", res9},
      {"atom_pair_overlap", res_overlap},
  };
}

}  // namespace jch
