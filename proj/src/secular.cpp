#include "jch/secular.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/tools/minima.hpp>

#include "jch/error.hpp"

namespace jch {

SecularTerms secular_terms(double omega_k, double omega_j, double rabi, double lambda) {
  const double s = omega_k + omega_j;
  const double twice = 2.0 * lambda - s;
  SecularTerms t;
  t.c_value = twice * (lambda - s);
  t.d_value = rabi * rabi * twice * twice - lambda * (lambda - omega_k) * (lambda - omega_j) * (lambda - s);
  return t;
}

SecularTerms eval_secular_terms(const ModelParams& params, int k, int j, double lambda) {
  return secular_terms(normal_mode_frequency(params, k), normal_mode_frequency(params, j), params.rabi(), lambda);
}

std::array<double, 2> dressed_energies(double omega, double rabi) {
  if (rabi == 0.0) return {std::min(omega, 0.0), std::max(omega, 0.0)};
  const double h = std::hypot(0.5 * omega, rabi);
  // The product of the two energies is -g^2; use it for the small one.
  if (omega >= 0.0) {
    const double up = 0.5 * omega + h;
    return {-rabi * rabi / up, up};
  }
  const double lo = 0.5 * omega - h;
  return {lo, -rabi * rabi / lo};
}

std::array<double, 4> pair_roots(double omega_k, double omega_j, double rabi) {
  const auto ek = dressed_energies(omega_k, rabi);
  const auto ej = dressed_energies(omega_j, rabi);
  std::array<double, 4> r{ek[0] + ej[0], ek[0] + ej[1], ek[1] + ej[0], ek[1] + ej[1]};
  std::sort(r.begin(), r.end());
  return r;
}

std::array<double, 4> unperturbed_pair_roots(const ModelParams& params, int k, int j) {
  const double wk = normal_mode_frequency(params, k);
  const double wj = normal_mode_frequency(params, j);
  const auto roots = pair_roots(wk, wj, params.rabi());
  double scale = std::max({1.0, std::abs(wk), std::abs(wj), params.rabi()});
  for (double r : roots) scale = std::max(scale, std::abs(r));
  const double tol = 1e-8 * std::pow(scale, 4);
  for (double r : roots) {
    const double d = secular_terms(wk, wj, params.rabi(), r).d_value;
    if (!(std::abs(d) <= tol)) {
      throw Error(ErrorCode::NumericalRootFailure,
                  "|D(" + std::to_string(r) + ")| = " + std::to_string(std::abs(d)) + " for pair (" +
                      std::to_string(k) + ", " + std::to_string(j) + ")");
    }
  }
  return roots;
}

namespace {

struct PairData {
  double s;  // Omega_k + Omega_j
  double weight;
  std::array<double, 4> roots;
};

std::vector<PairData> pair_data(const ModelParams& params, SectorIndex sector) {
  const PairSet ps = sector_pairs(params.n(), make_sector(params, sector.value));
  std::vector<PairData> out;
  out.reserve(ps.size());
  for (const auto& pr : ps.pairs()) {
    const double wk = normal_mode_frequency(params, pr.k);
    const double wj = normal_mode_frequency(params, pr.j);
    out.push_back({wk + wj, pr.diagonal() ? 0.5 : 1.0, pair_roots(wk, wj, params.rabi())});
  }
  return out;
}

// D = -prod(lambda - r_i); the factored form keeps full relative accuracy
// next to the poles.
double eval_G_impl(const ModelParams& params, const std::vector<PairData>& pairs, double lambda) {
  const double g = params.rabi();
  if (g == 0.0) return 1.0;
  double sum = 0.0;
  for (const auto& p : pairs) {
    double prod = 1.0;
    for (double r : p.roots) {
      const double diff = lambda - r;
      if (std::abs(diff) <= 1e-14 * std::max({1.0, std::abs(lambda), std::abs(r)})) {
        throw Error(ErrorCode::PoleEvaluation, "G evaluated on a pole at lambda = " + std::to_string(lambda));
      }
      prod *= diff;
    }
    const double c = (2.0 * lambda - p.s) * (lambda - p.s);
    sum += p.weight * c / (-prod);
  }
  return 1.0 - 2.0 * g * g / params.n() * sum;
}

// Bisection on a bracket with G(a), G(b) of opposite sign.
double bisect_root(const std::function<double(double)>& f, double a, double b, double fa, double tol_root) {
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (a + b);
    if (b - a <= tol_root * std::max(1.0, std::abs(mid)) || mid == a || mid == b) break;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (fa < 0.0)) {
      a = mid;
      fa = fm;
    } else {
      b = mid;
    }
  }
  return 0.5 * (a + b);
}

// Sample points inside (a, b): geometric clusters against both ends plus a
// uniform interior grid.
std::vector<double> cell_samples(double a, double b, int uniform) {
  static constexpr double kEdge[] = {1e-12, 1e-10, 1e-8, 1e-6, 1e-5, 1e-4, 1e-3, 3e-3, 1e-2, 3e-2};
  const double w = b - a;
  std::vector<double> t;
  for (double e : kEdge) {
    t.push_back(e);
    t.push_back(1.0 - e);
  }
  for (int i = 1; i < uniform; ++i) t.push_back(static_cast<double>(i) / uniform);
  std::sort(t.begin(), t.end());
  std::vector<double> out;
  out.reserve(t.size());
  for (double x : t) {
    const double v = a + w * x;
    if (v > a && v < b && (out.empty() || v > out.back())) out.push_back(v);
  }
  return out;
}

// All sign-change roots of G in (a, b), which must be free of poles except
// possibly at the ends.
void roots_in_cell(const ModelParams& params, const std::vector<PairData>& pairs, double a, double b,
                   int uniform, double tol_root, std::vector<double>& out) {
  if (!(b - a > 1e-11 * std::max(1.0, std::max(std::abs(a), std::abs(b))))) return;
  auto f = [&](double x) { return eval_G_impl(params, pairs, x); };
  const auto xs = cell_samples(a, b, uniform);
  double prev_x = 0.0;
  double prev_f = 0.0;
  bool have_prev = false;
  for (double x : xs) {
    double fx;
    try {
      fx = f(x);
    } catch (const Error&) {
      have_prev = false;
      continue;
    }
    if (have_prev && fx == 0.0) {
      out.push_back(x);
    } else if (have_prev && (fx < 0.0) != (prev_f < 0.0) && prev_f != 0.0) {
      out.push_back(bisect_root(f, prev_x, x, prev_f, tol_root));
    }
    prev_x = x;
    prev_f = fx;
    have_prev = true;
  }
}

}  // namespace

double eval_G(const ModelParams& params, SectorIndex sector, double lambda) {
  return eval_G_impl(params, pair_data(params, sector), lambda);
}

double spectral_bound(const ModelParams& params) {
  return 2.0 * std::abs(params.detuning()) + 6.0 * params.tunneling() + 3.0 * params.rabi() + 1.0;
}

std::vector<double> secular_poles(const ModelParams& params, SectorIndex sector) {
  std::vector<double> poles;
  for (const auto& p : pair_data(params, sector)) poles.insert(poles.end(), p.roots.begin(), p.roots.end());
  std::sort(poles.begin(), poles.end());
  std::vector<double> merged;
  for (double p : poles) {
    if (merged.empty() || p - merged.back() > 1e-12 * std::max(1.0, std::abs(p))) merged.push_back(p);
  }
  return merged;
}

std::vector<double> secular_roots(const ModelParams& params, SectorIndex sector, double tol_root) {
  const auto pairs = pair_data(params, sector);
  const auto poles = secular_poles(params, sector);
  const double bound = spectral_bound(params);
  std::vector<double> edges;
  edges.push_back(-bound);
  edges.insert(edges.end(), poles.begin(), poles.end());
  edges.push_back(bound);

  std::vector<double> roots;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    roots_in_cell(params, pairs, edges[i], edges[i + 1], 16, tol_root, roots);
  }
  const double zero_tol = 1e-10 * std::max(1.0, bound);
  std::erase_if(roots, [&](double r) { return std::abs(r) < zero_tol; });
  std::sort(roots.begin(), roots.end());
  return roots;
}

double BandStructure::upper_gap_width() const noexcept { return upper.lo - std::max(mixed.hi, lower.hi); }

double BandStructure::lower_gap_width() const noexcept { return std::min(mixed.lo, upper.lo) - lower.hi; }

bool BandStructure::in_band(double lambda) const noexcept {
  const double slack = kBandEdgeTolerance * std::max(1.0, std::abs(lambda));
  return std::any_of(intervals.begin(), intervals.end(),
                     [&](const Interval& iv) { return lambda >= iv.lo - slack && lambda <= iv.hi + slack; });
}

Branch BandStructure::branch_of(double lambda) const noexcept {
  return lambda > 0.5 * (mixed.lo + mixed.hi) ? Branch::upper : Branch::lower;
}

double BandStructure::edge_distance(double lambda) const noexcept {
  if (in_band(lambda)) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (const auto& iv : intervals) {
    best = std::min({best, std::abs(lambda - iv.lo), std::abs(lambda - iv.hi)});
  }
  return best;
}

namespace {

constexpr int kBranches = 4;  // lower, mixed (k lower), mixed (k upper), upper

struct ContinuumModel {
  double detuning;
  double tunneling;
  double rabi;
  double angle;

  std::array<double, kBranches> branches(double theta) const {
    const auto ek = dressed_energies(detuning + 2.0 * tunneling * std::cos(theta), rabi);
    const auto ej = dressed_energies(detuning + 2.0 * tunneling * std::cos(angle - theta), rabi);
    return {ek[0] + ej[0], ek[0] + ej[1], ek[1] + ej[0], ek[1] + ej[1]};
  }
};

struct Extreme {
  double value;
  double theta;
};

// Global minimum of one branch: every sample that could hide the true
// minimum (Lipschitz bound) and is a local sample minimum gets polished.
Extreme refine_min(const ContinuumModel& model, const std::vector<double>& samples, int branch, double sign,
                   double lipschitz) {
  const int res = static_cast<int>(samples.size() / kBranches);
  const double step = 2.0 * std::numbers::pi / res;
  auto value = [&](int i) { return sign * samples[static_cast<std::size_t>(((i % res) + res) % res) * kBranches + branch]; };

  double best_sample = std::numeric_limits<double>::infinity();
  for (int i = 0; i < res; ++i) best_sample = std::min(best_sample, value(i));

  std::vector<std::pair<double, int>> candidates;
  for (int i = 0; i < res; ++i) {
    const double v = value(i);
    if (v <= best_sample + lipschitz * step && v <= value(i - 1) && v <= value(i + 1)) {
      candidates.emplace_back(v, i);
    }
  }
  std::sort(candidates.begin(), candidates.end());
  if (candidates.size() > 16) candidates.resize(16);

  auto f = [&](double theta) { return sign * model.branches(theta)[branch]; };
  Extreme best{best_sample, 0.0};
  for (int i = 0; i < res; ++i) {
    if (value(i) == best_sample) {
      best.theta = i * step;
      break;
    }
  }
  const int bits = std::numeric_limits<double>::digits / 2;
  for (const auto& [v, i] : candidates) {
    const auto [theta, fv] = boost::math::tools::brent_find_minima(f, (i - 1) * step, (i + 1) * step, bits);
    if (fv < best.value) best = {fv, theta};
  }
  best.value *= sign;
  return best;
}

BranchRange branch_range(const ContinuumModel& model, const std::vector<double>& samples, int branch,
                         double lipschitz) {
  const Extreme lo = refine_min(model, samples, branch, 1.0, lipschitz);
  const Extreme hi = refine_min(model, samples, branch, -1.0, lipschitz);
  return {lo.value, lo.theta, hi.value, hi.theta};
}

}  // namespace

BandStructure continuum_bands(double detuning, double tunneling, double rabi, double angle, int resolution,
                              Execution exec) {
  if (resolution < 64) {
    throw Error(ErrorCode::ResolutionTooCoarse, "band resolution " + std::to_string(resolution) + " < 64");
  }
  const ContinuumModel model{detuning, tunneling, rabi, angle};
  const double step = 2.0 * std::numbers::pi / resolution;

  std::vector<double> samples(static_cast<std::size_t>(resolution) * kBranches);
  const auto fill = [&](std::size_t i) {
    const auto b = model.branches(static_cast<double>(i) * step);
    std::copy(b.begin(), b.end(), samples.begin() + static_cast<std::ptrdiff_t>(i * kBranches));
  };
  if (exec == Execution::parallel) {
    const long long n = resolution;
#pragma omp parallel for schedule(static) num_threads(thread_cap())
    for (long long i = 0; i < n; ++i) fill(static_cast<std::size_t>(i));
  } else {
    for (int i = 0; i < resolution; ++i) fill(static_cast<std::size_t>(i));
  }

  // Each dressed energy moves at most |d Omega| and each Omega at most 2J
  // per radian, so every branch is 4J-Lipschitz in theta.
  const double lipschitz = 4.0 * std::abs(tunneling);
  const double max_jump = lipschitz * step * (1.0 + 1e-9) + 1e-12;
  for (int b = 0; b < kBranches; ++b) {
    for (int i = 0; i < resolution; ++i) {
      const double v0 = samples[static_cast<std::size_t>(i) * kBranches + b];
      const double v1 = samples[static_cast<std::size_t>((i + 1) % resolution) * kBranches + b];
      if (std::abs(v1 - v0) > max_jump) {
        throw Error(ErrorCode::ResolutionTooCoarse,
                    "branch " + std::to_string(b) + " jumps by " + std::to_string(std::abs(v1 - v0)) +
                        " between adjacent samples");
      }
    }
  }

  BandStructure bs;
  bs.angle = angle;
  bs.resolution = resolution;
  bs.detuning = detuning;
  bs.tunneling = tunneling;
  bs.rabi = rabi;
  bs.lower = branch_range(model, samples, 0, lipschitz);
  bs.upper = branch_range(model, samples, 3, lipschitz);
  const BranchRange m1 = branch_range(model, samples, 1, lipschitz);
  const BranchRange m2 = branch_range(model, samples, 2, lipschitz);
  bs.mixed = m1;
  if (m2.lo < bs.mixed.lo) {
    bs.mixed.lo = m2.lo;
    bs.mixed.lo_theta = m2.lo_theta;
  }
  if (m2.hi > bs.mixed.hi) {
    bs.mixed.hi = m2.hi;
    bs.mixed.hi_theta = m2.hi_theta;
  }

  std::vector<Interval> ranges{bs.lower.interval(), bs.mixed.interval(), bs.upper.interval()};
  std::sort(ranges.begin(), ranges.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  for (const auto& r : ranges) {
    if (!bs.intervals.empty() && r.lo <= bs.intervals.back().hi) {
      bs.intervals.back().hi = std::max(bs.intervals.back().hi, r.hi);
    } else {
      bs.intervals.push_back(r);
    }
  }
  for (std::size_t i = 0; i + 1 < bs.intervals.size(); ++i) {
    bs.gaps.push_back({bs.intervals[i].hi, bs.intervals[i + 1].lo});
  }
  return bs;
}

BandStructure band_intervals(const ModelParams& params, SectorIndex sector, int resolution, Execution exec) {
  const SectorIndex s = make_sector(params, sector.value);
  const double angle = 2.0 * std::numbers::pi * s.value / params.n();
  BandStructure bs = continuum_bands(params.detuning(), params.tunneling(), params.rabi(), angle, resolution, exec);
  bs.sector = s;
  return bs;
}

std::vector<BoundStateRecord> find_bound_eigenvalues(const ModelParams& params, SectorIndex sector,
                                                     const BandStructure& bands, double tol_root) {
  const auto pairs = pair_data(params, sector);
  const auto poles = secular_poles(params, sector);
  const double bound = std::max(spectral_bound(params), std::max(std::abs(bands.intervals.front().lo),
                                                                  std::abs(bands.intervals.back().hi)) + 1.0);

  struct Region {
    Interval span;
    bool lower_open;  // exterior below the lowest band
    bool upper_open;  // exterior above the highest band
  };
  std::vector<Region> regions;
  regions.push_back({{-bound, bands.intervals.front().lo}, true, false});
  for (const auto& gap : bands.gaps) regions.push_back({gap, false, false});
  regions.push_back({{bands.intervals.back().hi, bound}, false, true});

  const double zero_tol = 1e-10 * std::max(1.0, bound);

  std::vector<BoundStateRecord> out;
  for (const auto& region : regions) {
    // Partition at any finite-N pole that falls inside the region.
    std::vector<double> edges{region.span.lo};
    for (double p : poles) {
      if (p > region.span.lo && p < region.span.hi) edges.push_back(p);
    }
    edges.push_back(region.span.hi);
    std::vector<double> roots;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
      roots_in_cell(params, pairs, edges[i], edges[i + 1], 64, tol_root, roots);
    }
    for (double r : roots) {
      if (std::abs(r) < zero_tol) continue;
      BoundStateRecord rec;
      rec.sector = sector;
      rec.lambda_b = r;
      rec.gap = region.span;
      if (region.lower_open) {
        rec.margin = region.span.hi - r;
      } else if (region.upper_open) {
        rec.margin = r - region.span.lo;
      } else {
        rec.margin = std::min(r - region.span.lo, region.span.hi - r);
      }
      rec.branch = bands.branch_of(r);
      if (rec.margin > 0.0) out.push_back(rec);
    }
  }
  std::sort(out.begin(), out.end(),
            [](const BoundStateRecord& a, const BoundStateRecord& b) { return a.lambda_b < b.lambda_b; });
  return out;
}

std::array<double, 2> strong_coupling_estimate(const ModelParams& params, SectorIndex sector) {
  const SectorIndex s = make_sector(params, sector.value);
  const double g = params.rabi();
  if (g <= 0.0) throw Error(ErrorCode::ZeroRabi, "strong-coupling estimate needs g > 0");
  const double j = params.tunneling();
  const double c = std::cos(2.0 * std::numbers::pi * s.value / params.n());
  const double e = std::numbers::sqrt2 * (g - j * j / (2.0 * g) * (4.0 + 5.0 * c));
  return {-e, e};
}

namespace {

// Smallest g on [0, ceiling] above which gap(g) stays positive; the scan
// runs downward from the ceiling and the crossing is then bisected. A gap
// that is still open as g -> 0 gives 0.
double gap_threshold(const std::function<double(double)>& gap, const char* which, double tol) {
  constexpr int kSteps = 100;
  double open = kCriticalSearchCeiling;
  if (!(gap(open) > 0.0)) {
    throw Error(ErrorCode::BisectionBracketFailure,
                std::string(which) + " gap still closed at g/J = " + std::to_string(kCriticalSearchCeiling));
  }
  double closed = -1.0;
  for (int i = kSteps - 1; i >= 0; --i) {
    const double trial = kCriticalSearchCeiling * i / kSteps;
    if (!(gap(trial) > 0.0)) {
      closed = trial;
      break;
    }
    open = trial;
  }
  if (closed < 0.0) return 0.0;
  while (open - closed > tol) {
    const double mid = 0.5 * (open + closed);
    if (gap(mid) > 0.0) {
      open = mid;
    } else {
      closed = mid;
    }
  }
  return 0.5 * (open + closed);
}

}  // namespace

CriticalCoupling critical_coupling(double angle, double detuning_over_j, int resolution, double tol) {
  if (!std::isfinite(angle) || !std::isfinite(detuning_over_j)) {
    throw Error(ErrorCode::NonFiniteValue, "critical coupling inputs must be finite");
  }
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidConfig, "bisection tolerance must be positive");
  auto bands = [&](double g) { return continuum_bands(detuning_over_j, 1.0, g, angle, resolution); };
  CriticalCoupling cc;
  cc.angle = angle;
  cc.upper = gap_threshold([&](double g) { return bands(g).upper_gap_width(); }, "upper", tol);
  cc.lower = gap_threshold([&](double g) { return bands(g).lower_gap_width(); }, "lower", tol);
  return cc;
}

std::vector<CriticalCouplingResult> critical_coupling_curve(std::span<const double> angles, double detuning_over_j,
                                                            int resolution, double tol, Execution exec) {
  std::vector<CriticalCouplingResult> out(angles.size());
  for_each_index(angles.size(), exec, [&](std::size_t i) {
    try {
      out[i].value = critical_coupling(angles[i], detuning_over_j, resolution, tol);
    } catch (const Error& e) {
      out[i].value.angle = angles[i];
      out[i].ok = false;
      out[i].error = e.what();
    }
  });
  return out;
}

}  // namespace jch
