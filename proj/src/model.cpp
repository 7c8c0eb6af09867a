#include "jch/model.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "jch/error.hpp"

namespace jch {

ModelParams validate_params(const RawParams& raw) {
  if (raw.n_cavities <= 0) {
    throw Error(ErrorCode::NonPositiveN, "N = " + std::to_string(raw.n_cavities));
  }
  if (raw.n_cavities < 3) {
    throw Error(ErrorCode::NTooSmall,
                "N = " + std::to_string(raw.n_cavities) + " (periodic chain needs N >= 3)");
  }
  if (!std::isfinite(raw.detuning) || !std::isfinite(raw.tunneling) || !std::isfinite(raw.rabi)) {
    throw Error(ErrorCode::NonFiniteValue, "detuning, tunneling and rabi must be finite");
  }
  if (raw.rabi < 0.0) {
    throw Error(ErrorCode::NegativeRabi, "g = " + std::to_string(raw.rabi));
  }
  const bool zero_ok = raw.allow_zero_tunneling && raw.tunneling == 0.0;
  if (!(raw.tunneling > 0.0) && !zero_ok) {
    throw Error(ErrorCode::NonPositiveTunneling, "J = " + std::to_string(raw.tunneling));
  }
  return ModelParams(raw.n_cavities, raw.detuning, raw.tunneling, raw.rabi);
}

ModelParams ModelParams::with_rabi(double rabi) const {
  RawParams r = raw();
  r.rabi = rabi;
  return validate_params(r);
}

SectorIndex make_sector(const ModelParams& params, int p) {
  if (p < 0 || p >= params.n()) {
    throw Error(ErrorCode::IndexOutOfRange,
                "sector P = " + std::to_string(p) + " outside [0, " + std::to_string(params.n() - 1) + "]");
  }
  return SectorIndex{p};
}

double normal_mode_frequency(const ModelParams& params, int k) {
  const int n = params.n();
  if (k < 0 || k >= n) {
    throw Error(ErrorCode::IndexOutOfRange, "mode k = " + std::to_string(k));
  }
  const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
  return params.detuning() + 2.0 * params.tunneling() * std::cos(angle);
}

PairSet::PairSet(int n, SectorIndex sector, std::vector<ModePair> pairs)
    : n_(n), sector_(sector), pairs_(std::move(pairs)) {
  offsets_.reserve(pairs_.size());
  int offset = 0;
  for (const auto& pr : pairs_) {
    offsets_.push_back(offset);
    if (pr.diagonal()) {
      ++diagonal_;
      offset += 3;
    } else {
      ++off_diagonal_;
      offset += 4;
    }
  }
  dimension_ = offset;
}

PairSet sector_pairs(int n, SectorIndex sector) {
  if (n < 3) {
    throw Error(ErrorCode::NTooSmall, "N = " + std::to_string(n));
  }
  if (sector.value < 0 || sector.value >= n) {
    throw Error(ErrorCode::IndexOutOfRange, "sector P = " + std::to_string(sector.value));
  }
  std::vector<ModePair> pairs;
  for (int k = 0; k < n; ++k) {
    const int j = ((sector.value - k) % n + n) % n;
    if (j >= k) pairs.push_back({k, j});
  }
  return PairSet(n, sector, std::move(pairs));
}

}  // namespace jch
