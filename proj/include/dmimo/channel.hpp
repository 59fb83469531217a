#pragma once

// Single-group zero-forcing beamforming: i.i.d. Rayleigh channel draws,
// pseudoinverse weights, water-filling power allocation and the sum-rate.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dmimo/error.hpp"
#include "dmimo/rng.hpp"

namespace dmimo {

using cmatrix = Eigen::MatrixXcd;

inline constexpr double default_condition_limit = 1e12;

// One fading draw for a K-AP / K-client group. Row k of h is the channel
// (complex row vector) seen by client k from all K APs.
struct channel_realization {
  int k = 0;
  cmatrix h;
  std::uint64_t seed_tag = 0;
};

struct beamforming_solution {
  cmatrix w;                    // column i is the weight vector of user i
  std::vector<double> gamma;    // effective gains 1/||w_i||^2
  double mu = 0.0;              // water level
  std::vector<double> snr;      // post-beamforming SNR (mu*gamma_i - 1)^+
  std::vector<double> tx_power; // (mu - 1/gamma_i)^+
  double sum_rate = 0.0;        // bits/s/Hz
};

struct waterfill_result {
  double mu = 0.0;
  std::vector<double> snr;
  std::vector<double> tx_power;
};

// Entries are CN(0, 1): independent real and imaginary parts with variance 1/2.
inline channel_realization draw_channel(int k, std::uint64_t seed) {
  if (k < 1) throw invalid_input("draw_channel: group size must be >= 1, got " + std::to_string(k));
  rng_engine gen(seed);
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  channel_realization out{k, cmatrix(k, k), seed};
  // Row-major fill so the draw order is independent of Eigen's storage order.
  for (int row = 0; row < k; ++row)
    for (int col = 0; col < k; ++col) {
      const double re = normal(gen);
      const double im = normal(gen);
      out.h(row, col) = {re, im};
    }
  return out;
}

// 2-norm condition number via singular values.
inline double condition_number(const cmatrix& h) {
  Eigen::JacobiSVD<cmatrix> svd(h);
  const auto& sv = svd.singularValues();
  const double smin = sv(sv.size() - 1);
  if (!(smin > 0.0)) return std::numeric_limits<double>::infinity();
  return sv(0) / smin;
}

// W = pinv(H). For a square invertible H this is H^{-1}, so h_k w_j = delta_kj.
inline cmatrix zfbf_weights(const channel_realization& ch,
                            double condition_limit = default_condition_limit) {
  const auto& h = ch.h;
  if (h.rows() != h.cols() || h.rows() < 1)
    throw invalid_input("zfbf_weights: channel matrix must be square and non-empty");
  if (!h.allFinite()) throw invalid_input("zfbf_weights: channel has non-finite entries");
  const double cond = condition_number(h);
  if (!(cond <= condition_limit))
    throw ill_conditioned_channel("zfbf_weights: condition number " + std::to_string(cond) +
                                  " exceeds limit");
  return h.fullPivLu().inverse();
}

// Active-set water-filling with total budget K*p. 1/gamma sorted ascending;
// the active set grows while the candidate level stays above the last floor.
inline waterfill_result waterfill(std::span<const double> gamma, double p) {
  if (gamma.empty()) throw invalid_input("waterfill: empty gain vector");
  if (!(p > 0.0) || !std::isfinite(p)) throw invalid_input("waterfill: power must be positive");
  for (double g : gamma)
    if (!(g > 0.0) || !std::isfinite(g)) throw invalid_input("waterfill: gains must be positive");

  const std::size_t n = gamma.size();
  std::vector<double> floors(n);
  std::transform(gamma.begin(), gamma.end(), floors.begin(), [](double g) { return 1.0 / g; });
  std::vector<double> sorted = floors;
  std::sort(sorted.begin(), sorted.end());

  const double budget = static_cast<double>(n) * p;
  double prefix = 0.0;
  double mu = 0.0;
  for (std::size_t active = 1; active <= n; ++active) {
    prefix += sorted[active - 1];
    const double candidate = (budget + prefix) / static_cast<double>(active);
    if (active == n || candidate <= sorted[active]) {
      mu = candidate;
      break;
    }
  }

  waterfill_result out{mu, std::vector<double>(n), std::vector<double>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    out.tx_power[i] = std::max(0.0, mu - floors[i]);
    out.snr[i] = std::max(0.0, mu * gamma[i] - 1.0);
  }
  return out;
}

inline double sum_rate_of(std::span<const double> snr) {
  double total = 0.0;
  for (double s : snr) total += std::log2(1.0 + s);
  return total;
}

inline beamforming_solution zfbf_sum_rate(const channel_realization& ch, double p,
                                          double condition_limit = default_condition_limit) {
  beamforming_solution sol;
  sol.w = zfbf_weights(ch, condition_limit);
  sol.gamma.resize(static_cast<std::size_t>(sol.w.cols()));
  for (Eigen::Index i = 0; i < sol.w.cols(); ++i)
    sol.gamma[static_cast<std::size_t>(i)] = 1.0 / sol.w.col(i).squaredNorm();
  auto wf = waterfill(sol.gamma, p);
  sol.mu = wf.mu;
  sol.snr = std::move(wf.snr);
  sol.tx_power = std::move(wf.tx_power);
  sol.sum_rate = sum_rate_of(sol.snr);
  return sol;
}

}  // namespace dmimo
