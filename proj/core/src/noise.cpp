#include "sklab/noise.hpp"

#include <cmath>

#include "sklab/errors.hpp"

namespace sklab {
namespace {

// Philox4x32-10 (Salmon et al. counter-based generator).
struct Counter {
  std::uint32_t v0, v1, v2, v3;
};

inline std::uint32_t mul_hi(std::uint32_t a, std::uint32_t b, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  lo = static_cast<std::uint32_t>(p);
  return static_cast<std::uint32_t>(p >> 32);
}

inline Counter philox4x32_10(Counter c, std::uint32_t k0, std::uint32_t k1) {
  constexpr std::uint32_t kMul0 = 0xD2511F53u;
  constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    std::uint32_t lo0, lo1;
    const std::uint32_t hi0 = mul_hi(kMul0, c.v0, lo0);
    const std::uint32_t hi1 = mul_hi(kMul1, c.v2, lo1);
    c = Counter{hi1 ^ c.v1 ^ k0, lo1, hi0 ^ c.v3 ^ k1, lo0};
    k0 += kWeyl0;
    k1 += kWeyl1;
  }
  return c;
}

inline double to_unit_open(std::uint64_t bits) {
  // (0, 1]: safe argument for the log in Box-Muller.
  return static_cast<double>((bits >> 11) + 1) * 0x1.0p-53;
}

inline double to_unit_half_open(std::uint64_t bits) {
  // [0, 1)
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

constexpr double kTwoPi = 6.283185307179586476925286766559;

// Small-argument series thresholds; below kSeriesCutoff the cancelling
// differences a - em1 and a - em1 - em1^2/2 are evaluated by their series.
constexpr double kSeriesCutoff = 1e-3;

// a - (1 - e^{-a}) = a^2/2 (1 - a/3 + a^2/12 - a^3/60 + a^4/360)
inline double gap_one(double a) {
  if (a < kSeriesCutoff) {
    return 0.5 * a * a * (1.0 - a / 3.0 + a * a / 12.0 - a * a * a / 60.0);
  }
  return a - one_minus_exp_neg(a);
}

// a - em1 - em1^2/2 = a^3 (1/3 - a/4 + 7a^2/60 - a^3/24)
inline double gap_two(double a) {
  if (a < kSeriesCutoff) {
    return a * a * a * (1.0 / 3.0 - a / 4.0 + 7.0 * a * a / 60.0 - a * a * a / 24.0);
  }
  const double em1 = one_minus_exp_neg(a);
  return a - em1 - 0.5 * em1 * em1;
}

}  // namespace

double one_minus_exp_neg(double a) { return -std::expm1(-a); }

double position_noise_variance(double beta, double t) {
  if (!(beta > 0.0)) throw parameter_error("position_noise_variance: beta must be > 0");
  if (!(t >= 0.0)) throw parameter_error("position_noise_variance: t must be >= 0");
  return gap_two(beta * t) / beta;
}

double brownian_position_covariance(double beta, double t) {
  if (!(beta > 0.0)) throw parameter_error("brownian_position_covariance: beta must be > 0");
  if (!(t >= 0.0)) throw parameter_error("brownian_position_covariance: t must be >= 0");
  return gap_one(beta * t) / beta;
}

std::array<double, 2> standard_normal_pair(const RngStream& stream, NoiseDomain domain,
                                           std::uint32_t slot) {
  const Counter c = philox4x32_10(
      Counter{stream.particle_index, stream.step_index, slot, static_cast<std::uint32_t>(domain)},
      static_cast<std::uint32_t>(stream.master_seed),
      static_cast<std::uint32_t>(stream.master_seed >> 32));
  const std::uint64_t w0 = (static_cast<std::uint64_t>(c.v0) << 32) | c.v1;
  const std::uint64_t w1 = (static_cast<std::uint64_t>(c.v2) << 32) | c.v3;
  const double r = std::sqrt(-2.0 * std::log(to_unit_open(w0)));
  const double phi = kTwoPi * to_unit_half_open(w1);
  return {r * std::cos(phi), r * std::sin(phi)};
}

StepNoiseModel step_covariance(double beta, double h) {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw parameter_error("step_covariance: beta must be finite and > 0");
  }
  if (!(h >= 0.0) || !std::isfinite(h)) {
    throw parameter_error("step_covariance: h must be finite and >= 0");
  }

  StepNoiseModel model;
  model.beta = beta;
  model.h = h;
  if (h == 0.0) return model;  // empty integration interval: zero law

  const double a = beta * h;
  const double em1 = one_minus_exp_neg(a);
  const double em2 = em1 * (2.0 - em1);  // 1 - e^{-2a}

  const double var_b = h;
  const double cov_bx = gap_one(a) / beta;
  const double var_x = gap_two(a) / beta;
  const double cov_bv = em1;
  const double cov_xv = 0.5 * em1 * em1;
  const double var_v = 0.5 * beta * em2;

  model.cov = {{{var_b, cov_bx, cov_bv},
                {cov_bx, var_x, cov_xv},
                {cov_bv, cov_xv, var_v}}};

  // Exact lower-triangular root. Rows 1-2 are the Cholesky factor of the
  // (dB, dxi_x) marginal; row 3 realizes the identity dxi_v = beta (dB - dxi_x).
  const double l00 = std::sqrt(var_b);
  const double l10 = cov_bx / l00;
  const double cond = var_x - l10 * l10;  // Var(dxi_x | dB), >= 0 in exact arithmetic
  if (cond < -1e-10 * var_x) {
    throw conditioning_error("step_covariance: conditional variance " + std::to_string(cond) +
                             " at beta=" + std::to_string(beta) + ", h=" + std::to_string(h));
  }
  const double l11 = std::sqrt(std::max(cond, 0.0));
  model.factor = {{{l00, 0.0, 0.0},
                   {l10, l11, 0.0},
                   {beta * (l00 - l10), -beta * l11, 0.0}}};
  return model;
}

StepTriple sample_step_noise(const StepNoiseModel& model, const RngStream& stream) {
  if (model.h == 0.0) return {0.0, 0.0, 0.0};
  const auto z = standard_normal_pair(stream, NoiseDomain::kStepNoise);
  const auto& f = model.factor;
  StepTriple triple;
  triple.dB = f[0][0] * z[0];
  triple.dxi_x = f[1][0] * z[0] + f[1][1] * z[1];
  triple.dxi_v = f[2][0] * z[0] + f[2][1] * z[1];
  return triple;
}

std::vector<double> brownian_increments(const RngStream& stream, double h, int n) {
  if (n < 0) throw parameter_error("brownian_increments: n must be >= 0");
  if (!(h >= 0.0)) throw parameter_error("brownian_increments: h must be >= 0");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n));
  const double scale = std::sqrt(h);
  RngStream s = stream;
  for (int j = 0; j < n; ++j) {
    s.step_index = stream.step_index + static_cast<std::uint32_t>(j);
    out.push_back(scale * standard_normal_pair(s, NoiseDomain::kBrownian)[0]);
  }
  return out;
}

}  // namespace sklab
