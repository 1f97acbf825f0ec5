#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include "error.hpp"
#include "linalg.hpp"
#include "rng.hpp"

namespace gsynch {

enum class Ensemble { GOE, GUE, GSE };

inline std::string to_string(Ensemble e) {
  switch (e) {
    case Ensemble::GOE: return "GOE";
    case Ensemble::GUE: return "GUE";
    case Ensemble::GSE: return "GSE";
  }
  return "?";
}

inline Ensemble ensemble_from_string(const std::string& s) {
  if (s == "GOE" || s == "goe") return Ensemble::GOE;
  if (s == "GUE" || s == "gue") return Ensemble::GUE;
  if (s == "GSE" || s == "gse") return Ensemble::GSE;
  fail(ErrorKind::invalid_parameter, "unknown ensemble '" + s + "'");
}

/// For GSE, `n` counts quaternionic entries and the matrix is 2n x 2n.
struct EnsembleKind {
  Ensemble tag = Ensemble::GUE;
  int n = 1;

  Eigen::Index matrix_size() const { return tag == Ensemble::GSE ? 2 * n : n; }
};

struct NoiseMatrix {
  CMatrix entries;
  EnsembleKind kind;
  std::uint64_t seed = 0;
};

/// Draws the upper triangle (row-major, diagonal included) and mirrors it.
///   GOE: off-diagonal N(0,1), diagonal N(0,2)
///   GUE: off-diagonal N(0,1/2) + i N(0,1/2), diagonal N(0,1)
///   GSE: off-diagonal blocks [[a+bi, c+di], [-c+di, a-bi]] with a,b,c,d ~ N(0,1/4),
///        diagonal blocks a I_2 with a ~ N(0,1/2)
inline CMatrix draw_noise(const EnsembleKind& kind, Rng& rng) {
  require(kind.n >= 1, "ensemble size n must be >= 1");
  const Eigen::Index n = kind.n;
  CMatrix w(kind.matrix_size(), kind.matrix_size());
  switch (kind.tag) {
    case Ensemble::GOE:
      for (Eigen::Index i = 0; i < n; ++i) {
        w(i, i) = rng.normal(2.0);
        for (Eigen::Index j = i + 1; j < n; ++j) {
          const double x = rng.normal(1.0);
          w(i, j) = x;
          w(j, i) = x;
        }
      }
      break;
    case Ensemble::GUE:
      for (Eigen::Index i = 0; i < n; ++i) {
        w(i, i) = rng.normal(1.0);
        for (Eigen::Index j = i + 1; j < n; ++j) {
          const cplx z = rng.complex_normal(1.0);
          w(i, j) = z;
          w(j, i) = std::conj(z);
        }
      }
      break;
    case Ensemble::GSE:
      for (Eigen::Index p = 0; p < n; ++p) {
        const double a0 = rng.normal(0.5);
        w.block(2 * p, 2 * p, 2, 2) << a0, 0.0, 0.0, a0;
        for (Eigen::Index q = p + 1; q < n; ++q) {
          const double a = rng.normal(0.25), b = rng.normal(0.25);
          const double c = rng.normal(0.25), d = rng.normal(0.25);
          Eigen::Matrix2cd blk;
          blk << cplx(a, b), cplx(c, d), cplx(-c, d), cplx(a, -b);
          w.block(2 * p, 2 * q, 2, 2) = blk;
          w.block(2 * q, 2 * p, 2, 2) = blk.adjoint();
        }
      }
      break;
  }
  return w;
}

inline NoiseMatrix sample(const EnsembleKind& kind, std::uint64_t seed) {
  Rng rng(seed);
  return {draw_noise(kind, rng), kind, seed};
}

struct MeanEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  int trials = 0;
};

/// Monte-Carlo mean of lambda_max(W)/sqrt(n); trial t uses derive_seed(seed, t).
/// For GSE the normalisation is by sqrt(n) with n the quaternionic size.
inline MeanEstimate spectral_edge_check(Ensemble tag, int n, int trials, std::uint64_t seed,
                                        const LanczosOptions& opt = {}) {
  require(trials >= 1, "spectral_edge_check needs at least one trial");
  const EnsembleKind kind{tag, n};
  double sum = 0.0, sumsq = 0.0;
  for (int t = 0; t < trials; ++t) {
    const auto w = sample(kind, derive_seed(seed, static_cast<std::uint64_t>(t)));
    const double top = top_eigenvalue(w.entries / std::sqrt(static_cast<double>(n)), opt);
    sum += top;
    sumsq += top * top;
  }
  MeanEstimate est;
  est.trials = trials;
  est.mean = sum / trials;
  const double var = trials > 1 ? (sumsq - trials * est.mean * est.mean) / (trials - 1) : 0.0;
  est.std_error = std::sqrt(std::max(var, 0.0) / trials);
  return est;
}

}  // namespace gsynch
