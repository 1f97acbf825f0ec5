#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "ensembles.hpp"
#include "error.hpp"
#include "group.hpp"
#include "linalg.hpp"
#include "rng.hpp"

namespace gsynch {

enum class Prior { uniform_circle, cyclic, haar_finite };

/// i.i.d. signal. Circle priors fill `phases`; finite priors fill `elements`.
struct SignalVector {
  Prior prior = Prior::uniform_circle;
  int n = 0;
  int order = 0;
  std::vector<double> phases;
  std::vector<int> elements;

  cplx circle_value(int j, int frequency = 1) const {
    if (prior == Prior::uniform_circle) return std::polar(1.0, frequency * phases[j]);
    return root_of_unity(order, static_cast<std::int64_t>(frequency) * elements[j]);
  }
};

/// Stream layout shared by every sampler: stream 0 draws the signal,
/// stream 1 + i the noise of frequency i. Same seed => same signal across
/// the cyclic and group samplers.
inline constexpr std::uint64_t kSignalStream = 0;
inline constexpr std::uint64_t noise_stream(std::size_t frequency) { return 1 + frequency; }

inline SignalVector sample_circle_signal(int n, std::uint64_t seed) {
  require(n >= 1, "signal length n must be >= 1");
  Rng rng(seed, kSignalStream);
  SignalVector x;
  x.prior = Prior::uniform_circle;
  x.n = n;
  x.phases.resize(n);
  for (auto& p : x.phases) p = 2.0 * M_PI * rng.uniform();
  return x;
}

inline SignalVector sample_finite_signal(Prior prior, int order, int n, std::uint64_t seed) {
  require(n >= 1, "signal length n must be >= 1");
  require(order >= 1, "group order must be >= 1");
  Rng rng(seed, kSignalStream);
  SignalVector x;
  x.prior = prior;
  x.n = n;
  x.order = order;
  x.elements.resize(n);
  for (auto& e : x.elements) e = static_cast<int>(rng.uniform_index(static_cast<std::size_t>(order)));
  return x;
}

/// One observation channel Y = (lambda/n) X X* + noise_scale * W.
struct FrequencyObservation {
  std::string label;
  double lambda = 0.0;
  int dim = 1;          ///< dimension over the channel's field
  int complex_dim = 1;  ///< size of the per-pair block
  RepType type = RepType::complex;
  Ensemble noise = Ensemble::GUE;
  double noise_scale = 1.0;
  CMatrix y;
};

struct SynchObservation {
  std::string model;
  std::string group;
  int n = 0;
  std::uint64_t seed = 0;
  std::vector<FrequencyObservation> frequencies;
};

struct SamplerOptions {
  bool signal = true;
  bool noise = true;
};

namespace detail {

inline std::vector<double> broadcast_lambdas(const std::vector<double>& lambdas, std::size_t count) {
  require(!lambdas.empty(), "at least one lambda is required");
  for (double l : lambdas) require(l >= 0.0 && std::isfinite(l), "lambda must be finite and >= 0");
  if (lambdas.size() == 1) return std::vector<double>(count, lambdas.front());
  require(lambdas.size() == count, "expected " + std::to_string(count) + " lambda values, got " +
                                       std::to_string(lambdas.size()));
  return lambdas;
}

inline void add_noise(FrequencyObservation& f, int n, std::uint64_t seed, std::size_t index) {
  Rng rng(seed, noise_stream(index));
  const int size = f.type == RepType::quaternionic ? n * f.dim : n * f.complex_dim;
  f.y += f.noise_scale * draw_noise(EnsembleKind{f.noise, size}, rng);
}

inline FrequencyObservation scalar_channel(const SignalVector& x, int frequency, double lambda, Ensemble noise,
                                           const SamplerOptions& opt, std::uint64_t seed, std::size_t index) {
  const int n = x.n;
  FrequencyObservation f;
  f.label = "l=" + std::to_string(frequency);
  f.lambda = lambda;
  f.type = noise == Ensemble::GOE ? RepType::real : RepType::complex;
  f.noise = noise;
  f.noise_scale = 1.0 / std::sqrt(static_cast<double>(n));
  f.y = CMatrix::Zero(n, n);
  if (opt.signal && lambda != 0.0) {
    CVector v(n);
    for (int j = 0; j < n; ++j) v(j) = x.circle_value(j, frequency);
    f.y.noalias() += (lambda / n) * v * v.adjoint();
  }
  if (opt.noise) add_noise(f, n, seed, index);
  return f;
}

}  // namespace detail

/// Multi-frequency circle synchronisation: Y_l = (lambda_l/n) x^(l) x^(l)* + W_l/sqrt(n)
/// for l = 1..L with GUE noise and x uniform on U(1)^n.
inline SynchObservation sample_gsynch_circle(int frequencies, const std::vector<double>& lambdas, int n,
                                             std::uint64_t seed, const SamplerOptions& opt = {}) {
  require(frequencies >= 1, "circle model needs L >= 1");
  const auto lam = detail::broadcast_lambdas(lambdas, static_cast<std::size_t>(frequencies));
  const auto x = sample_circle_signal(n, seed);
  SynchObservation obs{"circle", "U(1)", n, seed, {}};
  for (int l = 1; l <= frequencies; ++l)
    obs.frequencies.push_back(detail::scalar_channel(x, l, lam[l - 1], Ensemble::GUE, opt, seed, l - 1));
  return obs;
}

/// Z_L synchronisation over frequencies l = 1..floor(L/2); l = L/2 (L even)
/// is the real channel with GOE noise.
inline SynchObservation sample_gsynch_cyclic(int order, const std::vector<double>& lambdas, int n, std::uint64_t seed,
                                             const SamplerOptions& opt = {}) {
  if (order < 2) fail(ErrorKind::invalid_parameter, "cyclic model needs L >= 2");
  const int count = order / 2;
  const auto lam = detail::broadcast_lambdas(lambdas, static_cast<std::size_t>(count));
  const auto x = sample_finite_signal(Prior::cyclic, order, n, seed);
  SynchObservation obs{"cyclic", "cyclic(" + std::to_string(order) + ")", n, seed, {}};
  for (int l = 1; l <= count; ++l) {
    const Ensemble noise = 2 * l == order ? Ensemble::GOE : Ensemble::GUE;
    obs.frequencies.push_back(detail::scalar_channel(x, l, lam[l - 1], noise, opt, seed, l - 1));
  }
  return obs;
}

/// Stack X_rho of rho(u_j), j = 1..n, as an (n d) x d matrix.
inline CMatrix stacked_representation(const Irrep& rho, const std::vector<int>& elements) {
  const int d = rho.complex_dim();
  CMatrix x(static_cast<Eigen::Index>(elements.size()) * d, d);
  for (std::size_t j = 0; j < elements.size(); ++j) x.block(static_cast<Eigen::Index>(j) * d, 0, d, d) = rho(elements[j]);
  return x;
}

inline Ensemble ensemble_for(RepType t) {
  switch (t) {
    case RepType::real: return Ensemble::GOE;
    case RepType::complex: return Ensemble::GUE;
    case RepType::quaternionic: return Ensemble::GSE;
  }
  return Ensemble::GUE;
}

/// Finite-group synchronisation over a nonredundant irrep list:
/// Y_rho = (lambda_rho/n) X_rho X_rho* + W_rho / sqrt(n d_rho), noise ensemble by irrep type.
inline SynchObservation sample_gsynch_group(const FiniteGroup& group, const IrrepList& irreps,
                                            const std::vector<double>& lambdas, int n, std::uint64_t seed,
                                            const SamplerOptions& opt = {}, const std::string& group_name = "group") {
  require(irreps.convention == IrrepConvention::nonredundant, "sample_gsynch_group expects a nonredundant irrep list");
  require(irreps.size() >= 1, "irrep list is empty");
  const auto lam = detail::broadcast_lambdas(lambdas, irreps.size());
  for (const auto& r : irreps)
    require(static_cast<int>(r.matrices().size()) == group.order(), "irrep does not match the group order");
  const auto x = sample_finite_signal(Prior::haar_finite, group.order(), n, seed);
  SynchObservation obs{"group", group_name, n, seed, {}};
  for (std::size_t i = 0; i < irreps.size(); ++i) {
    const Irrep& rho = irreps[i];
    FrequencyObservation f;
    f.label = rho.label().empty() ? "rho" + std::to_string(i) : rho.label();
    f.lambda = lam[i];
    f.dim = rho.dim();
    f.complex_dim = rho.complex_dim();
    f.type = rho.type();
    f.noise = ensemble_for(rho.type());
    f.noise_scale = 1.0 / std::sqrt(static_cast<double>(n) * rho.dim());
    const Eigen::Index size = static_cast<Eigen::Index>(n) * rho.complex_dim();
    f.y = CMatrix::Zero(size, size);
    if (opt.signal && lam[i] != 0.0) {
      const CMatrix xs = stacked_representation(rho, x.elements);
      f.y.noalias() += (lam[i] / n) * xs * xs.adjoint();
    }
    if (opt.noise) detail::add_noise(f, n, seed, i);
    obs.frequencies.push_back(std::move(f));
  }
  return obs;
}

/// Noisy indicators z_kj(g) = gamma 1{g = g_k g_j^{-1}} + w_kj(g).
/// Noise is complex standard Gaussian and Hermitian-paired:
/// w_jk(g) = conj(w_kj(g^{-1})), so the canonical blocks come out Hermitian.
struct IndicatorObservation {
  int n = 0;
  int order = 0;
  double gamma = 0.0;
  std::uint64_t seed = 0;
  std::vector<int> truth;
  std::vector<cplx> table;  ///< index ((k n) + j) L + g

  cplx& at(int k, int j, int g) { return table[(static_cast<std::size_t>(k) * n + j) * order + g]; }
  const cplx& at(int k, int j, int g) const { return table[(static_cast<std::size_t>(k) * n + j) * order + g]; }
};

inline IndicatorObservation sample_indicator(const FiniteGroup& group, int n, double gamma, std::uint64_t seed,
                                             const SamplerOptions& opt = {}) {
  require(gamma >= 0.0, "gamma must be >= 0");
  const auto x = sample_finite_signal(Prior::haar_finite, group.order(), n, seed);
  IndicatorObservation obs;
  obs.n = n;
  obs.order = group.order();
  obs.gamma = gamma;
  obs.seed = seed;
  obs.truth = x.elements;
  obs.table.assign(static_cast<std::size_t>(n) * n * group.order(), cplx(0.0, 0.0));
  if (opt.noise) {
    Rng rng(seed, noise_stream(0));
    for (int k = 0; k < n; ++k) {
      for (int g = 0; g < group.order(); ++g) {
        const int gi = group.inverse(g);
        if (gi == g)
          obs.at(k, k, g) = rng.normal(1.0);
        else if (g < gi) {
          const cplx z = rng.complex_normal(1.0);
          obs.at(k, k, g) = z;
          obs.at(k, k, gi) = std::conj(z);
        }
      }
      for (int j = k + 1; j < n; ++j)
        for (int g = 0; g < group.order(); ++g) {
          const cplx z = rng.complex_normal(1.0);
          obs.at(k, j, g) = z;
          obs.at(j, k, group.inverse(g)) = std::conj(z);
        }
    }
  }
  if (opt.signal)
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j) obs.at(k, j, group(x.elements[k], group.inverse(x.elements[j]))) += gamma;
  return obs;
}

/// U Y~_kj U* for one ordered pair, where Y~_kj(t, s) = z_kj(t s^{-1}).
inline CMatrix indicator_pair_transform(const IndicatorObservation& obs, const FiniteGroup& group, const CMatrix& u,
                                        int k, int j) {
  const int order = group.order();
  CMatrix ytilde(order, order);
  for (int t = 0; t < order; ++t)
    for (int s = 0; s < order; ++s) ytilde(t, s) = obs.at(k, j, group(t, group.inverse(s)));
  return u * ytilde * u.adjoint();
}

/// Maps noisy indicators onto the canonical multi-frequency model, one
/// channel per irrep of `full`. Each pair is conjugated by the regular
/// representation basis change; the first diagonal block of each irrep is
/// kept and scaled by sqrt(d/L) (unit noise variance) times 1/sqrt(n d)
/// (canonical noise level). With gamma = lambda sqrt(L/n) the signal block
/// is (lambda/n) rho(g_k) rho(g_j)^{-1}.
inline SynchObservation indicator_to_canonical(const IndicatorObservation& obs, const FiniteGroup& group,
                                               const IrrepList& full) {
  require(obs.order == group.order(), "indicator observation was generated over a different group");
  const CMatrix u = regular_rep_unitary(group, full);
  const int n = obs.n;
  const int order = group.order();
  const double scale = 1.0 / std::sqrt(static_cast<double>(n) * order);

  SynchObservation out{"indicator", "group", n, obs.seed, {}};
  std::vector<Eigen::Index> offsets;
  Eigen::Index offset = 0;
  for (std::size_t i = 0; i < full.size(); ++i) {
    const Irrep& rho = full[i];
    FrequencyObservation f;
    f.label = rho.label().empty() ? "rho" + std::to_string(i) : rho.label();
    f.lambda = obs.gamma * std::sqrt(static_cast<double>(n) / order);
    f.dim = rho.dim();
    f.complex_dim = rho.complex_dim();
    f.type = rho.type();
    f.noise = ensemble_for(rho.type());
    f.noise_scale = 1.0 / std::sqrt(static_cast<double>(n) * rho.complex_dim());
    f.y = CMatrix::Zero(static_cast<Eigen::Index>(n) * rho.complex_dim(), static_cast<Eigen::Index>(n) * rho.complex_dim());
    out.frequencies.push_back(std::move(f));
    offsets.push_back(offset);
    offset += static_cast<Eigen::Index>(rho.complex_dim()) * rho.complex_dim();
  }
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j) {
      const CMatrix m = indicator_pair_transform(obs, group, u, k, j);
      for (std::size_t i = 0; i < full.size(); ++i) {
        const int d = full[i].complex_dim();
        out.frequencies[i].y.block(static_cast<Eigen::Index>(k) * d, static_cast<Eigen::Index>(j) * d, d, d) =
            scale * m.block(offsets[i], offsets[i], d, d);
      }
    }
  return out;
}

}  // namespace gsynch

namespace gsynch {

enum class ModelKind { circle, cyclic, group };

inline std::string to_string(ModelKind k) {
  switch (k) {
    case ModelKind::circle: return "circle";
    case ModelKind::cyclic: return "cyclic";
    case ModelKind::group: return "group";
  }
  return "?";
}

inline ModelKind model_kind_from_string(const std::string& s) {
  if (s == "circle") return ModelKind::circle;
  if (s == "cyclic") return ModelKind::cyclic;
  if (s == "group") return ModelKind::group;
  fail(ErrorKind::invalid_parameter, "unknown model '" + s + "' (expected circle, cyclic or group)");
}

/// Which synchronisation model to run. `L` is the number of frequencies for
/// the circle model and the group order otherwise.
struct ModelSpec {
  ModelKind kind = ModelKind::cyclic;
  int L = 2;
  GroupWithIrreps group;  ///< populated for ModelKind::group
  IrrepList channels;     ///< nonredundant irreps, group model only

  static ModelSpec circle(int frequencies) {
    require(frequencies >= 1, "circle model needs L >= 1");
    ModelSpec m;
    m.kind = ModelKind::circle;
    m.L = frequencies;
    return m;
  }
  static ModelSpec cyclic(int order) {
    if (order < 2) fail(ErrorKind::invalid_parameter, "cyclic model needs L >= 2");
    ModelSpec m;
    m.kind = ModelKind::cyclic;
    m.L = order;
    return m;
  }
  static ModelSpec finite_group(GroupWithIrreps g) {
    ModelSpec m;
    m.kind = ModelKind::group;
    m.L = g.group.order();
    m.channels = g.nonredundant();
    m.group = std::move(g);
    return m;
  }

  std::size_t frequency_count() const {
    switch (kind) {
      case ModelKind::circle: return static_cast<std::size_t>(L);
      case ModelKind::cyclic: return static_cast<std::size_t>(L / 2);
      case ModelKind::group: return channels.size();
    }
    return 0;
  }

  std::string describe() const {
    switch (kind) {
      case ModelKind::circle: return "circle(L=" + std::to_string(L) + ")";
      case ModelKind::cyclic: return "cyclic(" + std::to_string(L) + ")";
      case ModelKind::group: return group.name;
    }
    return "?";
  }
};

inline SynchObservation sample_observation(const ModelSpec& model, const std::vector<double>& lambdas, int n,
                                           std::uint64_t seed, const SamplerOptions& opt = {}) {
  switch (model.kind) {
    case ModelKind::circle: return sample_gsynch_circle(model.L, lambdas, n, seed, opt);
    case ModelKind::cyclic: return sample_gsynch_cyclic(model.L, lambdas, n, seed, opt);
    case ModelKind::group:
      return sample_gsynch_group(model.group.group, model.channels, lambdas, n, seed, opt, model.group.name);
  }
  fail(ErrorKind::invalid_parameter, "unknown model kind");
}

}  // namespace gsynch
