#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>

#include "nderiv/grid.hpp"

namespace nderiv {

/// The paper's perturbation models. Mixtures flip a per-node coin with
/// probability mix_prob of drawing the uniform component.
struct NoiseModel {
  enum class Kind { Gaussian, Uniform, MixtureUniformNormal, NonzeroMeanMixture };
  Kind kind = Kind::Gaussian;
  double sigma = 0.0;     // Gaussian std deviation
  double delta = 0.0;     // uniform half-width / mixture scale
  double mix_prob = 0.5;  // probability of the uniform component

  static NoiseModel gaussian(double sigma) {
    if (!(sigma > 0.0)) throw std::invalid_argument("NoiseModel: sigma > 0");
    NoiseModel m;
    m.kind = Kind::Gaussian;
    m.sigma = sigma;
    return m;
  }
  static NoiseModel uniform(double delta) {
    if (!(delta > 0.0)) throw std::invalid_argument("NoiseModel: delta > 0");
    NoiseModel m;
    m.kind = Kind::Uniform;
    m.delta = delta;
    return m;
  }
  /// Example 2: mixture of uniform(-delta, delta) and normal(0, delta).
  static NoiseModel mixture(double delta, double mix_prob = 0.5) {
    if (!(delta > 0.0)) throw std::invalid_argument("NoiseModel: delta > 0");
    if (!(mix_prob >= 0.0 && mix_prob <= 1.0))
      throw std::invalid_argument("NoiseModel: mix_prob in [0,1]");
    NoiseModel m;
    m.kind = Kind::MixtureUniformNormal;
    m.delta = delta;
    m.mix_prob = mix_prob;
    return m;
  }
  /// Example 3: mixture of uniform(-0.8 delta, 1.2 delta) and
  /// normal(0.1, delta).
  static NoiseModel nonzero_mean_mixture(double delta, double mix_prob = 0.5) {
    NoiseModel m = mixture(delta, mix_prob);
    m.kind = Kind::NonzeroMeanMixture;
    return m;
  }
};

/// Deterministic random stream: mt19937_64 with explicit double mappings,
/// so identical seeds reproduce bit-identical draws on every platform
/// (std::*_distribution output is implementation-defined and is avoided).
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform01();
  }

  /// Standard normal by the basic Box-Muller transform; two uniforms are
  /// consumed per call and no draw is cached, keeping the stream position
  /// a pure function of the call count.
  double normal() {
    double u1 = uniform01();
    while (u1 == 0.0) u1 = uniform01();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::mt19937_64 engine_;
};

/// One i.i.d. draw per node; with pin_endpoints the boundary samples are
/// forced exact (epsilon(a) = epsilon(b) = 0) as in the paper's footnote.
inline SampledFunction sample_noise(const NoiseModel& model, const Grid& grid,
                                    std::uint64_t seed, bool pin_endpoints) {
  RandomStream rng(seed);
  SampledFunction eps(grid);
  for (int i = 0; i < grid.n; ++i) {
    double value = 0.0;
    switch (model.kind) {
      case NoiseModel::Kind::Gaussian:
        value = model.sigma * rng.normal();
        break;
      case NoiseModel::Kind::Uniform:
        value = rng.uniform(-model.delta, model.delta);
        break;
      case NoiseModel::Kind::MixtureUniformNormal: {
        const bool pick_uniform = rng.uniform01() < model.mix_prob;
        value = pick_uniform ? rng.uniform(-model.delta, model.delta)
                             : model.delta * rng.normal();
        break;
      }
      case NoiseModel::Kind::NonzeroMeanMixture: {
        const bool pick_uniform = rng.uniform01() < model.mix_prob;
        value = pick_uniform
                    ? rng.uniform(-0.8 * model.delta, 1.2 * model.delta)
                    : 0.1 + model.delta * rng.normal();
        break;
      }
    }
    eps[i] = value;
  }
  if (pin_endpoints) {
    eps[0] = 0.0;
    eps[grid.n - 1] = 0.0;
  }
  return eps;
}

}  // namespace nderiv
