#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "vecirs/random.hpp"
#include "vecirs/scenario.hpp"

namespace vecirs {

using ComplexCoeff = std::complex<double>;

/// One reflection angle per surface element, each in [0, 2*pi).
struct PhaseConfig {
  std::vector<double> phases;

  std::size_t size() const { return phases.size(); }
};

/// Small-scale coefficients for one fading block. Path losses are applied
/// separately from geometry, so the drone can move without resampling.
struct ChannelRealization {
  std::vector<ComplexCoeff> direct;               // [N]   vehicle -> AP
  std::vector<std::vector<ComplexCoeff>> to_irs;  // [N][K] vehicle -> element
  std::vector<ComplexCoeff> irs_to_ap;            // [K]   element -> AP
};

struct FadingKind {
  enum class Law { rayleigh, rician } law = Law::rayleigh;
  double k_db = 0.0;  // Rician K-factor; +inf gives the pure line-of-sight limit

  static FadingKind rayleigh() { return {}; }
  static FadingKind rician(double k_db) { return {Law::rician, k_db}; }
};

/// Log-distance law ref_gain * d^-exponent, with d clamped to at least 1 m.
double path_loss(double distance, double exponent, double ref_gain);

/// Draws `count` unit-average-power coefficients.
std::vector<ComplexCoeff> sample_fading(FadingKind kind, std::size_t count, Rng& rng);

/// Sum over elements of h_k * g_k * exp(j*theta_k).
ComplexCoeff cascaded_channel(std::span<const ComplexCoeff> to_irs,
                              std::span<const ComplexCoeff> irs_to_ap,
                              const PhaseConfig& phases);

/// Per-element phases that align every cascaded term with the direct link
/// (with the positive real axis when the direct link is zero).
PhaseConfig optimal_phases(ComplexCoeff direct, std::span<const ComplexCoeff> to_irs,
                           std::span<const ComplexCoeff> irs_to_ap);

/// Rounds each phase to the nearest point of a 2^bits uniform codebook; ties
/// go to the lower level. `bits == nullopt` returns the input unchanged.
PhaseConfig quantize_phases(const PhaseConfig& phases, std::optional<int> bits);

/// |sqrt(pl_direct) * direct + sqrt(pl_cascaded) * cascaded|^2.
double effective_gain(ComplexCoeff direct, ComplexCoeff cascaded, double pl_direct,
                      double pl_cascaded);

/// Shannon rate bandwidth * log2(1 + P g / (N0 B)) in bits/s.
double achievable_rate(double bandwidth, double tx_power, double gain, double noise_density);

/// Rayleigh direct links, Rician(config.rician_k_db) on both surface legs.
ChannelRealization sample_realization(const Scenario& scenario, Rng& rng);

/// Realization drawn from the stream derived from scenario.config.seed.
ChannelRealization sample_realization(const Scenario& scenario);

/// Large-scale gains for a given drone position.
struct LinkGeometry {
  double pl_direct = 0.0;
  double pl_cascaded = 0.0;  // product of the two line-of-sight legs
};

LinkGeometry link_geometry(const Scenario& scenario, std::size_t vehicle, Vec2 drone_xy);

}  // namespace vecirs
