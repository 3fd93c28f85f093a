#include "vecirs/channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "vecirs/error.hpp"

namespace vecirs {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_phase(double theta) {
  double w = std::fmod(theta, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  if (w >= kTwoPi) w = 0.0;
  return w;
}

ComplexCoeff circular_normal(Rng& rng) {
  const double re = rng.normal();
  const double im = rng.normal();
  return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
}

}  // namespace

double path_loss(double distance, double exponent, double ref_gain) {
  if (!std::isfinite(distance) || !std::isfinite(exponent) || !std::isfinite(ref_gain))
    throw std::invalid_argument("path_loss: non-finite input");
  const double d = std::max(distance, 1.0);
  return ref_gain * std::pow(d, -exponent);
}

std::vector<ComplexCoeff> sample_fading(FadingKind kind, std::size_t count, Rng& rng) {
  std::vector<ComplexCoeff> out;
  out.reserve(count);
  if (kind.law == FadingKind::Law::rayleigh) {
    for (std::size_t i = 0; i < count; ++i) out.push_back(circular_normal(rng));
    return out;
  }
  double los_amp = 1.0;
  double scatter_amp = 0.0;
  if (!(std::isinf(kind.k_db) && kind.k_db > 0.0)) {
    const double k = std::pow(10.0, kind.k_db / 10.0);
    los_amp = std::sqrt(k / (k + 1.0));
    scatter_amp = std::sqrt(1.0 / (k + 1.0));
  }
  for (std::size_t i = 0; i < count; ++i) {
    ComplexCoeff h{los_amp, 0.0};
    if (scatter_amp > 0.0) h += scatter_amp * circular_normal(rng);
    out.push_back(h);
  }
  return out;
}

ComplexCoeff cascaded_channel(std::span<const ComplexCoeff> to_irs,
                              std::span<const ComplexCoeff> irs_to_ap,
                              const PhaseConfig& phases) {
  if (to_irs.size() != irs_to_ap.size() || to_irs.size() != phases.size())
    throw std::invalid_argument("cascaded_channel: length mismatch");
  ComplexCoeff sum{0.0, 0.0};
  for (std::size_t k = 0; k < to_irs.size(); ++k)
    sum += to_irs[k] * irs_to_ap[k] * std::polar(1.0, phases.phases[k]);
  return sum;
}

PhaseConfig optimal_phases(ComplexCoeff direct, std::span<const ComplexCoeff> to_irs,
                           std::span<const ComplexCoeff> irs_to_ap) {
  if (to_irs.size() != irs_to_ap.size())
    throw std::invalid_argument("optimal_phases: length mismatch");
  const double reference = std::abs(direct) > 0.0 ? std::arg(direct) : 0.0;
  PhaseConfig out;
  out.phases.reserve(to_irs.size());
  for (std::size_t k = 0; k < to_irs.size(); ++k) {
    const ComplexCoeff term = to_irs[k] * irs_to_ap[k];
    const double own = std::abs(term) > 0.0 ? std::arg(term) : 0.0;
    out.phases.push_back(wrap_phase(reference - own));
  }
  return out;
}

PhaseConfig quantize_phases(const PhaseConfig& phases, std::optional<int> bits) {
  if (!bits) return phases;
  if (*bits < 1) throw std::invalid_argument("quantize_phases: bits must be >= 1");
  const auto levels = static_cast<long long>(1) << *bits;
  const double step = kTwoPi / static_cast<double>(levels);
  PhaseConfig out;
  out.phases.reserve(phases.size());
  for (double theta : phases.phases) {
    const double x = wrap_phase(theta) / step;
    auto m = static_cast<long long>(std::ceil(x - 0.5));
    m %= levels;
    out.phases.push_back(static_cast<double>(m) * step);
  }
  return out;
}

double effective_gain(ComplexCoeff direct, ComplexCoeff cascaded, double pl_direct,
                      double pl_cascaded) {
  return std::norm(std::sqrt(pl_direct) * direct + std::sqrt(pl_cascaded) * cascaded);
}

double achievable_rate(double bandwidth, double tx_power, double gain, double noise_density) {
  if (bandwidth <= 0.0 || gain <= 0.0 || tx_power <= 0.0) return 0.0;
  const double snr = tx_power * gain / (noise_density * bandwidth);
  return bandwidth * std::log2(1.0 + snr);
}

ChannelRealization sample_realization(const Scenario& scenario, Rng& rng) {
  const std::size_t n = scenario.vehicles.size();
  const std::size_t k = scenario.config.n_irs_elements;
  const auto leg = FadingKind::rician(scenario.config.rician_k_db);
  ChannelRealization r;
  r.direct = sample_fading(FadingKind::rayleigh(), n, rng);
  r.to_irs.reserve(n);
  for (std::size_t i = 0; i < n; ++i) r.to_irs.push_back(sample_fading(leg, k, rng));
  r.irs_to_ap = sample_fading(leg, k, rng);
  return r;
}

ChannelRealization sample_realization(const Scenario& scenario) {
  Rng rng(derive_seed(scenario.config.seed, 2));
  return sample_realization(scenario, rng);
}

LinkGeometry link_geometry(const Scenario& scenario, std::size_t vehicle, Vec2 drone_xy) {
  const SystemConfig& c = scenario.config;
  const Vec2 pos = scenario.vehicles.at(vehicle).position;
  const double h = c.drone_height;
  LinkGeometry g;
  g.pl_direct = path_loss(distance(pos, scenario.ap_position), c.pathloss_exp_direct,
                          c.ref_gain_1m);
  g.pl_cascaded = path_loss(slant_distance(pos, drone_xy, h), c.pathloss_exp_los,
                            c.ref_gain_1m) *
                  path_loss(slant_distance(scenario.ap_position, drone_xy, h),
                            c.pathloss_exp_los, c.ref_gain_1m);
  return g;
}

}  // namespace vecirs
