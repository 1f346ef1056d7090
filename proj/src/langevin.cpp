// Copyright 2026 The sqf Authors
// SPDX-License-Identifier: Apache-2.0
#include "sqf/langevin.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "sqf/rng.hpp"

namespace sqf {

void LatticeSpec::validate() const {
  if (L1 < 2 || L2 < 2 || L1 % 2 || L2 % 2)
    throw std::invalid_argument("LatticeSpec: L1, L2 must be even and >= 2");
  if (!(a > 0.0) || !std::isfinite(a)) throw std::invalid_argument("LatticeSpec: a must be > 0");
}

int LatticeSpec::mode_index(int n1, int n2) const {
  if (n1 < -L1 / 2 || n1 >= L1 / 2 || n2 < -L2 / 2 || n2 >= L2 / 2)
    throw std::out_of_range("LatticeSpec: mode out of range");
  return (n1 + L1 / 2) * L2 + (n2 + L2 / 2);
}

Momentum2 LatticeSpec::momentum(int mode) const {
  return {2 * std::numbers::pi * n1(mode) / (L1 * a), 2 * std::numbers::pi * n2(mode) / (L2 * a)};
}

int LatticeSpec::conjugate(int mode) const {
  auto flip = [](int n, int L) { return n == -L / 2 ? n : -n; };
  return mode_index(flip(n1(mode), L1), flip(n2(mode), L2));
}

double LatticeSpec::p2_max() const {
  const double q1 = std::numbers::pi / a, q2 = std::numbers::pi / a;
  return q1 * q1 + q2 * q2;
}

std::vector<int> representative_modes(const LatticeSpec& spec) {
  std::vector<int> reps;
  for (int k = 0; k < spec.num_modes(); ++k)
    if (k <= spec.conjugate(k)) reps.push_back(k);
  return reps;
}

BosonField::BosonField(const LatticeSpec& spec) : spec_(spec) {
  spec_.validate();
  modes_.assign(spec_.num_modes(), Complex{});
}

void BosonField::set_mode(int mode, Complex value) {
  const int c = spec_.conjugate(mode);
  if (c == mode) value = value.real();
  modes_.at(mode) = value;
  modes_.at(c) = std::conj(value);
}

namespace {

double phase(const LatticeSpec& spec, int mode, int site) {
  const int i1 = site / spec.L2, i2 = site % spec.L2;
  return 2 * std::numbers::pi *
         (static_cast<double>(spec.n1(mode) * i1) / spec.L1 +
          static_cast<double>(spec.n2(mode) * i2) / spec.L2);
}

}  // namespace

BosonField BosonField::from_sites(const LatticeSpec& spec, std::span<const double> values) {
  BosonField f(spec);
  if (static_cast<int>(values.size()) != spec.num_modes())
    throw std::invalid_argument("BosonField: need one value per site");
  const double a2 = spec.a * spec.a;
  for (int k : representative_modes(spec)) {
    Complex sum{};
    for (int x = 0; x < spec.num_modes(); ++x)
      sum += values[x] * std::polar(1.0, -phase(spec, k, x));
    f.set_mode(k, a2 * sum);
  }
  return f;
}

std::vector<double> BosonField::sites() const {
  std::vector<double> out(spec_.num_modes());
  const double inv_v = 1.0 / spec_.volume();
  for (int x = 0; x < spec_.num_modes(); ++x) {
    Complex sum{};
    for (int k = 0; k < spec_.num_modes(); ++k)
      sum += modes_[k] * std::polar(1.0, phase(spec_, k, x));
    out[x] = inv_v * sum.real();
  }
  return out;
}

void ChainConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("ChainConfig: dt must be > 0");
  if (n_burn_in < 0 || n_burn_in >= n_steps)
    throw std::invalid_argument("ChainConfig: need 0 <= n_burn_in < n_steps");
  if (n_chains < 1) throw std::invalid_argument("ChainConfig: n_chains must be >= 1");
}

namespace {

void check_sector(const ModelParams& params, const LatticeSpec& spec, const ChainConfig& config) {
  params.validate();
  spec.validate();
  config.validate();
  if (params.g != 0.0)
    throw std::invalid_argument("langevin: only the g = 0 boson sector is simulated");
  if (config.integrator == Integrator::EulerMaruyama &&
      config.dt >= 2.0 / (spec.p2_max() + params.M * params.M))
    throw std::invalid_argument("langevin: Euler-Maruyama unstable, need dt < 2/(p2_max + M^2)");
}

// Per real degree of freedom x: x' = decay x + scale zeta.
struct DofUpdate {
  double decay;
  double scale;
};

// Update coefficients per representative mode (one entry for both real and
// imaginary parts of a pair).
std::vector<DofUpdate> mode_updates(const ModelParams& params, const LatticeSpec& spec,
                                    const ChainConfig& config, const std::vector<int>& reps) {
  const double v = spec.volume(), dt = config.dt, m2 = params.M * params.M;
  std::vector<DofUpdate> out;
  for (int k : reps) {
    const double w = spec.momentum(k).norm2() + m2;
    // Noise variance per unit time of one real component: 2V for a real
    // mode, V for each component of a complex mode.
    const double q = (spec.conjugate(k) == k ? 2.0 : 1.0) * v;
    if (config.integrator == Integrator::ExponentialMode) {
      const double d = std::exp(-w * dt);
      out.push_back({d, std::sqrt(q / (2 * w) * -std::expm1(-2 * w * dt))});
    } else {
      out.push_back({1.0 - w * dt, std::sqrt(q * dt)});
    }
  }
  return out;
}

void apply(std::vector<Complex>& modes, const LatticeSpec& spec, const std::vector<int>& reps,
           const std::vector<DofUpdate>& up, std::span<const double> noise) {
  std::size_t d = 0;
  for (std::size_t r = 0; r < reps.size(); ++r) {
    const int k = reps[r], c = spec.conjugate(k);
    const Complex z = modes[k];
    if (c == k) {
      modes[k] = up[r].decay * z.real() + up[r].scale * noise[d++];
    } else {
      const double re = up[r].decay * z.real() + up[r].scale * noise[d];
      const double im = up[r].decay * z.imag() + up[r].scale * noise[d + 1];
      d += 2;
      modes[k] = {re, im};
      modes[c] = {re, -im};
    }
  }
}

}  // namespace

BosonField step_boson(const BosonField& state, std::span<const double> noise,
                      const ModelParams& params, const LatticeSpec& spec,
                      const ChainConfig& config) {
  check_sector(params, spec, config);
  if (static_cast<int>(noise.size()) != spec.num_modes())
    throw std::invalid_argument("step_boson: need one noise value per real degree of freedom");
  if (state.spec().L1 != spec.L1 || state.spec().L2 != spec.L2 || state.spec().a != spec.a)
    throw std::invalid_argument("step_boson: field lives on a different lattice");
  const auto reps = representative_modes(spec);
  const auto up = mode_updates(params, spec, config, reps);
  std::vector<Complex> modes = state.modes();
  apply(modes, spec, reps, up, noise);
  BosonField out(spec);
  for (int k : reps) out.set_mode(k, modes[k]);
  return out;
}

namespace {

struct ChainResult {
  // batch_means[r * kNumBatches + b]
  std::vector<double> batch_means;
  std::string error;
};

ChainResult run_one_chain(int chain, const ChainConfig& config, const LatticeSpec& spec,
                          const std::vector<int>& reps, const std::vector<DofUpdate>& up) {
  ChainResult res;
  const long n_samples = config.n_steps - config.n_burn_in;
  const long batch = n_samples / kNumBatches;
  const double inv_v = 1.0 / spec.volume();
  std::vector<Complex> modes(spec.num_modes());
  std::vector<double> noise(spec.num_modes());
  std::vector<double> sums(reps.size() * kNumBatches, 0.0);
  for (long step = 0; step < config.n_burn_in + batch * kNumBatches; ++step) {
    CounterRng rng(config.seed, static_cast<std::uint64_t>(chain), static_cast<std::uint64_t>(step));
    for (double& z : noise) z = rng.normal();
    apply(modes, spec, reps, up, noise);
    for (std::size_t r = 0; r < reps.size(); ++r) {
      const double s = std::norm(modes[reps[r]]);
      if (!std::isfinite(s)) {
        std::ostringstream os;
        os << "langevin: divergence at step " << step << " in mode (" << spec.n1(reps[r]) << ", "
           << spec.n2(reps[r]) << ") of chain " << chain;
        res.error = os.str();
        return res;
      }
      if (step >= config.n_burn_in)
        sums[r * kNumBatches + (step - config.n_burn_in) / batch] += s * inv_v;
    }
  }
  for (double& s : sums) s /= static_cast<double>(batch);
  res.batch_means = std::move(sums);
  return res;
}

}  // namespace

CorrelatorTable run_boson_chain(const ChainConfig& config, const ModelParams& params,
                                const LatticeSpec& spec) {
  check_sector(params, spec, config);
  const long n_samples = config.n_steps - config.n_burn_in;
  if (n_samples < kNumBatches)
    throw std::invalid_argument("run_boson_chain: need at least 32 post-burn-in steps");
  const auto reps = representative_modes(spec);
  const auto up = mode_updates(params, spec, config, reps);

  std::vector<ChainResult> results(config.n_chains);
  {
    std::vector<std::jthread> workers;
    for (int c = 0; c < config.n_chains; ++c)
      workers.emplace_back([&, c] { results[c] = run_one_chain(c, config, spec, reps, up); });
  }
  for (const auto& r : results)
    if (!r.error.empty()) throw std::runtime_error(r.error);

  const long batch = n_samples / kNumBatches;
  const int nb = kNumBatches * config.n_chains;
  CorrelatorTable table;
  table.spec = spec;
  table.normalization = "<|phi(p)|^2>/V, phi(p) = a^2 sum_x exp(-ipx) phi(x), V = L1 L2 a^2";
  for (std::size_t r = 0; r < reps.size(); ++r) {
    double mean = 0.0;
    for (const auto& res : results)
      for (int b = 0; b < kNumBatches; ++b) mean += res.batch_means[r * kNumBatches + b];
    mean /= nb;
    double var = 0.0;
    for (const auto& res : results)
      for (int b = 0; b < kNumBatches; ++b) {
        const double d = res.batch_means[r * kNumBatches + b] - mean;
        var += d * d;
      }
    var /= (nb - 1);
    const int k = reps[r];
    table.entries.push_back({spec.n1(k), spec.n2(k), spec.momentum(k), mean,
                             std::sqrt(var / nb), batch * kNumBatches * config.n_chains});
  }
  return table;
}

CorrelatorTable free_fermion_table(const LatticeSpec& spec, double m, double t_cut,
                                   const QuadOptions& opts) {
  spec.validate();
  if (!(m > 0.0)) throw std::invalid_argument("free_fermion_table: m must be > 0");
  CorrelatorTable table;
  table.spec = spec;
  table.normalization = "C(T,p) = 2 int_0^T G(tau,p) Gbar(tau,-p)^T dtau";
  for (int k = 0; k < spec.num_modes(); ++k) {
    double err = 0.0;
    const SpinMatrix c = stationary_fermion_correlator(t_cut, spec.momentum(k), m, opts, &err);
    table.entries.push_back({spec.n1(k), spec.n2(k), spec.momentum(k), c, err, 0});
  }
  return table;
}

}  // namespace sqf
