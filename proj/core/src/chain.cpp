#include "cryomux/chain.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <random>
#include <sstream>

#include "cryomux/error.hpp"

namespace cryomux::chain {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool is_sample(const Stage& s) { return std::holds_alternative<SampleStage>(s); }
bool is_amplifier(const Stage& s) { return std::holds_alternative<AmplifierStage>(s); }

resonator::CavityLerSystem with_gamma(const resonator::CavityLerSystem& sys,
                                      std::optional<double> gamma_r) {
  auto out = sys;
  if (gamma_r) out.gamma_r = *gamma_r;
  return out;
}

std::vector<complex> product_response(const ChainSpec& chain, const rfnet::FrequencyGrid& grid,
                                      std::size_t begin, std::size_t end, bool skip_sample,
                                      std::optional<double> gamma_r) {
  std::vector<complex> h(grid.size(), complex(1.0));
  for (std::size_t k = begin; k < end; ++k) {
    if (skip_sample && is_sample(chain.stages[k])) continue;
    const auto r = stage_response(chain.stages[k], grid, gamma_r);
    for (std::size_t i = 0; i < h.size(); ++i) h[i] *= r[i];
  }
  return h;
}

}  // namespace

mux::ControlState MuxStage::control_state() const {
  auto state = mux::ControlState::initial(config.n_ports, mode);
  if (mode == mux::InterfaceMode::serial) return mux::program_serial(state, selected_port);
  if (!selected_port) return state;
  return mux::program_parallel(state, *selected_port);
}

void ChainSpec::validate() const {
  std::size_t samples = 0;
  for (const auto& stage : stages) {
    std::visit(overloaded{
                   [](const AttenuatorStage& a) {
                     if (!(a.db >= 0.0)) {
                       throw Error(ErrorKind::invalid_input, "attenuation must be >= 0 dB");
                     }
                   },
                   [](const MuxStage& m) {
                     m.config.validate();
                     if (m.path_port >= m.config.n_ports ||
                         (m.selected_port && *m.selected_port >= m.config.n_ports)) {
                       throw Error(ErrorKind::invalid_selection, "mux port out of range");
                     }
                     if (!(m.v_dd >= 0.0)) {
                       throw Error(ErrorKind::invalid_input, "mux supply must be >= 0");
                     }
                   },
                   [&](const SampleStage& s) {
                     ++samples;
                     s.system.validate();
                     if (s.tls) s.tls->validate();
                   },
                   [](const BandpassStage& b) {
                     if (!(b.f_lo < b.f_hi) || !(b.rejection_db >= 0.0)) {
                       throw Error(ErrorKind::invalid_input,
                                   "bandpass needs f_lo < f_hi and rejection >= 0");
                     }
                   },
                   [](const AmplifierStage& a) {
                     if (!(a.noise_temperature_k >= 0.0) || !std::isfinite(a.gain_db)) {
                       throw Error(ErrorKind::invalid_input,
                                   "amplifier needs finite gain and noise temperature >= 0");
                     }
                   },
               },
               stage);
  }
  if (samples == 0) throw Error(ErrorKind::invalid_input, "chain has no sample stage");
  if (samples > 1) throw Error(ErrorKind::invalid_input, "chain has more than one sample stage");
}

std::size_t ChainSpec::sample_index() const {
  const auto it = std::find_if(stages.begin(), stages.end(), is_sample);
  if (it == stages.end()) throw Error(ErrorKind::invalid_input, "chain has no sample stage");
  return static_cast<std::size_t>(it - stages.begin());
}

const SampleStage& ChainSpec::sample() const {
  return std::get<SampleStage>(stages[sample_index()]);
}

void SweepSpec::validate() const {
  if (averages < 1) throw Error(ErrorKind::invalid_input, "averages must be >= 1");
  if (!(rbw_hz > 0.0)) throw Error(ErrorKind::invalid_input, "resolution bandwidth must be > 0");
  if (!grid) {
    if (points_per_trace < 2) throw Error(ErrorKind::invalid_input, "need at least two points");
    if (!(auto_span_linewidths > 0.0)) {
      throw Error(ErrorKind::invalid_input, "auto span must be positive");
    }
  }
}

std::vector<complex> stage_response(const Stage& stage, const rfnet::FrequencyGrid& grid,
                                    std::optional<double> gamma_r) {
  return std::visit(
      overloaded{
          [&](const AttenuatorStage& a) {
            return std::vector<complex>(grid.size(), complex(db_to_amplitude(-a.db)));
          },
          [&](const MuxStage& m) {
            return mux::port_s_params(m.config, m.control_state(), m.v_dd, grid, m.path_port)
                .s21();
          },
          [&](const SampleStage& s) {
            const auto sys = with_gamma(s.system, gamma_r);
            std::vector<complex> out(grid.size());
            for (std::size_t i = 0; i < grid.size(); ++i) {
              out[i] = resonator::to_network_convention(
                  resonator::s21_physics(sys, hz_to_rad(grid[i])));
            }
            return out;
          },
          [&](const BandpassStage& b) {
            std::vector<complex> out(grid.size());
            for (std::size_t i = 0; i < grid.size(); ++i) {
              const bool pass = grid[i] >= b.f_lo && grid[i] <= b.f_hi;
              out[i] = pass ? 1.0 : db_to_amplitude(-b.rejection_db);
            }
            return out;
          },
          [&](const AmplifierStage& a) {
            return std::vector<complex>(grid.size(), complex(db_to_amplitude(a.gain_db)));
          },
      },
      stage);
}

std::vector<complex> through_response(const ChainSpec& chain, const rfnet::FrequencyGrid& grid) {
  return product_response(chain, grid, 0, chain.stages.size(), true, std::nullopt);
}

double power_at_sample(const ChainSpec& chain, double instrument_power_dbm, double f_hz) {
  const auto grid = rfnet::FrequencyGrid::single(f_hz);
  const auto h = product_response(chain, grid, 0, chain.sample_index(), false, std::nullopt);
  return dbm_to_watts(instrument_power_dbm) * std::norm(h[0]);
}

double power_at_sample(const ChainSpec& chain, double instrument_power_dbm) {
  const auto rates = resonator::purcell(chain.sample().system);
  return power_at_sample(chain, instrument_power_dbm, rad_to_hz(rates.omega_r_dressed));
}

double system_noise_temperature(const ChainSpec& chain, double f_hz) {
  const auto first = std::find_if(chain.stages.begin(), chain.stages.end(), is_amplifier);
  if (first == chain.stages.end()) return 0.0;
  const auto grid = rfnet::FrequencyGrid::single(f_hz);
  double t_sys = 0.0;
  double gain = 1.0;
  for (auto it = first; it != chain.stages.end(); ++it) {
    if (const auto* amp = std::get_if<AmplifierStage>(&*it)) {
      t_sys += amp->noise_temperature_k / gain;
      gain *= db_to_power_ratio(amp->gain_db);
    } else {
      gain *= std::norm(stage_response(*it, grid)[0]);
    }
  }
  return t_sys;
}

SteadyState resonator_steady_state(const SampleStage& sample, double p_in_w) {
  const auto rates = resonator::purcell(sample.system);
  const double omega = rates.omega_r_dressed;
  SteadyState ss;
  if (!sample.tls) {
    ss.gamma_r = sample.system.gamma_r;
    ss.n_photons = resonator::mean_photons_from_rates(rates, ss.gamma_r, p_in_w, omega);
    ss.converged = true;
    return ss;
  }
  const auto& tls = *sample.tls;
  auto gamma_of = [&](double n) { return omega * loss::qi_inverse(tls, n); };
  auto photons = [&](double n) {
    return resonator::mean_photons_from_rates(rates, gamma_of(n), p_in_w, omega);
  };

  // Plain fixed-point iteration from the empty resonator. It rises
  // monotonically towards the lowest self-consistent solution.
  constexpr std::size_t max_fixed_point = 50;
  constexpr double rel_tol = 1e-9;
  double n = 0.0;
  for (ss.iterations = 0; ss.iterations < max_fixed_point; ++ss.iterations) {
    const double next = photons(n);
    const bool done = std::abs(next - n) <= rel_tol * std::abs(next);
    n = next;
    if (done) {
      ss.converged = true;
      break;
    }
  }
  if (!ss.converged && n > 0.0) {
    // Slowly converging (loss ~ n^-1/2 makes the map nearly linear): bracket
    // the lowest root of photons(n) - n above the last iterate and bisect.
    double lo = n;
    double hi = 2.0 * n;
    while (photons(hi) > hi && hi < 1e30) {
      lo = hi;
      hi *= 2.0;
    }
    for (int k = 0; k < 200 && (hi - lo) > 1e-13 * hi; ++k, ++ss.iterations) {
      const double mid = std::sqrt(lo * hi);
      if (photons(mid) > mid) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    n = 0.5 * (lo + hi);
    ss.converged = hi < 1e30;
  }
  ss.n_photons = n;
  ss.gamma_r = gamma_of(n);
  return ss;
}

rfnet::FrequencyGrid sweep_grid(const ChainSpec& chain, const SweepSpec& sweep,
                                std::optional<double> gamma_r) {
  if (sweep.grid) return *sweep.grid;
  const auto sys = with_gamma(chain.sample().system, gamma_r);
  const auto rates = resonator::purcell(sys);
  const double f0 = rad_to_hz(rates.omega_r_dressed);
  const double linewidth = rad_to_hz(rates.kappa_pur + sys.gamma_r);
  const double half_span = sweep.auto_span_linewidths * linewidth;
  return rfnet::FrequencyGrid::linspace(f0 - half_span, f0 + half_span, sweep.points_per_trace);
}

SynthesisResult synthesize_sweep(const ChainSpec& chain, const SweepSpec& sweep) {
  chain.validate();
  sweep.validate();
  SynthesisResult out{{rfnet::FrequencyGrid::single(1.0), {}, {}}, {}, {}, 0.0};
  const auto& sample = chain.sample();
  out.warnings = sample.system.validate();

  out.p_sample_w = power_at_sample(chain, sweep.instrument_power_dbm);
  out.steady_state = resonator_steady_state(sample, out.p_sample_w);
  if (!out.steady_state.converged) {
    out.warnings.push_back("photon-number self-consistency did not converge");
  }
  const double gamma = out.steady_state.gamma_r;
  const auto grid = sweep_grid(chain, sweep, gamma);

  for (const auto& stage : chain.stages) {
    if (const auto* b = std::get_if<BandpassStage>(&stage)) {
      if (grid.front() < b->f_lo || grid.back() > b->f_hi) {
        std::ostringstream os;
        os << "sweep extends outside bandpass [" << b->f_lo << ", " << b->f_hi
           << "] Hz; out-of-band rejection applied";
        out.warnings.push_back(os.str());
      }
    }
  }

  std::vector<complex> s21 =
      product_response(chain, grid, 0, chain.stages.size(), false, gamma);

  std::vector<double> sigma;
  const double t_sys = system_noise_temperature(chain, grid[grid.size() / 2]);
  if (t_sys > 0.0) {
    const auto first = static_cast<std::size_t>(
        std::find_if(chain.stages.begin(), chain.stages.end(), is_amplifier) -
        chain.stages.begin());
    const auto after = product_response(chain, grid, first, chain.stages.size(), false, gamma);
    const double noise_power = constants::boltzmann * t_sys * sweep.rbw_hz /
                               static_cast<double>(sweep.averages);
    const double referred =
        std::sqrt(noise_power / dbm_to_watts(sweep.instrument_power_dbm));
    std::mt19937_64 rng(chain.rng_seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    sigma.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
      sigma[i] = referred * std::abs(after[i]) / std::sqrt(2.0);
      const double re = normal(rng);
      const double im = normal(rng);
      s21[i] += sigma[i] * complex(re, im);
    }
  }
  out.trace = fit::ComplexTrace{grid, std::move(s21), std::move(sigma)};
  return out;
}

fit::ComplexTrace normalize_by_through(const ChainSpec& chain, const fit::ComplexTrace& trace) {
  const auto h = through_response(chain, trace.grid);
  fit::ComplexTrace out = trace;
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (h[i] == complex(0.0)) {
      throw Error(ErrorKind::numeric_singularity, "through response vanishes");
    }
    out.s21[i] /= h[i];
    if (!out.sigma.empty()) out.sigma[i] /= std::abs(h[i]);
  }
  return out;
}

std::vector<fit::PowerSweepPoint> PowerSeriesResult::sweep_points() const {
  std::vector<fit::PowerSweepPoint> pts;
  for (const auto& e : entries) {
    if (!e.converged || !e.fit) continue;
    const double q = e.fit->params.q_loaded;
    double sigma = e.fit->result.stderr_of("q_loaded");
    if (!(sigma > 0.0)) sigma = 1e-6 * q;
    pts.push_back({e.n_photons, q, sigma});
  }
  return pts;
}

PowerSeriesResult run_power_series(const ChainSpec& chain, const SweepSpec& sweep,
                                   const std::vector<double>& power_list_dbm,
                                   const PowerSeriesOptions& options) {
  chain.validate();
  sweep.validate();

  auto task = [&chain, &sweep](std::size_t index, double power_dbm) {
    PowerSeriesEntry entry;
    entry.instrument_power_dbm = power_dbm;
    try {
      ChainSpec local = chain;
      local.rng_seed = chain.rng_seed + 0x9E3779B97F4A7C15ULL * (index + 1);
      SweepSpec s = sweep;
      s.instrument_power_dbm = power_dbm;
      const auto synth = synthesize_sweep(local, s);
      entry.p_sample_w = synth.p_sample_w;
      const auto normalized = normalize_by_through(local, synth.trace);
      auto spectrum = fit::fit_spectrum(normalized);
      entry.converged = spectrum.converged();
      entry.message = spectrum.result.message;
      if (entry.converged) {
        entry.n_photons = fit::photon_axis(entry.p_sample_w, spectrum, spectrum.params.f_r);
      }
      entry.fit = std::move(spectrum);
    } catch (const Error& e) {
      entry.converged = false;
      entry.message = e.what();
    }
    return entry;
  };

  PowerSeriesResult result;
  result.entries.reserve(power_list_dbm.size());
  if (options.parallel) {
    std::vector<std::future<PowerSeriesEntry>> futures;
    futures.reserve(power_list_dbm.size());
    for (std::size_t k = 0; k < power_list_dbm.size(); ++k) {
      futures.push_back(std::async(std::launch::async, task, k, power_list_dbm[k]));
    }
    for (auto& f : futures) result.entries.push_back(f.get());
  } else {
    for (std::size_t k = 0; k < power_list_dbm.size(); ++k) {
      result.entries.push_back(task(k, power_list_dbm[k]));
    }
  }

  if (options.fit_tls) {
    const auto points = result.sweep_points();
    // Loaded Qs become internal Qs through the median fitted |Q_c|.
    std::vector<double> q_c;
    for (const auto& e : result.entries) {
      if (e.converged && e.fit) q_c.push_back(e.fit->params.q_c_mag);
    }
    if (points.size() >= 6) {
      std::nth_element(q_c.begin(), q_c.begin() + q_c.size() / 2, q_c.end());
      try {
        result.tls_fit = fit::fit_power_sweep(points, q_c[q_c.size() / 2]);
      } catch (const Error&) {
        result.tls_fit.reset();
      }
    }
  }
  return result;
}

}  // namespace cryomux::chain
