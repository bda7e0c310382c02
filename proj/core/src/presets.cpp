#include <algorithm>
#include <cmath>
#include <numbers>

#include "experiment_internal.hpp"
#include "ringqed/correlation.hpp"
#include "ringqed/diagnostics.hpp"
#include "ringqed/errors.hpp"
#include "ringqed/fitting.hpp"
#include "ringqed/lindblad.hpp"
#include "ringqed/observables.hpp"
#include "ringqed/oracles.hpp"

namespace ringqed::detail {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double nan = std::numeric_limits<double>::quiet_NaN();

std::vector<double> linspace(double a, double b, std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t k = 0; k < n; ++k) {
    v[k] = n == 1 ? a : a + (b - a) * static_cast<double>(k) / static_cast<double>(n - 1);
  }
  return v;
}

std::vector<double> time_grid(double t_max, double dt) {
  const auto n = static_cast<std::size_t>(std::floor(t_max / dt + 1e-9)) + 1;
  std::vector<double> t(n);
  for (std::size_t k = 0; k < n; ++k) t[k] = dt * static_cast<double>(k);
  return t;
}

double wrap_angle(double a) {
  a = std::remainder(a, 2.0 * pi);
  return a <= -pi ? a + 2.0 * pi : a;
}

/// Deviation of a signed series normalized by the largest oracle magnitude.
std::vector<double> scaled_dev(const std::vector<double>& num, const std::vector<double>& orc) {
  double scale = 0.0;
  for (double v : orc) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) scale = 1.0;
  std::vector<double> d(num.size());
  for (std::size_t k = 0; k < num.size(); ++k) d[k] = std::abs(num[k] - orc[k]) / scale;
  return d;
}

ComplexMatrix diag_ext(double pp, double mm) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = pp;
  m(1, 1) = mm;
  return m;
}

EvolutionSpec evolution_spec(const ExperimentConfig& c, std::vector<double> grid) {
  EvolutionSpec s;
  s.t_grid = std::move(grid);
  s.rtol = c.rtol;
  s.atol = c.atol;
  return s;
}

struct Full {
  SpaceLayout space;
  LindbladGenerator gen;
};

Full full_model(const SystemParams& p, std::size_t n_max) {
  SpaceLayout space = build_space(ModelKind::full_lab, n_max);
  LindbladGenerator gen(full_hamiltonian(p, space), collapse_operators(p, space));
  return {std::move(space), std::move(gen)};
}

// --- steady-state rows -------------------------------------------------------

const std::vector<std::string> steady_columns{
    "n_CW_numeric",  "n_CW_oracle",   "n_CW_rel_dev",   "n_CCW_numeric", "n_CCW_oracle",
    "n_CCW_rel_dev", "n_tot_numeric", "n_tot_oracle",   "n_tot_rel_dev", "rho_pp_numeric",
    "rho_pp_oracle", "rho_pp_rel_dev", "g2_0_numeric",  "g2_0_oracle",   "g2_0_rel_dev",
    "n_max_used",    "degenerate",    "gate_change"};

std::vector<double> steady_row(const ExperimentConfig& c, const SystemParams& p) {
  const SteadyOutcome s = full_steady_state(p, c.resolved_n_max(), c.gate, c.rtol);
  const PhotonNumbers n = photon_numbers(s.rho);
  const ExternalState ext = external_state(s.rho);
  const oracle::PerturbativeSS pss = oracle::perturbative_ss(p);
  const oracle::AdiabaticFields f = oracle::adiabatic_fields(p, diag_ext(pss.P_plus, pss.P_minus));
  const double n_tot_oracle = oracle::n_tot_steady(p);
  const double g2_num = g2_zero(s.rho, Mode::CW);
  const double g2_orc = oracle::g2_closed(p, 0.0);
  return {n.n_CW,         f.n_CW,       rel_dev(n.n_CW, f.n_CW),
          n.n_CCW,        f.n_CCW,      rel_dev(n.n_CCW, f.n_CCW),
          n.n_tot,        n_tot_oracle, rel_dev(n.n_tot, n_tot_oracle),
          ext.rho_pp,     pss.P_plus,   rel_dev(ext.rho_pp, pss.P_plus),
          g2_num,         g2_orc,       rel_dev(g2_num, g2_orc),
          static_cast<double>(s.n_max), s.degenerate ? 1.0 : 0.0, s.gate_change};
}

// --- long-time continuation ----------------------------------------------------

struct SlowRun {
  SlowManifoldPropagator prop;
  /// Relaxation rate of the parity populations.
  double pop_rate;
  /// Decay rate and angular frequency of the parity coherence.
  double coh_rate;
  double coh_freq;
};

SlowRun continue_slowly(const LindbladGenerator& gen, const DensityMatrix& rho, double t0, double J) {
  const SlowModeRequest req[] = {{Complex(1e-3, 0.0), 2},
                                 {Complex(0.01, 2.0 * J), 1},
                                 {Complex(0.01, -2.0 * J), 1}};
  const SlowModes modes = slow_modes(gen, req);
  const std::size_t pop = std::abs(modes.eigenvalues[0]) > std::abs(modes.eigenvalues[1]) ? 0 : 1;
  SlowManifoldPropagator prop(modes, rho, t0);
  if (prop.projection_residual() > 1e-6) {
    warn("state at t0 is not yet on the slow manifold (residual " +
         std::to_string(prop.projection_residual()) + ")");
  }
  return {std::move(prop), -modes.eigenvalues[pop].real(), -modes.eigenvalues[2].real(),
          std::abs(modes.eigenvalues[2].imag())};
}

DensityMatrix evolve_to(const DensityMatrix& rho0, const LindbladGenerator& gen, const ExperimentConfig& c,
                        double t) {
  DensityMatrix out = rho0;
  evolve(rho0, gen, evolution_spec(c, {0.0, t}), [&](double, const DensityMatrix& r) { out = r; });
  return out;
}

SinusoidFit positive_amplitude(SinusoidFit f) {
  if (f.amplitude < 0.0) {
    f.amplitude = -f.amplitude;
    f.phase += pi;
  }
  f.phase = wrap_angle(f.phase);
  return f;
}

// --- presets -----------------------------------------------------------------

Plan fig3(const ExperimentConfig& c) {
  Plan plan;
  plan.columns = {"J", "phi", "n_tot_numeric_over_n0", "n_tot_oracle_over_n0", "rel_dev", "n_max_used"};
  const std::vector<double> Js{0.0, 1.0, 2.0, 5.0};
  const std::vector<double> phis = linspace(0.0, 2.0 * pi, 13);
  plan.settings["grid"] = {{"J", Js}, {"phi", phis}, {"delta", 0.0}};
  plan.settings["rel_dev"] = "|n_tot_numeric - n_tot_oracle| / n0";
  for (double J : Js) {
    for (double phi : phis) {
      SystemParams p = c.params;
      p.delta = 0.0;
      p.J = J;
      p.phi = phi;
      plan.tasks.push_back({{J, phi}, [=] {
                              const SteadyOutcome s = full_steady_state(p, c.resolved_n_max(), c.gate, c.rtol);
                              const double n0 = oracle::n0(p);
                              const double num = photon_numbers(s.rho).n_tot / n0;
                              const double orc = oracle::n_tot_steady(p) / n0;
                              return PointResult{{{J, phi, num, orc, std::abs(num - orc),
                                                   static_cast<double>(s.n_max)}}};
                            }});
    }
  }
  return plan;
}

Plan fig4a(const ExperimentConfig& c) {
  Plan plan;
  plan.columns = {"J", "phi", "g2_0_numeric", "g2_0_oracle", "rel_dev", "g2_0_CCW_numeric"};
  const std::vector<double> Js{0.5, 1.0, 2.0, 5.0};
  const std::vector<double> phis = linspace(0.0, pi, 9);
  plan.settings["grid"] = {{"J", Js}, {"phi", phis}, {"delta", 0.0}};
  for (double J : Js) {
    for (double phi : phis) {
      SystemParams p = c.params;
      p.delta = 0.0;
      p.J = J;
      p.phi = phi;
      plan.tasks.push_back({{J, phi}, [=] {
                              const SteadyOutcome s = full_steady_state(p, c.resolved_n_max(), c.gate, c.rtol);
                              const double cw = g2_zero(s.rho, Mode::CW);
                              const double ccw = g2_zero(s.rho, Mode::CCW);
                              const double orc = oracle::g2_resonant(p, 0.0);
                              return PointResult{{{J, phi, cw, orc, rel_dev(cw, orc), ccw}}};
                            }});
    }
  }
  return plan;
}

Plan fig4b(const ExperimentConfig& c) {
  Plan plan;
  plan.columns = {"J", "g2_0_numeric", "g2_0_oracle", "rel_dev", "g2_0_peak_formula", "peak_rel_dev"};
  const std::vector<double> Js{0.5, 1.0, 2.0, 5.0};
  plan.settings["grid"] = {{"J", Js}, {"phi", pi}, {"delta", 0.0}};
  plan.settings["g2_0_peak_formula"] = "1 + 16 J^2 / kappa^2";
  for (double J : Js) {
    SystemParams p = c.params;
    p.delta = 0.0;
    p.J = J;
    p.phi = pi;
    plan.tasks.push_back({{J}, [=] {
                            const SteadyOutcome s = full_steady_state(p, c.resolved_n_max(), c.gate, c.rtol);
                            const double num = g2_zero(s.rho, Mode::CW);
                            const double orc = oracle::g2_resonant(p, 0.0);
                            const double peak = 1.0 + 16.0 * J * J / (p.kappa * p.kappa);
                            return PointResult{{{J, num, orc, rel_dev(num, orc), peak, rel_dev(num, peak)}}};
                          }});
  }
  return plan;
}

Plan fig4d(const ExperimentConfig& c) {
  Plan plan;
  plan.columns = {"J", "tau", "g2_numeric", "g2_oracle", "rel_dev"};
  const std::vector<double> Js{1.0, 2.0, 5.0};
  const std::vector<double> tau = linspace(0.0, c.tau_max, c.tau_points);
  plan.settings["grid"] = {{"J", Js}, {"phi", pi}, {"delta", 0.0}, {"tau_max", c.tau_max},
                           {"tau_points", c.tau_points}};
  for (double J : Js) {
    SystemParams p = c.params;
    p.delta = 0.0;
    p.J = J;
    p.phi = pi;
    plan.tasks.push_back({{J}, [=] {
                            const SteadyOutcome s = full_steady_state(p, c.resolved_n_max(), c.gate, c.rtol);
                            const Full m = full_model(p, s.n_max);
                            const G2Series g = g2_numeric(m.gen, s.rho, Mode::CW, tau, {c.rtol, 1e-12});
                            PointResult r;
                            std::vector<double> orc(tau.size());
                            for (std::size_t k = 0; k < tau.size(); ++k) {
                              orc[k] = oracle::g2_resonant(p, tau[k]);
                              r.rows.push_back({J, tau[k], g.values[k], orc[k], rel_dev(g.values[k], orc[k])});
                            }
                            r.summary["J"] = J;
                            try {
                              const TwoTermFit f = fit_two_term(tau, g.values, 2.0 * J);
                              r.summary["fit_omega"] = f.omega;
                              r.summary["fit_rate_a"] = f.rate_a;
                              r.summary["fit_rate_b"] = f.rate_b;
                            } catch (const FitError& e) {
                              r.summary["fit_error"] = e.what();
                            }
                            return r;
                          }});
  }
  return plan;
}

Plan fig5c(const ExperimentConfig& c) {
  Plan plan;
  plan.columns = {"phi", "t", "dn_numeric", "dn_oracle", "dn_rel_dev", "lr_numeric", "lr_oracle", "lr_rel_dev"};
  const std::vector<double> phis{pi / 5.0, 4.0 * pi / 5.0};
  const double t_max = 40.0;
  const double dt = 0.02;
  const double fit_from = 20.0;
  plan.settings["grid"] = {{"phi", phis}, {"J", 5.0}, {"delta", -5.0}, {"t_max", t_max}, {"dt", dt}};
  plan.settings["fit_window_start"] = fit_from;
  plan.settings["initial_state"] = "|g, L, 0, 0>";
  plan.settings["rel_dev"] = "|numeric - oracle| / max|oracle| over the series";
  for (double phi : phis) {
    SystemParams p = c.params;
    p.J = 5.0;
    p.delta = -5.0;
    p.phi = phi;
    plan.tasks.push_back({{phi}, [=] {
      const Full m = full_model(p, c.resolved_n_max());
      const PhotonProbe probe(m.space);
      const double n0 = oracle::n0(p);
      const std::vector<double> t = time_grid(t_max, dt);
      std::vector<double> dn, lr, dn_o, lr_o;
      DensityMatrix last = initial_left(m.space);
      evolve(last, m.gen, evolution_spec(c, t), [&](double, const DensityMatrix& rho) {
        const PhotonNumbers n = probe.numbers(rho);
        const ExternalState e = external_state(rho);
        dn.push_back((n.n_CW - n.n_CCW) / n0);
        lr.push_back(e.rho_L - e.rho_R);
        last = rho;
      });
      for (double tk : t) {
        const oracle::MotionalState ms = oracle::motional_solution(p, tk);
        const oracle::AdiabaticFields f = oracle::adiabatic_fields(p, ms.rho_ext);
        dn_o.push_back((f.n_CW - f.n_CCW) / n0);
        lr_o.push_back(ms.sx);
      }
      const std::vector<double> d1 = scaled_dev(dn, dn_o);
      const std::vector<double> d2 = scaled_dev(lr, lr_o);
      PointResult r;
      for (std::size_t k = 0; k < t.size(); ++k) {
        r.rows.push_back({phi, t[k], dn[k], dn_o[k], d1[k], lr[k], lr_o[k], d2[k]});
      }

      const auto first = static_cast<std::size_t>(std::lower_bound(t.begin(), t.end(), fit_from) - t.begin());
      const std::span<const double> tw(t.data() + first, t.size() - first);
      const SinusoidFit fd = positive_amplitude(
          fit_damped_sinusoid(tw, std::span<const double>(dn.data() + first, tw.size()), 2.0 * p.J));
      const SinusoidFit fl = positive_amplitude(
          fit_damped_sinusoid(tw, std::span<const double>(lr.data() + first, tw.size()), 2.0 * p.J));
      const oracle::RateSet rates = oracle::rates(p);

      const SlowRun slow = continue_slowly(m.gen, last, t_max, p.J);
      const std::vector<double> tl = linspace(t_max, t_max + 3.0 / slow.coh_rate, 400);
      std::vector<double> env;
      for (double tk : tl) env.push_back(2.0 * std::abs(external_state(slow.prop.at(tk)).coh_pm));
      const RelaxationFit damp = fit_relaxation(tl, env);

      r.summary["phi"] = phi;
      r.summary["omega_dn"] = fd.omega;
      r.summary["omega_lr"] = fl.omega;
      r.summary["omega_oracle"] = 2.0 * rates.J_prime;
      r.summary["phase_lag"] = wrap_angle(fd.phase - fl.phase);
      const Complex K = oracle::directionality_factor(p);
      r.summary["phase_lag_oracle"] = wrap_angle(std::arg(K) - pi / 2.0);
      r.summary["damping_rate_numeric"] = damp.rate;
      r.summary["damping_rate_oracle"] = rates.Gamma / 2.0;
      return r;
    }});
  }
  return plan;
}

Plan figA5(const ExperimentConfig& c) {
  Plan plan;
  plan.columns = {"phi", "jshift_numeric", "jshift_oracle", "rel_dev"};
  std::vector<double> phis;
  for (int k = 1; k <= 8; ++k) phis.push_back(k * pi / 8.0);
  const double J = 5.0;
  const double t0 = 40.0;
  const double w0 = 4500.0 / J;
  const double w1 = 5000.0 / J;
  plan.settings["grid"] = {{"phi", phis}, {"J", J}, {"delta", -J}};
  plan.settings["fit_window"] = {w0, w1};
  plan.settings["jshift"] = "(J' - J) / J from a damped-sinusoid fit of rho_L - rho_R";
  for (double phi : phis) {
    SystemParams p = c.params;
    p.J = J;
    p.delta = -J;
    p.phi = phi;
    plan.tasks.push_back({{phi}, [=] {
                            const Full m = full_model(p, c.resolved_n_max());
                            const DensityMatrix rho = evolve_to(initial_left(m.space), m.gen, c, t0);
                            const SlowRun slow = continue_slowly(m.gen, rho, t0, p.J);
                            const std::vector<double> t = time_grid(w1 - w0, 0.01);
                            std::vector<double> tt, lr;
                            for (double tk : t) {
                              const ExternalState e = external_state(slow.prop.at(w0 + tk));
                              tt.push_back(w0 + tk);
                              lr.push_back(e.rho_L - e.rho_R);
                            }
                            const SinusoidFit f = fit_damped_sinusoid(tt, lr, slow.coh_freq);
                            const double num = (f.omega / 2.0 - p.J) / p.J;
                            const double orc = (oracle::rates(p).J_prime - p.J) / p.J;
                            PointResult r{{{phi, num, orc, rel_dev(num, orc)}}};
                            r.summary["phi"] = phi;
                            r.summary["eigen_jshift"] = (slow.coh_freq / 2.0 - p.J) / p.J;
                            return r;
                          }});
  }
  return plan;
}

Plan figA6(const ExperimentConfig& c) {
  Plan plan;
  plan.columns = {"delta",        "gamma_ext_numeric", "gamma_ntot_numeric", "gamma_oracle",
                  "ext_rel_dev",  "ntot_rel_dev",      "ext_fit_source"};
  const double J = 2.0;
  const double t0 = 40.0;
  const std::vector<double> deltas = linspace(-8.0, 8.0, 41);
  plan.settings["grid"] = {{"delta", deltas}, {"J", J}, {"phi", pi / 4.0}};
  plan.settings["ext_fit_source"] = "0: population rho_ext^{--}, 1: coherence envelope 2|rho_ext^{+-}| (rate doubled)";
  plan.settings["initial_state"] = "|g, L, 0, 0>";
  for (double delta : deltas) {
    SystemParams p = c.params;
    p.J = J;
    p.delta = delta;
    p.phi = pi / 4.0;
    plan.tasks.push_back({{delta}, [=] {
      const Full m = full_model(p, c.resolved_n_max());
      const PhotonProbe probe(m.space);
      const DensityMatrix rho = evolve_to(initial_left(m.space), m.gen, c, t0);
      const SlowRun slow = continue_slowly(m.gen, rho, t0, p.J);
      const std::vector<double> t = linspace(t0, t0 + 6.0 / slow.pop_rate, 400);
      std::vector<double> pop, env, ntot;
      for (double tk : t) {
        const DensityMatrix r = slow.prop.at(tk);
        const ExternalState e = external_state(r);
        pop.push_back(e.rho_mm);
        env.push_back(2.0 * std::abs(e.coh_pm));
        ntot.push_back(probe.numbers(r).n_tot);
      }
      double g_ext = nan;
      double source = 0.0;
      try {
        g_ext = fit_relaxation(t, pop).rate;
      } catch (const FitError&) {
        g_ext = 2.0 * fit_relaxation(t, env).rate;
        source = 1.0;
      }
      double g_ntot = nan;
      PointResult r;
      try {
        g_ntot = fit_relaxation(t, ntot).rate;
      } catch (const FitError& e) {
        r.summary["delta"] = delta;
        r.summary["ntot_fit"] = e.what();
      }
      const double orc = oracle::rates(p).Gamma;
      r.rows.push_back({delta, g_ext, g_ntot, orc, rel_dev(g_ext, orc), rel_dev(g_ntot, orc), source});
      return r;
    }});
  }
  return plan;
}

}  // namespace

Plan plan_steady(const ExperimentConfig& c) {
  Plan plan;
  plan.columns = steady_columns;
  plan.tasks.push_back({{}, [c] { return PointResult{{steady_row(c, c.params)}}; }});
  return plan;
}

Plan plan_sweep(const ExperimentConfig& c) {
  Plan plan;
  plan.columns = {c.sweep->name};
  plan.columns.insert(plan.columns.end(), steady_columns.begin(), steady_columns.end());
  for (double v : c.sweep->values) {
    SystemParams p = c.params;
    set_param(p, c.sweep->name, v);
    plan.tasks.push_back({{v}, [c, p, v] {
                            std::vector<double> row{v};
                            const std::vector<double> rest = steady_row(c, p);
                            row.insert(row.end(), rest.begin(), rest.end());
                            return PointResult{{row}};
                          }});
  }
  return plan;
}

Plan plan_dynamics(const ExperimentConfig& c) {
  Plan plan;
  plan.columns = {"t",          "n_tot_numeric", "n_tot_oracle", "n_tot_rel_dev", "dn_numeric",
                  "dn_oracle",  "dn_rel_dev",    "lr_numeric",   "lr_oracle",     "lr_rel_dev",
                  "rho_mm_numeric", "rho_mm_oracle", "rho_mm_rel_dev"};
  plan.settings["initial_state"] = "|g, L, 0, 0>";
  plan.settings["rel_dev"] = "n_tot pointwise; signed series by max|oracle|";
  plan.tasks.push_back({{}, [c] {
    const SystemParams& p = c.params;
    p.check();
    const Full m = full_model(p, c.resolved_n_max());
    const PhotonProbe probe(m.space);
    const double n0 = oracle::n0(p);
    const std::vector<double> t = time_grid(c.t_max, c.dt);
    std::vector<double> nt, dn, lr, mm, nt_o, dn_o, lr_o, mm_o;
    evolve(initial_left(m.space), m.gen, evolution_spec(c, t), [&](double, const DensityMatrix& rho) {
      const PhotonNumbers n = probe.numbers(rho);
      const ExternalState e = external_state(rho);
      nt.push_back(n.n_tot);
      dn.push_back((n.n_CW - n.n_CCW) / n0);
      lr.push_back(e.rho_L - e.rho_R);
      mm.push_back(e.rho_mm);
    });
    for (double tk : t) {
      const oracle::MotionalState ms = oracle::motional_solution(p, tk);
      const oracle::AdiabaticFields f = oracle::adiabatic_fields(p, ms.rho_ext);
      nt_o.push_back(f.n_S + f.n_A);
      dn_o.push_back((f.n_CW - f.n_CCW) / n0);
      lr_o.push_back(ms.sx);
      mm_o.push_back(ms.rho_ext(1, 1).real());
    }
    const auto d_dn = scaled_dev(dn, dn_o);
    const auto d_lr = scaled_dev(lr, lr_o);
    const auto d_mm = scaled_dev(mm, mm_o);
    PointResult r;
    for (std::size_t k = 0; k < t.size(); ++k) {
      r.rows.push_back({t[k], nt[k], nt_o[k], rel_dev(nt[k], nt_o[k]), dn[k], dn_o[k], d_dn[k], lr[k], lr_o[k],
                        d_lr[k], mm[k], mm_o[k], d_mm[k]});
    }
    return r;
  }});
  return plan;
}

Plan plan_g2(const ExperimentConfig& c) {
  Plan plan;
  plan.columns = {"tau", "g2_CW_numeric", "g2_CCW_numeric", "g2_oracle", "rel_dev"};
  plan.tasks.push_back({{}, [c] {
    const SystemParams& p = c.params;
    const SteadyOutcome s = full_steady_state(p, c.resolved_n_max(), c.gate, c.rtol);
    const Full m = full_model(p, s.n_max);
    const std::vector<double> tau = linspace(0.0, c.tau_max, c.tau_points);
    const G2Options opt{c.rtol, 1e-12};
    const G2Series cw = g2_numeric(m.gen, s.rho, Mode::CW, tau, opt);
    const G2Series ccw = g2_numeric(m.gen, s.rho, Mode::CCW, tau, opt);
    PointResult r;
    for (std::size_t k = 0; k < tau.size(); ++k) {
      const double orc = oracle::g2_closed(p, tau[k]);
      r.rows.push_back({tau[k], cw.values[k], ccw.values[k], orc, rel_dev(cw.values[k], orc)});
    }
    return r;
  }});
  return plan;
}

Plan plan_preset(const ExperimentConfig& c) {
  switch (*c.preset) {
    case Preset::fig3: return fig3(c);
    case Preset::fig4a: return fig4a(c);
    case Preset::fig4b: return fig4b(c);
    case Preset::fig4d: return fig4d(c);
    case Preset::fig5c: return fig5c(c);
    case Preset::figA5: return figA5(c);
    case Preset::figA6: return figA6(c);
  }
  throw ValidationError("unknown preset");
}

}  // namespace ringqed::detail
