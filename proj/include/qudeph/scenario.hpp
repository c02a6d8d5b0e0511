#pragma once

// Scenario description and execution: a configuration names the qudit
// dimension, initial amplitudes, couplings, operating weight, time grid and
// requested observables; running it produces one table per observable.
// Sweeps fan a base scenario over one axis and run points concurrently.

#include <algorithm>
#include <array>
#include <functional>
#include <future>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qudeph/cartan.hpp"
#include "qudeph/dephasing.hpp"
#include "qudeph/linalg.hpp"
#include "qudeph/phase.hpp"
#include "qudeph/spectral.hpp"
#include "qudeph/state.hpp"
#include "qudeph/table.hpp"

namespace qudeph {

inline const std::set<std::string>& known_outputs() {
  static const std::set<std::string> k = {"concurrence", "purity",         "eigenvalues",
                                          "effective_coeffs", "gp",       "region",
                                          "kink"};
  return k;
}

struct Scenario {
  std::string name = "scenario";
  int d = 3;
  std::optional<double> a0_shorthand;   // a_1 = .. = sqrt((1-a0^2)/(d-1))
  std::optional<CVec> amplitudes;       // explicit amplitudes, length d
  std::optional<RVec> zeta;             // length d-1
  std::optional<CouplingSpec> gammas;   // asymmetric couplings, ODE path
  std::vector<RVec> zeta_variants;      // optional fan-out over couplings
  int weight_index = 1;
  double t_max = 12.0 * kPi;
  int steps = 4000;
  std::vector<std::string> outputs = {"concurrence"};
  double ode_max_step = kDefaultOdeStep;

  DiagonalState initial_state() const {
    if (a0_shorthand && amplitudes)
      throw validation_error("initial: give either a0 or amplitudes, not both");
    if (a0_shorthand) return DiagonalState::shorthand(d, *a0_shorthand);
    if (!amplitudes) throw validation_error("initial: missing (a0 or amplitudes)");
    DiagonalState s(d, *amplitudes);
    if (!s.normalized())
      throw validation_error("initial.amplitudes: state is not normalized");
    return s;
  }

  void validate() const {
    if (d < 2) throw validation_error("d: must be >= 2");
    if (steps < 100) throw validation_error("steps: must be >= 100");
    if (!(t_max > 0.0)) throw validation_error("t_max: must be positive");
    if (weight_index < 1 || weight_index > d)
      throw validation_error("weight_index: must lie in 1..d");
    initial_state();
    if (zeta && gammas)
      throw validation_error("coupling: give either zeta or gammas, not both");
    if (!zeta && !gammas && zeta_variants.empty())
      throw validation_error("coupling: missing (zeta, gammas or zeta_variants)");
    if (gammas && !zeta_variants.empty())
      throw validation_error("zeta_variants: not supported with gamma couplings");
    const size_t want = static_cast<size_t>(d - 1);
    if (zeta && zeta->size() != want)
      throw validation_error("coupling.zeta: needs d-1 components");
    for (const auto& z : zeta_variants)
      if (z.size() != want) throw validation_error("zeta_variants: entries need d-1 components");
    if (gammas && (gammas->gamma1.size() != want || gammas->gamma2.size() != want))
      throw validation_error("coupling.gamma: needs d-1 components");
    if (outputs.empty()) throw validation_error("outputs: empty");
    for (const auto& o : outputs)
      if (!known_outputs().count(o))
        throw validation_error("outputs: unknown observable '" + o + "'");
  }

  bool wants(const std::string& o) const {
    return std::find(outputs.begin(), outputs.end(), o) != outputs.end();
  }
};

// ---------------------------------------------------------------------------

struct VariantResult {
  std::optional<RVec> zeta;  // resolved coupling in zeta form, if applicable
  Trajectory trajectory;
  SpectralTrack track;
  std::vector<double> concurrence;
  std::vector<double> purity;
  std::optional<GeoPhaseSeries> gp;
  std::optional<KinkReport> kink;
};

struct ScenarioEvaluation {
  Scenario scenario;
  std::vector<VariantResult> variants;
};

namespace detail {

inline Trajectory run_dynamics(const Scenario& s, const DiagonalState& init,
                               const std::optional<RVec>& zeta, const CartanBasis& basis,
                               const std::vector<double>& grid) {
  if (zeta) {
    if (s.d == 3) return evolve_closed_su3_trajectory(init, (*zeta)[0], (*zeta)[1], grid);
    if (s.d == 2) return evolve_closed_su2_trajectory(init, (*zeta)[0] * (*zeta)[0], grid);
    const CouplingSpec c = CouplingSpec::from_zeta(*zeta);
    return evolve_ode(init, build_R_matrix(c), basis, grid, s.ode_max_step);
  }
  return evolve_ode(init, build_R_matrix(*s.gammas), basis, grid, s.ode_max_step);
}

inline VariantResult evaluate_variant(const Scenario& s, const CartanBasis& basis,
                                      const std::optional<RVec>& zeta,
                                      const std::vector<double>& grid) {
  VariantResult v;
  v.zeta = zeta;
  const DiagonalState init = s.initial_state();
  v.trajectory = run_dynamics(s, init, zeta, basis, grid);
  v.trajectory.front().check_contract();
  v.trajectory[v.trajectory.size() / 2].check_contract();
  v.trajectory.back().check_contract();
  v.track = track_spectrum(v.trajectory, init);
  v.concurrence = effective_concurrence_series(v.track, basis);
  v.purity = purity_series(v.trajectory);
  if (s.wants("gp"))
    v.gp = geometric_phase_pure_series(v.track, make_operation(basis, s.weight_index), basis);
  if (s.wants("kink")) v.kink = detect_kink(v.track, v.concurrence);
  return v;
}

inline std::string zeta_tag(const std::optional<RVec>& zeta) {
  if (!zeta) return "gamma";
  std::string tag = "z";
  char buf[32];
  for (size_t i = 0; i < zeta->size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.6g", (*zeta)[i]);
    if (i) tag += "_";
    tag += buf;
  }
  return tag;
}

inline std::vector<std::string> scenario_meta(const Scenario& s, const std::string& extra = "") {
  std::vector<std::string> m;
  std::ostringstream os;
  os << "scenario: name=" << s.name << " d=" << s.d << " weight_index=" << s.weight_index
     << " t_max=" << format_number(s.t_max) << " steps=" << s.steps;
  m.push_back(os.str());
  std::ostringstream oi;
  if (s.a0_shorthand) {
    oi << "initial: a0=" << format_number(*s.a0_shorthand);
  } else {
    oi << "initial: amplitudes=";
    for (const auto& a : *s.amplitudes)
      oi << "(" << format_number(a.real()) << ";" << format_number(a.imag()) << ")";
  }
  m.push_back(oi.str());
  if (s.zeta || !s.zeta_variants.empty()) {
    std::ostringstream oz;
    oz << "coupling:";
    if (s.zeta) oz << " zeta=" << zeta_tag(s.zeta);
    for (const auto& z : s.zeta_variants) oz << " variant=" << zeta_tag(z);
    m.push_back(oz.str());
  } else {
    m.push_back("coupling: gamma form (ODE path)");
  }
  m.push_back("units: dimensionless time, one free-evolution period per 2pi");
  m.push_back("gaps: empty fields mark times where the phase visibility is below 1e-12");
  if (!extra.empty()) m.push_back(extra);
  return m;
}

}  // namespace detail

inline ScenarioEvaluation evaluate_scenario(const Scenario& s) {
  s.validate();
  const CartanBasis basis(s.d);
  const auto grid = make_grid(s.t_max, s.steps);

  std::vector<std::optional<RVec>> couplings;
  if (!s.zeta_variants.empty()) {
    for (const auto& z : s.zeta_variants) couplings.emplace_back(z);
  } else if (s.zeta) {
    couplings.emplace_back(*s.zeta);
  } else {
    couplings.emplace_back(std::nullopt);
  }

  ScenarioEvaluation ev;
  ev.scenario = s;
  if (couplings.size() == 1) {
    ev.variants.push_back(detail::evaluate_variant(s, basis, couplings[0], grid));
  } else {
    std::vector<std::future<VariantResult>> futs;
    futs.reserve(couplings.size());
    for (const auto& c : couplings)
      futs.push_back(std::async(std::launch::async, [&, c] {
        return detail::evaluate_variant(s, basis, c, grid);
      }));
    for (auto& f : futs) ev.variants.push_back(f.get());
  }
  return ev;
}

// ---------------------------------------------------------------------------
// table assembly

namespace detail {

inline void append_series_columns(ResultTable& tab, const ScenarioEvaluation& ev,
                                  const std::function<std::vector<std::string>(const VariantResult&)>& heads,
                                  const std::function<std::vector<std::string>(const VariantResult&, size_t)>& cells) {
  const size_t n = ev.variants.front().track.t_grid.size();
  tab.columns.push_back("t");
  for (const auto& v : ev.variants)
    for (const auto& h : heads(v)) tab.columns.push_back(h + (ev.variants.size() > 1 ? "@" + zeta_tag(v.zeta) : ""));
  tab.rows.reserve(n);
  for (size_t i = 0; i < n; ++i) {
    std::vector<std::string> row;
    row.push_back(format_number(ev.variants.front().track.t_grid[i]));
    for (const auto& v : ev.variants)
      for (auto& c : cells(v, i)) row.push_back(std::move(c));
    tab.rows.push_back(std::move(row));
  }
}

}  // namespace detail

inline std::vector<ResultTable> tables_from_evaluation(const ScenarioEvaluation& ev) {
  const Scenario& s = ev.scenario;
  std::vector<ResultTable> tables;

  for (const auto& out : s.outputs) {
    ResultTable tab;
    tab.name = out;
    tab.meta = detail::scenario_meta(s, "observable: " + out);

    if (out == "concurrence") {
      detail::append_series_columns(
          tab, ev, [](const VariantResult&) { return std::vector<std::string>{"C"}; },
          [](const VariantResult& v, size_t i) {
            return std::vector<std::string>{format_number(v.concurrence[i])};
          });
    } else if (out == "purity") {
      detail::append_series_columns(
          tab, ev,
          [](const VariantResult&) { return std::vector<std::string>{"purity"}; },
          [](const VariantResult& v, size_t i) {
            return std::vector<std::string>{format_number(v.purity[i])};
          });
    } else if (out == "eigenvalues") {
      detail::append_series_columns(
          tab, ev,
          [&](const VariantResult&) {
            std::vector<std::string> h{"eps_eff"};
            for (int k = 1; k < s.d; ++k) h.push_back("eps_" + std::to_string(k));
            return h;
          },
          [&](const VariantResult& v, size_t i) {
            std::vector<std::string> c;
            for (int k = 0; k < s.d; ++k)
              c.push_back(format_number(v.track.eigenvalues[static_cast<size_t>(k)][i]));
            return c;
          });
    } else if (out == "effective_coeffs") {
      const bool complex_track = [&] {
        for (const auto& v : ev.variants)
          if (!detail::track_is_real(v.track)) return true;
        return false;
      }();
      detail::append_series_columns(
          tab, ev,
          [&](const VariantResult&) {
            std::vector<std::string> h;
            for (int k = 0; k < s.d; ++k) {
              h.push_back("u" + std::to_string(k) + (complex_track ? "_re" : ""));
              if (complex_track) h.push_back("u" + std::to_string(k) + "_im");
            }
            return h;
          },
          [&](const VariantResult& v, size_t i) {
            std::vector<std::string> c;
            const CVec u = v.track.effective_vector(i);
            for (int k = 0; k < s.d; ++k) {
              c.push_back(format_number(u[static_cast<size_t>(k)].real()));
              if (complex_track) c.push_back(format_number(u[static_cast<size_t>(k)].imag()));
            }
            return c;
          });
    } else if (out == "gp") {
      detail::append_series_columns(
          tab, ev,
          [](const VariantResult&) { return std::vector<std::string>{"gp", "gp_pv"}; },
          [](const VariantResult& v, size_t i) {
            std::vector<std::string> c;
            if (v.gp->defined[i]) {
              c.push_back(format_number(v.gp->unwrapped[i]));
              c.push_back(format_number(v.gp->principal[i]));
            } else {
              c.emplace_back();
              c.emplace_back();
            }
            return c;
          });
    } else if (out == "region") {
      tab.columns = {"zeta1", "zeta2", "rate_A", "rate_B", "rate_C",
                     "dominant", "weight_label", "label_inferred"};
      for (const auto& v : ev.variants) {
        if (!v.zeta || v.zeta->size() != 2)
          throw validation_error("outputs.region: requires d = 3 zeta couplings");
        std::vector<std::string> row{format_number((*v.zeta)[0]), format_number((*v.zeta)[1])};
        if ((*v.zeta)[0] == 0.0 && (*v.zeta)[1] == 0.0) {
          row.insert(row.end(), {format_number(0.0), format_number(0.0), format_number(0.0),
                                 "", "", ""});
        } else {
          const RegionLabel r = classify_region((*v.zeta)[0], (*v.zeta)[1]);
          row.push_back(format_number(r.rate_a));
          row.push_back(format_number(r.rate_b));
          row.push_back(format_number(r.rate_c));
          if (r.dominant) {
            row.push_back(r.dominant == RateChannel::A ? "A"
                          : r.dominant == RateChannel::B ? "B" : "C");
            row.push_back(std::to_string(r.weight_label));
            row.push_back(r.label_inferred ? "1" : "0");
          } else {
            row.insert(row.end(), {"", "", ""});
          }
        }
        tab.rows.push_back(std::move(row));
      }
    } else if (out == "kink") {
      tab.columns = {"zeta1", "zeta2", "t_peak", "c_peak", "t_min_gap", "gap_min",
                     "separation_steps"};
      for (const auto& v : ev.variants) {
        std::vector<std::string> row;
        if (v.zeta && v.zeta->size() == 2) {
          row.push_back(format_number((*v.zeta)[0]));
          row.push_back(format_number((*v.zeta)[1]));
        } else {
          row.insert(row.end(), {"", ""});
        }
        if (v.kink) {
          row.push_back(format_number(v.kink->t_peak));
          row.push_back(format_number(v.kink->c_peak));
          row.push_back(format_number(v.kink->t_min_gap));
          row.push_back(format_number(v.kink->gap_min));
          row.push_back(std::to_string(v.kink->separation_steps));
        } else {
          row.insert(row.end(), {"", "", "", "", ""});
        }
        tab.rows.push_back(std::move(row));
      }
    }
    tables.push_back(std::move(tab));
  }
  return tables;
}

inline std::vector<ResultTable> run_scenario(const Scenario& s) {
  return tables_from_evaluation(evaluate_scenario(s));
}

// ---------------------------------------------------------------------------
// sweeps: fan one axis, concatenate long-format rows keyed by the axis value

enum class SweepAxis { a0, zeta, weight_index };

inline SweepAxis sweep_axis_from_string(const std::string& s) {
  if (s == "a0") return SweepAxis::a0;
  if (s == "zeta") return SweepAxis::zeta;
  if (s == "weight_index") return SweepAxis::weight_index;
  throw validation_error("sweep.axis: must be one of a0, zeta, weight_index");
}

inline std::vector<ResultTable> run_sweep(const Scenario& base, SweepAxis axis,
                                          const std::vector<RVec>& values) {
  if (values.empty()) throw validation_error("sweep.values: empty");
  if (!base.zeta_variants.empty())
    throw validation_error("sweep: base scenario must not carry zeta_variants");

  std::vector<Scenario> points;
  for (const auto& v : values) {
    Scenario s = base;
    switch (axis) {
      case SweepAxis::a0:
        if (v.size() != 1) throw validation_error("sweep.values: a0 entries need 1 component");
        s.a0_shorthand = v[0];
        s.amplitudes.reset();
        break;
      case SweepAxis::zeta:
        if (static_cast<int>(v.size()) != s.d - 1)
          throw validation_error("sweep.values: zeta entries need d-1 components");
        s.zeta = v;
        s.gammas.reset();
        break;
      case SweepAxis::weight_index:
        if (v.size() != 1)
          throw validation_error("sweep.values: weight_index entries need 1 component");
        s.weight_index = static_cast<int>(v[0]);
        break;
    }
    points.push_back(std::move(s));
  }

  // bounded work pool: contiguous chunks, one worker per chunk
  std::vector<ScenarioEvaluation> evs(points.size());
  const size_t workers =
      std::max<size_t>(1, std::min<size_t>(points.size(), std::thread::hardware_concurrency()));
  const size_t chunk = (points.size() + workers - 1) / workers;
  std::vector<std::future<void>> futs;
  for (size_t w = 0; w < workers; ++w) {
    const size_t lo = w * chunk, hi = std::min(points.size(), lo + chunk);
    if (lo >= hi) break;
    futs.push_back(std::async(std::launch::async, [&, lo, hi] {
      for (size_t i = lo; i < hi; ++i) evs[i] = evaluate_scenario(points[i]);
    }));
  }
  for (auto& f : futs) f.get();

  const std::vector<std::string> axis_cols =
      axis == SweepAxis::zeta ? std::vector<std::string>{"zeta1", "zeta2"}
      : axis == SweepAxis::a0 ? std::vector<std::string>{"a0"}
                              : std::vector<std::string>{"weight_index"};

  std::vector<ResultTable> tables;
  for (const auto& out : base.outputs) {
    ResultTable tab;
    tab.name = out + "_sweep";
    tab.meta = detail::scenario_meta(base, "sweep over " + axis_cols[0] +
                                               ", long format keyed by the axis value");
    bool first = true;
    for (size_t pi = 0; pi < evs.size(); ++pi) {
      auto tbs = tables_from_evaluation(evs[pi]);
      const ResultTable* src = nullptr;
      for (const auto& t : tbs)
        if (t.name == out) src = &t;
      if (!src) continue;
      if (first) {
        tab.columns = axis_cols;
        tab.columns.insert(tab.columns.end(), src->columns.begin(), src->columns.end());
        first = false;
      }
      std::vector<std::string> key;
      for (size_t c = 0; c < axis_cols.size(); ++c) key.push_back(format_number(values[pi][c]));
      for (const auto& row : src->rows) {
        std::vector<std::string> r = key;
        r.insert(r.end(), row.begin(), row.end());
        tab.rows.push_back(std::move(r));
      }
    }
    tables.push_back(std::move(tab));
  }
  return tables;
}

// regular grid over the coupling plane with the region classification
inline ResultTable region_grid_table(double z_min, double z_max, double z_step) {
  if (!(z_step > 0.0) || !(z_max > z_min))
    throw validation_error("region grid: need z_max > z_min and z_step > 0");
  ResultTable tab;
  tab.name = "regions";
  tab.meta = {"region classification over the coupling plane",
              "dominant: slowest-decaying sigma exponential; empty on the boundary lines"};
  tab.columns = {"zeta1", "zeta2", "rate_A", "rate_B", "rate_C", "dominant", "weight_label"};
  const int n = static_cast<int>(std::round((z_max - z_min) / z_step));
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n; ++j) {
      const double z1 = z_min + i * z_step;
      const double z2 = z_min + j * z_step;
      std::vector<std::string> row{format_number(z1), format_number(z2)};
      if (z1 == 0.0 && z2 == 0.0) {
        row.insert(row.end(), {format_number(0.0), format_number(0.0), format_number(0.0), "", ""});
      } else {
        const RegionLabel r = classify_region(z1, z2);
        row.push_back(format_number(r.rate_a));
        row.push_back(format_number(r.rate_b));
        row.push_back(format_number(r.rate_c));
        if (r.dominant) {
          row.push_back(r.dominant == RateChannel::A ? "A"
                        : r.dominant == RateChannel::B ? "B" : "C");
          row.push_back(std::to_string(r.weight_label));
        } else {
          row.insert(row.end(), {"", ""});
        }
      }
      tab.rows.push_back(std::move(row));
    }
  }
  return tab;
}

// ---------------------------------------------------------------------------
// Weyl symmetry verification: run a scenario and its Weyl transport, compare
// all series pointwise

// the phase arg is conditioned by 1/visibility, so phase deviations are
// meaningful only where the visibility clears this floor
inline constexpr double kGpCompareVisibilityFloor = 1e-4;

struct WeylReport {
  Scenario original;
  Scenario transported;
  double max_dev_gp = 0.0;
  double max_dev_concurrence = 0.0;
  double max_dev_purity = 0.0;
  double max_dev_eigenvalues = 0.0;
  size_t gp_points_compared = 0;
  size_t gp_points_skipped = 0;  // below the conditioning floor in either run
  // present only when the horizon exceeds the slowest decay time
  std::optional<AsymptoticState> original_asymptotic;
  std::optional<AsymptoticState> transported_asymptotic;
  RVec transported_q_sector;  // of the asymptotic effective state, when present
};

inline Scenario weyl_transport_scenario(const Scenario& s, const RootVector& alpha) {
  s.validate();
  if (s.d != 3) throw validation_error("weyl transport: requires d = 3");
  if (!s.zeta) throw validation_error("weyl transport: requires a zeta coupling");
  const CartanBasis basis(3);
  const DiagonalState init = s.initial_state();
  const WeylTransported w =
      weyl_transport(basis, {(*s.zeta)[0], (*s.zeta)[1]}, s.weight_index, init.a, alpha);
  Scenario out = s;
  out.name = s.name + "-weyl";
  out.zeta = RVec{w.zeta[0], w.zeta[1]};
  out.weight_index = w.weight_index;
  out.a0_shorthand.reset();
  out.amplitudes = w.amplitudes;
  return out;
}

inline WeylReport verify_weyl(const Scenario& s, const RootVector& alpha) {
  WeylReport rep;
  rep.original = s;
  rep.original.outputs = {"gp", "concurrence", "purity", "eigenvalues"};
  rep.transported = weyl_transport_scenario(rep.original, alpha);

  const ScenarioEvaluation a = evaluate_scenario(rep.original);
  const ScenarioEvaluation b = evaluate_scenario(rep.transported);
  const VariantResult& va = a.variants.front();
  const VariantResult& vb = b.variants.front();
  const size_t n = va.track.t_grid.size();

  for (size_t i = 0; i < n; ++i) {
    rep.max_dev_concurrence =
        std::max(rep.max_dev_concurrence, std::abs(va.concurrence[i] - vb.concurrence[i]));
    rep.max_dev_purity = std::max(rep.max_dev_purity, std::abs(va.purity[i] - vb.purity[i]));
    // eigenvalues compared as sorted spectra; branch order is label-dependent
    std::vector<double> ea, eb;
    for (int k = 0; k < 3; ++k) {
      ea.push_back(va.track.eigenvalues[static_cast<size_t>(k)][i]);
      eb.push_back(vb.track.eigenvalues[static_cast<size_t>(k)][i]);
    }
    std::sort(ea.begin(), ea.end());
    std::sort(eb.begin(), eb.end());
    for (int k = 0; k < 3; ++k)
      rep.max_dev_eigenvalues =
          std::max(rep.max_dev_eigenvalues, std::abs(ea[static_cast<size_t>(k)] - eb[static_cast<size_t>(k)]));
    if (va.gp->defined[i] && vb.gp->defined[i]) {
      if (va.gp->visibility[i] < kGpCompareVisibilityFloor ||
          vb.gp->visibility[i] < kGpCompareVisibilityFloor) {
        ++rep.gp_points_skipped;
      } else {
        rep.max_dev_gp =
            std::max(rep.max_dev_gp, std::abs(va.gp->unwrapped[i] - vb.gp->unwrapped[i]));
        ++rep.gp_points_compared;
      }
    }
  }

  const double window = 0.1 * s.t_max;
  const double horizon = slowest_decay_time_su3((*s.zeta)[0], (*s.zeta)[1]);
  if (s.t_max >= horizon) {
    rep.original_asymptotic = asymptotic_effective_state(va.track, window, horizon);
    rep.transported_asymptotic = asymptotic_effective_state(vb.track, window, horizon);
    rep.transported_q_sector = {rep.transported_asymptotic->state.a[1].real(),
                                rep.transported_asymptotic->state.a[2].real()};
  }
  return rep;
}

inline ResultTable weyl_report_table(const WeylReport& rep) {
  ResultTable tab;
  tab.name = "weyl_report";
  tab.meta = detail::scenario_meta(rep.original,
                                   "weyl verification against the transported scenario");
  tab.columns = {"max_dev_gp", "max_dev_concurrence", "max_dev_purity", "max_dev_eigenvalues",
                 "gp_points_compared", "transported_zeta1", "transported_zeta2",
                 "transported_weight", "asympt_u0", "asympt_u1", "asympt_u2"};
  std::vector<std::string> row{
      format_number(rep.max_dev_gp),          format_number(rep.max_dev_concurrence),
      format_number(rep.max_dev_purity),      format_number(rep.max_dev_eigenvalues),
      std::to_string(rep.gp_points_compared), format_number((*rep.transported.zeta)[0]),
      format_number((*rep.transported.zeta)[1]), std::to_string(rep.transported.weight_index)};
  if (rep.transported_asymptotic) {
    row.push_back(format_number(rep.transported_asymptotic->state.a[0].real()));
    row.push_back(format_number(rep.transported_asymptotic->state.a[1].real()));
    row.push_back(format_number(rep.transported_asymptotic->state.a[2].real()));
  } else {
    row.insert(row.end(), {"", "", ""});
  }
  tab.rows.push_back(std::move(row));
  return tab;
}

// ---------------------------------------------------------------------------
// configuration files (JSON)

namespace detail {

inline double parse_time(const nlohmann::json& j, const std::string& field) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    std::string s = j.get<std::string>();
    if (s.size() > 2 && s.substr(s.size() - 2) == "pi") {
      try {
        return std::stod(s.substr(0, s.size() - 2)) * kPi;
      } catch (const std::exception&) {
        throw validation_error(field + ": cannot parse '" + s + "'");
      }
    }
    try {
      return std::stod(s);
    } catch (const std::exception&) {
      throw validation_error(field + ": cannot parse '" + s + "'");
    }
  }
  throw validation_error(field + ": must be a number or a '<x>pi' string");
}

}  // namespace detail

struct RegionGridConfig {
  double z_min = -0.5, z_max = 0.5, z_step = 0.025;
  std::string name = "regions";
};

struct ParsedConfig {
  std::optional<Scenario> scenario;
  std::optional<RegionGridConfig> region_grid;
};

inline ParsedConfig parse_config(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw validation_error(std::string("config: invalid JSON: ") + e.what());
  }
  static const std::set<std::string> known = {
      "name", "kind", "d", "initial", "coupling", "zeta_variants", "weight_index",
      "t_max", "steps", "outputs", "z_min", "z_max", "z_step"};
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!known.count(it.key()))
      throw validation_error("config: unknown field '" + it.key() + "'");

  ParsedConfig out;
  const std::string kind = j.value("kind", std::string("scenario"));
  if (kind == "region-grid") {
    RegionGridConfig g;
    g.z_min = j.value("z_min", g.z_min);
    g.z_max = j.value("z_max", g.z_max);
    g.z_step = j.value("z_step", g.z_step);
    g.name = j.value("name", g.name);
    out.region_grid = g;
    return out;
  }
  if (kind != "scenario") throw validation_error("kind: must be 'scenario' or 'region-grid'");

  Scenario s;
  s.name = j.value("name", std::string("scenario"));
  s.d = j.value("d", 3);
  if (j.contains("initial")) {
    const auto& ji = j.at("initial");
    if (ji.contains("a0")) s.a0_shorthand = ji.at("a0").get<double>();
    if (ji.contains("amplitudes")) {
      CVec a;
      for (const auto& e : ji.at("amplitudes")) {
        if (e.is_number())
          a.emplace_back(e.get<double>(), 0.0);
        else if (e.is_array() && e.size() == 2)
          a.emplace_back(e[0].get<double>(), e[1].get<double>());
        else
          throw validation_error("initial.amplitudes: entries must be numbers or [re, im]");
      }
      s.amplitudes = std::move(a);
    }
  }
  if (j.contains("coupling")) {
    const auto& jc = j.at("coupling");
    if (jc.contains("zeta")) s.zeta = jc.at("zeta").get<RVec>();
    if (jc.contains("gamma1") || jc.contains("gamma2")) {
      CouplingSpec c;
      c.gamma1 = jc.at("gamma1").get<RVec>();
      c.gamma2 = jc.at("gamma2").get<RVec>();
      c.f_const = jc.value("f", 1.0);
      s.gammas = c;
    }
  }
  if (j.contains("zeta_variants"))
    for (const auto& z : j.at("zeta_variants")) s.zeta_variants.push_back(z.get<RVec>());
  s.weight_index = j.value("weight_index", 1);
  if (j.contains("t_max")) s.t_max = detail::parse_time(j.at("t_max"), "t_max");
  s.steps = j.value("steps", 4000);
  if (j.contains("outputs")) s.outputs = j.at("outputs").get<std::vector<std::string>>();
  s.validate();
  out.scenario = s;
  return out;
}

}  // namespace qudeph
