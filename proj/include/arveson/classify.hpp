#ifndef ARVESON_CLASSIFY_HPP
#define ARVESON_CLASSIFY_HPP

#include <map>
#include <string>
#include <vector>

#include "arveson/fourier.hpp"

namespace arveson {

// ---------------------------------------------------------------------------
// Configuration and result types
// ---------------------------------------------------------------------------

struct ClassifyConfig {
  std::vector<CuboidWindow> ladder;  // >= 3 growing windows
  double tau_rel = 1e-6;
  double gamma_min = 0.4;    // minimal fitted decay exponent for "vanishes"
  double delta_ac = 0.02;    // relative change of the mass curve: "stabilizes"
  double g_min = 1.3;        // growth factor per ladder step: "keeps growing"
  double abs_floor = 1e-9;   // averages below this count as vanished outright
  double taper_ratio = 0;    // Gaussian taper for support extraction
  // Point-mass retention floor relative to the orbit sup-norm; lattice runs
  // raise it to reject the 1/N comb atoms of the finite momentum grid.
  double mass_floor_rel = 1e-6;
  int probe_count = 17;      // uniform probe frequencies per axis
  double probe_span = 0;     // 0: use the model's declared max frequency

  void validate() const {
    if (ladder.size() < 3) throw InvalidConfig("classify: ladder needs >= 3 windows");
    for (std::size_t i = 1; i < ladder.size(); ++i)
      if (ladder[i].half_lengths.back() <= ladder[i - 1].half_lengths.back())
        throw InvalidConfig("classify: ladder must grow strictly");
  }
};

struct ErgodicSeries {
  std::vector<double> q;
  std::vector<double> half_length;  // L per ladder rung (last axis)
  std::vector<cd> value;            // M_L
  double gamma = 0;                 // fitted decay exponent of |M_L|
  cd limit = 0;                     // last-rung estimate
};

// Per-functional map q -> c_q; keys serialized in sorted order.
using PointMassMap = std::map<std::vector<double>, cd>;

enum class MeasureType { PurePoint, AC, SC, Mixed, Undetermined };

inline const char* to_string(MeasureType t) {
  switch (t) {
    case MeasureType::PurePoint: return "PURE_POINT";
    case MeasureType::AC: return "AC";
    case MeasureType::SC: return "SC";
    case MeasureType::Mixed: return "MIXED";
    default: return "UNDETERMINED";
  }
}

struct Classification {
  std::string label;
  PointMassMap point_masses;  // union over the functional family
  bool in_continuous = false;
  MeasureType type = MeasureType::Undetermined;
  // Windowed quadratic Fourier mass I_L = int_{K_L} |orbit|^2 (the Parseval
  // form of the windowed spectral mass): stabilizes for AC data, keeps
  // growing for SC data.
  std::vector<std::pair<double, double>> mass_curve;
  std::vector<ErgodicSeries> probe_series;
  std::string notes;
};

struct OrbitMass {
  double quadratic = 0;  // int_K |orbit|^2 (Riemann sum on lattice axes)
  double sup = 0;
};

// ---------------------------------------------------------------------------
// Cached orbit ladder for one (element, functional) pair
// ---------------------------------------------------------------------------

namespace detail_classify {

inline std::vector<double> axis_weights(const Model& action, const CuboidWindow& w,
                                        int axis) {
  const int n = w.nodes(axis);
  std::vector<double> out(static_cast<std::size_t>(n));
  if (action.axis_is_lattice(axis)) {
    // Cesaro: uniform weight 1/(2L+1).
    for (auto& v : out) v = 1.0 / n;
  } else {
    // Trapezoid normalized by |K| = 2L per axis.
    const double step = w.steps[static_cast<std::size_t>(axis)];
    const double vol = (n - 1) * step;
    for (int i = 0; i < n; ++i)
      out[static_cast<std::size_t>(i)] = ((i == 0 || i == n - 1) ? 0.5 : 1.0) * step / vol;
  }
  return out;
}

}  // namespace detail_classify

// Samples of one orbit on every ladder rung; averages and masses are then
// cheap per query.  Sampling happens once per rung.
class OrbitLadder {
 public:
  OrbitLadder(const Model& action, const Element& a, const Functional& phi,
              const std::vector<CuboidWindow>& ladder)
      : action_(&action) {
    for (const auto& w : ladder) {
      samples_.push_back(sample_orbit(action, phi, a, w));
      std::vector<std::vector<double>> ws;
      for (int ax = 0; ax < w.dim(); ++ax)
        ws.push_back(detail_classify::axis_weights(action, w, ax));
      weights_.push_back(std::move(ws));
    }
  }

  std::size_t rungs() const { return samples_.size(); }
  const OrbitSamples& samples(std::size_t r) const { return samples_[r]; }
  double half_length(std::size_t r) const {
    return samples_[r].window.half_lengths.back();
  }

  // (1/|K|) int_K e^{-i<q,x>} orbit dx with the signature inner product.
  cd average(std::size_t r, const std::vector<double>& q) const {
    const OrbitSamples& s = samples_[r];
    const auto& ws = weights_[r];
    const auto& sig = s.signature;
    const int d = s.dim();
    cd acc = 0;
    for (long k = 0; k < s.window.total_nodes(); ++k) {
      long rem = k;
      double phase = 0, wgt = 1;
      for (int ax = d - 1; ax >= 0; --ax) {
        const int i = static_cast<int>(rem % s.window.nodes(ax));
        rem /= s.window.nodes(ax);
        const double x = s.window.coord(ax, i);
        phase -= sig[static_cast<std::size_t>(ax)] * q[static_cast<std::size_t>(ax)] * x;
        wgt *= ws[static_cast<std::size_t>(ax)][static_cast<std::size_t>(i)];
      }
      acc += wgt * s.values[static_cast<std::size_t>(k)] * std::polar(1.0, phase);
    }
    return acc;
  }

  OrbitMass mass(std::size_t r) const {
    const OrbitSamples& s = samples_[r];
    const int d = s.dim();
    OrbitMass out;
    double cellvol = 1;
    for (int ax = 0; ax < d; ++ax)
      cellvol *= action_->axis_is_lattice(ax)
                     ? 1.0
                     : s.window.steps[static_cast<std::size_t>(ax)];
    for (const cd& v : s.values) {
      const double m = std::abs(v);
      out.sup = std::max(out.sup, m);
      out.quadratic += m * m * cellvol;
    }
    return out;
  }

 private:
  const Model* action_;
  std::vector<OrbitSamples> samples_;
  std::vector<std::vector<std::vector<double>>> weights_;
};

// ---------------------------------------------------------------------------
// Ergodic averages (single-shot forms of the cached queries)
// ---------------------------------------------------------------------------

inline cd ergodic_average(const Model& action, const Element& a, const Functional& phi,
                          const std::vector<double>& q, const CuboidWindow& window) {
  return OrbitLadder(action, a, phi, {window}).average(0, q);
}

inline OrbitMass orbit_mass(const Model& action, const Element& a,
                            const Functional& phi, const CuboidWindow& window) {
  return OrbitLadder(action, a, phi, {window}).mass(0);
}

namespace detail_classify {

inline ErgodicSeries ladder_series(const OrbitLadder& lad, const std::vector<double>& q,
                                   double floor_value) {
  ErgodicSeries s;
  s.q = q;
  for (std::size_t r = 0; r < lad.rungs(); ++r) {
    s.half_length.push_back(lad.half_length(r));
    s.value.push_back(lad.average(r, q));
  }
  s.limit = s.value.back();
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < s.value.size(); ++i) {
    xs.push_back(s.half_length[i]);
    ys.push_back(std::max(std::abs(s.value[i]), floor_value));
  }
  s.gamma = fit_decay_exponent(xs, ys);
  return s;
}

inline std::vector<std::vector<double>> probe_grid(const Model& action,
                                                   const ClassifyConfig& cfg) {
  const int d = action.group_dim();
  std::vector<double> span = action.max_frequency();
  if (cfg.probe_span > 0)
    for (auto& s : span) s = cfg.probe_span;
  std::vector<std::vector<double>> probes;
  if (d == 1) {
    for (int i = 0; i < cfg.probe_count; ++i)
      probes.push_back({-span[0] + 2 * span[0] * i / (cfg.probe_count - 1)});
  } else {
    const int side = std::max(3, static_cast<int>(std::lround(std::sqrt(cfg.probe_count))));
    for (int i = 0; i < side; ++i)
      for (int j = 0; j < side; ++j)
        probes.push_back({-span[0] + 2 * span[0] * i / (side - 1),
                          -span[1] + 2 * span[1] * j / (side - 1)});
  }
  return probes;
}

// Point-mass extraction against a prebuilt ladder.  Candidates are Fourier
// peaks of the largest window whose volume-normalized height persists across
// rungs (point masses scale with the window, continuous densities do not);
// each candidate is confirmed by a stable ergodic limit.
inline PointMassMap point_masses_from(const Model& /*action*/, const OrbitLadder& lad,
                                      const ClassifyConfig& cfg) {
  const std::size_t rb = lad.rungs() - 1;
  const std::size_t rm = lad.rungs() - 2;
  const auto dens_big = orbit_fourier(lad.samples(rb));
  const auto dens_mid = orbit_fourier(lad.samples(rm));
  const OrbitMass om = lad.mass(rb);
  PointMassMap out;
  if (om.sup < cfg.abs_floor) return out;

  const int d = dens_big.dim();
  auto unit_peak = [&](const CuboidWindow& w) {
    double h = std::pow(kTwoPi, -0.5 * d);
    for (int ax = 0; ax < d; ++ax)
      h *= w.nodes(ax) * w.steps[static_cast<std::size_t>(ax)];
    return h;
  };
  const double peak_big = unit_peak(lad.samples(rb).window);
  const double peak_mid = unit_peak(lad.samples(rm).window);
  const double floor_big = cfg.mass_floor_rel * om.sup * peak_big;

  std::vector<int> shape;
  long total = 1;
  for (int ax = 0; ax < d; ++ax) {
    shape.push_back(dens_big.nodes(ax));
    total *= dens_big.nodes(ax);
  }
  auto freq_at = [&](long flat) {
    std::vector<double> q(static_cast<std::size_t>(d));
    long rem = flat;
    for (int ax = d - 1; ax >= 0; --ax) {
      const int i = static_cast<int>(rem % shape[static_cast<std::size_t>(ax)]);
      rem /= shape[static_cast<std::size_t>(ax)];
      q[static_cast<std::size_t>(ax)] =
          dens_big.freq_axes[static_cast<std::size_t>(ax)][static_cast<std::size_t>(i)];
    }
    return q;
  };
  auto is_local_max = [&](long flat) {
    const double v = std::abs(dens_big.values[static_cast<std::size_t>(flat)]);
    long stride = 1;
    for (int ax = d - 1; ax >= 0; --ax) {
      const int n = shape[static_cast<std::size_t>(ax)];
      const long i = (flat / stride) % n;
      if (i > 0 && std::abs(dens_big.values[static_cast<std::size_t>(flat - stride)]) > v)
        return false;
      if (i + 1 < n &&
          std::abs(dens_big.values[static_cast<std::size_t>(flat + stride)]) > v)
        return false;
      stride *= n;
    }
    return true;
  };
  auto mid_height = [&](const std::vector<double>& q) {
    long flat = 0;
    for (int ax = 0; ax < d; ++ax) {
      const auto& f = dens_mid.freq_axes[static_cast<std::size_t>(ax)];
      const double c = f[1] - f[0];
      long i = std::lround((q[static_cast<std::size_t>(ax)] - f[0]) / c);
      i = std::max<long>(0, std::min<long>(static_cast<long>(f.size()) - 1, i));
      flat = flat * static_cast<long>(f.size()) + i;
    }
    return std::abs(dens_mid.values[static_cast<std::size_t>(flat)]);
  };

  // Candidate frequencies are grid-snapped; refine each by coordinate-wise
  // ternary search of |M_L(q)| on the largest window, else the ergodic series
  // at the off-by-half-cell frequency rotates instead of converging.
  auto refine = [&](std::vector<double> q, int iters) {
    for (int pass = 0; pass < (d > 1 ? 2 : 1); ++pass)
      for (int ax = 0; ax < d; ++ax) {
        double lo = q[static_cast<std::size_t>(ax)] - dens_big.cell(ax);
        double hi = q[static_cast<std::size_t>(ax)] + dens_big.cell(ax);
        auto val = [&](double x) {
          std::vector<double> p = q;
          p[static_cast<std::size_t>(ax)] = x;
          return std::abs(lad.average(rb, p));
        };
        for (int it = 0; it < iters; ++it) {
          const double a = lo + (hi - lo) / 3, b = hi - (hi - lo) / 3;
          if (val(a) < val(b)) lo = a;
          else hi = b;
        }
        q[static_cast<std::size_t>(ax)] = (lo + hi) / 2;
      }
    return q;
  };

  for (long flat = 0; flat < total; ++flat) {
    const double h = std::abs(dens_big.values[static_cast<std::size_t>(flat)]);
    if (h < floor_big || !is_local_max(flat)) continue;
    std::vector<double> q = freq_at(flat);
    const double grown = h / peak_big;
    const double before = mid_height(q) / peak_mid;
    if (grown < 0.5 * before) continue;   // normalized peak decays: not a mass
    if (before < 0.25 * grown) continue;  // appeared from nowhere: leakage
    q = refine(q, 18);
    const ErgodicSeries series = detail_classify::ladder_series(lad, q, 0.1 * cfg.abs_floor);
    const double c_abs = std::abs(series.limit);
    if (c_abs < std::max(cfg.abs_floor, cfg.mass_floor_rel * om.sup)) continue;
    // A genuine atom has a stable ergodic limit; singular-continuous scaling
    // peaks keep shrinking from rung to rung.
    const double prev_abs = std::abs(series.value[series.value.size() - 2]);
    if (c_abs < 0.6 * prev_abs || prev_abs < 0.6 * c_abs) continue;
    // The ergodic values must approach the limit: residual exponent fit,
    // or residuals at cross-talk level. Neighboring atoms leak O(1/(gap L))
    // into each other's averages, so agreement to 1e-4 of the limit across
    // every rung already rules out a continuous scaling peak.
    std::vector<double> xs, ys;
    double rmax = 0;
    for (std::size_t i = 0; i + 1 < series.value.size(); ++i) {
      xs.push_back(series.half_length[i]);
      ys.push_back(std::abs(series.value[i] - series.limit));
      rmax = std::max(rmax, ys.back());
    }
    if (rmax > 1e-4 * c_abs && fit_decay_exponent(xs, ys, 1e-14 * c_abs) < cfg.gamma_min)
      continue;
    bool dup = false;
    for (const auto& [qk, cv] : out) {
      double dist = 0;
      for (int ax = 0; ax < d; ++ax)
        dist = std::max(dist, std::abs(qk[static_cast<std::size_t>(ax)] -
                                       q[static_cast<std::size_t>(ax)]) /
                                  dens_big.cell(ax));
      if (dist < 1.5) {
        dup = true;
        break;
      }
    }
    if (dup) continue;
    // Accepted: polish the frequency so the coefficient is read at the true
    // maximum; cheap because only genuine atoms reach this point.
    q = refine(q, 60);
    out[q] = lad.average(rb, q);
  }
  return out;
}

}  // namespace detail_classify

inline ErgodicSeries ergodic_ladder(const Model& action, const Element& a,
                                    const Functional& phi, const std::vector<double>& q,
                                    const ClassifyConfig& cfg) {
  cfg.validate();
  return detail_classify::ladder_series(OrbitLadder(action, a, phi, cfg.ladder), q,
                                        0.1 * cfg.abs_floor);
}

inline PointMassMap extract_point_masses(const Model& action, const Element& a,
                                         const Functional& phi,
                                         const ClassifyConfig& cfg) {
  cfg.validate();
  return detail_classify::point_masses_from(action, OrbitLadder(action, a, phi, cfg.ladder),
                                            cfg);
}

// ---------------------------------------------------------------------------
// Element classification
// ---------------------------------------------------------------------------

inline Classification classify_element(const Model& action, const Element& a,
                                       const std::vector<Functional>& functionals,
                                       const ClassifyConfig& cfg) {
  cfg.validate();
  if (functionals.empty())
    throw InvalidConfig("classify_element: empty functional family");
  Classification cls;
  cls.label = a.label;

  std::vector<OrbitLadder> ladders;
  ladders.reserve(functionals.size());
  for (const auto& phi : functionals)
    ladders.emplace_back(action, a, phi, cfg.ladder);

  // 1. Point masses over the whole family; frequencies refined against
  // different functionals agree only to refinement precision, so the union
  // merges within one grid cell and keeps the largest coefficient.
  const CuboidWindow& top = cfg.ladder.back();
  std::vector<double> cell(static_cast<std::size_t>(top.dim()));
  for (int ax = 0; ax < top.dim(); ++ax)
    cell[static_cast<std::size_t>(ax)] =
        kTwoPi / (top.nodes(ax) * top.steps[static_cast<std::size_t>(ax)]);
  for (const auto& lad : ladders) {
    PointMassMap pm = detail_classify::point_masses_from(action, lad, cfg);
    for (auto& [q, c] : pm) {
      auto near = cls.point_masses.end();
      for (auto it = cls.point_masses.begin(); it != cls.point_masses.end(); ++it) {
        bool close = true;
        for (std::size_t ax = 0; ax < q.size(); ++ax)
          if (std::abs(it->first[ax] - q[ax]) > 1.5 * cell[ax]) close = false;
        if (close) {
          near = it;
          break;
        }
      }
      if (near == cls.point_masses.end()) {
        cls.point_masses[q] = c;
      } else if (std::abs(c) > std::abs(near->second)) {
        cls.point_masses.erase(near);
        cls.point_masses[q] = c;
      }
    }
  }

  // 2. Vanishing ergodic averages on the probe grid: |M_L| sits at the floor
  // on every rung or decays with at least the configured exponent.
  double sup_orbit = 0;
  for (const auto& lad : ladders)
    sup_orbit = std::max(sup_orbit, lad.mass(lad.rungs() - 1).sup);
  const double floor_val = std::max(cfg.abs_floor, 1e-7 * sup_orbit);
  bool averages_vanish = true;
  const auto probes = detail_classify::probe_grid(action, cfg);
  for (const auto& lad : ladders) {
    for (const auto& q : probes) {
      ErgodicSeries s = detail_classify::ladder_series(lad, q, 0.1 * floor_val);
      bool small = true;
      for (const cd& v : s.value)
        if (std::abs(v) >= floor_val) small = false;
      if (!small && s.gamma < cfg.gamma_min) averages_vanish = false;
      cls.probe_series.push_back(std::move(s));
      if (!averages_vanish) break;
    }
    if (!averages_vanish) break;
  }
  cls.in_continuous = cls.point_masses.empty() && averages_vanish;

  // 3. Windowed quadratic Fourier mass over the ladder (max over the family).
  for (std::size_t r = 0; r < cfg.ladder.size(); ++r) {
    double mass = 0;
    for (const auto& lad : ladders) mass = std::max(mass, lad.mass(r).quadratic);
    cls.mass_curve.emplace_back(cfg.ladder[r].half_lengths.back(), mass);
  }

  if (sup_orbit < cfg.abs_floor) {
    cls.type = MeasureType::Undetermined;
    cls.notes = "zero orbit";
    return cls;
  }

  bool stabilizes = true, grows = true;
  for (std::size_t i = 1; i < cls.mass_curve.size(); ++i) {
    const double prev = cls.mass_curve[i - 1].second;
    const double curr = cls.mass_curve[i].second;
    if (prev <= 0) {
      stabilizes = grows = false;
      break;
    }
    if (std::abs(curr - prev) / prev >= cfg.delta_ac) stabilizes = false;
    if (curr / prev < cfg.g_min) grows = false;
  }

  if (cls.in_continuous) {
    if (stabilizes) {
      cls.type = MeasureType::AC;
    } else if (grows) {
      cls.type = MeasureType::SC;
    } else {
      cls.type = MeasureType::Undetermined;
      cls.notes = "continuous, but the mass curve neither stabilizes nor grows steadily";
    }
    return cls;
  }

  if (!cls.point_masses.empty()) {
    // Wiener accounting: the Cesaro mean of |orbit|^2 against the point-mass
    // weights decides whether continuous mass remains.
    const CuboidWindow& big = cfg.ladder.back();
    double volume = 1;
    for (int ax = 0; ax < big.dim(); ++ax) {
      const double st =
          action.axis_is_lattice(ax) ? 1.0 : big.steps[static_cast<std::size_t>(ax)];
      volume *= big.nodes(ax) * st;
    }
    double wiener = 0;
    for (const auto& lad : ladders)
      wiener = std::max(wiener, lad.mass(lad.rungs() - 1).quadratic / volume);
    double atoms = 0;
    for (const auto& [q, c] : cls.point_masses) atoms += std::norm(c);
    const double residual = wiener - atoms;
    if (residual <= 0.05 * wiener + cfg.abs_floor) {
      cls.type = MeasureType::PurePoint;
    } else {
      cls.type = MeasureType::Mixed;
      cls.notes = "point masses plus residual quadratic mass " + format_double(residual);
    }
    return cls;
  }

  cls.type = MeasureType::Undetermined;
  cls.notes = "no point masses, but probe averages do not vanish";
  return cls;
}

// ---------------------------------------------------------------------------
// Component spectra
// ---------------------------------------------------------------------------

struct ComponentSpectra {
  SupportSet pp, c, ac, sc;
  std::vector<Classification> details;
};

inline ComponentSpectra component_spectra(const Model& action,
                                          const std::vector<Element>& elements,
                                          const std::vector<Functional>& functionals,
                                          const ClassifyConfig& cfg) {
  ComponentSpectra out;
  SpectrumConfig scfg;
  scfg.window = cfg.ladder.back();
  scfg.tau_rel = cfg.tau_rel;
  scfg.taper_ratio = cfg.taper_ratio;
  for (const auto& a : elements) {
    Classification cls = classify_element(action, a, functionals, cfg);
    for (const auto& [q, cmass] : cls.point_masses) {
      SupportSet atom;
      for (int ax = 0; ax < scfg.window.dim(); ++ax)
        atom.cell.push_back(kTwoPi / (scfg.window.nodes(ax) *
                                      scfg.window.steps[static_cast<std::size_t>(ax)]));
      atom.boxes.push_back(FreqBox::point(q, atom.max_cell() / 2));
      out.pp.merge_with(atom);
    }
    if (cls.type == MeasureType::AC || cls.type == MeasureType::SC) {
      SupportSet sp = element_spectrum(action, a, functionals, scfg);
      out.c.merge_with(sp);
      if (cls.type == MeasureType::AC) out.ac.merge_with(sp);
      else out.sc.merge_with(sp);
    }
    out.details.push_back(std::move(cls));
  }
  return out;
}

// ---------------------------------------------------------------------------
// The quotient of continuous modulo absolutely continuous
// ---------------------------------------------------------------------------

struct QuotientClass {
  Element representative;
  double sc_mass = 0;  // final mass-curve value when the class is nontrivial
  std::string label;
};

inline QuotientClass make_quotient_class(const Model& action, const Element& a,
                                         const std::vector<Functional>& functionals,
                                         const ClassifyConfig& cfg) {
  Classification cls = classify_element(action, a, functionals, cfg);
  if (!cls.point_masses.empty())
    throw NotContinuous("quotient class: representative carries point masses");
  QuotientClass q;
  q.representative = a;
  q.label = "[" + a.label + "]";
  q.sc_mass = (cls.type == MeasureType::SC && !cls.mass_curve.empty())
                  ? cls.mass_curve.back().second
                  : 0.0;
  return q;
}

inline QuotientClass quotient_act(const Model& action, const QuotientClass& cls,
                                  const GroupParameter& x,
                                  const std::vector<Functional>& functionals,
                                  const ClassifyConfig& cfg) {
  Classification check = classify_element(action, cls.representative, functionals, cfg);
  if (!check.point_masses.empty())
    throw NotContinuous("quotient action: representative carries point masses");
  QuotientClass out = cls;
  out.representative = action.translate(cls.representative, x);
  return out;
}

// Two classes are equal when their representatives differ by an element that
// classifies absolutely continuous (or vanishes outright).
inline bool class_equal(const Model& action, const QuotientClass& a,
                        const QuotientClass& b,
                        const std::vector<Functional>& functionals,
                        const ClassifyConfig& cfg) {
  const Element diff = action.combine(1.0, a.representative, -1.0, b.representative);
  double sup = 0;
  for (const auto& phi : functionals)
    sup = std::max(sup, orbit_mass(action, diff, phi, cfg.ladder.front()).sup);
  if (sup < cfg.abs_floor) return true;
  const Classification cls = classify_element(action, diff, functionals, cfg);
  return cls.type == MeasureType::AC;
}

}  // namespace arveson

#endif  // ARVESON_CLASSIFY_HPP
