#ifndef ARVESON_SUITES_HPP
#define ARVESON_SUITES_HPP

#include <memory>
#include <random>
#include <string>
#include <vector>

#include "arveson/config.hpp"
#include "arveson/duality.hpp"
#include "arveson/gns.hpp"
#include "arveson/models/flow_models.hpp"
#include "arveson/models/lattice_model.hpp"
#include "arveson/models/matrix_model.hpp"
#include "arveson/models/two_vacua.hpp"
#include "arveson/qft.hpp"
#include "arveson/report.hpp"

namespace arveson {

// Owning handle over the model selected by a configuration.
struct ModelBundle {
  std::string kind;
  std::unique_ptr<MatrixModel> matrix;
  std::unique_ptr<LatticeModel> lattice;
  std::unique_ptr<DensityFlowModel> gauss;
  std::unique_ptr<RieszProductModel> riesz;
  std::unique_ptr<TwoVacuaModel> two_vacua;

  const Model& base() const {
    if (matrix) return *matrix;
    if (lattice) return *lattice;
    if (gauss) return *gauss;
    if (riesz) return *riesz;
    return *two_vacua;
  }
};

inline ModelBundle build_model(const ExperimentConfig& cfg) {
  ModelBundle b;
  b.kind = cfg.model_kind;
  if (cfg.model_kind == "matrix") {
    b.matrix = std::make_unique<MatrixModel>(cfg.eigenvalues);
  } else if (cfg.model_kind == "lattice") {
    LatticeParams p;
    p.mass = cfg.mass;
    p.n_modes = cfg.n_modes;
    p.energy_max = cfg.energy_max;
    p.mu = cfg.mu;
    b.lattice = std::make_unique<LatticeModel>(p);
  } else if (cfg.model_kind == "gaussian_flow") {
    b.gauss = std::make_unique<DensityFlowModel>(cfg.mean, cfg.sigma);
  } else if (cfg.model_kind == "cantor_flow") {
    b.riesz = std::make_unique<RieszProductModel>(cfg.ratio, cfg.max_window);
  } else {
    b.two_vacua = std::make_unique<TwoVacuaModel>(cfg.max_mode);
  }
  return b;
}

namespace detail_suites {

inline void skip(ordered_json& section, const std::string& kind) {
  section["status"] = "SKIPPED: not applicable to model kind " + kind;
}

inline SpectrumConfig spectrum_config(const ExperimentConfig& cfg) {
  SpectrumConfig s;
  s.window = cfg.ladder.back();
  s.tau_rel = cfg.tau_rel;
  s.taper_ratio = cfg.taper_ratio;
  return s;
}

// Lattice-axis classification ladder for space-translation checks: Cesaro
// windows up to half the torus.
inline std::vector<CuboidWindow> space_ladder(int n_modes) {
  std::vector<CuboidWindow> out;
  for (int half : {n_modes / 8, n_modes / 4, n_modes / 2}) {
    CuboidWindow w;
    w.half_lengths = {double(half)};
    w.steps = {1.0};
    out.push_back(std::move(w));
  }
  return out;
}

inline std::vector<double> matrix_difference_set(const MatrixModel& m) {
  std::vector<double> out;
  for (int j = 0; j < m.n(); ++j)
    for (int k = 0; k < m.n(); ++k) {
      const double f = m.eigenvalue(j) - m.eigenvalue(k);
      bool seen = false;
      for (double g : out)
        if (std::abs(g - f) < 1e-12) seen = true;
      if (!seen) out.push_back(f);
    }
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// spectra
// ---------------------------------------------------------------------------

inline void run_spectra(const ExperimentConfig& cfg, const ModelBundle& bundle,
                        SuiteReport& rep, ordered_json& section) {
  const Model& action =
      bundle.lattice ? static_cast<const Model&>(bundle.lattice->time_view())
                     : bundle.base();
  const SpectrumConfig scfg = spectrum_config(cfg);
  const auto elements = action.generator_elements();
  const auto functionals = action.functional_family();
  const SpectrumResult res = arveson_spectrum(action, elements, functionals, scfg);

  section["sp_alpha"] = support_json(res.total);
  ordered_json per = ordered_json::object();
  for (const auto& [label, sp] : res.per_element) per[label] = support_json(sp);
  section["per_element"] = std::move(per);
  rep.add_curve(spectrum_curve(res.total, bundle.kind + "_sp_alpha"));

  rep.add_check(section, "spectra.nonempty", !res.total.boxes.empty());

  // Every detected box sits inside the declared frequency range, padded by
  // one cell plus the Gaussian taper broadening at the detection threshold.
  const auto fmax = action.max_frequency();
  bool within = true;
  for (const auto& b : res.total.boxes)
    for (std::size_t a = 0; a < b.lo.size(); ++a) {
      double pad = res.total.cell[a];
      if (cfg.taper_ratio > 0)
        pad += std::sqrt(2 * std::log(1 / cfg.tau_rel)) * cfg.taper_ratio /
               scfg.window.half_lengths[a];
      if (b.lo[a] < -fmax[a] - pad || b.hi[a] > fmax[a] + pad) within = false;
    }
  rep.add_check(section, "spectra.within_declared_band", within);

  // Each element's orbit support stays inside its own detected spectrum.
  bool inside = true;
  for (std::size_t i = 0; i < elements.size(); ++i) {
    const auto sub =
        spectral_subspace_test(action, elements[i], res.per_element[i].second,
                               functionals, scfg);
    if (!sub.inside) inside = false;
  }
  rep.add_check(section, "spectra.subspace_consistency", inside);

  if (bundle.matrix) {
    const auto expected = matrix_difference_set(*bundle.matrix);
    const double pad = res.total.max_cell();
    bool covered = true;
    for (double f : expected)
      if (!res.total.contains({f}, pad)) covered = false;
    bool tight = true;
    for (const auto& b : res.total.boxes) {
      bool hit = false;
      for (double f : expected)
        if (f >= b.lo[0] - pad && f <= b.hi[0] + pad) hit = true;
      if (!hit) tight = false;
    }
    ordered_json num;
    num["expected"] = expected;
    rep.add_check(section, "spectra.matrix_difference_set", covered && tight,
                  std::move(num));

    // Point-mass coefficients against the exact matrix elements.
    const ClassifyConfig ccfg = cfg.make_classify();
    double max_err = 0;
    for (const auto& a : elements)
      for (const auto& phi : functionals) {
        const PointMassMap pm = extract_point_masses(action, a, phi, ccfg);
        const auto exact = action.orbit_modes(phi, a).value();
        for (const auto& [q, c] : pm) {
          cd want = 0;
          for (const auto& mode : exact)
            if (std::abs(mode.freq[0] - q[0]) < 0.5) want += mode.weight;
          max_err = std::max(max_err, std::abs(c - want));
        }
        for (const auto& mode : exact) {
          if (std::abs(mode.weight) < 1e-12) continue;
          bool found = false;
          for (const auto& [q, c] : pm)
            if (std::abs(mode.freq[0] - q[0]) < 0.5) found = true;
          if (!found) max_err = std::max(max_err, std::abs(mode.weight));
        }
      }
    ordered_json cnum;
    cnum["max_error"] = max_err;
    rep.add_check(section, "spectra.matrix_coefficients", max_err <= 1e-8,
                  std::move(cnum));
  }

  if (bundle.two_vacua) {
    const double pad = res.total.max_cell();
    bool covered = true;
    for (int c = 0; c < 2; ++c)
      for (int k = -cfg.max_mode; k <= cfg.max_mode; ++k)
        if (!res.total.contains({bundle.two_vacua->frequency_of(c, k)}, pad))
          covered = false;
    rep.add_check(section, "spectra.mode_frequencies_covered", covered);
  }
}

// ---------------------------------------------------------------------------
// classify
// ---------------------------------------------------------------------------

inline void run_classify(const ExperimentConfig& cfg, const ModelBundle& bundle,
                         SuiteReport& rep, ordered_json& section) {
  const ClassifyConfig ccfg = cfg.make_classify();
  ordered_json results = ordered_json::array();

  auto record = [&](const Model& action, const Element& a,
                    const std::vector<Functional>& fam, MeasureType want,
                    const ClassifyConfig& cc) {
    const Classification cls = classify_element(action, a, fam, cc);
    results.push_back(classification_json(cls));
    rep.add_curve(ergodic_curve(cls, bundle.kind + "_" + sanitize_name(a.label)));
    rep.add_curve(mass_curve(cls, bundle.kind + "_" + sanitize_name(a.label)));
    ordered_json num;
    num["expected"] = to_string(want);
    num["got"] = to_string(cls.type);
    rep.add_check(section, "classify.type." + sanitize_name(a.label),
                  cls.type == want, std::move(num));
    return cls;
  };

  if (bundle.matrix) {
    const auto fam = bundle.matrix->functional_family();
    double max_err = 0;
    for (const auto& a : bundle.matrix->generator_elements()) {
      const Classification cls =
          record(*bundle.matrix, a, fam, MeasureType::PurePoint, ccfg);
      // The union keeps the largest coefficient per frequency over the family.
      for (const auto& [q, c] : cls.point_masses) {
        double want = 0;
        for (const auto& phi : fam) {
          const auto exact = bundle.matrix->orbit_modes(phi, a).value();
          cd w = 0;
          for (const auto& mode : exact)
            if (std::abs(mode.freq[0] - q[0]) < 0.5) w += mode.weight;
          want = std::max(want, std::abs(w));
        }
        max_err = std::max(max_err, std::abs(std::abs(c) - want));
      }
    }
    ordered_json num;
    num["max_error"] = max_err;
    rep.add_check(section, "classify.matrix_coefficients", max_err <= 1e-8,
                  std::move(num));
  } else if (bundle.gauss) {
    const Classification cls =
        record(*bundle.gauss, bundle.gauss->base_element(),
               {bundle.gauss->eval_functional()}, MeasureType::AC, ccfg);
    // Quadratic mass of the closed-form orbit: int |c|^2 dt = sqrt(pi)/sigma.
    const double want = std::sqrt(kPi) / bundle.gauss->sigma();
    const double got = cls.mass_curve.empty() ? 0 : cls.mass_curve.back().second;
    ordered_json num;
    num["expected_mass"] = want;
    num["got_mass"] = got;
    rep.add_check(section, "classify.gaussian_mass_limit",
                  std::abs(got - want) <= 0.02 * want, std::move(num));
  } else if (bundle.riesz) {
    const Classification cls =
        record(*bundle.riesz, bundle.riesz->base_element(),
               {bundle.riesz->eval_functional()}, MeasureType::SC, ccfg);
    bool grows = cls.mass_curve.size() >= 2;
    for (std::size_t i = 1; i < cls.mass_curve.size(); ++i)
      if (cls.mass_curve[i].second < cfg.g_min * cls.mass_curve[i - 1].second)
        grows = false;
    rep.add_check(section, "classify.cantor_mass_growth", grows);
  } else if (bundle.two_vacua) {
    const auto fam = bundle.two_vacua->functional_family();
    record(*bundle.two_vacua, bundle.two_vacua->unit(), fam,
           MeasureType::PurePoint, ccfg);
    record(*bundle.two_vacua, bundle.two_vacua->mode_element(0, 1), fam,
           MeasureType::PurePoint, ccfg);
    record(*bundle.two_vacua, bundle.two_vacua->mode_element(1, 1), fam,
           MeasureType::PurePoint, ccfg);
  } else if (bundle.lattice) {
    const LatticeModel& t = bundle.lattice->time_view();
    record(t, t.unit(), {t.vacuum_state()}, MeasureType::PurePoint, ccfg);
    const LatticeModel& s = bundle.lattice->space_view();
    ClassifyConfig scc = ccfg;
    scc.ladder = space_ladder(bundle.lattice->n_modes());
    const Eigen::VectorXcd flat =
        Eigen::VectorXcd::Ones(bundle.lattice->n_modes()) /
        std::sqrt(double(bundle.lattice->n_modes()));
    FockVector onep = FockVector::zero(bundle.lattice->n_modes());
    onep.one = flat;
    const Functional bra_ket =
        s.functional(onep, FockVector::vacuum(bundle.lattice->n_modes()), "x1v");
    record(s, s.field_at_site(0), {bra_ket}, MeasureType::AC, scc);
  }

  section["classifications"] = std::move(results);
}

// ---------------------------------------------------------------------------
// duality
// ---------------------------------------------------------------------------

// Trimmed lattice families whose centered members are genuinely continuous:
// ladder operators against vacuum/one-particle data.
struct LatticeDualityFamilies {
  std::vector<Element> generators;
  std::vector<Functional> functionals;
};

inline LatticeDualityFamilies lattice_duality_families(const LatticeModel& t) {
  LatticeDualityFamilies out;
  const Eigen::VectorXcd f = t.gaussian_profile(kPi / 2, 0.5);
  out.generators.push_back(t.annihilator(f, "a(f)"));
  out.generators.push_back(t.creator(f, "a+(f)"));
  const auto p1 = t.gaussian_profile(kPi / 2, 0.4);
  FockVector onep = FockVector::zero(t.n_modes());
  onep.one = p1 / p1.norm();
  const FockVector vac = FockVector::vacuum(t.n_modes());
  out.functionals.push_back(t.vacuum_state());
  out.functionals.push_back(t.functional(onep, vac, "x1v"));
  out.functionals.push_back(t.functional(vac, onep, "xv1"));
  return out;
}

inline void run_duality(const ExperimentConfig& cfg, const ModelBundle& bundle,
                        SuiteReport& rep, ordered_json& section,
                        std::mt19937_64& rng) {
  DualityConfig dcfg;
  dcfg.classify = cfg.make_classify();
  dcfg.tol_pair = cfg.tol_pair;

  if (bundle.gauss || bundle.riesz) {
    skip(section, bundle.kind);
    return;
  }

  if (bundle.matrix) {
    // Disjoint one-cell neighborhoods of two distinct transition frequencies.
    const auto freqs = matrix_difference_set(*bundle.matrix);
    double f1 = 0, f2 = 0, sep = 0;
    for (std::size_t i = 0; i + 1 < freqs.size(); ++i)
      if (freqs[i + 1] - freqs[i] > sep) sep = freqs[i + 1] - freqs[i];
    f1 = freqs.front();
    f2 = freqs.back();
    const double h = 0.25 * std::min(sep, (f2 - f1) / 2);
    SupportSet delta, delta_prime;
    delta.cell = {h};
    delta.boxes.push_back(FreqBox::point({f1}, h));
    delta_prime.cell = {h};
    delta_prime.boxes.push_back(FreqBox::point({f2}, h));
    const OrthogonalityReport orep =
        check_orthogonality(*bundle.matrix, delta, delta_prime, dcfg);
    ordered_json num;
    num["pairs_tested"] = orep.pairs_tested;
    num["max_violation"] = orep.max_violation;
    rep.add_check(section, "duality.orthogonality",
                  orep.pass && orep.max_violation <= 1e-10, std::move(num));

    const NecessaryConditionsReport nrep =
        check_necessary_conditions(*bundle.matrix, dcfg);
    ordered_json nnum;
    nnum["verdict"] = nrep.verdict;
    rep.add_check(section, "duality.necessary_conditions",
                  nrep.verdict == "CONSISTENT", std::move(nnum));

    // The kernel of a vector state contains eigen-elements, so the
    // decomposition hypothesis must fail.
    bool threw = false;
    std::string what;
    try {
      build_decomposition(*bundle.matrix, bundle.matrix->vector_functional(0, 0),
                          bundle.matrix->unit(), dcfg);
    } catch (const HypothesisFailed& e) {
      threw = true;
      what = e.what();
    }
    ordered_json hnum;
    hnum["error"] = what;
    rep.add_check(section, "duality.decomposition_negative", threw, std::move(hnum));
    return;
  }

  if (bundle.two_vacua) {
    const NecessaryConditionsReport nrep =
        check_necessary_conditions(*bundle.two_vacua, dcfg);
    ordered_json dims = ordered_json::array();
    int dim_e_at_0 = 0, dim_f_at_0 = 0;
    for (const auto& d : nrep.dimensions) {
      ordered_json e;
      e["q"] = d.q;
      e["dim_elements"] = d.dim_elements;
      e["dim_functionals"] = d.dim_functionals;
      dims.push_back(std::move(e));
      if (std::abs(d.q[0]) < 1e-9) {
        dim_e_at_0 = d.dim_elements;
        dim_f_at_0 = d.dim_functionals;
      }
    }
    section["dimensions"] = std::move(dims);
    ordered_json num;
    num["verdict"] = nrep.verdict;
    rep.add_check(section, "duality.two_invariant_states",
                  dim_f_at_0 == 2 && dim_e_at_0 == 1);
    rep.add_check(section, "duality.necessary_conditions_violated",
                  nrep.verdict == "VIOLATED(a)", std::move(num));
    return;
  }

  // Lattice: the vacuum kernel is continuous on the trimmed families.
  const LatticeModel& t = bundle.lattice->time_view();
  const auto fams = lattice_duality_families(t);
  const NecessaryConditionsReport nrep = check_necessary_conditions(
      t, dcfg, fams.generators, fams.functionals);
  ordered_json nnum;
  nnum["verdict"] = nrep.verdict;
  rep.add_check(section, "duality.necessary_conditions",
                nrep.verdict == "CONSISTENT", std::move(nnum));

  const DecompositionResult dec =
      build_decomposition(t, t.vacuum_state(), t.unit(), dcfg, fams.generators,
                          fams.functionals);
  section["sp_c_primal"] = support_json(dec.sp_c_primal);
  section["sp_c_dual"] = support_json(dec.sp_c_dual);
  rep.add_check(section, "duality.spectra_match", dec.spectra_match);

  // P_pp + P_c = id on a seeded random combination of the generators.
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  Element a = t.unit();
  for (const auto& g : fams.generators)
    a = t.combine(1.0, a, cd(coef(rng), coef(rng)), g);
  const Element back = t.combine(1.0, dec.p_pp(t, a), 1.0, dec.p_c(t, a));
  const double err = t.element_norm(t.combine(1.0, a, -1.0, back));
  ordered_json pnum;
  pnum["residual_norm"] = err;
  rep.add_check(section, "duality.projections_complementary",
                err <= 1e-12 * std::max(1.0, t.element_norm(a)), std::move(pnum));
}

// ---------------------------------------------------------------------------
// gns
// ---------------------------------------------------------------------------

inline void run_gns(const ExperimentConfig& cfg, const ModelBundle& bundle,
                    SuiteReport& rep, ordered_json& section,
                    std::mt19937_64& rng) {
  GnsConfig gcfg;
  gcfg.classify = cfg.make_classify();

  if (bundle.gauss || bundle.riesz || bundle.two_vacua) {
    skip(section, bundle.kind);
    return;
  }

  if (bundle.matrix) {
    const MatrixModel& m = *bundle.matrix;
    const GroupParameter origin(std::vector<double>{0.0});

    const GnsData pure = gns_construct(m, m.vector_functional(0, 0));
    const GnsData mixed = gns_construct(m, m.normalized_trace());
    ordered_json dims;
    dims["pure_state"] = pure.dimension;
    dims["trace_state"] = mixed.dimension;
    section["dimensions"] = std::move(dims);
    rep.add_check(section, "gns.dimensions",
                  pure.dimension == m.n() && mixed.dimension == m.n() * m.n());

    // State reconstruction through the cyclic vector.
    double rec_err = 0;
    for (const auto& a : m.generator_elements()) {
      const cd direct = evaluate_pairing(m, m.normalized_trace(), a, origin);
      const cd via =
          (mixed.omega_vec.adjoint() * mixed.represent(a) * mixed.omega_vec)(0);
      rec_err = std::max(rec_err, std::abs(direct - via));
    }
    ordered_json rnum;
    rnum["max_error"] = rec_err;
    rep.add_check(section, "gns.reconstruction", rec_err <= 1e-10, std::move(rnum));

    // Covariance of the implementing group on a seeded random element.
    const UnitaryGroup ug = implementing_group(mixed, m);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    Eigen::MatrixXcd rand(m.n(), m.n());
    for (int j = 0; j < m.n(); ++j)
      for (int k = 0; k < m.n(); ++k) rand(j, k) = cd(coef(rng), coef(rng));
    const Element a = m.element(rand, "R");
    double cov_err = 0;
    for (int i = 0; i < 10; ++i) {
      const double x = -4.5 + i;
      const Eigen::MatrixXcd lhs =
          mixed.represent(m.translate(a, GroupParameter({x})));
      const Eigen::MatrixXcd rhs =
          ug.u(x) * mixed.represent(a) * ug.u(x).adjoint();
      cov_err = std::max(cov_err, (lhs - rhs).cwiseAbs().maxCoeff());
    }
    ordered_json cnum;
    cnum["max_error"] = cov_err;
    rep.add_check(section, "gns.covariance", cov_err <= 1e-8, std::move(cnum));

    const HilbertParts hp = hilbert_parts(ug);
    section["hilbert_parts"] = ordered_json{{"flag", hp.flag},
                                            {"dim_pp", hp.dim_pp},
                                            {"dim_c", hp.dim_c}};
    rep.add_check(section, "gns.purely_point_hilbert_space",
                  hp.dim_pp == mixed.dimension && hp.dim_c == 0);

    const TransferContainmentReport tr =
        check_transfer(m, m.normalized_trace(), gcfg);
    ordered_json tnum;
    tnum["checks"] = tr.checks;
    tnum["violations"] = tr.violations;
    rep.add_check(section, "gns.transfer_containment", tr.pass(), std::move(tnum));
    return;
  }

  const LatticeModel& lat = *bundle.lattice;
  const GnsData fock = gns_construct(lat, lat.time_view().vacuum_state());
  const int n = lat.n_modes();
  rep.add_check(section, "gns.fock_dimension",
                fock.dimension == 1 + n + n * (n + 1) / 2,
                ordered_json{{"dimension", fock.dimension}});

  const UnitaryGroup ug = implementing_group(fock, lat.time_view());
  ordered_json bands = ordered_json::array();
  for (const auto& b : ug.bands)
    bands.push_back(ordered_json{
        {"sector", b.sector}, {"lo", b.lo}, {"hi", b.hi}, {"measure", b.measure}});
  section["bands"] = std::move(bands);
  bool band_shape = ug.bands.size() == 3 && ug.bands[0].measure == "pp" &&
                    ug.bands[0].lo == 0 && ug.bands[0].hi == 0;
  rep.add_check(section, "gns.band_structure", band_shape);

  const TransferContainmentReport tr = check_transfer(lat, gcfg);
  ordered_json tnum;
  tnum["checks"] = tr.checks;
  tnum["violations"] = tr.violations;
  tnum["failures"] = tr.failures;
  rep.add_check(section, "gns.transfer_containment", tr.pass(), std::move(tnum));

  const SpectrumRelationsReport sr = check_spectrum_relations(lat, gcfg);
  ordered_json snum;
  snum["band"] = std::vector<double>{sr.band_lo, sr.band_hi};
  snum["failures"] = sr.failures;
  section["spectrum_relations_part_d"] = sr.part_d;
  rep.add_check(section, "gns.pp_spectra_at_zero", sr.part_a);
  rep.add_check(section, "gns.difference_containment", sr.part_b);
  rep.add_check(section, "gns.ac_reflection", sr.part_c, std::move(snum));
}

// ---------------------------------------------------------------------------
// qft
// ---------------------------------------------------------------------------

inline void run_qft(const ExperimentConfig& cfg, const ModelBundle& bundle,
                    SuiteReport& rep, ordered_json& section) {
  if (!bundle.lattice) {
    skip(section, bundle.kind);
    return;
  }
  // All handles are built on the spacetime instance; the qft checks pair
  // them against each other and against internally built observables.
  const LatticeModel& lat = *bundle.lattice;
  const LatticeModel& t = lat;
  const Smearing g = gaussian_smearing(lat.mu());
  const auto family = energy_family(lat);
  const Element t00g = t.smear(t.energy_density(0), g.transfer, "T00(g)");

  {
    const ConditionTReport rep_t = check_condition_T(lat, g, family);
    ordered_json entries = ordered_json::array();
    double max_res = 0, pw_value = 0;
    for (const auto& e : rep_t.entries) {
      entries.push_back(ordered_json{{"state", e.state},
                                     {"lhs", e.lhs},
                                     {"rhs", e.rhs},
                                     {"residual", e.residual}});
      max_res = std::max(max_res, e.residual);
      if (e.state.rfind("pw", 0) == 0) pw_value = e.rhs;
    }
    section["condition_T"] = std::move(entries);
    rep.add_check(section, "qft.condition_T", rep_t.pass,
                  ordered_json{{"max_residual", max_res}});
    // Dispersion oracle at theta = pi/2.
    const double want = std::sqrt(
        lat.mass() * lat.mass() + 4 * std::pow(std::sin(kPi / 4), 2));
    rep.add_check(section, "qft.dispersion_oracle",
                  std::abs(pw_value - want) <= 1e-10,
                  ordered_json{{"expected", want}, {"got", pw_value}});
  }

  {
    const SeminormResult sn = seminorm_E1(lat, t00g, family);
    rep.add_check(section, "qft.seminorm_finite", std::isfinite(sn.value),
                  ordered_json{{"value", sn.value}, {"achieving", sn.achieving}});
  }

  {
    const Smearing g2 = gaussian_smearing(lat.mu(), 0.8);
    const Eigen::VectorXcd f = t.gaussian_profile(kPi / 2, 0.5);
    const std::vector<Element> elems = {
        t00g, t.smear(t.combine(1.0, t.annihilator(f), 1.0, t.creator(f)),
                      g.transfer, "phi(f,g)")};
    const ConditionL1Report l1 =
        check_condition_L1(lat, {g, g2}, family, elems);
    ordered_json entries = ordered_json::array();
    for (const auto& e : l1.entries)
      entries.push_back(ordered_json{{"element", e.element},
                                     {"smearing", e.smearing},
                                     {"seminorm", e.seminorm},
                                     {"bound", e.bound},
                                     {"ratio", e.ratio}});
    section["condition_L1"] = std::move(entries);
    rep.add_check(section, "qft.condition_L1", l1.all_finite,
                  ordered_json{{"fitted_c", l1.fitted_c}});
  }

  {
    const Functional omega = t.plane_wave_state(t.quarter_mode());
    const ParticleBoundReport pb = check_particle_bound(lat, omega, t00g, g, 0.0);
    rep.add_check(section, "qft.particle_bound_exact", pb.pass,
                  ordered_json{{"omega_h", pb.omega_h},
                               {"min_abs_sigma", pb.min_abs_sigma}});
    // With the exact energy density the asymptotic functional is constant.
    double dev = 0;
    const double period = kTwoPi / lat.mass();
    for (int i = 0; i < 64; ++i) {
      const cd s = asymptotic_functional(lat, omega, t00g, i * period / 64);
      dev = std::max(dev, std::abs(s - cd(pb.omega_h)));
    }
    rep.add_check(section, "qft.sigma_constant",
                  dev <= 1e-8 * (1 + std::abs(pb.omega_h)),
                  ordered_json{{"max_deviation", dev}});

    // Perturbed observable within seminorm epsilon of the energy density.
    const int n = lat.n_modes();
    Eigen::VectorXcd probe = Eigen::VectorXcd::Zero(n);
    probe(t.quarter_mode()) = 1.0;
    const double delta = 0.3 / n;
    const Element c = t.combine(1.0, t00g, delta, t.number_observable(probe, "n(q)"));
    const Element diff = t.combine(1.0, c, -1.0, t00g);
    const double eps = seminorm_E1(lat, diff, {omega}).value;
    const ParticleBoundReport pb2 = check_particle_bound(lat, omega, c, g, eps);
    rep.add_check(section, "qft.particle_bound_perturbed",
                  pb2.pass && eps <= pb2.omega_h / 2,
                  ordered_json{{"epsilon", eps},
                               {"min_abs_sigma", pb2.min_abs_sigma}});
  }

  {
    const Element st_t00g =
        lat.smear(lat.energy_density(0), g.transfer, "T00(g)");
    const ScSplitReport sc =
        sc_triviality_split(lat, st_t00g, lat.energy_max(), lat.mu());
    rep.add_check(section, "qft.sc_split_partition", sc.partition_exact);
    rep.add_check(section, "qft.sc_split_energy_decreasing",
                  sc.minus_energy_decreasing && sc.plus_star_energy_decreasing,
                  ordered_json{{"max_l2", sc.max_l2}});
  }

  {
    std::vector<std::function<Element(const LatticeModel&)>> elems = {
        [](const LatticeModel& m) { return m.field_at_site(0); },
        [](const LatticeModel& m) {
          Eigen::VectorXcd f = m.gaussian_profile(kPi / 2, 0.5);
          f /= f.norm();
          return m.creator(f);
        }};
    // Off-diagonal vacuum-to-one-particle functionals: the one-point
    // functions of field and ladder operators vanish in every diagonal state.
    std::vector<std::function<Functional(const LatticeModel&)>> fams = {
        [](const LatticeModel& m) {
          FockVector onep = FockVector::zero(m.n_modes());
          onep.one = m.gaussian_profile(kPi / 2, 0.4);
          onep.one /= onep.one.norm();
          return m.functional(onep, FockVector::vacuum(m.n_modes()), "x1v");
        }};
    const RegularityReport rr = buchholz_regularity_scan(lat, elems, fams, 0.5);
    ordered_json entries = ordered_json::array();
    for (const auto& e : rr.entries)
      entries.push_back(ordered_json{{"label", e.label},
                                     {"value", e.value},
                                     {"refined", e.refined},
                                     {"rel_change", e.rel_change}});
    section["regularity"] = std::move(entries);
    rep.add_check(section, "qft.regularity_stable", rr.all_stable);
  }

  // Space translations: the momentum spectrum of local centered observables
  // covers the torus, with no singular mass away from zero.
  {
    const LatticeModel& s = lat.space_view();
    const int n = lat.n_modes();
    const Eigen::VectorXcd flat =
        Eigen::VectorXcd::Ones(n) / std::sqrt(double(n));
    FockVector onep = FockVector::zero(n);
    onep.one = flat;
    const Functional bra_ket =
        s.functional(onep, FockVector::vacuum(n), "x1v");
    ClassifyConfig scc = cfg.make_classify();
    scc.ladder = space_ladder(n);
    SpectrumConfig sscfg;
    sscfg.window = scc.ladder.back();
    sscfg.tau_rel = cfg.tau_rel;

    bool cover_ok = true, no_sc = true;
    double worst_cover = 1.0;
    for (const Element& a : {s.field_at_site(0), s.field_at_site(1)}) {
      const SupportSet sp = element_spectrum(s, a, {bra_ket}, sscfg);
      const double cell = sp.max_cell();
      int covered = 0, cells = 0;
      for (double p = -kPi + cell / 2; p < kPi; p += cell) {
        ++cells;
        if (sp.contains({p}, cell)) ++covered;
      }
      const double frac = cells ? double(covered) / cells : 0;
      worst_cover = std::min(worst_cover, frac);
      if (frac < 0.95) cover_ok = false;
      const Classification cls = classify_element(s, a, {bra_ket}, scc);
      for (const auto& [q, c] : cls.point_masses)
        if (std::abs(q[0]) > 1.5 * cell) no_sc = false;
      if (cls.type == MeasureType::SC || cls.type == MeasureType::Mixed)
        no_sc = false;
    }
    rep.add_check(section, "qft.momentum_torus_coverage", cover_ok,
                  ordered_json{{"worst_coverage", worst_cover}});
    rep.add_check(section, "qft.no_singular_mass_off_zero", no_sc);
  }
}

}  // namespace detail_suites

// ---------------------------------------------------------------------------
// Orchestration
// ---------------------------------------------------------------------------

inline SuiteReport run_suite(const ExperimentConfig& cfg) {
  const ModelBundle bundle = build_model(cfg);
  SuiteReport rep;
  rep.doc["version"] = kVersion;
  rep.doc["manifest_hash"] = cfg.manifest_hash();
  rep.doc["model"] = cfg.model_kind;
  rep.doc["suite"] = cfg.suite;
  rep.doc["seed"] = cfg.seed;
  rep.doc["sections"] = ordered_json::object();
  rep.doc["curves"] = ordered_json::array();

  std::mt19937_64 rng(cfg.seed);
  auto want = [&](const char* name) {
    return cfg.suite == "all" || cfg.suite == name;
  };

  if (want("spectra")) {
    ordered_json& s = rep.doc["sections"]["spectra"] = ordered_json::object();
    detail_suites::run_spectra(cfg, bundle, rep, s);
  }
  if (want("classify")) {
    ordered_json& s = rep.doc["sections"]["classify"] = ordered_json::object();
    detail_suites::run_classify(cfg, bundle, rep, s);
  }
  if (want("duality")) {
    ordered_json& s = rep.doc["sections"]["duality"] = ordered_json::object();
    detail_suites::run_duality(cfg, bundle, rep, s, rng);
  }
  if (want("gns")) {
    ordered_json& s = rep.doc["sections"]["gns"] = ordered_json::object();
    detail_suites::run_gns(cfg, bundle, rep, s, rng);
  }
  if (want("qft")) {
    ordered_json& s = rep.doc["sections"]["qft"] = ordered_json::object();
    detail_suites::run_qft(cfg, bundle, rep, s);
  }

  rep.doc["pass"] = rep.pass;
  rep.doc["failing_checks"] = rep.failing;
  return rep;
}

}  // namespace arveson

#endif  // ARVESON_SUITES_HPP
