#ifndef ARVESON_DUALITY_HPP
#define ARVESON_DUALITY_HPP

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <string>
#include <vector>

#include "arveson/classify.hpp"

namespace arveson {

// ---------------------------------------------------------------------------
// The transposed action: the same orbits with the roles of elements and
// functionals exchanged, so every spectral and classification routine applies
// verbatim to functionals.
// ---------------------------------------------------------------------------

class DualModel final : public Model {
 public:
  explicit DualModel(const Model& base) : base_(&base) {}

  const Model& base() const { return *base_; }

  // A functional of the base model, viewed as an element of the dual action.
  // Finite combinations are kept as coefficient lists so `combine` works
  // without demanding payload arithmetic from the base model.
  struct ComboF {
    std::vector<cd> coeff;
    std::vector<Functional> terms;
  };
  struct ComboE {
    std::vector<cd> coeff;
    std::vector<Element> terms;
  };

  Element lift(const Functional& phi) const {
    Element e;
    e.model = this;
    auto c = std::make_shared<ComboF>();
    c->coeff = {1.0};
    c->terms = {phi};
    e.payload = std::move(c);
    e.label = phi.label;
    return e;
  }
  Functional lift(const Element& a) const {
    Functional f;
    f.model = this;
    auto c = std::make_shared<ComboE>();
    c->coeff = {1.0};
    c->terms = {a};
    f.payload = std::move(c);
    f.label = a.label;
    return f;
  }

  std::string name() const override { return base_->name() + "*"; }
  int group_dim() const override { return base_->group_dim(); }
  std::vector<int> signature() const override { return base_->signature(); }
  std::vector<double> max_frequency() const override { return base_->max_frequency(); }
  bool axis_is_lattice(int axis) const override { return base_->axis_is_lattice(axis); }

  // (alpha*_x phi)(A) = phi(alpha_x(A)): the dual orbit of phi against A is
  // the primal orbit evaluated at the same x (pairing symmetry).
  cd pair(const Functional& dual_phi, const Element& dual_a,
          const GroupParameter& x) const override {
    const auto& ce = *static_cast<const ComboE*>(dual_phi.payload.get());
    const auto& cf = *static_cast<const ComboF*>(dual_a.payload.get());
    cd acc = 0;
    for (std::size_t i = 0; i < ce.terms.size(); ++i)
      for (std::size_t j = 0; j < cf.terms.size(); ++j)
        acc += ce.coeff[i] * cf.coeff[j] *
               base_->pair(cf.terms[j], ce.terms[i], x);
    return acc;
  }

  std::optional<std::vector<OrbitMode>> orbit_modes(
      const Functional& dual_phi, const Element& dual_a) const override {
    const auto& ce = *static_cast<const ComboE*>(dual_phi.payload.get());
    const auto& cf = *static_cast<const ComboF*>(dual_a.payload.get());
    std::vector<OrbitMode> all;
    for (std::size_t i = 0; i < ce.terms.size(); ++i)
      for (std::size_t j = 0; j < cf.terms.size(); ++j) {
        auto m = base_->orbit_modes(cf.terms[j], ce.terms[i]);
        if (!m) return std::nullopt;
        const cd scale = ce.coeff[i] * cf.coeff[j];
        for (auto& mode : *m) {
          mode.weight *= scale;
          all.push_back(std::move(mode));
        }
      }
    return all;
  }

  Element combine(cd ca, const Element& a, cd cb, const Element& b) const override {
    auto c = std::make_shared<ComboF>(*static_cast<const ComboF*>(a.payload.get()));
    for (auto& w : c->coeff) w *= ca;
    const auto& cb_terms = *static_cast<const ComboF*>(b.payload.get());
    for (std::size_t i = 0; i < cb_terms.terms.size(); ++i) {
      c->coeff.push_back(cb * cb_terms.coeff[i]);
      c->terms.push_back(cb_terms.terms[i]);
    }
    Element e;
    e.model = this;
    e.payload = std::move(c);
    return e;
  }

  std::vector<Element> generator_elements() const override {
    std::vector<Element> out;
    for (const auto& phi : base_->functional_family()) out.push_back(lift(phi));
    return out;
  }
  std::vector<Functional> functional_family() const override {
    std::vector<Functional> out;
    for (const auto& a : base_->generator_elements()) out.push_back(lift(a));
    return out;
  }

 private:
  const Model* base_;
};

inline DualModel transpose_action(const Model& base) { return DualModel(base); }

// ---------------------------------------------------------------------------
// Annihilators
// ---------------------------------------------------------------------------

struct AnnihilatorBasis {
  // Each basis vector is a coefficient combination over the opposing family.
  std::vector<Eigen::VectorXcd> basis;
  int family_size = 0;
  int span_rank = 0;
};

namespace detail_duality {

inline AnnihilatorBasis null_space(const Eigen::MatrixXcd& pairing, int span_size) {
  AnnihilatorBasis out;
  out.family_size = static_cast<int>(pairing.cols());
  if (span_size == 0) {
    out.span_rank = 0;
    for (int j = 0; j < out.family_size; ++j) {
      Eigen::VectorXcd e = Eigen::VectorXcd::Zero(out.family_size);
      e(j) = 1;
      out.basis.push_back(std::move(e));
    }
    return out;
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(pairing,
                                         Eigen::ComputeFullU | Eigen::ComputeFullV);
  const double tol = 1e-10 * std::max(1.0, svd.singularValues()(0));
  int rank = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > tol) ++rank;
  if (rank < std::min<int>(span_size, out.family_size) && rank < span_size)
    throw RankDeficientFamily("annihilator: input span is linearly dependent");
  out.span_rank = rank;
  for (int j = rank; j < out.family_size; ++j) out.basis.push_back(svd.matrixV().col(j));
  return out;
}

}  // namespace detail_duality

// Annihilator of a span of elements inside a finite functional family: all
// combinations sum c_j phi_j with sum c_j phi_j(A_i) = 0 for every i.
inline AnnihilatorBasis annihilator(const Model& action,
                                    const std::vector<Element>& span,
                                    const std::vector<Functional>& family) {
  const GroupParameter origin(std::vector<double>(
      static_cast<std::size_t>(action.group_dim()), 0.0));
  Eigen::MatrixXcd pairing(static_cast<long>(span.size()),
                           static_cast<long>(family.size()));
  for (std::size_t i = 0; i < span.size(); ++i)
    for (std::size_t j = 0; j < family.size(); ++j)
      pairing(static_cast<long>(i), static_cast<long>(j)) =
          evaluate_pairing(action, family[j], span[i], origin);
  return detail_duality::null_space(pairing, static_cast<int>(span.size()));
}

// Annihilator of a span of functionals inside a finite element family.
inline AnnihilatorBasis annihilator(const Model& action,
                                    const std::vector<Functional>& span,
                                    const std::vector<Element>& family) {
  const GroupParameter origin(std::vector<double>(
      static_cast<std::size_t>(action.group_dim()), 0.0));
  Eigen::MatrixXcd pairing(static_cast<long>(span.size()),
                           static_cast<long>(family.size()));
  for (std::size_t i = 0; i < span.size(); ++i)
    for (std::size_t j = 0; j < family.size(); ++j)
      pairing(static_cast<long>(i), static_cast<long>(j)) =
          evaluate_pairing(action, span[i], family[j], origin);
  return detail_duality::null_space(pairing, static_cast<int>(span.size()));
}

// ---------------------------------------------------------------------------
// Orthogonality of spectral subspaces with disjoint supports
// ---------------------------------------------------------------------------

struct DualityConfig {
  ClassifyConfig classify;
  double tol_pair = 1e-6;
};

struct OrthogonalityReport {
  double max_violation = 0;
  int pairs_tested = 0;
  bool pass = true;
  std::vector<std::string> violating_pairs;
};

// For every configured functional with dual orbit support inside Delta and
// every element with support inside Delta', the pairing must vanish.
inline OrthogonalityReport check_orthogonality(const Model& action,
                                               const SupportSet& delta,
                                               const SupportSet& delta_prime,
                                               const DualityConfig& cfg) {
  if (delta.intersects(delta_prime,
                       std::max(delta.max_cell(), delta_prime.max_cell())))
    throw OverlapError("check_orthogonality: support sets intersect");
  SpectrumConfig scfg;
  scfg.window = cfg.classify.ladder.back();
  scfg.tau_rel = cfg.classify.tau_rel;
  scfg.taper_ratio = cfg.classify.taper_ratio;

  const auto elements = action.generator_elements();
  const auto functionals = action.functional_family();
  const DualModel dual(action);

  std::vector<const Functional*> in_delta;
  for (const auto& phi : functionals) {
    const SupportSet sp =
        element_spectrum(dual, dual.lift(phi), dual.functional_family(), scfg);
    if (!sp.empty() && sp.subset_of(delta, sp.max_cell())) in_delta.push_back(&phi);
  }
  std::vector<const Element*> in_prime;
  for (const auto& a : elements) {
    const SupportSet sp = element_spectrum(action, a, functionals, scfg);
    if (!sp.empty() && sp.subset_of(delta_prime, sp.max_cell())) in_prime.push_back(&a);
  }

  OrthogonalityReport rep;
  const GroupParameter origin(std::vector<double>(
      static_cast<std::size_t>(action.group_dim()), 0.0));
  for (const Functional* phi : in_delta)
    for (const Element* a : in_prime) {
      const double bound = action.functional_norm(*phi) * action.element_norm(*a);
      const double v = std::abs(evaluate_pairing(action, *phi, *a, origin));
      ++rep.pairs_tested;
      if (v > rep.max_violation) rep.max_violation = v;
      if (v > cfg.tol_pair * std::max(bound, 1e-30)) {
        rep.pass = false;
        rep.violating_pairs.push_back(phi->label + " | " + a->label);
      }
    }
  return rep;
}

// ---------------------------------------------------------------------------
// Necessary conditions for the pure-point/continuous splitting
// ---------------------------------------------------------------------------

struct EigenDimensions {
  std::vector<double> q;
  // Counts of eigen members of the declared (linearly independent) families;
  // the ranks of their pairing coordinates against the opposing family are
  // kept as diagnostics, since those coordinates need not be faithful.
  int dim_elements = 0;
  int dim_functionals = 0;
  int rank_elements = 0;
  int rank_functionals = 0;
};

struct NecessaryConditionsReport {
  std::vector<EigenDimensions> dimensions;  // part (a)
  bool part_a = true;
  bool part_b = true;
  bool part_c = true;
  std::string verdict;  // CONSISTENT or VIOLATED(part)
};

namespace detail_duality {

// Elements of `family` that are eigenvectors at frequency q: pure point with
// a single retained mass at q.  Returns the member indices.
template <typename Handle, typename LiftedModel, typename Lift>
std::vector<int> eigen_members(const LiftedModel& action, const std::vector<Handle>& family,
                               const std::vector<Functional>& opposing, const Lift& lift,
                               const std::vector<double>& q, const ClassifyConfig& cfg,
                               double cell) {
  std::vector<int> out;
  for (std::size_t i = 0; i < family.size(); ++i) {
    PointMassMap all;
    bool any_orbit = false;
    bool leaked = false;
    for (const auto& phi : opposing) {
      const auto pm = extract_point_masses(action, lift(family[i]), phi, cfg);
      for (const auto& [qk, c] : pm) {
        double dist = 0;
        for (std::size_t ax = 0; ax < qk.size(); ++ax)
          dist = std::max(dist, std::abs(qk[ax] - q[ax]));
        if (dist > 1.5 * cell) leaked = true;
        else any_orbit = true;
      }
      double sup = orbit_mass(action, lift(family[i]), phi, cfg.ladder.front()).sup;
      if (sup > cfg.abs_floor && pm.empty()) leaked = true;  // continuous content
    }
    if (any_orbit && !leaked) out.push_back(static_cast<int>(i));
  }
  return out;
}

inline int family_rank(const Eigen::MatrixXcd& coords) {
  if (coords.rows() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(coords);
  const double tol = 1e-10 * std::max(1.0, svd.singularValues()(0));
  int rank = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > tol) ++rank;
  return rank;
}

}  // namespace detail_duality

inline NecessaryConditionsReport check_necessary_conditions(
    const Model& action, const DualityConfig& cfg, std::vector<Element> elements,
    const std::vector<Functional>& functionals) {
  NecessaryConditionsReport rep;
  const DualModel dual(action);
  try {
    Element I = action.unit();
    bool present = false;
    for (const auto& e : elements)
      if (e.label == I.label) present = true;
    if (!present) elements.push_back(std::move(I));
  } catch (const NoSuchStructure&) {
  }
  std::vector<Element> lifted_functionals;
  for (const auto& phi : functionals) lifted_functionals.push_back(dual.lift(phi));
  std::vector<Functional> lifted_elements;
  for (const auto& a : elements) lifted_elements.push_back(dual.lift(a));
  const ClassifyConfig& ccfg = cfg.classify;
  const CuboidWindow& big = ccfg.ladder.back();
  double cell = 0;
  for (int ax = 0; ax < big.dim(); ++ax)
    cell = std::max(cell, kTwoPi / (big.nodes(ax) *
                                    big.steps[static_cast<std::size_t>(ax)]));

  // Collect candidate point frequencies from both sides.
  std::vector<std::vector<double>> qs;
  auto add_q = [&](const std::vector<double>& q) {
    for (const auto& k : qs) {
      double dist = 0;
      for (std::size_t ax = 0; ax < q.size(); ++ax)
        dist = std::max(dist, std::abs(k[ax] - q[ax]));
      if (dist < 1.5 * cell) return;
    }
    qs.push_back(q);
  };
  for (const auto& a : elements)
    for (const auto& phi : functionals)
      for (const auto& [q, c] : extract_point_masses(action, a, phi, ccfg)) add_q(q);
  for (const auto& lf : lifted_functionals)
    for (const auto& da : lifted_elements)
      for (const auto& [q, c] : extract_point_masses(dual, lf, da, ccfg)) add_q(q);
  std::sort(qs.begin(), qs.end());

  // Part (a): eigen-space dimension counts per frequency.
  const GroupParameter origin(std::vector<double>(
      static_cast<std::size_t>(action.group_dim()), 0.0));
  for (const auto& q : qs) {
    EigenDimensions dims;
    dims.q = q;
    const auto eidx = detail_duality::eigen_members(
        action, elements, functionals, [](const Element& e) { return e; }, q, ccfg,
        cell);
    const auto fidx = detail_duality::eigen_members(
        dual, functionals, lifted_elements,
        [&](const Functional& f) { return dual.lift(f); }, q, ccfg, cell);
    // Rank via pairing coordinates against the opposing family.
    Eigen::MatrixXcd ec(static_cast<long>(eidx.size()),
                        static_cast<long>(functionals.size()));
    for (std::size_t r = 0; r < eidx.size(); ++r)
      for (std::size_t j = 0; j < functionals.size(); ++j)
        ec(static_cast<long>(r), static_cast<long>(j)) = evaluate_pairing(
            action, functionals[j], elements[static_cast<std::size_t>(
                                        eidx[r])], origin);
    Eigen::MatrixXcd fc(static_cast<long>(fidx.size()),
                        static_cast<long>(elements.size()));
    for (std::size_t r = 0; r < fidx.size(); ++r)
      for (std::size_t j = 0; j < elements.size(); ++j)
        fc(static_cast<long>(r), static_cast<long>(j)) = evaluate_pairing(
            action, functionals[static_cast<std::size_t>(fidx[r])], elements[j],
            origin);
    dims.rank_elements = detail_duality::family_rank(ec);
    dims.rank_functionals = detail_duality::family_rank(fc);
    dims.dim_elements = static_cast<int>(eidx.size());
    dims.dim_functionals = static_cast<int>(fidx.size());
    if (dims.dim_elements < dims.dim_functionals) rep.part_a = false;
    rep.dimensions.push_back(std::move(dims));
  }

  // Part (b): the annihilator of the eigen-elements must consist of
  // continuous-classified functionals and vice versa (family-relative).
  {
    std::vector<Element> pp_elements;
    for (const auto& q : qs) {
      const auto eidx = detail_duality::eigen_members(
          action, elements, functionals, [](const Element& e) { return e; }, q, ccfg,
          cell);
      for (int i : eidx) pp_elements.push_back(elements[static_cast<std::size_t>(i)]);
    }
    if (!pp_elements.empty()) {
      try {
        const AnnihilatorBasis ann = annihilator(action, pp_elements, functionals);
        for (const auto& vec : ann.basis) {
          Element combo = dual.lift(functionals[0]);
          bool first = true;
          for (std::size_t j = 0; j < functionals.size(); ++j) {
            if (std::abs(vec(static_cast<long>(j))) < 1e-12) continue;
            Element term = dual.lift(functionals[j]);
            combo = first ? dual.combine(vec(static_cast<long>(j)), term, 0.0, term)
                          : dual.combine(1.0, combo, vec(static_cast<long>(j)), term);
            first = false;
          }
          if (first) continue;
          const Classification cls = classify_element(dual, combo, lifted_elements, ccfg);
          if (!cls.point_masses.empty()) rep.part_b = false;
        }
      } catch (const RankDeficientFamily&) {
        // Dependent eigen-families: counted through ranks in part (a).
      }
    }
  }

  // Part (c): every dual point frequency must appear on the primal side.
  for (const auto& dims : rep.dimensions)
    if (dims.dim_functionals > 0 && dims.dim_elements == 0) rep.part_c = false;

  rep.verdict = rep.part_a && rep.part_b && rep.part_c ? "CONSISTENT"
                : !rep.part_a                          ? "VIOLATED(a)"
                : !rep.part_b                          ? "VIOLATED(b)"
                                                       : "VIOLATED(c)";
  return rep;
}

inline NecessaryConditionsReport check_necessary_conditions(const Model& action,
                                                            const DualityConfig& cfg) {
  return check_necessary_conditions(action, cfg, action.generator_elements(),
                                    action.functional_family());
}

// ---------------------------------------------------------------------------
// The sufficient-condition decomposition
// ---------------------------------------------------------------------------

struct DecompositionResult {
  Functional omega0;
  Element unit;
  struct GeneratorCheck {
    std::string label;
    bool passed = true;
    std::string failure;
  };
  std::vector<GeneratorCheck> hypothesis;
  SupportSet sp_c_primal, sp_c_dual;
  bool spectra_match = false;

  // P_pp(A) = omega0(A) I and P_c = id - P_pp; complementary by construction.
  Element p_pp(const Model& action, const Element& a) const {
    const GroupParameter origin(std::vector<double>(
        static_cast<std::size_t>(action.group_dim()), 0.0));
    const cd w = evaluate_pairing(action, omega0, a, origin);
    return action.combine(w, unit, 0.0, unit);
  }
  Element p_c(const Model& action, const Element& a) const {
    const GroupParameter origin(std::vector<double>(
        static_cast<std::size_t>(action.group_dim()), 0.0));
    const cd w = evaluate_pairing(action, omega0, a, origin);
    return action.combine(1.0, a, -w, unit);
  }
};

inline DecompositionResult build_decomposition(const Model& action,
                                               const Functional& omega0,
                                               const Element& unit,
                                               const DualityConfig& cfg,
                                               const std::vector<Element>& generators,
                                               const std::vector<Functional>& functionals) {
  if (!omega0.is_state)
    throw NotAState("build_decomposition: omega0 must be a state");
  const GroupParameter origin(std::vector<double>(
      static_cast<std::size_t>(action.group_dim()), 0.0));
  if (std::abs(evaluate_pairing(action, omega0, unit, origin) - cd(1)) > 1e-12)
    throw NotAState("build_decomposition: omega0(I) != 1");

  DecompositionResult res;
  res.omega0 = omega0;
  res.unit = unit;

  const ClassifyConfig& ccfg = cfg.classify;

  std::vector<Element> centered;
  for (const auto& g : generators) {
    const cd w = evaluate_pairing(action, omega0, g, origin);
    Element a = action.combine(1.0, g, -w, unit);
    a.label = g.label + "-w(" + g.label + ")I";
    const Classification cls = classify_element(action, a, functionals, ccfg);
    DecompositionResult::GeneratorCheck chk;
    chk.label = g.label;
    double sup = 0;
    for (const auto& phi : functionals)
      sup = std::max(sup, orbit_mass(action, a, phi, ccfg.ladder.front()).sup);
    if (sup < ccfg.abs_floor) {
      // The centered generator vanishes: trivially continuous.
      res.hypothesis.push_back(std::move(chk));
      continue;
    }
    if (!cls.in_continuous) {
      chk.passed = false;
      if (!cls.point_masses.empty()) {
        const auto& q = cls.point_masses.begin()->first;
        std::string qs = "(";
        for (std::size_t ax = 0; ax < q.size(); ++ax)
          qs += (ax ? "," : "") + format_double(q[ax]);
        chk.failure = "point mass at q=" + qs + ")";
      } else {
        chk.failure = "probe averages do not vanish";
      }
      res.hypothesis.push_back(chk);
      throw HypothesisFailed("kernel of the state is not continuous: generator " +
                             g.label + ", " + chk.failure);
    }
    res.hypothesis.push_back(std::move(chk));
    centered.push_back(std::move(a));
  }

  // Continuous spectra on both sides of the pairing must agree.
  ComponentSpectra primal = component_spectra(action, centered, functionals, ccfg);
  const DualModel dual(action);
  std::vector<Functional> lifted_gens;
  for (const auto& g : generators) lifted_gens.push_back(dual.lift(g));
  std::vector<Element> dual_centered;
  for (const auto& phi : functionals) {
    const cd w = evaluate_pairing(action, phi, unit, origin);
    Element lifted = dual.lift(phi);
    Element omega_lifted = dual.lift(omega0);
    Element c = dual.combine(1.0, lifted, -w, omega_lifted);
    c.label = phi.label + "-phi(I)w0";
    double sup = 0;
    for (const auto& psi : lifted_gens)
      sup = std::max(sup, orbit_mass(dual, c, psi, ccfg.ladder.front()).sup);
    if (sup >= ccfg.abs_floor) dual_centered.push_back(std::move(c));
  }
  ComponentSpectra dual_sp = component_spectra(dual, dual_centered, lifted_gens, ccfg);
  res.sp_c_primal = primal.c;
  res.sp_c_dual = dual_sp.c;
  const double pad = std::max(primal.c.max_cell(), dual_sp.c.max_cell());
  res.spectra_match = primal.c.subset_of(dual_sp.c, pad) &&
                      dual_sp.c.subset_of(primal.c, pad);
  return res;
}

inline DecompositionResult build_decomposition(const Model& action,
                                               const Functional& omega0,
                                               const Element& unit,
                                               const DualityConfig& cfg) {
  return build_decomposition(action, omega0, unit, cfg, action.generator_elements(),
                             action.functional_family());
}

}  // namespace arveson

#endif  // ARVESON_DUALITY_HPP
