#ifndef ARVESON_QFT_HPP
#define ARVESON_QFT_HPP

#include <functional>
#include <string>
#include <vector>

#include "arveson/fourier.hpp"
#include "arveson/models/lattice_model.hpp"

namespace arveson {

// ---------------------------------------------------------------------------
// Time smearings
// ---------------------------------------------------------------------------

// A time-smearing g represented by its transfer function
//   s(D) = int g(t) e^{iDt} dt,
// which is how it acts on lattice kernels; s(0) = 1 means int g = 1.
struct Smearing {
  std::string label;
  double l1_norm = 1;                  // ||g||_1
  double support_lo = 0, support_hi = 0;  // declared numerical support of s
  std::function<cd(double)> transfer;

  cd operator()(double d) const { return transfer(d); }
};

// Gaussian g with int g = 1 and transfer e^{-D^2/(2 sigma^2)}, sigma = mu/7,
// so the transfer mass outside (-mu, mu) is below 1e-10.
inline Smearing gaussian_smearing(double mu, double scale = 1.0) {
  if (!(mu > 0)) throw InvalidConfig("gaussian_smearing: mu must be positive");
  Smearing s;
  s.label = scale == 1.0 ? "gauss(mu=" + format_double(mu) + ")"
                         : format_double(scale) + "*gauss(mu=" + format_double(mu) + ")";
  s.l1_norm = std::abs(scale);
  s.support_lo = -mu;
  s.support_hi = mu;
  const double sigma = mu / 7.0;
  s.transfer = [sigma, scale](double d) { return cd(scale * std::exp(-d * d / (2 * sigma * sigma))); };
  return s;
}

namespace detail_qft {

// C-infinity step: 0 for x <= a, 1 for x >= b.
inline double smooth_step(double x, double a, double b) {
  if (x <= a) return 0.0;
  if (x >= b) return 1.0;
  const double u = (x - a) / (b - a);
  const double sa = std::exp(-1.0 / u);
  const double sb = std::exp(-1.0 / (1.0 - u));
  return sa / (sa + sb);
}

inline void verify_transfer_support(const Smearing& g, double lo, double hi,
                                    double range, const std::string& what) {
  double leak = 0;
  const int nn = 400;
  for (int i = 0; i <= nn; ++i) {
    const double d = -range + 2 * range * i / nn;
    if (d > lo && d < hi) continue;
    leak = std::max(leak, std::abs(g.transfer(d)));
  }
  if (leak > 1e-10 * std::max(1.0, g.l1_norm))
    throw BadSmearing(what + ": transfer mass " + format_double(leak) +
                      " outside (" + format_double(lo) + ", " + format_double(hi) + ")");
}

}  // namespace detail_qft

// ---------------------------------------------------------------------------
// Bounded-energy state family
// ---------------------------------------------------------------------------

// A small family of smeared Fock vectors standing in for the bounded-energy
// states: vacuum, a plane wave at theta = pi/2, smooth one-particle bumps,
// and a two-particle combination.
inline std::vector<Functional> energy_family(const LatticeModel& lat) {
  std::vector<Functional> out;
  out.push_back(lat.vacuum_state());
  out.push_back(lat.plane_wave_state(lat.quarter_mode()));
  const Eigen::VectorXcd gp = lat.gaussian_profile(kPi / 2, 0.3);
  const Eigen::VectorXcd gm = lat.gaussian_profile(-kPi / 2, 0.3);
  out.push_back(lat.one_particle_state(gp, "1p+"));
  out.push_back(lat.one_particle_state(gm, "1p-"));
  out.push_back(lat.two_particle_state(gp, gm, "2p"));
  return out;
}

// ---------------------------------------------------------------------------
// ||C||_{E,1} and the asymptotic functional
// ---------------------------------------------------------------------------

struct SeminormResult {
  double value = 0;
  std::string achieving;
};

// sup over the family of sum_n |omega(beta_n(C))|.  On the torus the sum runs
// over one full period; a non-centered kernel contributes a constant per-site
// value whose infinite-volume sum diverges, reported as TailNotSummable.
inline SeminormResult seminorm_E1(const LatticeModel& lat, const Element& c,
                                  const std::vector<Functional>& family) {
  if (family.empty()) throw InvalidConfig("seminorm_E1: empty state family");
  const auto& obs = LatticeModel::obs_of(c);
  if (!obs.centered())
    throw TailNotSummable("||C||_{E,1} = inf (empirical): " + c.label +
                          " has a constant per-site value");
  SeminormResult out;
  for (const auto& phi : family) {
    if (phi.energy_bound && *phi.energy_bound > lat.energy_max() + 1e-9)
      throw InvalidConfig("seminorm_E1: state " + phi.label +
                          " exceeds the energy bound");
    double acc = 0;
    for (const cd& v : lat.site_orbit(phi, c)) acc += std::abs(v);
    if (acc > out.value) {
      out.value = acc;
      out.achieving = phi.label;
    }
  }
  return out;
}

// sigma^(t)_omega(C) = sum_n omega(alpha_{(t,n)}(C)), evaluated through the
// exact site-summed mode list.
inline cd asymptotic_functional(const LatticeModel& lat, const Functional& omega,
                                const Element& c, double t) {
  const auto& obs = LatticeModel::obs_of(c);
  if (!obs.centered())
    throw TailNotSummable("asymptotic functional: " + c.label + " is not centered");
  cd acc = 0;
  for (const auto& [d, w] : lat.site_summed_modes(omega, c))
    acc += w * std::polar(1.0, d * t);
  return acc;
}

// ---------------------------------------------------------------------------
// Condition T
// ---------------------------------------------------------------------------

struct ConditionTReport {
  struct Entry {
    std::string state;
    double lhs = 0;      // sum_n omega(beta_n(T00(g)))
    double rhs = 0;      // omega(H)
    double residual = 0;
  };
  std::vector<Entry> entries;
  bool pass = true;
};

inline ConditionTReport check_condition_T(const LatticeModel& lat, const Smearing& g,
                                          const std::vector<Functional>& family) {
  if (std::abs(g.transfer(0.0) - cd(1)) > 1e-10)
    throw BadSmearing("condition T: int g dt != 1");
  detail_qft::verify_transfer_support(g, -lat.mu(), lat.mu(), 2 * lat.omega_max() + 1,
                                      "condition T");
  const Element t00g = lat.smear(lat.energy_density(0), g.transfer, "T00(g)");
  const Element h = lat.hamiltonian();
  const GroupParameter origin(std::vector<double>(
      static_cast<std::size_t>(lat.group_dim()), 0.0));
  ConditionTReport rep;
  for (const auto& omega : family) {
    ConditionTReport::Entry e;
    e.state = omega.label;
    cd lhs = 0;
    for (const cd& v : lat.site_orbit(omega, t00g)) lhs += v;
    e.lhs = lhs.real();
    e.rhs = evaluate_pairing(lat, omega, h, origin).real();
    e.residual = std::abs(lhs - cd(e.rhs));
    if (e.residual > 1e-8 * (1 + std::abs(e.rhs))) rep.pass = false;
    rep.entries.push_back(std::move(e));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Condition L1
// ---------------------------------------------------------------------------

struct ConditionL1Report {
  struct Entry {
    std::string element, smearing;
    double seminorm = 0;
    double bound = 0;  // ||R^l A R^l|| surrogate * ||g||_1
    double ratio = 0;
  };
  std::vector<Entry> entries;
  double fitted_c = 0;  // max ratio over the scan
  bool all_finite = true;
};

namespace detail_qft {

// Surrogate for ||R^l A R^l||, R = (1+H)^{-1}: kernel entries are damped by
// the resolvent weights of the modes they create or annihilate, then run
// through the model's norm bound.
inline Element resolvent_compressed(const LatticeModel& lat, const Element& a, int l) {
  LatticeObservable o = LatticeModel::obs_of(a);
  const int n = lat.n_modes();
  auto wgt = [&](double w) { return std::pow(1.0 + w, -l); };
  for (int j = 0; j < n; ++j) {
    o.u(j) *= wgt(lat.omega(j));
    o.v(j) *= wgt(lat.omega(j));
    for (int k = 0; k < n; ++k) {
      const double pw = wgt(lat.omega(j)) * wgt(lat.omega(k));
      o.K(j, k) *= pw;
      o.M(j, k) *= pw;
      o.Nn(j, k) *= pw;
    }
  }
  return lat.element(std::move(o), "R^l " + a.label + " R^l");
}

}  // namespace detail_qft

inline ConditionL1Report check_condition_L1(const LatticeModel& lat,
                                            const std::vector<Smearing>& smearings,
                                            const std::vector<Functional>& family,
                                            const std::vector<Element>& elements,
                                            int l = 2) {
  ConditionL1Report rep;
  for (const auto& g : smearings)
    detail_qft::verify_transfer_support(g, -lat.mu(), lat.mu(),
                                        2 * lat.omega_max() + 1, "condition L1");
  for (const auto& a : elements) {
    const double norm_bound =
        lat.element_norm(detail_qft::resolvent_compressed(lat, a, l));
    for (const auto& g : smearings) {
      const Element ag = lat.smear(a, g.transfer, a.label + "(" + g.label + ")");
      ConditionL1Report::Entry e;
      e.element = a.label;
      e.smearing = g.label;
      e.seminorm = seminorm_E1(lat, ag, family).value;
      e.bound = norm_bound * g.l1_norm;
      e.ratio = e.seminorm / std::max(e.bound, 1e-300);
      rep.fitted_c = std::max(rep.fitted_c, e.ratio);
      rep.entries.push_back(std::move(e));
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// The sc-triviality splitting
// ---------------------------------------------------------------------------

struct ScSplitReport {
  Element minus, plus, zero;
  bool partition_exact = false;         // f- + f+ + f0 = 1 on every transfer
  bool minus_energy_decreasing = false;
  bool plus_star_energy_decreasing = false;
  double max_l2 = 0;                    // largest spatial L2 sum over the family
  SupportSet minus_spectrum, plus_star_spectrum;
};

namespace detail_qft {

// Exact energy-momentum support from the mode list, binned onto a coarse
// (p0, p1) grid; avoids window broadening that would swamp the mu/2 gap.
inline SupportSet mode_support(const LatticeModel& spacetime, const Element& a,
                               const std::vector<Functional>& functionals,
                               double cell0, double cell1, double tau_rel) {
  std::map<std::pair<long, long>, double> bins;
  double wmax = 0;
  for (const auto& phi : functionals) {
    const auto modes = spacetime.orbit_modes(phi, a);
    if (!modes) continue;
    for (const auto& m : *modes) {
      // p_a = sig_a * freq_a with signature (+1, -1).
      const long i0 = std::lround(m.freq[0] / cell0);
      const long i1 = std::lround(-m.freq[1] / cell1);
      const double w = bins[{i0, i1}] += std::abs(m.weight);
      wmax = std::max(wmax, w);
    }
  }
  SupportSet out;
  out.threshold = tau_rel;
  out.cell = {cell0, cell1};
  for (const auto& [idx, w] : bins) {
    if (w < tau_rel * wmax) continue;
    FreqBox b;
    b.lo = {idx.first * cell0 - cell0 / 2, idx.second * cell1 - cell1 / 2};
    b.hi = {idx.first * cell0 + cell0 / 2, idx.second * cell1 + cell1 / 2};
    out.boxes.push_back(std::move(b));
  }
  out.normalize();
  return out;
}

inline bool energy_decreasing(const SupportSet& sp) {
  const double pad = sp.max_cell() / 2;
  for (const auto& b : sp.boxes) {
    const double minabs =
        (b.lo[1] <= 0 && 0 <= b.hi[1]) ? 0 : std::min(std::abs(b.lo[1]), std::abs(b.hi[1]));
    if (b.hi[0] + pad >= minabs) return false;
  }
  return !sp.empty();
}

}  // namespace detail_qft

inline ScSplitReport sc_triviality_split(const LatticeModel& lat, const Element& a,
                                         double energy, double mu) {
  if (lat.axes() != LatticeModel::Axes::Spacetime)
    throw InvalidConfig("sc_triviality_split: needs the spacetime action");
  if (!(energy >= mu)) throw BadPartition("sc split: energy bound below mu");
  if (2 * energy < 2 * lat.omega_max())
    throw BadPartition("sc split: energy bound below the kernel transfer range");
  if (!LatticeModel::obs_of(a).centered())
    throw BadPartition("sc split: element is not centered");

  auto eta = [mu](double x) { return detail_qft::smooth_step(x, mu / 2, mu); };
  Smearing fplus, fminus, fzero;
  fplus.label = "f+";
  fplus.transfer = [eta](double d) { return cd(eta(d)); };
  fplus.support_lo = mu / 2;
  fplus.support_hi = 1e300;
  fminus.label = "f-";
  fminus.transfer = [eta](double d) { return cd(eta(-d)); };
  fzero.label = "f0";
  fzero.transfer = [eta](double d) { return cd(1.0 - eta(d) - eta(-d)); };

  // Support leak checks on a grid over the occurring transfer range.
  {
    const double range = 2 * lat.omega_max() + 1;
    double leak = 0;
    const int nn = 400;
    for (int i = 0; i <= nn; ++i) {
      const double d = -range + 2 * range * i / nn;
      if (std::abs(d) >= mu) leak = std::max(leak, std::abs(fzero.transfer(d)));
      if (d >= -mu / 2) leak = std::max(leak, std::abs(fminus.transfer(d)));
      if (d <= mu / 2) leak = std::max(leak, std::abs(fplus.transfer(d)));
    }
    if (leak > 1e-10) throw BadPartition("sc split: partition support leaks");
  }

  ScSplitReport rep;
  rep.minus = lat.smear(a, fminus.transfer, a.label + "(f-)");
  rep.plus = lat.smear(a, fplus.transfer, a.label + "(f+)");
  rep.zero = lat.smear(a, fzero.transfer, a.label + "(f0)");

  // Partition identity on the kernel.
  {
    const auto& oa = LatticeModel::obs_of(a);
    const auto& om = LatticeModel::obs_of(rep.minus);
    const auto& op = LatticeModel::obs_of(rep.plus);
    const auto& oz = LatticeModel::obs_of(rep.zero);
    double diff = std::abs(om.c0 + op.c0 + oz.c0 - oa.c0);
    diff = std::max(diff, (om.u + op.u + oz.u - oa.u).cwiseAbs().maxCoeff());
    diff = std::max(diff, (om.v + op.v + oz.v - oa.v).cwiseAbs().maxCoeff());
    diff = std::max(diff, (om.K + op.K + oz.K - oa.K).cwiseAbs().maxCoeff());
    diff = std::max(diff, (om.M + op.M + oz.M - oa.M).cwiseAbs().maxCoeff());
    diff = std::max(diff, (om.Nn + op.Nn + oz.Nn - oa.Nn).cwiseAbs().maxCoeff());
    double scale = std::max({std::abs(oa.c0), oa.u.cwiseAbs().maxCoeff(),
                             oa.v.cwiseAbs().maxCoeff(), oa.K.cwiseAbs().maxCoeff(),
                             oa.M.cwiseAbs().maxCoeff(), oa.Nn.cwiseAbs().maxCoeff()});
    rep.partition_exact = diff <= 1e-10 * std::max(1.0, scale);
  }

  // Energy-decreasing flags from exact mode supports.
  {
    const auto functionals = lat.functional_family();
    const double cell0 = 0.05, cell1 = kPi / 16;
    rep.minus_spectrum =
        detail_qft::mode_support(lat, rep.minus, functionals, cell0, cell1, 1e-9);
    rep.plus_star_spectrum = detail_qft::mode_support(lat, lat.star(rep.plus),
                                                      functionals, cell0, cell1, 1e-9);
    rep.minus_energy_decreasing = detail_qft::energy_decreasing(rep.minus_spectrum);
    rep.plus_star_energy_decreasing =
        detail_qft::energy_decreasing(rep.plus_star_spectrum);
  }

  // Spatial L2 sums of the components over the family.
  for (const auto& omega : energy_family(lat)) {
    for (const Element* comp : {&rep.minus, &rep.plus, &rep.zero}) {
      double acc = 0;
      for (const cd& v : lat.site_orbit(omega, *comp)) acc += std::norm(v);
      rep.max_l2 = std::max(rep.max_l2, acc);
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Existence-of-particles bound
// ---------------------------------------------------------------------------

struct ParticleBoundReport {
  double omega_h = 0;
  double epsilon = 0;
  double min_abs_sigma = 0;
  bool pass = false;
};

inline ParticleBoundReport check_particle_bound(const LatticeModel& lat,
                                                const Functional& omega,
                                                const Element& c, const Smearing& g,
                                                double epsilon, int t_points = 64) {
  const Element h = lat.hamiltonian();
  const GroupParameter origin(std::vector<double>(
      static_cast<std::size_t>(lat.group_dim()), 0.0));
  ParticleBoundReport rep;
  rep.omega_h = evaluate_pairing(lat, omega, h, origin).real();
  rep.epsilon = epsilon;
  if (!(rep.omega_h > 0))
    throw EpsilonTooLarge("particle bound: omega(H) must be positive");
  if (epsilon > rep.omega_h / 2 + 1e-12)
    throw EpsilonTooLarge("particle bound: epsilon exceeds omega(H)/2");
  const Element t00g = lat.smear(lat.energy_density(0), g.transfer, "T00(g)");
  const Element diff = lat.combine(1.0, t00g, -1.0, c);
  const double sn = seminorm_E1(lat, diff, {omega}).value;
  if (sn > epsilon + 1e-10)
    throw EpsilonTooLarge("particle bound: ||T00(g) - C||_{E,1} = " +
                          format_double(sn) + " exceeds epsilon");
  const double period = kTwoPi / lat.mass();
  rep.min_abs_sigma = 1e300;
  for (int i = 0; i < t_points; ++i) {
    const double t = period * i / t_points;
    rep.min_abs_sigma =
        std::min(rep.min_abs_sigma, std::abs(asymptotic_functional(lat, omega, c, t)));
  }
  rep.pass = rep.min_abs_sigma >= rep.omega_h / 2 - 1e-10;
  return rep;
}

// ---------------------------------------------------------------------------
// Buchholz regularity scan
// ---------------------------------------------------------------------------

struct RegularityReport {
  struct Entry {
    std::string label;
    double value = 0;    // sup over family of sum_theta |theta|^{2+eps} |A~(theta)|^2
    double refined = 0;  // same on the doubled momentum grid
    double rel_change = 0;
    bool stable = false;
  };
  std::vector<Entry> entries;
  bool all_stable = true;
};

namespace detail_qft {

inline double regularity_value(const LatticeModel& lat, const Element& a,
                               const std::vector<Functional>& family, double eps) {
  const int n = lat.n_modes();
  double best = 0;
  for (const auto& omega : family) {
    const std::vector<cd> sites = lat.site_orbit(omega, a);
    double acc = 0;
    for (int d = 0; d < n; ++d) {
      // A~(theta) = sum_m e^{-i theta m} beta_m(A): a Fourier series over the
      // sites, so its value converges pointwise under grid refinement.
      cd ft = 0;
      for (int m = 0; m < n; ++m)
        ft += sites[static_cast<std::size_t>(m)] *
              std::polar(1.0, -kTwoPi * d * m / n);
      acc += std::pow(std::abs(lat.theta(d)), 2.0 + eps) * std::norm(ft) * (kTwoPi / n);
    }
    best = std::max(best, acc);
  }
  return best;
}

}  // namespace detail_qft

inline RegularityReport buchholz_regularity_scan(
    const LatticeModel& lat,
    const std::vector<std::function<Element(const LatticeModel&)>>& elements,
    const std::vector<std::function<Functional(const LatticeModel&)>>& family,
    double eps) {
  LatticeParams refined_params;
  refined_params.mass = lat.mass();
  refined_params.n_modes = 2 * lat.n_modes();
  refined_params.energy_max = lat.energy_max();
  refined_params.mu = lat.mu();
  const LatticeModel refined(refined_params);

  RegularityReport rep;
  for (const auto& make : elements) {
    const Element a = make(lat);
    if (!LatticeModel::obs_of(a).centered())
      throw InvalidConfig("regularity scan: element " + a.label + " is not centered");
    RegularityReport::Entry e;
    e.label = a.label;
    std::vector<Functional> fam, fam2;
    for (const auto& mk : family) {
      fam.push_back(mk(lat));
      fam2.push_back(mk(refined));
    }
    e.value = detail_qft::regularity_value(lat, a, fam, eps);
    e.refined = detail_qft::regularity_value(refined, make(refined), fam2, eps);
    e.rel_change = std::abs(e.refined - e.value) / std::max(e.value, 1e-30);
    // Values at rounding level carry no scale of their own: stable.
    e.stable = e.rel_change < 0.05 || std::max(e.value, e.refined) < 1e-10;
    if (!e.stable) rep.all_stable = false;
    rep.entries.push_back(std::move(e));
  }
  return rep;
}

}  // namespace arveson

#endif  // ARVESON_QFT_HPP
