#ifndef ARVESON_MODELS_LATTICE_MODEL_HPP
#define ARVESON_MODELS_LATTICE_MODEL_HPP

#include <Eigen/Dense>

#include <functional>
#include <memory>
#include <vector>

#include "arveson/core.hpp"

namespace arveson {

// Quasi-free harmonic chain on Z_N (periodic, N momentum modes), mass m > 0,
// dispersion w(theta) = sqrt(m^2 + 4 sin^2(theta/2)) over the torus grid
// theta_j = 2*pi*j/N.  Spacetime translations act on ladder operators by
//   alpha_{(t,n)}(a+_j) = exp(i(w_j t - theta_j n)) a+_j,
// the Minkowski product being px = p0 x0 - p1 x1.
//
// Observables are normal-ordered quadratic polynomials
//   A = c0 + sum u_j a+_j + sum v_j a_j
//          + sum K_{jk} a+_j a_k + sum M_{jk} a+_j a+_k + sum Nn_{jk} a_j a_k
// (M, Nn stored symmetric).  Functionals are <Psi| . |Phi> for Fock vectors
// with at most two particles; this sector cutoff is exact for pairings of
// quadratic observables against such vectors.

struct LatticeObservable {
  cd c0{0.0};
  Eigen::VectorXcd u, v;
  Eigen::MatrixXcd K, M, Nn;

  static LatticeObservable zero(int n_modes) {
    LatticeObservable o;
    o.u = Eigen::VectorXcd::Zero(n_modes);
    o.v = Eigen::VectorXcd::Zero(n_modes);
    o.K = Eigen::MatrixXcd::Zero(n_modes, n_modes);
    o.M = Eigen::MatrixXcd::Zero(n_modes, n_modes);
    o.Nn = Eigen::MatrixXcd::Zero(n_modes, n_modes);
    return o;
  }
  bool centered(double tol = 1e-12) const { return std::abs(c0) <= tol; }
  void symmetrize() {
    M = ((M + M.transpose()) / 2.0).eval();
    Nn = ((Nn + Nn.transpose()) / 2.0).eval();
  }
};

// Fock vector with particle number <= 2; `two` is stored symmetric, the state
// being sum_{jk} two_{jk} a+_j a+_k |0>.
struct FockVector {
  cd vac{0.0};
  Eigen::VectorXcd one;
  Eigen::MatrixXcd two;

  static FockVector zero(int n_modes) {
    FockVector f;
    f.one = Eigen::VectorXcd::Zero(n_modes);
    f.two = Eigen::MatrixXcd::Zero(n_modes, n_modes);
    return f;
  }
  static FockVector vacuum(int n_modes) {
    FockVector f = zero(n_modes);
    f.vac = 1.0;
    return f;
  }
};

inline cd fock_inner(const FockVector& a, const FockVector& b) {
  cd acc = std::conj(a.vac) * b.vac;
  acc += a.one.dot(b.one);  // Eigen dot conjugates the left argument
  acc += 2.0 * (a.two.conjugate().cwiseProduct(b.two)).sum();
  return acc;
}
inline double fock_norm(const FockVector& a) {
  return std::sqrt(std::abs(fock_inner(a, a)));
}

// Normal-ordered quadratic observable applied to a <=2 particle vector,
// truncated back to <=2 particles.  The truncation is exact for pairings
// against <=2 particle bra vectors (the dropped sectors are orthogonal).
inline FockVector fock_apply(const LatticeObservable& o, const FockVector& f) {
  const int n = static_cast<int>(f.one.size());
  FockVector r = FockVector::zero(n);
  r.vac = o.c0 * f.vac + o.v.cwiseProduct(f.one).sum() +
          2.0 * (o.Nn.cwiseProduct(f.two)).sum();
  r.one = o.c0 * f.one + o.u * f.vac + o.K * f.one + 2.0 * (f.two * o.v);
  Eigen::MatrixXcd two = o.c0 * f.two + o.M * f.vac;
  two += o.K * f.two + f.two * o.K.transpose();
  const Eigen::MatrixXcd uf = o.u * f.one.transpose();
  two += (uf + uf.transpose()) / 2.0;
  r.two = std::move(two);
  return r;
}

struct LatticeFunctionalPayload {
  FockVector bra, ket;
};

struct LatticeParams {
  double mass = 1.0;
  int n_modes = 256;
  double energy_max = 3.0;
  double mu = 0.5;  // low-frequency smearing bound, default mass/2
};

class LatticeModel final : public Model {
 public:
  enum class Axes { Spacetime, TimeOnly, SpaceOnly };

  struct Core {
    LatticeParams p;
    Eigen::VectorXd theta;   // canonical branch in (-pi, pi]
    Eigen::VectorXd omega;
    double omega_max = 0;
  };

  explicit LatticeModel(const LatticeParams& p)
      : core_(std::make_shared<Core>()), axes_(Axes::Spacetime) {
    if (!(p.mass > 0)) throw InvalidConfig("lattice model: mass must be positive");
    if (p.n_modes < 256) throw InvalidConfig("lattice model: torus grid must have >= 256 nodes");
    if (p.n_modes % 4 != 0)
      throw InvalidConfig("lattice model: torus grid must be divisible by 4");
    if (!(p.mu > 0 && p.mu < p.mass))
      throw InvalidConfig("lattice model: mu must lie in (0, mass)");
    if (!(p.energy_max >= p.mu))
      throw InvalidConfig("lattice model: energy bound below mu");
    auto& c = *core_;
    c.p = p;
    const int n = p.n_modes;
    c.theta.resize(n);
    c.omega.resize(n);
    for (int j = 0; j < n; ++j) {
      double th = kTwoPi * j / n;
      if (th > kPi + 1e-12) th -= kTwoPi;
      c.theta(j) = th;
      c.omega(j) = std::sqrt(p.mass * p.mass + 4 * std::pow(std::sin(th / 2), 2));
    }
    c.omega_max = c.omega.maxCoeff();
    time_view_.reset(new LatticeModel(core_, Axes::TimeOnly));
    space_view_.reset(new LatticeModel(core_, Axes::SpaceOnly));
  }

  int n_modes() const { return core_->p.n_modes; }
  double mass() const { return core_->p.mass; }
  double mu() const { return core_->p.mu; }
  double energy_max() const { return core_->p.energy_max; }
  double theta(int j) const { return core_->theta(j); }
  double omega(int j) const { return core_->omega(j); }
  double omega_max() const { return core_->omega_max; }
  int conj_mode(int j) const { return (n_modes() - j) % n_modes(); }
  // Grid index with theta exactly pi/2 (grid size divisible by 4).
  int quarter_mode() const { return n_modes() / 4; }

  const LatticeModel& time_view() const {
    return axes_ == Axes::Spacetime ? *time_view_ : *this;
  }
  const LatticeModel& space_view() const {
    return axes_ == Axes::Spacetime ? *space_view_ : *this;
  }
  Axes axes() const { return axes_; }

  // Rebind a handle from a sibling view of the same core.
  Element wrap(const Element& e) const {
    Element out = e;
    out.model = this;
    return out;
  }
  Functional wrap(const Functional& f) const {
    Functional out = f;
    out.model = this;
    return out;
  }

  // ---- handles ---------------------------------------------------------

  Element element(LatticeObservable o, std::string label = "") const {
    o.symmetrize();
    Element e;
    e.model = this;
    e.payload = std::make_shared<LatticeObservable>(std::move(o));
    e.label = std::move(label);
    return e;
  }
  static const LatticeObservable& obs_of(const Element& e) {
    return *static_cast<const LatticeObservable*>(e.payload.get());
  }

  Functional functional(FockVector bra, FockVector ket, std::string label = "",
                        bool is_state = false) const {
    Functional f;
    f.model = this;
    f.energy_bound = std::max(vector_energy(bra), vector_energy(ket));
    auto pl = std::make_shared<LatticeFunctionalPayload>();
    pl->bra = std::move(bra);
    pl->ket = std::move(ket);
    f.payload = std::move(pl);
    f.label = std::move(label);
    f.is_state = is_state;
    return f;
  }
  Functional state(const FockVector& psi, std::string label = "") const {
    const double nn = fock_norm(psi);
    if (nn < 1e-14) throw NotAState("lattice state: zero vector");
    FockVector s = psi;
    s.vac /= nn;
    s.one /= nn;
    s.two /= nn;
    return functional(s, s, std::move(label), true);
  }
  static const LatticeFunctionalPayload& fun_of(const Functional& f) {
    return *static_cast<const LatticeFunctionalPayload*>(f.payload.get());
  }

  double vector_energy(const FockVector& f, double tol = 1e-12) const {
    double e = 0;
    for (int j = 0; j < n_modes(); ++j) {
      if (std::abs(f.one(j)) > tol) e = std::max(e, omega(j));
      for (int k = 0; k <= j; ++k)
        if (std::abs(f.two(j, k)) > tol) e = std::max(e, omega(j) + omega(k));
    }
    return e;
  }

  // ---- state builders ----------------------------------------------------

  Functional vacuum_state() const {
    return functional(FockVector::vacuum(n_modes()), FockVector::vacuum(n_modes()),
                      "vacuum", true);
  }
  Functional plane_wave_state(int j) const {
    FockVector f = FockVector::zero(n_modes());
    f.one(j) = 1.0;
    return functional(f, f, "pw" + std::to_string(j), true);
  }
  Functional one_particle_state(const Eigen::VectorXcd& profile,
                                std::string label = "1p") const {
    FockVector f = FockVector::zero(n_modes());
    f.one = profile;
    return state(f, std::move(label));
  }
  Functional two_particle_state(const Eigen::VectorXcd& pa,
                                const Eigen::VectorXcd& pb,
                                std::string label = "2p") const {
    FockVector f = FockVector::zero(n_modes());
    const Eigen::MatrixXcd raw = pa * pb.transpose();
    f.two = (raw + raw.transpose()) / 2.0;
    return state(f, std::move(label));
  }
  // Smooth momentum bump centered at theta0 (periodized Gaussian profile).
  Eigen::VectorXcd gaussian_profile(double theta0, double width) const {
    Eigen::VectorXcd f(n_modes());
    for (int j = 0; j < n_modes(); ++j) {
      double d = theta(j) - theta0;
      while (d > kPi) d -= kTwoPi;
      while (d < -kPi) d += kTwoPi;
      f(j) = std::exp(-0.5 * d * d / (width * width));
    }
    return f;
  }

  // ---- observable builders -------------------------------------------------

  Element annihilator(const Eigen::VectorXcd& f, std::string label = "a(f)") const {
    LatticeObservable o = LatticeObservable::zero(n_modes());
    o.v = f;
    return element(std::move(o), std::move(label));
  }
  Element creator(const Eigen::VectorXcd& f, std::string label = "a+(f)") const {
    LatticeObservable o = LatticeObservable::zero(n_modes());
    o.u = f;
    return element(std::move(o), std::move(label));
  }
  // Normal-ordered a+(f) a(f); centered by construction.
  Element number_observable(const Eigen::VectorXcd& f, std::string label = "a+(f)a(f)") const {
    LatticeObservable o = LatticeObservable::zero(n_modes());
    o.K = f * f.adjoint();
    return element(std::move(o), std::move(label));
  }
  Element hamiltonian() const {
    LatticeObservable o = LatticeObservable::zero(n_modes());
    o.K = core_->omega.cast<cd>().asDiagonal();
    return element(std::move(o), "H");
  }
  // The field at site n: phi_n = sum_j (2 N w_j)^{-1/2} (e^{i theta_j n} a_j + h.c.)
  Element field_at_site(int site) const {
    LatticeObservable o = LatticeObservable::zero(n_modes());
    const int n = n_modes();
    for (int j = 0; j < n; ++j) {
      const double amp = 1.0 / std::sqrt(2.0 * n * omega(j));
      o.v(j) = amp * std::polar(1.0, theta(j) * site);
      o.u(j) = amp * std::polar(1.0, -theta(j) * site);
    }
    return element(std::move(o), "phi" + std::to_string(site));
  }
  // Normal-ordered energy density
  //   e_n = 1/2 [pi_n^2 + m^2 phi_n^2 + 1/2((phi_{n+1}-phi_n)^2 + (phi_n-phi_{n-1})^2)],
  // built so that the full-period site sum reproduces the Hamiltonian exactly.
  Element energy_density(int site) const {
    LatticeObservable o = LatticeObservable::zero(n_modes());
    accumulate_square(o, momentum_form(site), 0.5);
    accumulate_square(o, field_form(site, core_->p.mass), 0.5);
    accumulate_square(o, gradient_form(site, +1), 0.25);
    accumulate_square(o, gradient_form(site, -1), 0.25);
    o.symmetrize();
    return element(std::move(o), "T00@" + std::to_string(site));
  }

  // Time smearing A(g): kernel entries are multiplied by the transfer value
  // s(D) = int g(t) e^{iDt} dt at their energy transfer D.
  LatticeObservable smear(const LatticeObservable& a,
                          const std::function<cd(double)>& transfer) const {
    LatticeObservable o = a;
    const int n = n_modes();
    o.c0 *= transfer(0.0);
    for (int j = 0; j < n; ++j) {
      o.u(j) *= transfer(omega(j));
      o.v(j) *= transfer(-omega(j));
      for (int k = 0; k < n; ++k) {
        o.K(j, k) *= transfer(omega(j) - omega(k));
        o.M(j, k) *= transfer(omega(j) + omega(k));
        o.Nn(j, k) *= transfer(-(omega(j) + omega(k)));
      }
    }
    return o;
  }
  Element smear(const Element& a, const std::function<cd(double)>& transfer,
                std::string label = "") const {
    return element(smear(obs_of(a), transfer),
                   label.empty() ? a.label + "(g)" : std::move(label));
  }

  // ---- Model interface -----------------------------------------------------

  std::string name() const override {
    switch (axes_) {
      case Axes::Spacetime: return "lattice";
      case Axes::TimeOnly: return "lattice-time";
      default: return "lattice-space";
    }
  }
  int group_dim() const override { return axes_ == Axes::Spacetime ? 2 : 1; }
  std::vector<int> signature() const override {
    if (axes_ == Axes::Spacetime) return {+1, -1};
    return {+1};
  }
  std::vector<double> max_frequency() const override {
    const double wmax = 2 * core_->omega_max;
    switch (axes_) {
      case Axes::Spacetime: return {wmax, kPi};
      case Axes::TimeOnly: return {wmax};
      default: return {kPi};
    }
  }
  bool axis_is_lattice(int axis) const override {
    return (axes_ == Axes::Spacetime && axis == 1) || axes_ == Axes::SpaceOnly;
  }

  cd pair(const Functional& phi, const Element& a,
          const GroupParameter& x) const override {
    double t = 0, s = 0;
    embed(x, t, s);
    const auto& f = fun_of(phi);
    const LatticeObservable moved = translated(obs_of(a), t, s);
    return fock_inner(f.bra, fock_apply(moved, f.ket));
  }

  std::optional<std::vector<OrbitMode>> orbit_modes(
      const Functional& phi, const Element& a) const override {
    const auto& f = fun_of(phi);
    const auto& o = obs_of(a);
    const int n = n_modes();
    const FockVector& P = f.bra;
    const FockVector& Q = f.ket;

    std::vector<OrbitMode> raw;
    raw.reserve(64);
    auto add = [&](double w_freq, double th_freq, cd weight) {
      if (weight == cd(0)) return;
      // Plain inner-product frequency vector: w t - theta n.
      switch (axes_) {
        case Axes::Spacetime: raw.push_back({{w_freq, -wrap_pi(th_freq)}, weight}); break;
        case Axes::TimeOnly: raw.push_back({{w_freq}, weight}); break;
        default: raw.push_back({{-wrap_pi(th_freq)}, weight}); break;
      }
    };

    add(0, 0, o.c0 * fock_inner(P, Q));
    // <P| a+_j |Q> and <P| a_j |Q>
    for (int j = 0; j < n; ++j) {
      if (o.u(j) != cd(0)) {
        cd me = std::conj(P.one(j)) * Q.vac;
        me += 2.0 * (P.two.row(j).conjugate() * Q.one)(0);
        add(omega(j), theta(j), o.u(j) * me);
      }
      if (o.v(j) != cd(0)) {
        cd me = std::conj(P.vac) * Q.one(j);
        me += 2.0 * (P.one.conjugate().transpose() * Q.two.col(j))(0);
        add(-omega(j), -theta(j), o.v(j) * me);
      }
    }
    // <P| a+_j a_k |Q> = conj(P1)_j Q1_k + 4 (conj(P2) Q2)_{jk}
    const bool hasK = !o.K.isZero(0);
    const bool hasM = !o.M.isZero(0);
    const bool hasN = !o.Nn.isZero(0);
    Eigen::MatrixXcd W;
    if (hasK) {
      W = P.one.conjugate() * Q.one.transpose();
      if (!P.two.isZero(0) && !Q.two.isZero(0))
        W += 4.0 * (P.two.conjugate() * Q.two);
    }
    double wmax_weight = 0;
    std::vector<OrbitMode> quad;
    for (int j = 0; j < n && (hasK || hasM || hasN); ++j)
      for (int k = 0; k < n; ++k) {
        if (hasK) {
          const cd w = o.K(j, k) * W(j, k);
          if (w != cd(0)) {
            quad.push_back({{omega(j) - omega(k), theta(j) - theta(k)}, w});
            wmax_weight = std::max(wmax_weight, std::abs(w));
          }
        }
        if (hasM) {
          const cd w = o.M(j, k) * (2.0 * std::conj(P.two(j, k)) * Q.vac);
          if (w != cd(0)) {
            quad.push_back({{omega(j) + omega(k), theta(j) + theta(k)}, w});
            wmax_weight = std::max(wmax_weight, std::abs(w));
          }
        }
        if (hasN) {
          const cd w = o.Nn(j, k) * (std::conj(P.vac) * 2.0 * Q.two(j, k));
          if (w != cd(0)) {
            quad.push_back({{-(omega(j) + omega(k)), -(theta(j) + theta(k))}, w});
            wmax_weight = std::max(wmax_weight, std::abs(w));
          }
        }
      }
    // Negligible kernel entries are dropped for sampling speed; the cutoff is
    // far below every detection threshold in use.
    const double cut = 1e-15 * wmax_weight;
    for (const auto& q : quad)
      if (std::abs(q.weight) >= cut) add(q.freq[0], q.freq[1], q.weight);
    return raw;
  }

  Element unit() const override {
    LatticeObservable o = LatticeObservable::zero(n_modes());
    o.c0 = 1.0;
    return element(std::move(o), "I");
  }
  Element translate(const Element& a, const GroupParameter& x) const override {
    double t = 0, s = 0;
    embed(x, t, s);
    return element(translated(obs_of(a), t, s), a.label);
  }
  Element combine(cd ca, const Element& a, cd cb, const Element& b) const override {
    const auto& A = obs_of(a);
    const auto& B = obs_of(b);
    LatticeObservable o;
    o.c0 = ca * A.c0 + cb * B.c0;
    o.u = ca * A.u + cb * B.u;
    o.v = ca * A.v + cb * B.v;
    o.K = ca * A.K + cb * B.K;
    o.M = ca * A.M + cb * B.M;
    o.Nn = ca * A.Nn + cb * B.Nn;
    return element(std::move(o));
  }
  Element star(const Element& a) const override {
    const auto& A = obs_of(a);
    LatticeObservable o;
    o.c0 = std::conj(A.c0);
    o.u = A.v.conjugate();
    o.v = A.u.conjugate();
    o.K = A.K.adjoint();
    o.M = A.Nn.conjugate();
    o.Nn = A.M.conjugate();
    return element(std::move(o), a.label.empty() ? "" : a.label + "*");
  }
  Functional conj_functional(const Functional& phi) const override {
    const auto& f = fun_of(phi);
    Functional out = functional(f.ket, f.bra,
                                phi.label.empty() ? "" : phi.label + "~");
    out.is_state = phi.is_state;
    return out;
  }
  double element_norm(const Element& a) const override {
    // Upper bound on the operator norm of the <=2 particle compression:
    // triangle inequality over the six parts with crude sector constants.
    const auto& A = obs_of(a);
    return std::abs(A.c0) + 2 * (A.u.norm() + A.v.norm()) + 2 * A.K.norm() +
           2 * (A.M.norm() + A.Nn.norm());
  }
  double functional_norm(const Functional& phi) const override {
    const auto& f = fun_of(phi);
    return fock_norm(f.bra) * fock_norm(f.ket);
  }

  std::vector<Element> generator_elements() const override {
    const int n = n_modes();
    const Eigen::VectorXcd f = gaussian_profile(kPi / 2, 0.6);
    std::vector<Element> out;
    out.push_back(annihilator(f));
    out.push_back(creator(f));
    out.push_back(number_observable(f));
    out.push_back(field_at_site(0));
    out.push_back(field_at_site(n / 2));
    return out;
  }
  std::vector<Functional> functional_family() const override {
    std::vector<Functional> out;
    out.push_back(vacuum_state());
    out.push_back(plane_wave_state(quarter_mode()));
    const auto p1 = gaussian_profile(kPi / 2, 0.4);
    const auto p2 = gaussian_profile(-kPi / 2, 0.4);
    const auto p3 = gaussian_profile(0.8, 0.5);
    out.push_back(one_particle_state(p1, "1p+"));
    out.push_back(one_particle_state(p2, "1p-"));
    out.push_back(one_particle_state(p3, "1p0"));
    out.push_back(two_particle_state(p1, p2, "2p"));
    // Off-diagonal vector pairs close the family under adjoints.
    const auto& s1 = fun_of(out[2]);
    const auto& s2 = fun_of(out[3]);
    out.push_back(functional(s1.ket, s2.ket, "x12"));
    out.push_back(functional(s2.ket, s1.ket, "x21"));
    const auto& vac = fun_of(out[0]);
    out.push_back(functional(s1.ket, vac.ket, "x1v"));
    out.push_back(functional(vac.ket, s1.ket, "xv1"));
    return out;
  }

  // phi(beta_n(A)) for one full spatial period n = 0..N-1, via the exact
  // collapse of kernel phases onto e^{-2 pi i d n / N}.
  std::vector<cd> site_orbit(const Functional& phi, const Element& a) const {
    const int n = n_modes();
    const auto& f = fun_of(phi);
    const auto& o = obs_of(a);
    const FockVector& P = f.bra;
    const FockVector& Q = f.ket;
    std::vector<cd> cdiag(static_cast<std::size_t>(n), cd(0));
    auto slot = [&](int d) -> cd& {
      return cdiag[static_cast<std::size_t>(((d % n) + n) % n)];
    };
    slot(0) += o.c0 * fock_inner(P, Q);
    Eigen::MatrixXcd W = P.one.conjugate() * Q.one.transpose();
    if (!P.two.isZero(0) && !Q.two.isZero(0)) W += 4.0 * (P.two.conjugate() * Q.two);
    for (int j = 0; j < n; ++j) {
      if (o.u(j) != cd(0)) {
        cd me = std::conj(P.one(j)) * Q.vac + 2.0 * (P.two.row(j).conjugate() * Q.one)(0);
        slot(j) += o.u(j) * me;
      }
      if (o.v(j) != cd(0)) {
        cd me = std::conj(P.vac) * Q.one(j) +
                2.0 * (P.one.conjugate().transpose() * Q.two.col(j))(0);
        slot(-j) += o.v(j) * me;
      }
      for (int k = 0; k < n; ++k) {
        slot(j - k) += o.K(j, k) * W(j, k);
        slot(j + k) += o.M(j, k) * (2.0 * std::conj(P.two(j, k)) * Q.vac);
        slot(-(j + k)) += o.Nn(j, k) * (std::conj(P.vac) * 2.0 * Q.two(j, k));
      }
    }
    std::vector<cd> out(static_cast<std::size_t>(n));
    for (int site = 0; site < n; ++site) {
      cd acc = 0;
      for (int d = 0; d < n; ++d)
        acc += cdiag[static_cast<std::size_t>(d)] *
               std::polar(1.0, -kTwoPi * d * site / n);
      out[static_cast<std::size_t>(site)] = acc;
    }
    return out;
  }

  // Site-summed time modes: sum_n phi(alpha_{(t,n)}(A)) = sum_r w_r e^{i D_r t}
  // (the full-period site sum kills every off-diagonal momentum exactly).
  std::vector<std::pair<double, cd>> site_summed_modes(const Functional& phi,
                                                       const Element& a) const {
    const int n = n_modes();
    const auto& f = fun_of(phi);
    const auto& o = obs_of(a);
    const FockVector& P = f.bra;
    const FockVector& Q = f.ket;
    std::vector<std::pair<double, cd>> out;
    auto add = [&](double d, cd w) {
      if (w != cd(0)) out.emplace_back(d, cd(static_cast<double>(n)) * w);
    };
    add(0, o.c0 * fock_inner(P, Q));
    // Only the j = 0 mode of u/v survives (theta_0 = 0).
    {
      cd me = std::conj(P.one(0)) * Q.vac + 2.0 * (P.two.row(0).conjugate() * Q.one)(0);
      add(omega(0), o.u(0) * me);
      me = std::conj(P.vac) * Q.one(0) +
           2.0 * (P.one.conjugate().transpose() * Q.two.col(0))(0);
      add(-omega(0), o.v(0) * me);
    }
    Eigen::MatrixXcd W = P.one.conjugate() * Q.one.transpose();
    if (!P.two.isZero(0) && !Q.two.isZero(0)) W += 4.0 * (P.two.conjugate() * Q.two);
    for (int j = 0; j < n; ++j) {
      add(0.0, o.K(j, j) * W(j, j));
      const int jc = conj_mode(j);
      add(omega(j) + omega(jc), o.M(j, jc) * (2.0 * std::conj(P.two(j, jc)) * Q.vac));
      add(-(omega(j) + omega(jc)), o.Nn(j, jc) * (std::conj(P.vac) * 2.0 * Q.two(j, jc)));
    }
    return out;
  }

 private:
  LatticeModel(std::shared_ptr<Core> core, Axes axes) : core_(std::move(core)), axes_(axes) {}

  static double wrap_pi(double th) {
    while (th > kPi + 1e-12) th -= kTwoPi;
    while (th < -kPi - 1e-12) th += kTwoPi;
    return th;
  }

  void embed(const GroupParameter& x, double& t, double& s) const {
    switch (axes_) {
      case Axes::Spacetime:
        t = x[0];
        s = lattice_coord(x[1]);
        break;
      case Axes::TimeOnly:
        t = x[0];
        s = 0;
        break;
      default:
        t = 0;
        s = lattice_coord(x[0]);
        break;
    }
  }
  static double lattice_coord(double v) {
    const double r = std::round(v);
    if (std::abs(v - r) > 1e-9)
      throw Error("lattice model: space translations take integer steps");
    return r;
  }

  LatticeObservable translated(const LatticeObservable& a, double t, double s) const {
    const int n = n_modes();
    LatticeObservable o = a;
    Eigen::VectorXcd ph(n);
    for (int j = 0; j < n; ++j)
      ph(j) = std::polar(1.0, omega(j) * t - theta(j) * s);
    o.u = a.u.cwiseProduct(ph);
    o.v = a.v.cwiseProduct(ph.conjugate());
    o.K = ph.asDiagonal() * a.K * ph.conjugate().asDiagonal();
    o.M = ph.asDiagonal() * a.M * ph.asDiagonal();
    o.Nn = ph.conjugate().asDiagonal() * a.Nn * ph.conjugate().asDiagonal();
    return o;
  }

  // Linear form sum_j (x_j a_j + y_j a+_j); hermitian when y = conj(x).
  struct LinearForm {
    Eigen::VectorXcd x, y;
  };
  LinearForm momentum_form(int site) const {
    const int n = n_modes();
    LinearForm f{Eigen::VectorXcd(n), Eigen::VectorXcd(n)};
    for (int j = 0; j < n; ++j) {
      const double amp = std::sqrt(omega(j) / (2.0 * n));
      f.x(j) = cd(0, -amp) * std::polar(1.0, theta(j) * site);
      f.y(j) = cd(0, +amp) * std::polar(1.0, -theta(j) * site);
    }
    return f;
  }
  LinearForm field_form(int site, double scale) const {
    const int n = n_modes();
    LinearForm f{Eigen::VectorXcd(n), Eigen::VectorXcd(n)};
    for (int j = 0; j < n; ++j) {
      const double amp = scale / std::sqrt(2.0 * n * omega(j));
      f.x(j) = amp * std::polar(1.0, theta(j) * site);
      f.y(j) = amp * std::polar(1.0, -theta(j) * site);
    }
    return f;
  }
  LinearForm gradient_form(int site, int dir) const {
    const int n = n_modes();
    const int other = site + dir;
    LinearForm f{Eigen::VectorXcd(n), Eigen::VectorXcd(n)};
    for (int j = 0; j < n; ++j) {
      const double amp = 1.0 / std::sqrt(2.0 * n * omega(j));
      const cd d = std::polar(1.0, theta(j) * other) - std::polar(1.0, theta(j) * site);
      f.x(j) = amp * d;
      f.y(j) = amp * std::conj(d);
    }
    return f;
  }
  // o += w * :X^2: for a hermitian linear form X.
  static void accumulate_square(LatticeObservable& o, const LinearForm& f, double w) {
    o.Nn += w * (f.x * f.x.transpose());
    o.M += w * (f.y * f.y.transpose());
    o.K += 2.0 * w * (f.y * f.x.transpose());
  }

  std::shared_ptr<Core> core_;
  Axes axes_;
  std::unique_ptr<LatticeModel> time_view_, space_view_;
};

}  // namespace arveson

#endif  // ARVESON_MODELS_LATTICE_MODEL_HPP
