#include <catch2/catch_amalgamated.hpp>

#include "arveson/qft.hpp"

using namespace arveson;

namespace {

LatticeParams params() {
  LatticeParams p;
  p.mass = 1.0;
  p.n_modes = 256;
  p.energy_max = 5.0;
  p.mu = 0.5;
  return p;
}

}  // namespace

TEST_CASE("quadratic pairings match closed-form fock matrix elements") {
  const LatticeModel lat(params());
  const int n = lat.n_modes();
  const Eigen::VectorXcd f = lat.gaussian_profile(kPi / 2, 0.5);
  Eigen::VectorXcd h = lat.gaussian_profile(kPi / 2, 0.4);
  h /= h.norm();
  const GroupParameter origin = GroupParameter::spacetime(0, 0);
  // <1p_h| a+(f)a(f) |1p_h> = |<f, h>|^2.
  const cd got = evaluate_pairing(lat, lat.one_particle_state(h),
                                  lat.number_observable(f), origin);
  const cd want = std::norm(f.dot(h));
  CHECK(std::abs(got - want) < 1e-10);
  // <pw_j| H |pw_j> = omega_j.
  const int q = lat.quarter_mode();
  const cd e = evaluate_pairing(lat, lat.plane_wave_state(q), lat.hamiltonian(),
                                origin);
  CHECK(std::abs(e - cd(lat.omega(q))) < 1e-12);
  CHECK(lat.omega(q) == Catch::Approx(std::sqrt(3.0)).margin(1e-12));
  (void)n;
}

TEST_CASE("condition T holds on the bounded-energy family") {
  const LatticeModel lat(params());
  const Smearing g = gaussian_smearing(lat.mu());
  const ConditionTReport rep = check_condition_T(lat, g, energy_family(lat));
  CHECK(rep.pass);
  for (const auto& e : rep.entries) {
    CHECK(e.residual <= 1e-8 * (1 + std::abs(e.rhs)));
    if (e.state.rfind("pw", 0) == 0)
      CHECK(e.rhs == Catch::Approx(std::sqrt(3.0)).margin(1e-10));
  }
}

TEST_CASE("smearings outside the transfer budget are rejected") {
  const LatticeModel lat(params());
  // Transfer mass does not vanish outside (-mu, mu) when the width is too big.
  CHECK_THROWS_AS(
      check_condition_T(lat, gaussian_smearing(4 * lat.mu()), energy_family(lat)),
      BadSmearing);
  // int g != 1.
  CHECK_THROWS_AS(
      check_condition_T(lat, gaussian_smearing(lat.mu(), 0.5), energy_family(lat)),
      BadSmearing);
}

TEST_CASE("non-centered elements have no summable site tail") {
  const LatticeModel lat(params());
  CHECK_THROWS_AS(seminorm_E1(lat, lat.unit(), energy_family(lat)),
                  TailNotSummable);
  CHECK_THROWS_AS(
      asymptotic_functional(lat, lat.vacuum_state(), lat.unit(), 0.0),
      TailNotSummable);
}

TEST_CASE("the asymptotic functional is bounded by the E,1 seminorm") {
  const LatticeModel lat(params());
  const Smearing g = gaussian_smearing(lat.mu());
  const Element t00g = lat.smear(lat.energy_density(0), g.transfer, "T00(g)");
  const Functional omega = lat.plane_wave_state(lat.quarter_mode());
  const double sn = seminorm_E1(lat, t00g, {omega}).value;
  for (int i = 0; i < 16; ++i) {
    const double t = kTwoPi * i / 16.0;
    CHECK(std::abs(asymptotic_functional(lat, omega, t00g, t)) <= sn + 1e-9);
  }
}

TEST_CASE("the exact energy density saturates the particle bound") {
  const LatticeModel lat(params());
  const Smearing g = gaussian_smearing(lat.mu());
  const Element t00g = lat.smear(lat.energy_density(0), g.transfer, "T00(g)");
  const Functional omega = lat.plane_wave_state(lat.quarter_mode());
  const ParticleBoundReport rep =
      check_particle_bound(lat, omega, t00g, g, 0.0);
  CHECK(rep.pass);
  CHECK(rep.omega_h == Catch::Approx(std::sqrt(3.0)).margin(1e-10));
  // With C = T00(g) exactly, sigma^(t) is the constant omega(H).
  for (int i = 0; i < 64; ++i) {
    const double t = (kTwoPi / lat.mass()) * i / 64.0;
    CHECK(std::abs(asymptotic_functional(lat, omega, t00g, t) - cd(rep.omega_h)) <
          1e-8);
  }
  CHECK_THROWS_AS(
      check_particle_bound(lat, omega, t00g, g, rep.omega_h),
      EpsilonTooLarge);
}

TEST_CASE("the low-energy splitting is exact and energy-decreasing") {
  const LatticeModel lat(params());
  const Smearing g = gaussian_smearing(lat.mu());
  const Element t00g = lat.smear(lat.energy_density(0), g.transfer, "T00(g)");
  const ScSplitReport rep =
      sc_triviality_split(lat, t00g, lat.energy_max(), lat.mu());
  CHECK(rep.partition_exact);
  CHECK(rep.minus_energy_decreasing);
  CHECK(rep.plus_star_energy_decreasing);
  CHECK(rep.max_l2 < 1e300);
  CHECK_THROWS_AS(sc_triviality_split(lat, lat.unit(), lat.energy_max(), lat.mu()),
                  BadPartition);
  CHECK_THROWS_AS(sc_triviality_split(lat, t00g, lat.mu() / 2, lat.mu()),
                  BadPartition);
}

TEST_CASE("condition L1 yields finite seminorms against the norm bound") {
  const LatticeModel lat(params());
  const Smearing g = gaussian_smearing(lat.mu());
  const Eigen::VectorXcd f = lat.gaussian_profile(kPi / 2, 0.5);
  const Element ladder = lat.combine(1.0, lat.creator(f), 1.0, lat.annihilator(f));
  const ConditionL1Report rep = check_condition_L1(
      lat, {g}, energy_family(lat), {lat.energy_density(0), ladder});
  CHECK(rep.all_finite);
  CHECK(rep.fitted_c > 0);
  for (const auto& e : rep.entries) {
    CHECK(std::isfinite(e.seminorm));
    CHECK(e.bound > 0);
  }
}

TEST_CASE("regularity values are stable under momentum grid doubling") {
  const LatticeModel lat(params());
  std::vector<std::function<Element(const LatticeModel&)>> elems = {
      [](const LatticeModel& m) { return m.field_at_site(0); },
      [](const LatticeModel& m) {
        Eigen::VectorXcd f = m.gaussian_profile(kPi / 2, 0.5);
        f /= f.norm();
        return m.creator(f);
      }};
  std::vector<std::function<Functional(const LatticeModel&)>> fams = {
      [](const LatticeModel& m) {
        FockVector onep = FockVector::zero(m.n_modes());
        onep.one = m.gaussian_profile(kPi / 2, 0.4);
        onep.one /= onep.one.norm();
        return m.functional(onep, FockVector::vacuum(m.n_modes()), "x1v");
      }};
  const RegularityReport rep = buchholz_regularity_scan(lat, elems, fams, 0.5);
  CHECK(rep.all_stable);
  for (const auto& e : rep.entries) {
    CHECK(e.value > 0);
    CHECK(e.rel_change < 0.05);
  }
  // Non-centered elements are rejected.
  std::vector<std::function<Element(const LatticeModel&)>> bad = {
      [](const LatticeModel& m) { return m.unit(); }};
  CHECK_THROWS_AS(buchholz_regularity_scan(lat, bad, fams, 0.5), InvalidConfig);
}

TEST_CASE("the full-period site sum of the energy density is the hamiltonian") {
  const LatticeModel lat(params());
  // Exact identity behind condition T, checked per state without smearing.
  const Element t00 = lat.energy_density(0);
  const Element h = lat.hamiltonian();
  const GroupParameter origin = GroupParameter::spacetime(0, 0);
  for (const auto& omega : energy_family(lat)) {
    cd acc = 0;
    for (const cd& v : lat.site_orbit(omega, t00)) acc += v;
    const cd want = evaluate_pairing(lat, omega, h, origin);
    CHECK(std::abs(acc - want) < 1e-8 * (1 + std::abs(want)));
  }
}
