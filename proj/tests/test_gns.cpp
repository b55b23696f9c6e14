#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "arveson/gns.hpp"

using namespace arveson;

namespace {

const std::vector<double> kEigen = {0.0, 1.0, 3.0};

Eigen::MatrixXcd random_matrix(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::MatrixXcd a(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) a(j, k) = cd(u(rng), u(rng));
  return a;
}

GnsConfig lattice_config() {
  GnsConfig cfg;
  cfg.classify.ladder = {CuboidWindow::line(16 * kPi, kPi / 16),
                         CuboidWindow::line(32 * kPi, kPi / 16),
                         CuboidWindow::line(64 * kPi, kPi / 16)};
  cfg.classify.taper_ratio = 8.0;
  return cfg;
}

}  // namespace

TEST_CASE("the trace representation is faithful with the square dimension") {
  const MatrixModel m(kEigen);
  const GnsData g = gns_construct(m, m.normalized_trace());
  CHECK(g.dimension == 9);
  // A pure vector state only sees one column of the algebra.
  const GnsData gp = gns_construct(m, m.vector_functional(0, 0));
  CHECK(gp.dimension == 3);
}

TEST_CASE("the cyclic vector reconstructs the state to 1e-10") {
  const MatrixModel m(kEigen);
  const GnsData g = gns_construct(m, m.normalized_trace());
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 3; ++trial) {
    const Element a = m.element(random_matrix(rng, 3));
    const cd got =
        (g.omega_vec.adjoint() * g.represent(a) * g.omega_vec)(0);
    const cd want =
        evaluate_pairing(m, g.omega0, a, GroupParameter::time(0));
    CHECK(std::abs(got - want) < 1e-10);
  }
}

TEST_CASE("the representation is multiplicative") {
  const MatrixModel m(kEigen);
  const GnsData g = gns_construct(m, m.normalized_trace());
  std::mt19937_64 rng(9);
  const Eigen::MatrixXcd am = random_matrix(rng, 3);
  const Eigen::MatrixXcd bm = random_matrix(rng, 3);
  const Eigen::MatrixXcd lhs = g.represent(m.element(am * bm));
  const Eigen::MatrixXcd rhs = g.represent(m.element(am)) * g.represent(m.element(bm));
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("the implementing unitaries realize covariance to 1e-8") {
  const MatrixModel m(kEigen);
  const GnsData g = gns_construct(m, m.normalized_trace());
  const UnitaryGroup ug = implementing_group(g, m);
  std::mt19937_64 rng(13);
  const Element a = m.element(random_matrix(rng, 3));
  const Eigen::MatrixXcd pa = g.represent(a);
  for (int i = 0; i < 10; ++i) {
    const double t = -4.5 + i;
    const Eigen::MatrixXcd lhs = ug.u(t) * pa * ug.u(-t);
    const Eigen::MatrixXcd rhs =
        g.represent(m.translate(a, GroupParameter::time(t)));
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("non-invariant states cannot implement the action") {
  const MatrixModel m(kEigen);
  Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(3, 3);
  // psi = (e0 + e1)/sqrt(2): not an eigenvector of H, so the state moves.
  g(0, 0) = g(0, 1) = g(1, 0) = g(1, 1) = 0.5;
  const Functional psi = m.functional(g, "psi", true);
  const GnsData data = gns_construct(m, psi);
  CHECK_THROWS_AS(implementing_group(data, m), NotInvariant);
}

TEST_CASE("gns demands a state") {
  const MatrixModel m(kEigen);
  CHECK_THROWS_AS(gns_construct(m, m.vector_functional(0, 1)), NotAState);
}

TEST_CASE("finite-dimensional spectra are purely point") {
  const MatrixModel m(kEigen);
  const GnsData g = gns_construct(m, m.normalized_trace());
  const HilbertParts hp = hilbert_parts(implementing_group(g, m));
  CHECK(hp.dim_pp == g.dimension);
  CHECK(hp.dim_c == 0);
}

TEST_CASE("matrix spectrum transfer has no violations") {
  const MatrixModel m(kEigen);
  GnsConfig cfg;
  cfg.classify.ladder = {CuboidWindow::line(16 * kPi, kPi / 16),
                         CuboidWindow::line(32 * kPi, kPi / 16),
                         CuboidWindow::line(64 * kPi, kPi / 16)};
  const TransferContainmentReport rep =
      check_transfer(m, m.normalized_trace(), cfg);
  CHECK(rep.pass());
  CHECK(rep.checks > 0);
  CHECK(rep.violations == 0);
}

TEST_CASE("the fock representation reports its sector structure") {
  LatticeParams p;
  p.energy_max = 5.0;
  const LatticeModel lat(p);
  const GnsData g = gns_construct(lat, lat.vacuum_state());
  const int n = lat.n_modes();
  CHECK(g.dimension == 1 + n + n * (n + 1) / 2);
  const UnitaryGroup ug = implementing_group(g, lat);
  REQUIRE(ug.bands.size() == 3);
  CHECK(ug.bands[0].measure == "pp");
  CHECK(ug.bands[0].lo == 0.0);
  CHECK(ug.bands[0].hi == 0.0);
  CHECK(ug.bands[1].lo == Catch::Approx(lat.mass()));
  CHECK(ug.bands[1].hi == Catch::Approx(lat.omega_max()));
  CHECK(ug.bands[2].lo == Catch::Approx(2 * lat.mass()));
  const HilbertParts hp = hilbert_parts(ug);
  CHECK(hp.dim_pp == 1);
  CHECK(hp.ac.size() == 2);
}

TEST_CASE("lattice spectrum transfer stays inside the summed supports") {
  LatticeParams p;
  p.energy_max = 5.0;
  const LatticeModel lat(p);
  const TransferContainmentReport rep = check_transfer(lat, lattice_config());
  CHECK(rep.pass());
  CHECK(rep.violations == 0);
  CHECK(rep.continuity_ok);
  CHECK(rep.ac_ok);
}
