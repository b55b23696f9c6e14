#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "arveson/core.hpp"
#include "arveson/models/matrix_model.hpp"

using namespace arveson;

TEST_CASE("group parameters validate dimension and finiteness") {
  CHECK_NOTHROW(GroupParameter::time(1.5));
  CHECK_NOTHROW(GroupParameter::spacetime(1.0, -2.0));
  CHECK_THROWS_AS(GroupParameter(std::vector<double>{}), Error);
  CHECK_THROWS_AS(GroupParameter({1.0, 2.0, 3.0}), Error);
  CHECK_THROWS_AS(GroupParameter({std::nan("")}), Error);

  const GroupParameter a({1.0, -2.0});
  const GroupParameter b({0.5, 0.25});
  const GroupParameter s = a + b;
  CHECK(s[0] == 1.5);
  CHECK(s[1] == -1.75);
  const GroupParameter n = -a;
  CHECK(n[0] == -1.0);
  CHECK(n[1] == 2.0);
}

TEST_CASE("cuboid windows are odd, origin-centered, symmetric") {
  const CuboidWindow w = CuboidWindow::line(10.0, 0.5);
  CHECK(w.nodes(0) == 41);
  CHECK(w.coord(0, 0) == -10.0);
  CHECK(w.coord(0, 20) == 0.0);
  CHECK(w.coord(0, 40) == 10.0);
  CHECK(w.total_nodes() == 41);
  CHECK(w.volume() == Catch::Approx(20.0));

  CHECK_THROWS_AS(CuboidWindow({-1.0}, {0.1}), Error);
  CHECK_THROWS_AS(CuboidWindow({1.0}, {0.0}), Error);
  CHECK_THROWS_AS(CuboidWindow({1.0}, {0.1, 0.2}), Error);
}

TEST_CASE("spacetime cuboids tie the time edge to the space edge") {
  const CuboidWindow k = CuboidWindow::spacetime_cuboid(64.0, 0.5, 0.25, 1.0);
  CHECK(k.dim() == 2);
  CHECK(k.half_lengths[0] == Catch::Approx(8.0));
  CHECK(k.half_lengths[1] == 64.0);
  // A mismatched time edge is rejected.
  CHECK_THROWS_AS(CuboidWindow({9.0, 64.0}, {0.25, 1.0}, 0.5), Error);
  CHECK_THROWS_AS(CuboidWindow({8.0, 64.0}, {0.25, 1.0}, 1.5), Error);
}

TEST_CASE("pairing evaluation checks handle ownership") {
  const MatrixModel m1({0.0, 1.0});
  const MatrixModel m2({0.0, 2.0});
  const Element a = m1.matrix_unit(0, 1);
  const Functional phi = m2.vector_functional(0, 1);
  CHECK_THROWS_AS(evaluate_pairing(m1, phi, a, GroupParameter::time(0)),
                  ModelMismatch);
  CHECK_THROWS_AS(
      evaluate_pairing(m1, m1.vector_functional(0, 1), a, GroupParameter({0, 0})),
      Error);
}

TEST_CASE("sampled orbits match direct pairing evaluation") {
  const MatrixModel m({0.0, 1.0, 3.0});
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::MatrixXcd am(3, 3), gm(3, 3);
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 3; ++k) {
      am(j, k) = cd(u(rng), u(rng));
      gm(j, k) = cd(u(rng), u(rng));
    }
  const Element a = m.element(am);
  const Functional phi = m.functional(gm);
  const CuboidWindow w = CuboidWindow::line(8.0, 0.5);
  const OrbitSamples s = sample_orbit(m, phi, a, w);
  REQUIRE(static_cast<long>(s.values.size()) == w.total_nodes());
  for (int i = 0; i < w.nodes(0); ++i) {
    const cd direct =
        evaluate_pairing(m, phi, a, GroupParameter::time(w.coord(0, i)));
    CHECK(std::abs(s.values[static_cast<std::size_t>(i)] - direct) < 1e-12);
  }
}

TEST_CASE("gaussian taper multiplies samples by the declared profile") {
  const MatrixModel m({0.0, 1.0});
  const Element a = m.matrix_unit(0, 1);
  const Functional phi = m.vector_functional(0, 1);
  const CuboidWindow w = CuboidWindow::line(8.0, 0.5);
  SampleOptions opt;
  opt.taper_ratio = 4.0;
  const OrbitSamples plain = sample_orbit(m, phi, a, w);
  const OrbitSamples tapered = sample_orbit(m, phi, a, w, opt);
  const double sigma = 8.0 / 4.0;
  for (int i = 0; i < w.nodes(0); ++i) {
    const double x = w.coord(0, i);
    const cd want = plain.values[static_cast<std::size_t>(i)] *
                    std::exp(-0.5 * (x / sigma) * (x / sigma));
    CHECK(std::abs(tapered.values[static_cast<std::size_t>(i)] - want) < 1e-12);
  }
}

TEST_CASE("undersampling against the declared max frequency is an error") {
  const MatrixModel m({0.0, 10.0});
  const Element a = m.matrix_unit(0, 1);
  const Functional phi = m.vector_functional(0, 1);
  // Nyquist at step 1 is pi < 10.
  CHECK_THROWS_AS(sample_orbit(m, phi, a, CuboidWindow::line(20.0, 1.0)),
                  GridTooCoarse);
  // Too few nodes per edge.
  CHECK_THROWS_AS(sample_orbit(m, phi, a, CuboidWindow::line(1.0, 0.25)), Error);
}

TEST_CASE("adjoint functional satisfies phibar(A) = conj(phi(A*))") {
  const MatrixModel m({0.0, 1.0, 3.0});
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::MatrixXcd am(3, 3), gm(3, 3);
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 3; ++k) {
      am(j, k) = cd(u(rng), u(rng));
      gm(j, k) = cd(u(rng), u(rng));
    }
  const Element a = m.element(am);
  const Functional phi = m.functional(gm);
  const Functional bar = adjoint_functional(phi);
  for (double t : {-2.0, 0.0, 0.7}) {
    const cd lhs = evaluate_pairing(m, bar, a, GroupParameter::time(t));
    const cd rhs = std::conj(
        evaluate_pairing(m, phi, m.star(m.translate(a, GroupParameter::time(t))),
                         GroupParameter::time(0)));
    CHECK(std::abs(lhs - rhs) < 1e-12);
  }
}

TEST_CASE("translation realizes the group law on orbits") {
  const MatrixModel m({0.0, 1.0, 3.0});
  const Element a = m.matrix_unit(1, 2);
  const Functional phi = m.vector_functional(1, 2);
  const double s = 0.4, t = 1.3;
  const cd lhs = evaluate_pairing(m, phi, m.translate(a, GroupParameter::time(s)),
                                  GroupParameter::time(t));
  const cd rhs = evaluate_pairing(m, phi, a, GroupParameter::time(s + t));
  CHECK(std::abs(lhs - rhs) < 1e-12);
}

TEST_CASE("decay exponent fit recovers a known power law") {
  std::vector<double> x, y;
  for (int i = 1; i <= 6; ++i) {
    const double xi = 10.0 * i;
    x.push_back(xi);
    y.push_back(7.0 * std::pow(xi, -1.5));
  }
  CHECK(fit_decay_exponent(x, y) == Catch::Approx(1.5).margin(1e-12));
  CHECK_THROWS_AS(fit_decay_exponent({1.0}, {1.0}), Error);
}

TEST_CASE("format_double round-trips exactly") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-9, 1e300, 0.0, 123456.789,
                   3.14159265358979323846}) {
    const std::string s = format_double(v);
    CHECK(std::stod(s) == v);
  }
}

TEST_CASE("fnv1a matches the reference offset basis") {
  CHECK(fnv1a("") == 14695981039346656037ull);
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
  CHECK(fnv1a_hex("abc") != fnv1a_hex("acb"));
}
