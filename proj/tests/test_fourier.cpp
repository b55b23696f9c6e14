#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "arveson/fourier.hpp"
#include "arveson/models/lattice_model.hpp"
#include "arveson/models/matrix_model.hpp"

using namespace arveson;

namespace {

const std::vector<double> kEigen = {0.0, 1.0, 3.0};

CuboidWindow matrix_window() { return CuboidWindow::line(32 * kPi, kPi / 16); }

SpectrumConfig matrix_spectrum_config() {
  SpectrumConfig cfg;
  cfg.window = matrix_window();
  cfg.tau_rel = 1e-6;
  cfg.taper_ratio = 5.5;
  return cfg;
}

}  // namespace

TEST_CASE("fourier transform round-trips to 1e-9") {
  const MatrixModel m(kEigen);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::MatrixXcd am(3, 3), gm(3, 3);
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 3; ++k) {
      am(j, k) = cd(u(rng), u(rng));
      gm(j, k) = cd(u(rng), u(rng));
    }
  const OrbitSamples s = sample_orbit(m, m.functional(gm), m.element(am),
                                      CuboidWindow::line(16.0, 0.5));
  const OrbitSamples back = inverse_orbit_fourier(orbit_fourier(s));
  REQUIRE(back.values.size() == s.values.size());
  double err = 0;
  for (std::size_t i = 0; i < s.values.size(); ++i)
    err = std::max(err, std::abs(back.values[i] - s.values[i]));
  CHECK(err < 1e-9);
}

TEST_CASE("a pure exponential peaks at its frequency with the declared height") {
  const MatrixModel m(kEigen);
  // E12 against w12: the orbit is exactly exp(it(lambda_0 - lambda_1)) = e^{-it}.
  const Element a = m.matrix_unit(0, 1);
  const Functional phi = m.vector_functional(0, 1);
  const CuboidWindow w = matrix_window();
  const SpectralDensity dens = orbit_fourier(sample_orbit(m, phi, a, w));
  double best = 0;
  double at = 0;
  for (int i = 0; i < dens.nodes(0); ++i) {
    const double v = std::abs(dens.values[static_cast<std::size_t>(i)]);
    if (v > best) {
      best = v;
      at = dens.freq_axes[0][static_cast<std::size_t>(i)];
    }
  }
  CHECK(std::abs(at - (-1.0)) <= dens.cell(0));
  // Height of a unit exponential: (2 pi)^{-1/2} * nodes * step, up to the
  // leakage from -1 sitting between two grid frequencies.
  const double want = std::pow(kTwoPi, -0.5) * w.nodes(0) * w.steps[0];
  CHECK(best == Catch::Approx(want).epsilon(5e-3));
}

TEST_CASE("detected matrix support is the eigenvalue difference set") {
  const MatrixModel m(kEigen);
  const SupportSet sp = arveson_spectrum(m, m.generator_elements(),
                                         m.functional_family(),
                                         matrix_spectrum_config())
                            .total;
  // Independent oracle: all pairwise eigenvalue differences.
  std::vector<double> diffs;
  for (double x : kEigen)
    for (double y : kEigen) diffs.push_back(x - y);
  std::sort(diffs.begin(), diffs.end());
  diffs.erase(std::unique(diffs.begin(), diffs.end()), diffs.end());
  REQUIRE(diffs.size() == 7);

  REQUIRE(sp.boxes.size() == diffs.size());
  const double cell = sp.max_cell();
  for (std::size_t i = 0; i < diffs.size(); ++i) {
    CHECK(sp.contains({diffs[i]}, cell));
    // Tight: each box is a small neighborhood of one difference, well
    // below the unit gap between neighbors.
    CHECK(sp.boxes[i].hi[0] - sp.boxes[i].lo[0] < 0.7);
  }
  // Nothing else: midpoints between neighbors stay outside.
  for (std::size_t i = 1; i < diffs.size(); ++i)
    CHECK(!sp.contains({(diffs[i - 1] + diffs[i]) / 2}, cell));
}

TEST_CASE("support sets merge overlapping boxes deterministically") {
  SupportSet a;
  a.cell = {0.1};
  a.boxes.push_back({{0.0}, {1.0}});
  a.boxes.push_back({{3.0}, {4.0}});
  SupportSet b;
  b.cell = {0.1};
  b.boxes.push_back({{0.5}, {2.0}});
  a.merge_with(b);
  REQUIRE(a.boxes.size() == 2);
  CHECK(a.boxes[0].lo[0] == 0.0);
  CHECK(a.boxes[0].hi[0] == 2.0);
  CHECK(a.boxes[1].lo[0] == 3.0);
  CHECK(a.contains({1.7}));
  CHECK(!a.contains({2.5}));
}

TEST_CASE("detect_support rejects thresholds outside (0,1)") {
  const MatrixModel m(kEigen);
  const SpectralDensity dens = orbit_fourier(sample_orbit(
      m, m.vector_functional(0, 1), m.matrix_unit(0, 1), matrix_window()));
  CHECK_THROWS_AS(detect_support(dens, 0.0), InvalidConfig);
  CHECK_THROWS_AS(detect_support(dens, 1.0), InvalidConfig);
}

TEST_CASE("spectral subspace membership accepts the true support, flags leaks") {
  const MatrixModel m(kEigen);
  const Element a = m.matrix_unit(0, 1);  // orbit frequency -1
  const SpectrumConfig cfg = matrix_spectrum_config();
  const auto family = m.functional_family();

  SupportSet delta;
  delta.cell = {0.1};
  delta.boxes.push_back({{-1.5}, {-0.5}});
  CHECK(spectral_subspace_test(m, a, delta, family, cfg).inside);

  SupportSet wrong;
  wrong.cell = {0.1};
  wrong.boxes.push_back({{1.5}, {2.5}});
  const SubspaceTestReport rep = spectral_subspace_test(m, a, wrong, family, cfg);
  CHECK(!rep.inside);
  CHECK(!rep.leaks.empty());
}

TEST_CASE("energy-momentum transfer demands a 1+1 Minkowski action") {
  const MatrixModel m(kEigen);
  SpectrumConfig cfg = matrix_spectrum_config();
  const Element a = m.matrix_unit(0, 1);
  CHECK_THROWS_AS(energy_momentum_transfer(a, cfg), SignatureMismatch);
}

TEST_CASE("spacetime orbits carry the Minkowski sign convention") {
  LatticeParams p;
  const LatticeModel lat(p);
  const int q = lat.quarter_mode();
  // <1p_q| alpha_{(t,n)}(a+_q) |Omega> = exp(i(w_q t - theta_q n)).
  Eigen::VectorXcd f = Eigen::VectorXcd::Zero(lat.n_modes());
  f(q) = 1.0;
  FockVector onep = FockVector::zero(lat.n_modes());
  onep.one = f;
  const Functional phi =
      lat.functional(onep, FockVector::vacuum(lat.n_modes()), "x");
  const Element a = lat.creator(f);
  const double w = lat.omega(q), th = lat.theta(q);
  for (const auto& [t, n] :
       {std::pair<double, double>{0.7, 3.0}, {-0.3, -5.0}}) {
    const cd got = evaluate_pairing(lat, phi, a, GroupParameter::spacetime(t, n));
    const cd want = std::polar(1.0, w * t - th * n);
    CHECK(std::abs(got - want) < 1e-12);
  }
  // The declared mode list carries the plain inner-product frequencies.
  const auto modes = lat.orbit_modes(phi, a).value();
  REQUIRE(modes.size() == 1);
  CHECK(modes[0].freq[0] == Catch::Approx(w));
  CHECK(modes[0].freq[1] == Catch::Approx(-th));
  CHECK(lat.signature() == std::vector<int>{+1, -1});
}

TEST_CASE("arveson_spectrum rejects empty families") {
  const MatrixModel m(kEigen);
  CHECK_THROWS_AS(
      arveson_spectrum(m, {}, m.functional_family(), matrix_spectrum_config()),
      InvalidConfig);
}
