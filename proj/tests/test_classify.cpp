#include <catch2/catch_amalgamated.hpp>

#include "arveson/classify.hpp"
#include "arveson/models/flow_models.hpp"
#include "arveson/models/matrix_model.hpp"
#include "arveson/models/two_vacua.hpp"

using namespace arveson;

namespace {

ClassifyConfig matrix_config() {
  ClassifyConfig cfg;
  cfg.ladder = {CuboidWindow::line(16 * kPi, kPi / 16),
                CuboidWindow::line(32 * kPi, kPi / 16),
                CuboidWindow::line(64 * kPi, kPi / 16)};
  cfg.taper_ratio = 5.5;
  return cfg;
}

ClassifyConfig flow_config(double step = 0.05) {
  ClassifyConfig cfg;
  cfg.ladder = {CuboidWindow::line(100, step), CuboidWindow::line(1000, step),
                CuboidWindow::line(10000, step)};
  return cfg;
}

// Brute-force windowed ergodic average: trapezoid of e^{-iqt} c(t) on [-L, L].
cd direct_average(const Model& m, const Functional& phi, const Element& a,
                  double q, const CuboidWindow& w) {
  cd acc = 0;
  const int n = w.nodes(0);
  const double step = w.steps[0];
  for (int i = 0; i < n; ++i) {
    const double t = w.coord(0, i);
    const double trap = (i == 0 || i == n - 1) ? 0.5 : 1.0;
    acc += trap * std::polar(1.0, -q * t) *
           evaluate_pairing(m, phi, a, GroupParameter::time(t)) * step;
  }
  return acc / ((n - 1) * step);
}

}  // namespace

TEST_CASE("ergodic averages match the direct windowed integral") {
  const MatrixModel m({0.0, 1.0, 3.0});
  const Element a = m.matrix_unit(0, 1);
  const Functional phi = m.vector_functional(0, 1);
  const CuboidWindow w = CuboidWindow::line(16 * kPi, kPi / 16);
  for (double q : {-1.0, 0.0, 0.7}) {
    const cd got = ergodic_average(m, a, phi, {q}, w);
    const cd want = direct_average(m, phi, a, q, w);
    CHECK(std::abs(got - want) < 1e-10);
  }
  // At the orbit frequency the average is exactly 1 on every window.
  CHECK(std::abs(ergodic_average(m, a, phi, {-1.0}, w) - cd(1)) < 1e-10);
}

TEST_CASE("point masses of matrix orbits carry the exact mode weights") {
  const MatrixModel m({0.0, 1.0, 3.0});
  const ClassifyConfig cfg = matrix_config();
  // E13 against w13: a single mass at lambda_0 - lambda_2 = -3 with weight 1.
  {
    const PointMassMap pm =
        extract_point_masses(m, m.matrix_unit(0, 2), m.vector_functional(0, 2), cfg);
    REQUIRE(pm.size() == 1);
    CHECK(std::abs(pm.begin()->first[0] - (-3.0)) < 1e-6);
    CHECK(std::abs(pm.begin()->second - cd(1)) < 1e-8);
  }
  // Linearity: E12 + 2 E13 against w12 + w13 gives masses (1, 2) at (-1, -3).
  // The two atoms leak O(1/(gap L)) into each other's averages, so the
  // recovered data is exact only to the cross-talk level.
  {
    const Element a = m.combine(1.0, m.matrix_unit(0, 1), 2.0, m.matrix_unit(0, 2));
    const Functional phi = m.functional(
        MatrixModel::matrix_of(m.vector_functional(0, 1)) +
        MatrixModel::matrix_of(m.vector_functional(0, 2)));
    const PointMassMap pm = extract_point_masses(m, a, phi, cfg);
    REQUIRE(pm.size() == 2);
    auto it = pm.begin();
    CHECK(std::abs(it->first[0] - (-3.0)) < 1e-3);
    CHECK(std::abs(it->second - cd(2)) < 1e-3);
    ++it;
    CHECK(std::abs(it->first[0] - (-1.0)) < 1e-3);
    CHECK(std::abs(it->second - cd(1)) < 1e-3);
  }
}

TEST_CASE("matrix orbits classify pure point against the mode-list oracle") {
  const MatrixModel m({0.0, 1.0, 3.0});
  const ClassifyConfig cfg = matrix_config();
  const auto family = m.functional_family();
  const Classification cls = classify_element(m, m.matrix_unit(1, 2), family, cfg);
  CHECK(cls.type == MeasureType::PurePoint);
  REQUIRE(cls.point_masses.size() == 1);
  // Oracle: the largest per-functional weight at the orbit frequency.
  double want = 0;
  for (const auto& phi : family) {
    const auto modes = m.orbit_modes(phi, m.matrix_unit(1, 2)).value();
    cd acc = 0;
    for (const auto& mode : modes)
      if (std::abs(mode.freq[0] - (-2.0)) < 1e-9) acc += mode.weight;
    want = std::max(want, std::abs(acc));
  }
  CHECK(std::abs(cls.point_masses.begin()->first[0] - (-2.0)) < 1e-6);
  CHECK(std::abs(std::abs(cls.point_masses.begin()->second) - want) < 1e-8);
}

TEST_CASE("gaussian density flow classifies absolutely continuous") {
  const DensityFlowModel flow(2.0, 1.0);
  const ClassifyConfig cfg = flow_config();
  const Classification cls = classify_element(
      flow, flow.base_element(), flow.functional_family(), cfg);
  CHECK(cls.type == MeasureType::AC);
  CHECK(cls.point_masses.empty());
  CHECK(cls.in_continuous);
  // Oracle: the quadratic mass converges to int |c|^2 dt = sqrt(pi)/sigma.
  const double want = std::sqrt(kPi) / flow.sigma();
  REQUIRE(!cls.mass_curve.empty());
  CHECK(cls.mass_curve.back().second == Catch::Approx(want).epsilon(0.02));
  // And ergodic averages vanish at the density mean.
  const ErgodicSeries s = ergodic_ladder(flow, flow.base_element(),
                                         flow.eval_functional(), {flow.mean()}, cfg);
  CHECK(std::abs(s.limit) < 1e-3);
  CHECK(s.gamma > 0.4);
}

TEST_CASE("riesz product flow classifies singular continuous") {
  const RieszProductModel flow(1.0 / 3.0, 2.5e4);
  const ClassifyConfig cfg = flow_config();
  const Classification cls = classify_element(
      flow, flow.base_element(), flow.functional_family(), cfg);
  CHECK(cls.type == MeasureType::SC);
  CHECK(cls.point_masses.empty());
  CHECK(cls.in_continuous);
  // Oracle: brute-force quadratic mass on each rung, and growth >= 1.3x.
  REQUIRE(cls.mass_curve.size() == 3);
  for (std::size_t r = 0; r < cls.mass_curve.size(); ++r) {
    const CuboidWindow& w = cfg.ladder[r];
    double direct = 0;
    for (int i = 0; i < w.nodes(0); ++i) {
      const double t = w.coord(0, i);
      const double trap = (i == 0 || i == w.nodes(0) - 1) ? 0.5 : 1.0;
      direct += trap * std::norm(flow.base_orbit(t)) * w.steps[0];
    }
    CHECK(cls.mass_curve[r].second == Catch::Approx(direct).epsilon(0.01));
    if (r > 0)
      CHECK(cls.mass_curve[r].second / cls.mass_curve[r - 1].second >= 1.3);
  }
}

TEST_CASE("two-circle rotations classify pure point at the mode frequencies") {
  const TwoVacuaModel tv(2);
  ClassifyConfig cfg = matrix_config();
  const auto family = tv.functional_family();
  {
    const Classification cls = classify_element(tv, tv.unit(), family, cfg);
    CHECK(cls.type == MeasureType::PurePoint);
    REQUIRE(cls.point_masses.size() == 1);
    CHECK(std::abs(cls.point_masses.begin()->first[0]) < 1e-6);
  }
  {
    const Classification cls =
        classify_element(tv, tv.mode_element(1, 1), family, cfg);
    CHECK(cls.type == MeasureType::PurePoint);
    REQUIRE(cls.point_masses.size() == 1);
    CHECK(std::abs(cls.point_masses.begin()->first[0] - std::sqrt(2.0)) < 1e-6);
  }
}

TEST_CASE("quotient classes mod AC distinguish SC representatives") {
  const RieszProductModel flow(1.0 / 3.0, 2.5e4);
  const ClassifyConfig cfg = flow_config();
  const auto family = flow.functional_family();
  const QuotientClass q =
      make_quotient_class(flow, flow.base_element(), family, cfg);
  CHECK(q.sc_mass > 0);
  // Translation acts on classes without changing the SC content.
  const QuotientClass moved =
      quotient_act(flow, q, GroupParameter::time(2.0), family, cfg);
  CHECK(!class_equal(flow, q,
                     QuotientClass{flow.combine(0.0, flow.base_element(), 0.0,
                                                flow.base_element()),
                                   0, "[0]"},
                     family, cfg));
  CHECK(class_equal(flow, moved, moved, family, cfg));
}

TEST_CASE("classify validates its ladder") {
  const MatrixModel m({0.0, 1.0});
  ClassifyConfig cfg;
  cfg.ladder = {CuboidWindow::line(10, 0.1), CuboidWindow::line(20, 0.1)};
  CHECK_THROWS_AS(
      classify_element(m, m.unit(), m.functional_family(), cfg), InvalidConfig);
  cfg = matrix_config();
  CHECK_THROWS_AS(classify_element(m, m.unit(), {}, cfg), InvalidConfig);
}
