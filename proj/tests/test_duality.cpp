#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "arveson/duality.hpp"
#include "arveson/models/matrix_model.hpp"
#include "arveson/models/two_vacua.hpp"

using namespace arveson;

namespace {

DualityConfig matrix_config() {
  DualityConfig cfg;
  cfg.classify.ladder = {CuboidWindow::line(16 * kPi, kPi / 16),
                         CuboidWindow::line(32 * kPi, kPi / 16),
                         CuboidWindow::line(64 * kPi, kPi / 16)};
  cfg.classify.taper_ratio = 5.5;
  return cfg;
}

}  // namespace

TEST_CASE("the transposed action reproduces primal orbits") {
  const MatrixModel m({0.0, 1.0, 3.0});
  const DualModel dual(m);
  const Element a = m.matrix_unit(0, 2);
  const Functional phi = m.vector_functional(0, 2);
  for (double t : {-1.2, 0.0, 0.8}) {
    const cd primal = evaluate_pairing(m, phi, a, GroupParameter::time(t));
    const cd transposed = evaluate_pairing(dual, dual.lift(a), dual.lift(phi),
                                           GroupParameter::time(t));
    CHECK(std::abs(primal - transposed) < 1e-12);
  }
}

TEST_CASE("annihilators vanish on their span and have the right dimension") {
  const MatrixModel m({0.0, 1.0, 3.0});
  const std::vector<Element> span = {m.matrix_unit(0, 0)};
  const std::vector<Functional> family = {
      m.vector_functional(0, 0), m.vector_functional(0, 1), m.normalized_trace()};
  const AnnihilatorBasis ann = annihilator(m, span, family);
  CHECK(ann.span_rank == 1);
  REQUIRE(ann.basis.size() == 2);
  const GroupParameter origin = GroupParameter::time(0);
  for (const auto& vec : ann.basis) {
    cd acc = 0;
    for (std::size_t j = 0; j < family.size(); ++j)
      acc += vec(static_cast<long>(j)) *
             evaluate_pairing(m, family[j], span[0], origin);
    CHECK(std::abs(acc) < 1e-10);
  }
}

TEST_CASE("linearly dependent spans are rejected") {
  const MatrixModel m({0.0, 1.0, 3.0});
  const std::vector<Element> span = {
      m.matrix_unit(0, 0), m.combine(2.0, m.matrix_unit(0, 0), 0.0, m.unit())};
  CHECK_THROWS_AS(annihilator(m, span, m.functional_family()),
                  RankDeficientFamily);
}

TEST_CASE("disjoint spectral subspaces pair to zero within 1e-10") {
  const MatrixModel m({0.0, 1.0, 3.0});
  const DualityConfig cfg = matrix_config();
  const double h = 0.25;
  SupportSet delta, delta_prime;
  delta.cell = {0.01};
  delta.boxes.push_back(FreqBox::point({-3.0}, h));
  delta_prime.cell = {0.01};
  delta_prime.boxes.push_back(FreqBox::point({3.0}, h));
  const OrthogonalityReport rep = check_orthogonality(m, delta, delta_prime, cfg);
  CHECK(rep.pass);
  CHECK(rep.pairs_tested > 0);
  CHECK(rep.max_violation <= 1e-10);
}

TEST_CASE("intersecting support sets are refused outright") {
  const MatrixModel m({0.0, 1.0, 3.0});
  SupportSet delta, delta_prime;
  delta.cell = {0.01};
  delta.boxes.push_back(FreqBox::point({0.0}, 1.0));
  delta_prime.cell = {0.01};
  delta_prime.boxes.push_back(FreqBox::point({0.5}, 1.0));
  CHECK_THROWS_AS(check_orthogonality(m, delta, delta_prime, matrix_config()),
                  OverlapError);
}

TEST_CASE("matrix actions satisfy the necessary splitting conditions") {
  const MatrixModel m({0.0, 1.0, 3.0});
  const NecessaryConditionsReport rep =
      check_necessary_conditions(m, matrix_config());
  CHECK(rep.verdict == "CONSISTENT");
  CHECK(rep.part_a);
  CHECK(rep.part_b);
  CHECK(rep.part_c);
  CHECK(!rep.dimensions.empty());
}

TEST_CASE("two invariant states against one invariant element violate part (a)") {
  const TwoVacuaModel tv(2);
  DualityConfig cfg = matrix_config();
  const NecessaryConditionsReport rep = check_necessary_conditions(tv, cfg);
  CHECK(rep.verdict == "VIOLATED(a)");
  bool found_zero = false;
  for (const auto& d : rep.dimensions)
    if (std::abs(d.q[0]) < 1e-6) {
      found_zero = true;
      CHECK(d.dim_functionals == 2);
      CHECK(d.dim_elements == 1);
    }
  CHECK(found_zero);
}

TEST_CASE("the decomposition refuses states with non-continuous kernels") {
  const MatrixModel m({0.0, 1.0, 3.0});
  const DualityConfig cfg = matrix_config();
  // A vector state on a matrix algebra: diagonal units stay invariant with a
  // mass at 0 after centering.
  CHECK_THROWS_AS(
      build_decomposition(m, m.vector_functional(0, 0), m.unit(), cfg),
      HypothesisFailed);
  // Non-states are rejected before any analysis.
  CHECK_THROWS_AS(
      build_decomposition(m, m.vector_functional(0, 1), m.unit(), cfg),
      NotAState);
}

TEST_CASE("the point and continuous projections are complementary") {
  const MatrixModel m({0.0, 1.0, 3.0});
  DecompositionResult res;
  res.omega0 = m.normalized_trace();
  res.unit = m.unit();
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::MatrixXcd am(3, 3);
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 3; ++k) am(j, k) = cd(u(rng), u(rng));
  const Element a = m.element(am);
  const Element sum =
      m.combine(1.0, res.p_pp(m, a), 1.0, res.p_c(m, a));
  const Eigen::MatrixXcd diff = MatrixModel::matrix_of(sum) - am;
  CHECK(diff.cwiseAbs().maxCoeff() <= 1e-15);
}
