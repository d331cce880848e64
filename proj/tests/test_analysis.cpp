#include "heatbem/analysis.hpp"

#include <doctest.h>

#include <cmath>

using namespace heatbem;

TEST_CASE("condition numbers of simple matrices") {
  const Matrix d = Vector::LinSpaced(4, 1.0, 8.0).asDiagonal();
  CHECK(condition_number(d) == doctest::Approx(8.0));
  CHECK(condition_number(d, KappaConvention::Eigenvalues) == doctest::Approx(8.0));
  // for a nonnormal matrix the two conventions differ
  Matrix j(2, 2);
  j << 1.0, 10.0, 0.0, 1.0;
  CHECK(condition_number(j, KappaConvention::Eigenvalues) == doctest::Approx(1.0));
  CHECK(condition_number(j) > 100.0);
  CHECK_THROWS_AS(condition_number(Matrix::Zero(2, 2)), NumericalError);
  CHECK(to_string(KappaConvention::SingularValues) == "sv");
}

TEST_CASE("ellipticity margin") {
  Matrix a(2, 2);
  a << 2.0, 3.0, -3.0, 1.0;  // skew part does not count
  CHECK(ellipticity_margin(a) == doctest::Approx(1.0));
}

TEST_CASE("estimated order of convergence") {
  const auto r = eoc({1.0, 0.5, 0.125, 0.0});
  REQUIRE(r.size() == 3);
  CHECK(*r[0] == doctest::Approx(1.0));
  CHECK(*r[1] == doctest::Approx(2.0));
  CHECK_FALSE(r[2].has_value());
  CHECK(eoc({1.0}).empty());
}

TEST_CASE("L2 error of piecewise constant approximations") {
  const SineSeries s = example1_series(1.0);
  const BoundaryMesh m = uniform_mesh(1.0, 3);
  const Vector best = project_flux(m, s);
  const double e_best = l2_error(m, best, s);
  CHECK(l2_error(m, best + Vector::Constant(m.size(), 0.01), s) > e_best);
  // ||w||^2 = 2 int_0^1 (2 pi)^2 e^{-8 pi^2 t} dt
  const double norm = std::sqrt(2.0 * 4.0 * M_PI * M_PI * (1.0 - std::exp(-8.0 * M_PI * M_PI)) /
                                (8.0 * M_PI * M_PI));
  CHECK(l2_error(m, Vector::Zero(m.size()), s) == doctest::Approx(norm).epsilon(1e-10));
  // Pythagoras for the L2 projection
  const double e0 = l2_error(m, Vector::Zero(m.size()), s);
  double proj2 = 0.0;
  for (const auto& e : m.elements())
    proj2 += e.size() * best(e.index) * best(e.index);
  CHECK(e_best * e_best + proj2 == doctest::Approx(e0 * e0).epsilon(1e-10));
}
