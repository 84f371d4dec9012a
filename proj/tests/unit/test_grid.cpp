#include <cmath>
#include <limits>

#include "doctest.h"
#include "helpers.hpp"
#include "tvlab/errors.hpp"
#include "tvlab/grid.hpp"

using namespace tvlab;
using testing::pi;

namespace {

// Max interior error of the x-gradient of cos(pi x / L) against the exact derivative.
double gradient_error(int n) {
  const Grid g(1.0, n);
  const VectorField d = gradient(testing::cos_mode(g));
  double err = 0.0;
  for (int i = 1; i < n - 1; ++i) {
    err = std::max(err, std::abs(d[0][i] + pi * std::sin(pi * g.center(0, i))));
  }
  return err;
}

double laplacian_error(int n) {
  const Grid g(1.0, n);
  const ScalarField l = laplacian_neumann(testing::cos_mode(g));
  double err = 0.0;
  for (int i = 1; i < n - 1; ++i) {
    err = std::max(err, std::abs(l[i] + pi * pi * std::cos(pi * g.center(0, i))));
  }
  return err;
}

}  // namespace

TEST_CASE("grid geometry and invariants") {
  const Grid g(2.0, 8);
  CHECK(g.dim() == 1);
  CHECK(g.size() == 8);
  CHECK(g.spacing(0) == doctest::Approx(0.25));
  CHECK(g.center(0, 0) == doctest::Approx(0.125));
  CHECK(g.domain_volume() == doctest::Approx(2.0));

  const Grid g2(1.0, 2.0, 4, 8);
  CHECK(g2.size() == 32);
  CHECK(g2.cell_volume() == doctest::Approx(0.25 * 0.25));
  CHECK(g2.min_spacing() == doctest::Approx(0.25));

  CHECK_THROWS_AS(Grid(1.0, 3), DomainError);
  CHECK_THROWS_AS(Grid(0.0, 8), DomainError);
  CHECK_THROWS_AS(Grid(1.0, 1.0, 8, 2), DomainError);
  CHECK_THROWS_AS(ScalarField(g, std::vector<double>(3)), FieldError);
}

TEST_CASE("gradient") {
  const Grid g(1.0, 256);

  SUBCASE("constant field has zero gradient") {
    const VectorField d = gradient(ScalarField(g, 3.0));
    for (double x : d[0]) CHECK(x == 0.0);
  }

  SUBCASE("x^2 gives 2x in the interior") {
    const VectorField d = gradient(ScalarField::sample(g, [](double x, double) { return x * x; }));
    const double h = g.spacing(0);
    for (int i = 1; i < 255; ++i) CHECK(std::abs(d[0][i] - 2.0 * g.center(0, i)) <= 2.0 * h * h);
  }

  SUBCASE("cosine: interior error is O(h^2)") {
    const double h = g.spacing(0);
    CHECK(gradient_error(256) <= pi * pi * pi / 6.0 * h * h * 1.01);
  }

  SUBCASE("normal component vanishes at boundary cells") {
    const ScalarField phi = testing::random_field(g, 3);
    const VectorField d = gradient(phi);
    CHECK(d[0][0] == 0.0);
    CHECK(d[0][255] == 0.0);

    const Grid g2(1.0, 1.0, 16, 16);
    const VectorField d2 = gradient(testing::random_field(g2, 4));
    for (int k = 0; k < 16; ++k) {
      CHECK(d2[0][g2.index(0, k)] == 0.0);
      CHECK(d2[0][g2.index(15, k)] == 0.0);
      CHECK(d2[1][g2.index(k, 0)] == 0.0);
      CHECK(d2[1][g2.index(k, 15)] == 0.0);
    }
  }

  SUBCASE("non-finite input is rejected") {
    ScalarField phi(g, 1.0);
    phi[7] = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_WITH_AS(gradient(phi), "non-finite field", FieldError);
    phi[7] = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(laplacian_neumann(phi), FieldError);
  }
}

TEST_CASE("divergence") {
  const Grid g(1.0, 64);

  SUBCASE("zero field") {
    const ScalarField d = divergence(VectorField(g));
    for (double x : d.values) CHECK(x == 0.0);
  }

  SUBCASE("G(x) = x: divergence one, integral equals the end values' difference") {
    VectorField G(g);
    for (int i = 0; i < 64; ++i) G[0][i] = g.center(0, i);
    const ScalarField d = divergence(G);
    for (double x : d.values) CHECK(x == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(d.integral() == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(boundary_flux(G) == doctest::Approx(1.0).epsilon(1e-13));
  }

  SUBCASE("rotational 2D field is divergence free") {
    const Grid g2(1.0, 1.0, 32, 32);
    VectorField G(g2);
    for (int j = 0; j < 32; ++j) {
      for (int i = 0; i < 32; ++i) {
        G[0][g2.index(i, j)] = g2.center(1, j);
        G[1][g2.index(i, j)] = -g2.center(0, i);
      }
    }
    const ScalarField d = divergence(G);
    for (double x : d.values) CHECK(std::abs(x) <= 1e-12);
  }

  SUBCASE("discrete integral equals boundary flux for arbitrary fields") {
    const Grid g2(1.5, 1.0, 24, 20);
    VectorField G(g2);
    G[0] = testing::random_field(g2, 11).values;
    G[1] = testing::random_field(g2, 12).values;
    const double flux = boundary_flux(G);
    CHECK(divergence(G).integral() == doctest::Approx(flux).epsilon(1e-12).scale(1.0));
  }
}

TEST_CASE("laplacian with mirrored ghosts") {
  SUBCASE("linear field: zero in the interior") {
    const Grid g(1.0, 32);
    const ScalarField l = laplacian_neumann(ScalarField::sample(g, [](double x, double) { return 3 * x - 1; }));
    for (int i = 1; i < 31; ++i) CHECK(std::abs(l[i]) <= 1e-10);
  }

  SUBCASE("cosine eigenfunction with O(h^2) error") {
    const double h = 1.0 / 256;
    CHECK(laplacian_error(256) <= std::pow(pi, 4) / 12.0 * h * h * 1.01);
  }

  SUBCASE("output integrates to zero for any field") {
    for (unsigned seed = 0; seed < 20; ++seed) {
      const Grid g(1.0, 64);
      const ScalarField phi = testing::random_field(g, seed);
      CHECK(std::abs(laplacian_neumann(phi).integral()) <= 1e-12 * phi.max_abs());
      const Grid g2(1.0, 2.0, 16, 24);
      const ScalarField psi = testing::random_field(g2, seed + 100);
      CHECK(std::abs(laplacian_neumann(psi).integral()) <= 1e-12 * psi.max_abs() * 1e2);
    }
  }
}

TEST_CASE("hessian frobenius norm") {
  const Grid g(1.0, 128);

  SUBCASE("affine fields map to zero, 1D and 2D") {
    const ScalarField a = hessian_frobenius(ScalarField::sample(g, [](double x, double) { return 2 - 5 * x; }));
    for (double x : a.values) CHECK(x <= 1e-8);
    const Grid g2(1.0, 1.0, 16, 16);
    const ScalarField b =
        hessian_frobenius(ScalarField::sample(g2, [](double x, double y) { return 1 + 2 * x - 3 * y; }));
    for (double x : b.values) CHECK(x <= 1e-9);
  }

  SUBCASE("x^2 / 2 has unit curvature") {
    const ScalarField hs = hessian_frobenius(ScalarField::sample(g, [](double x, double) { return 0.5 * x * x; }));
    for (double x : hs.values) CHECK(x == doctest::Approx(1.0).epsilon(1e-8));
  }

  SUBCASE("in 1D the norm equals |laplacian| in the interior") {
    const ScalarField phi = testing::random_field(g, 5);
    const ScalarField hs = hessian_frobenius(phi);
    const ScalarField l = laplacian_neumann(phi);
    for (int i = 1; i < 127; ++i) CHECK(hs[i] == doctest::Approx(std::abs(l[i])).epsilon(1e-12));
  }

  SUBCASE("2D: x y has mixed derivative one") {
    const Grid g2(1.0, 1.0, 16, 16);
    const ScalarField hs = hessian_frobenius(ScalarField::sample(g2, [](double x, double y) { return x * y; }));
    for (double x : hs.values) CHECK(x == doctest::Approx(std::sqrt(2.0)).epsilon(1e-10));
  }
}

TEST_CASE("gradient norms and dissipation integrals") {
  const Grid g(1.0, 256);
  const ScalarField c = testing::cos_mode(g);

  SUBCASE("constant field") {
    for (double p : {2.0, 3.0, 4.5}) {
      CHECK(lp_gradient_norm(ScalarField(g, 2.0), p) == 0.0);
      CHECK(weighted_dissipation(ScalarField(g, 2.0), p) == 0.0);
    }
  }

  SUBCASE("phi = x, p = 2: unit integrand on interior cells") {
    const ScalarField phi = ScalarField::sample(g, [](double x, double) { return x; });
    const VectorField d = gradient(phi);
    double interior = 0.0;
    for (int i = 1; i < 255; ++i) interior += d[0][i] * d[0][i];
    interior *= g.spacing(0);
    CHECK(interior == doctest::Approx(1.0 - 2.0 * g.spacing(0)).epsilon(1e-10));
    // The two boundary cells carry zero normal derivative.
    CHECK(std::abs(lp_gradient_norm(phi, 2.0) - 1.0) <= 2.0 * g.spacing(0) + 1e-12);
  }

  SUBCASE("cosine, p = 2") {
    CHECK(lp_gradient_norm(c, 2.0) == doctest::Approx(pi * pi / 2).epsilon(0.01));
    CHECK(weighted_dissipation(c, 2.0) == doctest::Approx(std::pow(pi, 4) / 2).epsilon(0.01));
  }

  SUBCASE("cosine, p = 4 against dense quadrature") {
    const double oracle = testing::simpson(
        [](double x) {
          const double s = pi * std::sin(pi * x);
          const double cc = pi * pi * std::cos(pi * x);
          return s * s * cc * cc;
        },
        0.0, 1.0);
    CHECK(weighted_dissipation(c, 4.0) == doctest::Approx(oracle).epsilon(0.01));
    const double oracle_norm = testing::simpson(
        [](double x) { return std::pow(pi * std::sin(pi * x), 4); }, 0.0, 1.0);
    CHECK(lp_gradient_norm(c, 4.0) == doctest::Approx(oracle_norm).epsilon(0.01));
  }

  SUBCASE("exponent below two is rejected") {
    CHECK_THROWS_AS(lp_gradient_norm(c, 1.5), DomainError);
    CHECK_THROWS_AS(weighted_dissipation(c, 1.99), DomainError);
  }

  SUBCASE("L^p norm of a constant") {
    CHECK(lp_norm_p(ScalarField(g, -2.0), 3.0) == doctest::Approx(8.0));
  }
}

TEST_CASE("norm properties") {
  const Grid g(1.0, 128);
  const Grid g2(1.0, 1.0, 24, 24);

  SUBCASE("invariance under adding a constant") {
    for (const Grid& gr : {g, g2}) {
      const ScalarField phi = testing::random_field(gr, 9);
      ScalarField shifted = phi;
      for (double& x : shifted.values) x += 4.25;
      for (double p : {2.0, 3.0, 4.0}) {
        CHECK(lp_gradient_norm(shifted, p) == doctest::Approx(lp_gradient_norm(phi, p)).epsilon(1e-12));
        CHECK(weighted_dissipation(shifted, p) ==
              doctest::Approx(weighted_dissipation(phi, p)).epsilon(1e-9));
      }
      const ScalarField hs = hessian_frobenius(phi);
      const ScalarField hs2 = hessian_frobenius(shifted);
      for (std::size_t k = 0; k < hs.size(); ++k) CHECK(hs2[k] == doctest::Approx(hs[k]).epsilon(1e-8).scale(1e3));
    }
  }

  SUBCASE("positive homogeneity of degree p") {
    const ScalarField phi = testing::random_field(g2, 10);
    for (double s : {0.0, 0.5, 3.0}) {
      ScalarField scaled = phi;
      for (double& x : scaled.values) x *= s;
      for (double p : {2.0, 2.5, 4.0}) {
        CHECK(lp_gradient_norm(scaled, p) ==
              doctest::Approx(std::pow(s, p) * lp_gradient_norm(phi, p)).epsilon(1e-12));
        CHECK(weighted_dissipation(scaled, p) ==
              doctest::Approx(std::pow(s, p) * weighted_dissipation(phi, p)).epsilon(1e-12));
      }
    }
  }

  SUBCASE("second-order convergence from N = 128 to 256") {
    CHECK(gradient_error(128) / gradient_error(256) >= 3.5);
    CHECK(laplacian_error(128) / laplacian_error(256) >= 3.5);
    const double exact = pi * pi / 2;
    const double e128 = std::abs(lp_gradient_norm(testing::cos_mode(Grid(1.0, 128)), 2.0) - exact);
    const double e256 = std::abs(lp_gradient_norm(testing::cos_mode(Grid(1.0, 256)), 2.0) - exact);
    CHECK(e128 / e256 >= 3.5);
  }
}
