#include <doctest.h>

#include <Eigen/Dense>
#include <complex>
#include <numbers>
#include <random>

#include "turbmom/errors.hpp"
#include "turbmom/grid.hpp"

using namespace turbmom;
using Complex = std::complex<double>;

namespace {

BilinearKernel random_kernel(const TransverseGrid& grid, unsigned seed) {
  std::mt19937 engine(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  BilinearKernel k = make_kernel(grid);
  for (Eigen::Index r = 0; r < k.values.rows(); ++r)
    for (Eigen::Index c = 0; c < k.values.cols(); ++c) k.values(r, c) = Complex(u(engine), u(engine));
  k.values /= k.values.norm();
  return k;
}

} // namespace

TEST_CASE("build_grid produces the documented 2x2 layout") {
  const TransverseGrid g = build_grid(2, 1.0, 1e7);
  CHECK(g.delta_k == doctest::Approx(1.0));
  REQUIRE(g.size() == 4);
  CHECK(g.points[0].x() == doctest::Approx(-0.5));
  CHECK(g.points[0].y() == doctest::Approx(-0.5));
  CHECK(g.points[1].x() == doctest::Approx(-0.5));
  CHECK(g.points[1].y() == doctest::Approx(0.5));
  CHECK(g.points[2].x() == doctest::Approx(0.5));
  CHECK(g.points[2].y() == doctest::Approx(-0.5));
  CHECK(g.points[3].x() == doctest::Approx(0.5));
  CHECK(g.points[3].y() == doctest::Approx(0.5));
}

TEST_CASE("build_grid 4x4 spacing") {
  const TransverseGrid g = build_grid(4, 2.0, 1e7);
  CHECK(g.size() == 16);
  CHECK(g.delta_k == doctest::Approx(1.0));
}

TEST_CASE("grids are closed under negation") {
  for (int n : {2, 3, 4, 5, 8}) {
    const TransverseGrid g = build_grid(n, 3.0, 100.0);
    for (int i = 0; i < g.size(); ++i) {
      const int j = g.index_of(-g.ipoints[static_cast<std::size_t>(i)]);
      REQUIRE(j >= 0);
      CHECK((g.points[static_cast<std::size_t>(j)] + g.points[static_cast<std::size_t>(i)]).norm() <
            1e-15);
    }
    // No point at exactly zero for even n.
    if (n % 2 == 0) {
      for (int i = 0; i < g.size(); ++i) CHECK(g.norm2_int(i) > 0);
    }
  }
}

TEST_CASE("build_grid rejects bad arguments") {
  CHECK_THROWS_AS(build_grid(1, 1.0, 1.0), InvalidArgumentError);
  CHECK_THROWS_AS(build_grid(4, 0.0, 1.0), InvalidArgumentError);
  CHECK_THROWS_AS(build_grid(4, 1.0, -2.0), InvalidArgumentError);
}

TEST_CASE("grid delta is the identity of the diamond contraction") {
  const TransverseGrid g = build_grid(2, 1.0, 1e7);
  const BilinearKernel delta = grid_delta(g);
  const double two_pi = 2.0 * std::numbers::pi;
  CHECK(delta.values(0, 0).real() == doctest::Approx(two_pi * two_pi).epsilon(1e-14));

  const BilinearKernel a = random_kernel(g, 7);
  const BilinearKernel left = diamond(delta, a);
  const BilinearKernel right = diamond(a, delta);
  CHECK((left.values - a.values).norm() < 1e-14);
  CHECK((right.values - a.values).norm() < 1e-14);

  // Trace under the measure counts grid modes.
  CHECK(weighted_trace(delta).real() == doctest::Approx(g.size()).epsilon(1e-14));
}

TEST_CASE("diamond on a one-point kernel is plain multiplication") {
  BilinearKernel a, b;
  a.values = Eigen::MatrixXcd::Constant(1, 1, 2.0);
  b.values = Eigen::MatrixXcd::Constant(1, 1, 3.0);
  a.weight = b.weight = 1.0;
  CHECK(diamond(a, b).values(0, 0).real() == doctest::Approx(6.0));
}

TEST_CASE("diamond is associative and bilinear") {
  const TransverseGrid g = build_grid(3, 2.0, 50.0);
  const BilinearKernel a = random_kernel(g, 1);
  const BilinearKernel b = random_kernel(g, 2);
  const BilinearKernel c = random_kernel(g, 3);

  const auto assoc_l = diamond(diamond(a, b), c);
  const auto assoc_r = diamond(a, diamond(b, c));
  CHECK((assoc_l.values - assoc_r.values).norm() / assoc_l.values.norm() < 1e-12);

  BilinearKernel sum = b;
  sum.values = b.values + c.values;
  const BilinearKernel lhs = diamond(a, sum);
  const Eigen::MatrixXcd rhs_v = diamond(a, b).values + diamond(a, c).values;
  CHECK((lhs.values - rhs_v).norm() / lhs.values.norm() < 1e-12);
}

TEST_CASE("diamond adjoint identity") {
  const TransverseGrid g = build_grid(2, 1.5, 10.0);
  const BilinearKernel a = random_kernel(g, 11);
  const BilinearKernel b = random_kernel(g, 12);
  BilinearKernel at = a, bt = b;
  at.values = a.values.adjoint();
  bt.values = b.values.adjoint();
  const auto lhs = diamond(a, b).values.adjoint().eval();
  const auto rhs = diamond(bt, at).values;
  CHECK((lhs - rhs).norm() < 1e-14);
}

TEST_CASE("diamond rejects kernels on different grids") {
  const TransverseGrid g2 = build_grid(2, 1.0, 10.0);
  const TransverseGrid g3 = build_grid(3, 1.0, 10.0);
  CHECK_THROWS_AS(diamond(random_kernel(g2, 1), random_kernel(g3, 2)), DimensionError);

  // Same size, different spacing counts as a different grid too.
  const TransverseGrid g2b = build_grid(2, 2.0, 10.0);
  CHECK_THROWS_AS(diamond(random_kernel(g2, 1), random_kernel(g2b, 2)), DimensionError);
}

TEST_CASE("contractions are invariant under consistent relabeling") {
  const TransverseGrid g = build_grid(2, 1.0, 10.0);
  const BilinearKernel a = random_kernel(g, 21);
  const BilinearKernel b = random_kernel(g, 22);

  // Reverse the point ordering via a permutation matrix.
  const int n = g.size();
  Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 0; i < n; ++i) p(i, n - 1 - i) = 1.0;

  BilinearKernel ap = a, bp = b;
  ap.values = p * a.values * p.transpose();
  bp.values = p * b.values * p.transpose();
  const auto direct = diamond(a, b).values;
  const auto permuted = diamond(ap, bp).values;
  CHECK((permuted - p * direct * p.transpose()).norm() < 1e-14);
}

TEST_CASE("diamond inverse") {
  const TransverseGrid g = build_grid(2, 1.0, 10.0);
  BilinearKernel a = random_kernel(g, 31);
  a.values += 3.0 * grid_delta(g).values; // keep it well conditioned
  const Eigen::MatrixXcd inv = diamond_inverse(a.values, a.weight);
  BilinearKernel ik = make_kernel(g);
  ik.values = inv;
  const auto prod = diamond(a, ik);
  CHECK((prod.values - grid_delta(g).values).norm() / grid_delta(g).values.norm() < 1e-12);
}

TEST_CASE("hermiticity defect") {
  const TransverseGrid g = build_grid(2, 1.0, 10.0);
  Eigen::MatrixXcd h = random_kernel(g, 41).values;
  h = (h + h.adjoint()).eval();
  CHECK(hermiticity_defect(h) < 1e-15);
  h(0, 1) += Complex(0.0, 0.5);
  CHECK(hermiticity_defect(h) > 1e-2);
}
