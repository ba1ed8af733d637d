#include "doctest.h"
#include "oracles.hpp"
#include "raspen/decomposition.hpp"

using namespace raspen;

namespace {

IndexSet range(Index a, Index b) {
  IndexSet out;
  for (Index i = a; i < b; ++i) out.push_back(i);
  return out;
}

void check_partition_of_unity(const DecompositionLayout& layout, std::mt19937_64& rng) {
  for (int trial = 0; trial < 100; ++trial) {
    const Vector v = oracle::random_vector(layout.n_cells(), rng);
    Vector sum = Vector::Zero(layout.n_cells());
    for (int i = 0; i < layout.n_subdomains(); ++i) {
      layout.add_restricted_prolong(i, layout.restrict_to(i, v), sum);
    }
    CHECK((sum - v).lpNorm<Eigen::Infinity>() == 0.0);
  }
  for (int i = 0; i < layout.n_subdomains(); ++i) {
    const Vector local = oracle::random_vector(
        static_cast<Index>(layout.subdomain(i).overlap.size()), rng);
    CHECK((layout.restrict_to(i, layout.prolong(i, local)) - local).lpNorm<Eigen::Infinity>() ==
          0.0);
  }
}

}  // namespace

TEST_SUITE("decomposition") {
  TEST_CASE("zero overlap on nine cells") {
    const auto layout = build_1d_layout(9, 3, 0);
    for (int i = 0; i < 3; ++i) {
      CHECK(layout.subdomain(i).owned == range(3 * i, 3 * i + 3));
      CHECK(layout.subdomain(i).overlap == layout.subdomain(i).owned);
    }
  }

  TEST_CASE("one overlap layer on nine cells") {
    const auto layout = build_1d_layout(9, 3, 1);
    CHECK(layout.subdomain(0).overlap == range(0, 4));
    CHECK(layout.subdomain(1).overlap == range(2, 7));
    CHECK(layout.subdomain(2).overlap == range(5, 9));
  }

  TEST_CASE("restricted prolongation keeps only owned cells") {
    const auto layout = build_1d_layout(9, 3, 1);
    const Vector ones = Vector::Ones(5);
    Vector expected = Vector::Zero(9);
    expected.segment(3, 3).setOnes();
    CHECK(layout.restricted_prolong(1, ones) == expected);
  }

  TEST_CASE("remainder cells go to the leading subdomains") {
    const auto layout = build_1d_layout(10, 3, 0);
    CHECK(layout.subdomain(0).owned.size() == 4);
    CHECK(layout.subdomain(1).owned.size() == 3);
    CHECK(layout.subdomain(2).owned.size() == 3);
  }

  TEST_CASE("Fig1 layout is valid") {
    const auto layout = build_1d_layout(100, 8, 3);
    CHECK(layout.n_subdomains() == 8);
    CHECK(layout.subdomain(0).overlap.front() == 0);
    CHECK(layout.subdomain(7).overlap.back() == 99);
  }

  TEST_CASE("overlap reaching past a neighbouring block is rejected") {
    CHECK_THROWS_AS(build_1d_layout(9, 3, 4), SolverError);
    CHECK_THROWS_AS(build_2d_layout(4, 4, 2, 3), SolverError);
    CHECK_NOTHROW(build_1d_layout(200, 40, 5));
    CHECK_NOTHROW(build_1d_layout(9, 1, 5));
  }

  TEST_CASE("invalid sizes are rejected") {
    CHECK_THROWS_AS(build_1d_layout(2, 3, 0), SolverError);
    CHECK_THROWS_AS(build_2d_layout(9, 8, 2, 1), SolverError);
  }

  TEST_CASE("2D blocks") {
    const auto a = build_2d_layout(4, 4, 2, 0);
    for (int i = 0; i < 4; ++i) CHECK(a.subdomain(i).owned.size() == 4);
    CHECK(a.subdomain(3).owned == IndexSet{10, 11, 14, 15});

    const auto b = build_2d_layout(8, 8, 2, 1);
    for (int i = 0; i < 4; ++i) CHECK(b.subdomain(i).overlap.size() == 25);

    const auto c = build_2d_layout(16, 16, 4, 1);
    CHECK(c.n_subdomains() == 16);
    CHECK(c.subdomain(5).overlap.size() == 36);
  }

  TEST_CASE("partition of unity and local identity") {
    std::mt19937_64 rng(7);
    for (auto [m, n, k] : {std::tuple{100, 8, 3}, {60, 10, 1}, {200, 40, 4}, {9, 3, 1}}) {
      check_partition_of_unity(build_1d_layout(m, n, k), rng);
    }
    for (int N : {2, 4}) check_partition_of_unity(build_2d_layout(16, 16, N, 1), rng);
  }

  TEST_CASE("dimension mismatches throw") {
    const auto layout = build_1d_layout(9, 3, 1);
    CHECK_THROWS_AS(layout.restrict_to(0, Vector::Zero(8)), DimensionError);
    CHECK_THROWS_AS(layout.prolong(0, Vector::Zero(3)), DimensionError);
    CHECK_THROWS_AS(layout.subdomain(3), DimensionError);
    CHECK_THROWS_AS(layout.coarse_prolong(Vector::Zero(2)), DimensionError);
  }

  TEST_CASE("coarse mean and sum") {
    const auto layout = build_1d_layout(9, 3, 0);
    CHECK(layout.coarse_restrict_mean(Vector::Constant(9, 2.5)) == Vector::Constant(3, 2.5));
    CHECK(layout.coarse_restrict_sum(Vector::Ones(9)) == Vector::Constant(3, 3.0));
  }

  TEST_CASE("coarse interpolation matches the hat functions") {
    // Centers of three 10-cell blocks at x = 5, 15, 25 (cell units), zero at 0 and 30.
    const auto layout = build_1d_layout(30, 3, 0);
    const Vector v0 = Vector{{1.0, -2.0, 3.0}};
    const Vector p = layout.coarse_prolong(v0);
    auto phi = [&](double x) {
      const double xs[] = {0.0, 5.0, 15.0, 25.0, 30.0};
      const double ys[] = {0.0, v0[0], v0[1], v0[2], 0.0};
      for (int s = 0; s < 4; ++s) {
        if (x <= xs[s + 1]) return ys[s] + (ys[s + 1] - ys[s]) * (x - xs[s]) / (xs[s + 1] - xs[s]);
      }
      return 0.0;
    };
    for (Index c = 0; c < 30; ++c) CHECK(p[c] == doctest::Approx(phi(c + 0.5)).epsilon(1e-14));

    // R_0 P_0 v_0 is v_0 up to the averaging error of a linear function: exact
    // in interior blocks, and bounded by the kink at the block centres.
    const Vector back = layout.coarse_restrict_mean(p);
    double bound = 0.0;
    for (Index c = 0; c < 30; ++c) bound = std::max(bound, std::abs(p[c]));
    CHECK((back - v0).lpNorm<Eigen::Infinity>() <= bound);
    CHECK(layout.coarse_prolong(Vector::Zero(3)) == Vector::Zero(30));
  }

  TEST_CASE("coarse test space options") {
    const auto sum = build_1d_layout(30, 3, 1, CoarseTest::owned_sum);
    const auto hat = build_1d_layout(30, 3, 1, CoarseTest::interpolation_transpose);
    const Vector r = Vector::LinSpaced(30, -1.0, 2.0);
    CHECK((sum.coarse_restrict_test(r) - sum.coarse_restrict_sum(r)).norm() == 0.0);
    const DenseMatrix p0 = DenseMatrix(hat.coarse_prolong_matrix());
    CHECK((hat.coarse_restrict_test(r) - p0.transpose() * r).norm() <= 1e-14);
    CHECK(parse_coarse_test(to_string(CoarseTest::owned_sum)) == CoarseTest::owned_sum);
    CHECK_THROWS_AS(parse_coarse_test("nodal"), SolverError);
  }

  TEST_CASE("2D interpolation is constant towards Neumann edges and zero at x = 1") {
    const auto layout = build_2d_layout(8, 8, 2, 1);
    const Vector p = layout.coarse_prolong(Vector::Ones(4));
    // Row iy = 0 is below the lowest coarse centre: constant extension.
    CHECK(p[0] == doctest::Approx(1.0));
    // Last column sits between the right centres and x = 1.
    CHECK(p[7] == doctest::Approx((8.0 - 7.5) / (8.0 - 6.0)));
    CHECK(layout.boundary_lift(BoundarySide::x_max)[7] == doctest::Approx(1.0 - p[7]));
  }
}
