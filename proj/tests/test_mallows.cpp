#include <catch_amalgamated.hpp>

#include <cmath>
#include <json.hpp>

#include "mvboot/assignment.hpp"
#include "mvboot/error.hpp"
#include "mvboot/mallows.hpp"
#include "mvboot/rng.hpp"
#include "support/oracles.hpp"

using namespace mvboot;

namespace {

Mat random_mat(Stream& s, Index rows, Index cols) {
  Mat a(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) a(i, j) = s.normal();
  return a;
}

Mat col(std::initializer_list<double> v) {
  Mat a(static_cast<Index>(v.size()), 1);
  Index i = 0;
  for (const double x : v) a(i++, 0) = x;
  return a;
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an mvboot::Error");
  return ErrorKind::IoError;
}

}  // namespace

TEST_CASE("assignment solver matches exhaustive search") {
  Stream s(201);
  for (Index m = 1; m <= 7; ++m)
    for (int t = 0; t < 30; ++t) {
      Mat c(m, m);
      for (Index i = 0; i < m; ++i)
        for (Index j = 0; j < m; ++j) c(i, j) = t % 3 == 0 ? static_cast<double>(s.index(5)) : s.uniform() * 10;
      const Assignment a = solve_assignment(c);
      CHECK(a.cost == oracle::brute_force_assignment(c));
      std::vector<std::size_t> sorted = a.column_of_row;
      std::sort(sorted.begin(), sorted.end());
      for (std::size_t i = 0; i < sorted.size(); ++i) CHECK(sorted[i] == i);
    }
}

TEST_CASE("mallows distance examples") {
  const EmpiricalDist mu(col({0, 1})), nu(col({0, 2}));
  CHECK(mallows_distance(mu, nu, 2.0) == Catch::Approx(std::sqrt(0.5)).epsilon(1e-15));
  CHECK(mallows_distance(mu, nu, 2.0, MallowsRoute::Assignment) == Catch::Approx(std::sqrt(0.5)).epsilon(1e-15));
  CHECK(mallows_distance(mu, mu, 2.0) == 0.0);

  Stream s(203);
  for (int t = 0; t < 20; ++t) {
    const Mat pts = random_mat(s, 12, 3);
    const Vec shift = random_mat(s, 3, 1);
    const Mat moved = pts.rowwise() + shift.transpose();
    CHECK(mallows_distance(EmpiricalDist(pts), EmpiricalDist(moved), 2.0) ==
          Catch::Approx(shift.norm()).epsilon(1e-12));
  }
}

TEST_CASE("mallows distance errors") {
  CHECK(kind_of([] { mallows_distance(EmpiricalDist(col({1, 2})), EmpiricalDist(col({1, 2, 3})), 2.0); }) ==
        ErrorKind::UnequalSupportSizes);
  CHECK(kind_of([] { mallows_distance(EmpiricalDist(Mat::Zero(2, 1)), EmpiricalDist(Mat::Zero(2, 2)), 2.0); }) ==
        ErrorKind::DimensionMismatch);
  CHECK(kind_of([] { mallows_distance(EmpiricalDist(Mat::Zero(2, 1)), EmpiricalDist(Mat::Zero(2, 1)), 0.5); }) ==
        ErrorKind::InvalidArgument);
  CHECK_THROWS_AS(EmpiricalDist(Mat(0, 1)), Error);
}

TEST_CASE("sorting route equals the assignment route") {
  Stream s(207);
  for (Index m = 1; m <= 64; m += 7)
    for (double l : {1.0, 1.5, 2.0, 3.0}) {
      const EmpiricalDist a(random_mat(s, m, 1)), b(random_mat(s, m, 1));
      INFO("m = " << m << ", l = " << l);
      const double sorted = mallows_distance(a, b, l);
      const double solved = mallows_distance(a, b, l, MallowsRoute::Assignment);
      // With l = 1 several matchings can be optimal; their costs agree only up to rounding.
      if (l > 1.0)
        CHECK(sorted == solved);
      else
        CHECK(sorted == Catch::Approx(solved).epsilon(1e-12));
    }
}

TEST_CASE("metric axioms") {
  Stream s(209);
  for (int t = 0; t < 30; ++t) {
    const Index m = 1 + static_cast<Index>(s.index(10));
    const Index k = 1 + static_cast<Index>(s.index(3));
    const EmpiricalDist a(random_mat(s, m, k)), b(random_mat(s, m, k)), c(random_mat(s, m, k));
    for (double l : {1.0, 2.0}) {
      CHECK(mallows_distance(a, b, l) == mallows_distance(b, a, l));
      CHECK(mallows_distance(a, a, l) == 0.0);
      CHECK(mallows_distance(a, c, l) <= mallows_distance(a, b, l) + mallows_distance(b, c, l) + 1e-9);
    }
    CHECK(mallows_distance(a, b, 1.0) <= mallows_distance(a, b, 2.0) + 1e-12);
  }
}

TEST_CASE("BoundReport serializes the documented keys") {
  BoundReport r;
  r.estimate = 0.25;
  r.bound = 1.0;
  r.slack = 0.15;
  r.pass = true;
  r.trials = 256;
  r.seed = 9;
  const auto j = nlohmann::json::parse(r.to_json());
  CHECK(j.size() == 6);
  CHECK(j["estimate"] == 0.25);
  CHECK(j["bound"] == 1.0);
  CHECK(j["slack"] == 0.15);
  CHECK(j["pass"] == true);
  CHECK(j["trials"] == 256);
  CHECK(j["seed"] == 9);
}

TEST_CASE("check_theorem3_bound with identical laws is exactly zero") {
  Stream s(211);
  const Mat x = random_mat(s, 6, 2);
  Mat f = random_mat(s, 5, 2);
  f = f.rowwise() - f.colwise().mean();
  const BoundReport r = check_theorem3_bound(x, EmpiricalDist(f), EmpiricalDist(f), 64, 3);
  CHECK(r.estimate == 0.0);
  CHECK(r.bound == 0.0);
  CHECK(r.pass);
}

TEST_CASE("check_theorem3_bound on the two-point scalar example") {
  const Mat x = Mat::Ones(4, 1);
  const EmpiricalDist f(col({-1, 1})), g(col({-2, 2}));
  const BoundReport r = check_theorem3_bound(x, f, g, 256, 5);
  // d_2(F, G)^2 = 1 by sorting; bound = 4 * 1 * (1/4) * 1.
  CHECK(r.bound == Catch::Approx(1.0).epsilon(1e-14));
  CHECK(r.pass);
  CHECK(r.estimate <= r.bound * 1.15);
  CHECK(r.trials == 256);
}

TEST_CASE("check_theorem3_bound rejects laws that are not centered") {
  CHECK(kind_of([] {
          check_theorem3_bound(Mat::Ones(4, 1), EmpiricalDist(col({0, 1})), EmpiricalDist(col({-1, 1})), 16, 1);
        }) == ErrorKind::InvalidArgument);
}

TEST_CASE("check_theorem3_bound passes on random small instances") {
  int passed = 0;
  for (std::uint64_t t = 0; t < 100; ++t) {
    const auto inst = random_theorem3_instance(8, 2, 2, 8, child_seed(300, t));
    passed += check_theorem3_bound(inst.x, inst.f, inst.g, 256, child_seed(301, t)).pass ? 1 : 0;
  }
  CHECK(passed >= 95);
}

TEST_CASE("check_lemma_bounds with degenerate errors") {
  FixedDesignSpec spec{20, 2, 2, Mat::Ones(2, 2), Mat::Zero(2, 2), 1, ErrorLaw::Gaussian};
  const LemmaReports r = check_lemma_bounds(spec, 10);
  CHECK(r.raw.estimate <= 1e-24);
  CHECK(r.raw.bound == 0.0);
  CHECK(r.raw.pass);
  CHECK(r.centered.pass);
}

TEST_CASE("check_lemma_bounds holds in the scalar case") {
  FixedDesignSpec spec{50, 1, 1, Mat::Constant(1, 1, 0.5), Mat::Identity(1, 1), 42, ErrorLaw::Gaussian};
  const LemmaReports r = check_lemma_bounds(spec, 200);
  CHECK(r.raw.bound == Catch::Approx(1.0 / 50));
  CHECK(r.centered.bound == Catch::Approx(2.0 / 50));
  CHECK(r.raw.pass);
  CHECK(r.centered.pass);
  CHECK(r.raw.trials == 200);
}

TEST_CASE("check_lemma_bounds at p = 2, r = 3") {
  FixedDesignSpec spec{100, 2, 3, Mat::Constant(3, 2, 0.3), Mat::Identity(3, 3), 43, ErrorLaw::Gaussian};
  const LemmaReports r = check_lemma_bounds(spec, 100);
  CHECK(r.raw.bound == Catch::Approx(0.06));
  CHECK(r.centered.bound == Catch::Approx(0.09));
  CHECK(r.raw.estimate <= r.raw.bound);
  CHECK(r.centered.estimate <= r.centered.bound);
}

TEST_CASE("check_lemma6 examples") {
  Stream s(213);
  const Mat u = random_mat(s, 20, 3);
  const BoundReport same = check_lemma6(u, u);
  CHECK(same.estimate == 0.0);
  CHECK(same.bound == 0.0);
  CHECK(same.pass);

  const Mat shifted = u.rowwise() + (Vec(3) << 1, -2, 3).finished().transpose();
  const BoundReport shift = check_lemma6(u, shifted);
  CHECK(shift.estimate == Catch::Approx(0.0).margin(1e-12));
  CHECK(shift.bound > 0.0);
  CHECK(shift.pass);

  CHECK(kind_of([&] { check_lemma6(u, Mat::Zero(19, 3)); }) == ErrorKind::DimensionMismatch);
}

TEST_CASE("check_lemma6 on independent random pairs") {
  Stream s(215);
  for (int t = 0; t < 100; ++t) CHECK(check_lemma6(random_mat(s, 20, 3), random_mat(s, 20, 3)).pass);
}

TEST_CASE("check_lemma6 fails for a proportional pair") {
  // v = (1, -1), u = (1 + e) v: lhs = (2e + e^2)^2, rhs = e^4.
  const double e = 0.1;
  const Mat v = col({1, -1});
  const Mat u = (1 + e) * v;
  const BoundReport r = check_lemma6(u, v);
  CHECK(r.estimate == Catch::Approx(std::pow(2 * e + e * e, 2)).epsilon(1e-12));
  CHECK(r.bound == Catch::Approx(std::pow(e, 4)).epsilon(1e-12));
  CHECK_FALSE(r.pass);
}
