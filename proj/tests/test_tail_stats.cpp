#include "doctest.h"
#include "oracles.hpp"

#include "bbm/rng.hpp"
#include "bbm/tail_stats.hpp"

using namespace bbm;
using doctest::Approx;

namespace {

FieldPath linear_path(const SpectralField& f, double T, int n) {
  FieldPath p;
  for (int k = 0; k <= n; ++k) {
    double t = T * k / n;
    p.times.push_back(t);
    p.fields.push_back(t * f);
  }
  return p;
}

}  // namespace

TEST_CASE("holder seminorm") {
  SpectralField unit(4);
  unit.set(0, 1.0);
  NormDescriptor l2{NormDescriptor::Space::sobolev, 0.0};
  FieldPath cst;
  for (int k = 0; k <= 8; ++k) {
    cst.times.push_back(k / 8.0);
    cst.fields.push_back(unit);
  }
  CHECK(holder_seminorm(cst, 0.5, l2) == 0.0);
  for (double T : {0.5, 1.0, 4.0})
    CHECK(holder_seminorm(linear_path(unit, T, 16), 0.5, l2) == Approx(std::sqrt(T)).epsilon(1e-12));

  PathSample s{{0.0, 0.5, 1.0}, {0.0, 1.0, 0.0}, 0};
  CHECK(holder_seminorm(s, 1.0) == Approx(2.0));
  PathSample bad{{0.0, 1.0}, {0.0, 1.0}, 0};
  CHECK_THROWS(holder_seminorm(bad, 0.5));
  PathSample unsorted{{0.0, 1.0, 0.5}, {0.0, 1.0, 2.0}, 0};
  CHECK_THROWS(holder_seminorm(unsorted, 0.5));
}

TEST_CASE("refinement can only increase the grid seminorm") {
  NormDescriptor nd{NormDescriptor::Space::wsp, -0.1, kInf, 0};
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    TailSpec a;
    a.n_time = 8;
    TailSpec b = a;
    b.n_time = 16;
    FieldPath pa = observable_path(a, 1.0, seed), pb = observable_path(b, 1.0, seed);
    for (std::size_t k = 0; k < pa.times.size(); ++k) REQUIRE(pa.times[k] == pb.times[2 * k]);
    CHECK(holder_seminorm(pb, 0.4, nd) >= holder_seminorm(pa, 0.4, nd));
  }
}

TEST_CASE("holder seminorm of z is stable under refinement") {
  NormDescriptor nd{NormDescriptor::Space::wsp, -0.1, kInf, 0};
  std::vector<double> means;
  for (int n_time : {16, 32}) {
    TailSpec sp;
    sp.n_time = n_time;
    double acc = 0.0;
    for (int i = 0; i < 100; ++i) acc += holder_seminorm(observable_path(sp, 1.0, member_seed(3, i)), 0.4, nd);
    means.push_back(acc / 100);
  }
  CHECK(std::isfinite(means[0]));
  CHECK(means[1] / means[0] == Approx(1.0).epsilon(0.1));
}

TEST_CASE("GRR constant and the moment bound") {
  for (double q : {2.0, 4.0, 8.0}) CHECK(grr_constant(2.0 / q, q) == Approx(std::pow(96.0, q)).epsilon(1e-12));
  double prev = kInf;
  for (double beta = 0.26; beta < 3.0; beta += 0.1) {
    double c = grr_constant(beta, 4.0);
    CHECK(c < prev);
    prev = c;
  }
  CHECK_THROWS(grr_constant(0.25, 4.0));
  CHECK(std::isfinite(kolmogorov_moment_bound(1.0, 1.5, 0.5, 4.0, 1.0)));
  CHECK(kolmogorov_moment_bound(1.0, 1.0, 0.5, 4.0, 1.0) == kInf);
  CHECK(kolmogorov_moment_bound(1.0, 0.5, 0.5, 4.0, 1.0) == kInf);
}

TEST_CASE("GRR dominates the grid seminorm path by path") {
  NormDescriptor nd{NormDescriptor::Space::wsp, -0.1, kInf, 0};
  TailSpec sp;
  for (int i = 0; i < 200; ++i) {
    GrrCheck g = grr_path_check(observable_path(sp, 1.0, member_seed(4, i)), 0.5, 4.0, nd);
    CHECK(g.dominated);
    CHECK(g.seminorm <= g.bound);
  }
}

TEST_CASE("tail fits") {
  CHECK(tail_observable_from_string(to_string(TailObservable::nz)) == TailObservable::nz);
  SUBCASE("gaussian values give a quadratic tail") {
    std::vector<double> v;
    for (int i = 0; i < 20000; ++i) v.push_back(std::abs(counter_normal_pair(11, i).first));
    TailReport r = tail_report_from_values(v, 2, {});
    CHECK(r.r2 > 0.9);
    CHECK(r.slope > 0.0);
    for (const auto& row : r.rows)
      if (row.lambda < r.median) CHECK(row.p_hat >= 0.5);
    CHECK(r.rows.size() >= 10u);
  }
  SUBCASE("exponential values give a linear tail") {
    std::vector<double> v;
    for (int i = 0; i < 20000; ++i) v.push_back(-std::log(counter_uniform(12, i, 0)));
    TailReport r = tail_report_from_values(v, 1, {});
    CHECK(r.r2 > 0.9);
    CHECK(r.kappa == Approx(1.0).epsilon(0.3));
  }
  SUBCASE("supplied grid beyond the data is rejected") {
    std::vector<double> v(100, 1.0);
    CHECK_THROWS(tail_report_from_values(v, 1, {0.5, 2.0}));
  }
  SUBCASE("stochastic objects") {
    TailSpec z;
    TailReport rz = tail_check(z, 1.0, {}, 4000, 7);
    CHECK(rz.power == 2);
    CHECK(rz.slope > 0.0);
    CHECK(rz.r2 > 0.9);
    TailSpec nz;
    nz.observable = TailObservable::nz;
    nz.s = 0.5;
    TailReport rn = tail_check(nz, 1.0, {}, 4000, 7);
    CHECK(rn.power == 1);
    CHECK(rn.r2 > 0.9);
    CHECK(rn.kappa < rz.kappa);
  }
}
