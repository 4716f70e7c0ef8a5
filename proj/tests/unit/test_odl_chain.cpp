#include <doctest.h>

#include <cmath>

#include "chain_helpers.hpp"
#include "telodl/analysis.hpp"
#include "telodl/errors.hpp"
#include "telodl/odl_chain.hpp"

using namespace telodl;
using K_ = StateKind;

namespace {

ControllerParams odl(int K, double eps, double c) {
  auto p = ControllerParams::defaults(K, eps);
  p.c = c;
  return p;
}

}  // namespace

TEST_CASE("odl state sets") {
  CHECK(odl_state_set(rep({2, 1, 0})) == std::vector{K_::Rrc, K_::Xi1, K_::Xi3});
  CHECK(odl_state_set(rep({1, 1, 1})) == std::vector{K_::Rrc, K_::Xi1, K_::Xi2});
  CHECK(odl_state_set(rep({3, 0, 0})) == std::vector{K_::Rrc});
  CHECK(odl_state_set(rep({2, 0})) == std::vector{K_::Rrc, K_::Xi3});
}

TEST_CASE("odl intra examples") {
  const auto a = rep({3, 1, 0, 0});
  auto row = odl_intra_row(a, OdlRates::single(0.1), 4, 4);
  const double expect = (1.0 - std::pow(0.9, 4)) * 0.75 / 3.0 * 0.9;
  CHECK(prob(row, a, K_::Rrc, a, K_::Xi1) == doctest::Approx(expect).epsilon(1e-12));
  CHECK(prob(row, a, K_::Rrc, a, K_::Xi1) == doctest::Approx(0.07738).epsilon(1e-4));

  const auto b = rep({2, 1, 0});
  row = odl_intra_row(b, OdlRates::single(0.1), 3, 3);
  CHECK(prob(row, b, K_::Rrc, b, K_::Xi1) == 0.0);
  CHECK(prob(row, b, K_::Xi3, b, K_::Rrc) == doctest::Approx(0.1 / 3 + 0.01 / 3).epsilon(1e-12));
  CHECK(prob(row, b, K_::Xi3, b, K_::Rrc) == doctest::Approx(0.03667).epsilon(1e-3));
}

TEST_CASE("odl up examples") {
  const auto a = rep({3, 0, 0});
  const auto ups = up_neighbors(a);
  REQUIRE(ups.size() == 1);
  const auto row = odl_up_row(a, ups[0], OdlRates::single(0.1), 3, 3);
  CHECK(prob(row, a, K_::Rrc, rep({2, 1, 0}), K_::Rrc) == doctest::Approx(0.271));
  // Only one resource is crowded, and it is the one being vacated, so nobody
  // can land on another crowded resource: the numerator N - M1 - M0 - 1 is 0.
  CHECK(prob(row, a, K_::Rrc, rep({2, 1, 0}), K_::Xi1) == 0.0);
  CHECK(up_neighbors(rep({1, 1, 1})).empty());
}

TEST_CASE("odl down examples") {
  const auto row = odl_down_row(rep({1, 1, 1}), rep({2, 1, 0}), 2, OdlRates::single(0.1), 3, 3);
  CHECK(prob(row, rep({1, 1, 1}), K_::Rrc, rep({2, 1, 0}), K_::Rrc) ==
        doctest::Approx(0.00271).epsilon(1e-9));
  CHECK(prob(row, rep({1, 1, 1}), K_::Rrc, rep({2, 1, 0}), K_::Xi3) ==
        doctest::Approx(0.271 * 2 * 0.1 * 0.9).epsilon(1e-12));
  CHECK(prob(row, rep({1, 1, 1}), K_::Rrc, rep({2, 1, 0}), K_::Xi3) ==
        doctest::Approx(0.04878).epsilon(1e-4));

  // Joining a crowded resource never produces xi3.
  const auto crowd = odl_down_row(rep({2, 1, 0}), rep({3, 0, 0}), 3, OdlRates::single(0.1), 3, 3);
  CHECK(prob(crowd, rep({2, 1, 0}), K_::Rrc, rep({3, 0, 0}), K_::Xi3) == 0.0);
}

TEST_CASE("odl per-target rows add up to the aggregate cross masses") {
  for (int K = 2; K <= 8; ++K)
    for (int N : {K, K + 1, K + 3})
      for (double eps : {0.3, 0.05, 1e-3}) {
        const auto rates = OdlRates{eps, eps * 0.7};
        for (const auto& s : enumerate_rrc(K, N)) {
          CAPTURE(s.label());
          const auto c = odl_cross_totals(s, rates, K, N);
          const auto kinds = odl_state_set(s);
          auto has = [&](K_ k) { return std::find(kinds.begin(), kinds.end(), k) != kinds.end(); };

          double up[3] = {0, 0, 0}, xi3up[3] = {0, 0, 0};
          for (const auto& u : up_neighbors(s)) {
            const auto row = odl_up_row(s, u, rates, K, N);
            up[0] += prob(row, s, K_::Rrc, u.target, K_::Rrc);
            up[1] += prob(row, s, K_::Rrc, u.target, K_::Xi1);
            up[2] += prob(row, s, K_::Rrc, u.target, K_::Xi2);
            xi3up[0] += prob(row, s, K_::Xi3, u.target, K_::Rrc);
            xi3up[1] += prob(row, s, K_::Xi3, u.target, K_::Xi1);
            xi3up[2] += prob(row, s, K_::Xi3, u.target, K_::Xi2);
          }
          if (s.parts() < N) {
            CHECK(up[0] == doctest::Approx(c.z_up).epsilon(1e-12));
            // Targets that do not exist carry nothing, so compare only when the
            // aggregate itself is meaningful (non-negative).
            if (c.z_up_xi1 >= 0) CHECK(up[1] == doctest::Approx(c.z_up_xi1).epsilon(1e-12));
            CHECK(up[2] == doctest::Approx(c.z_up_xi2).epsilon(1e-12));
            if (has(K_::Xi3)) {
              CHECK(xi3up[0] == doctest::Approx(c.xi3_up).epsilon(1e-12));
              CHECK(xi3up[2] == doctest::Approx(c.xi3_up_xi2).epsilon(1e-12));
            }
          }

          double z_down = 0, z_down3 = 0, x1 = 0, x13 = 0, x2 = 0, x21 = 0, x22 = 0, x23 = 0;
          for (const auto& d : down_neighbors(s)) {
            const auto row = odl_down_row(s, d.target, d.joined_load + 1, rates, K, N);
            z_down += prob(row, s, K_::Rrc, d.target, K_::Rrc);
            z_down3 += prob(row, s, K_::Rrc, d.target, K_::Xi3);
            x1 += prob(row, s, K_::Xi1, d.target, K_::Rrc);
            x13 += prob(row, s, K_::Xi1, d.target, K_::Xi3);
            x2 += prob(row, s, K_::Xi2, d.target, K_::Rrc);
            x21 += prob(row, s, K_::Xi2, d.target, K_::Xi1);
            x22 += prob(row, s, K_::Xi2, d.target, K_::Xi2);
            x23 += prob(row, s, K_::Xi2, d.target, K_::Xi3);
          }
          if (has(K_::Xi1)) {
            CHECK(z_down == doctest::Approx(c.z_down).epsilon(1e-12));
            CHECK(z_down3 == doctest::Approx(c.z_down_xi3).epsilon(1e-12));
            CHECK(x1 == doctest::Approx(c.xi1_down).epsilon(1e-12));
            CHECK(x13 == doctest::Approx(c.xi1_down_xi3).epsilon(1e-12));
          }
          if (has(K_::Xi2)) {
            CHECK(x2 == doctest::Approx(c.xi2_down).epsilon(1e-12));
            CHECK(x23 == doctest::Approx(c.xi2_down_xi3).epsilon(1e-12));
            CHECK(x21 == doctest::Approx(c.xi2_down_xi1).epsilon(1e-12));
            if (c.xi2_down_xi2 >= 0) CHECK(x22 == doctest::Approx(c.xi2_down_xi2).epsilon(1e-12));
          }
        }
      }
}

TEST_CASE("odl crowded-resource count identity") {
  // Summing M(w) over the distinct loads w > 1 reached by one lone player
  // gives N - M(0) - M(1).
  for (int K = 2; K <= 10; ++K)
    for (const auto& s : enumerate_rrc(K, K + 2)) {
      const OccupancyStats st(s);
      if (st.resources_with(1) == 0) continue;  // nobody can move down
      int sum = 0;
      for (const auto& d : down_neighbors(s))
        if (d.joined_load > 1) sum += d.multiplicity;
      CHECK(sum == K + 2 - st.resources_with(0) - st.resources_with(1));
    }
}

TEST_CASE("odl chains are stochastic and ergodic over a grid") {
  for (int K = 2; K <= 7; ++K)
    for (int N : {K, K + 2})
      for (double eps : {0.1, 0.01, 0.001}) {
        CAPTURE(K);
        CAPTURE(N);
        CAPTURE(eps);
        const auto chain = build_odl_chain(K, N, odl(K, eps, 1.0));
        CHECK(chain.P.minCoeff() >= 0.0);
        CHECK((chain.P.rowwise().sum().array() - 1.0).abs().maxCoeff() <= 1e-12);
        CHECK(verify_ergodic(chain.P).ergodic);
      }
}

TEST_CASE("odl chain sizes after pruning") {
  // The rules list 7 states for K=N=3, but xi1 of (1,1,1) has no incoming
  // transition and is dropped.
  const auto three = build_odl_chain(3, 3, odl(3, 0.1, 1.0));
  CHECK(three.size() == 6);
  REQUIRE(three.dropped.size() == 1);
  CHECK(three.dropped[0].rfind("xi1", 0) == 0);
  const auto two = build_odl_chain(2, 2, odl(2, 0.1, 1.0));
  CHECK(two.size() == 4);
  CHECK(two.size() + two.dropped.size() == 5);
}

TEST_CASE("odl rates") {
  const auto p = odl(3, 0.1, 2.0);
  const auto r = OdlRates::from_params(p);
  CHECK(r.epsilon == 0.1);
  CHECK(r.explore == doctest::Approx(0.01));
  CHECK_THROWS_AS(build_odl_chain(3, 3, p, OdlRates{0.1, 0.0}), ValidationError);
  CHECK_THROWS_AS(build_odl_chain(3, 2, p), ValidationError);
}
