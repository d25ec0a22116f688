#include "doctest.h"
#include "helpers.hpp"
#include "multmodel/builders.hpp"
#include "multmodel/errors.hpp"
#include "multmodel/oracle.hpp"

using namespace multmodel;

namespace {
const VarId A = 0, B = 1;

Network two_var_bn() {
  Network net;
  net.domains = DomainTable({2, 2});
  net.factors.push_back(
      from_table(net.domains, {A}, std::vector<double>{0.7, 0.3}));
  net.factors.push_back(from_table(
      net.domains, {A, B}, std::vector<double>{0.8, 0.2, 0.4, 0.6}));
  return net;
}

}  // namespace

TEST_CASE("joint multiplies every factor at every instance") {
  const Network net = two_var_bn();
  const auto table = joint(net);
  REQUIRE(table.values.size() == 4);
  CHECK(table.values[0] == doctest::Approx(0.56).epsilon(1e-14));
  CHECK(table.values[1] == doctest::Approx(0.14).epsilon(1e-14));
  CHECK(table.values[2] == doctest::Approx(0.12).epsilon(1e-14));
  CHECK(table.values[3] == doctest::Approx(0.18).epsilon(1e-14));

  SUBCASE("a single factor network is its own joint") {
    Network single;
    single.domains = DomainTable({2, 2});
    single.factors.push_back(from_table(
        single.domains, {A, B}, std::vector<double>{0.8, 0.2, 0.4, 0.6}));
    CHECK(joint(single).values == to_table(single.domains,
                                           single.factors[0]));
  }

  SUBCASE("no factors means all ones") {
    Network empty;
    empty.domains = DomainTable({2, 2});
    CHECK(joint(empty).values == std::vector<double>{1, 1, 1, 1});
  }

  SUBCASE("the cap guards enumeration") {
    CHECK_THROWS_AS(joint(net, /*cap=*/2), TooLarge);
  }
}

TEST_CASE("marginal sums the joint over the unqueried variables") {
  const Network net = two_var_bn();

  SUBCASE("downstream marginal") {
    const auto values = marginal(net, std::vector<VarId>{B}, Instance());
    REQUIRE(values.size() == 2);
    CHECK(values[0] == doctest::Approx(0.68).epsilon(1e-14));
    CHECK(values[1] == doctest::Approx(0.32).epsilon(1e-14));
  }

  SUBCASE("querying everything returns the joint") {
    CHECK(marginal(net, std::vector<VarId>{A, B}, Instance()) ==
          joint(net).values);
  }

  SUBCASE("impossible evidence gives zero weight everywhere") {
    Network det;
    det.domains = DomainTable({2, 2});
    det.factors.push_back(
        from_table(det.domains, {A}, std::vector<double>{0.0, 1.0}));
    det.factors.push_back(from_table(
        det.domains, {A, B}, std::vector<double>{0.8, 0.2, 0.4, 0.6}));
    const auto values = marginal(det, std::vector<VarId>{B},
                                 Instance::over(det.domains, {{A, 0}}));
    CHECK(values == std::vector<double>{0.0, 0.0});
  }

  SUBCASE("evidence restricts the enumeration") {
    const auto values = marginal(net, std::vector<VarId>{B},
                                 Instance::over(net.domains, {{A, 1}}));
    CHECK(values[0] == doctest::Approx(0.12).epsilon(1e-14));
    CHECK(values[1] == doctest::Approx(0.18).epsilon(1e-14));
  }
}
