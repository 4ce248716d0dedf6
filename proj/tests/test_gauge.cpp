#include <doctest.h>

#include <cmath>
#include <random>

#include <json.hpp>

#include "endcert/gauge.hpp"

using namespace endcert;

TEST_CASE("gauge evaluation") {
  CHECK(GaugeFn::linear(0.25)(2.0) == 0.5);
  CHECK(GaugeFn::log1p()(std::exp(1.0) - 1.0) == doctest::Approx(1.0));
  CHECK(GaugeFn::power(2)(3.0) == 9.0);
  CHECK(GaugeFn::quad_scale(2)(0.1) == doctest::Approx(0.02));
  CHECK(GaugeFn::identity()(0.7) == 0.7);
  CHECK(GaugeFn::zero()(5.0) == 0.0);

  const auto tbl = GaugeFn::table({0.0, 1.0, 2.0}, {0.0, 2.0, 3.0});
  CHECK(tbl(0.5) == 1.0);
  CHECK(tbl(1.5) == 2.5);
  CHECK(tbl(10.0) == 3.0);  // clamped past the last sample
  CHECK_FALSE(tbl.trusted());

  CHECK_THROWS_AS(GaugeFn::linear(0.0), std::invalid_argument);
  CHECK_THROWS_AS(GaugeFn::table({1.0, 1.0}, {0.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(GaugeFn::identity()(-1.0), std::invalid_argument);
}

TEST_CASE("phi verifier") {
  const auto ok = check_phi(GaugeFn::linear(0.25));
  CHECK(ok.pass);
  CHECK(ok.best_k == 0.25);  // ratio is exactly k at every scale

  const auto l3 = check_phi(GaugeFn::linear(0.3));
  CHECK(l3.pass);
  CHECK(l3.best_k == doctest::Approx(0.3));

  const auto lg = check_phi(GaugeFn::log1p());
  CHECK(lg.pass);
  CHECK(lg.best_k == doctest::Approx(std::log(2.0)));  // worst ratio at t = 1

  const auto z = check_phi(GaugeFn::zero());
  CHECK_FALSE(z.pass);
  CHECK(z.failed_condition == "(i)");
  REQUIRE(z.witness.size() == 1);
  CHECK(z.witness[0] > 0.0);
  CHECK(GaugeFn::zero()(z.witness[0]) == 0.0);

  // t^2: the ratio t -> 0 along the canonical vanishing sequence
  const auto p2 = check_phi(GaugeFn::power(2));
  CHECK_FALSE(p2.pass);
  CHECK(p2.failed_condition == "(iii)");
  REQUIRE(p2.witness.size() == 1);
  const double t = p2.witness[0];
  CHECK(GaugeFn::power(2)(t) / t < 1e-3);
}

TEST_CASE("omega verifier") {
  CHECK(check_omega(GaugeFn::linear(2.0)).pass);  // f(t) = 2t
  CHECK(check_omega(GaugeFn::identity()).pass);

  const auto p2 = check_omega(GaugeFn::power(2));
  CHECK_FALSE(p2.pass);
  CHECK(p2.failed_condition == "(iv)");
  REQUIRE(p2.witness.size() == 2);
  CHECK(p2.witness[0] == 1.0);
  CHECK(p2.witness[1] == 1.0);  // f(2) = 4 > f(1) + f(1) = 2

  const auto lg = check_omega(GaugeFn::log1p());
  CHECK(lg.pass);
  // independent sampled-pair check of subadditivity for log1p
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (int i = 0; i < 2000; ++i) {
    const double x = u(rng), y = u(rng);
    CHECK(std::log1p(x + y) <= std::log1p(x) + std::log1p(y) + 1e-12);
  }
}

TEST_CASE("psi verifier") {
  CHECK(check_psi(GaugeFn::quad_scale(2.0)).pass);
  CHECK(check_psi(GaugeFn::linear(0.3)).pass);
  CHECK(check_psi(GaugeFn::identity()).pass);

  const auto off = check_psi(GaugeFn::table({0.0, 1.0}, {0.1, 0.5}));
  CHECK_FALSE(off.pass);
  CHECK(off.failed_condition == "(i)");
  REQUIRE(off.witness.size() == 1);
  CHECK(off.witness[0] == 0.0);

  const auto dec = check_psi(GaugeFn::table({0.0, 1.0, 2.0}, {0.0, 1.0, 0.25}));
  CHECK_FALSE(dec.pass);
  CHECK(dec.failed_condition == "(ii)");
  CHECK(dec.witness.size() == 2);  // the offending pair
}

TEST_CASE("verifier determinism") {
  const auto a = check_phi(GaugeFn::log1p());
  const auto b = check_phi(GaugeFn::log1p());
  CHECK(a.pass == b.pass);
  CHECK(a.best_k == b.best_k);
  const auto c = check_omega(GaugeFn::power(2));
  const auto d = check_omega(GaugeFn::power(2));
  CHECK(c.witness == d.witness);
}

TEST_CASE("non-trusted pass carries a warning flag") {
  // well-behaved table gauge: approximately linear
  std::vector<double> ts, vs;
  for (int i = 0; i <= 200; ++i) {
    ts.push_back(i * 0.1);
    vs.push_back(i * 0.05);
  }
  const auto rep = check_psi(GaugeFn::table(ts, vs));
  CHECK(rep.pass);
  CHECK(rep.warning);
  CHECK_FALSE(check_psi(GaugeFn::quad_scale(1.0)).warning);
}

TEST_CASE("preset_banach_like") {
  const auto triple = preset_banach_like(0.5);
  CHECK(triple.f.kind() == GaugeFn::Kind::Identity);
  CHECK(triple.phi.kind() == GaugeFn::Kind::Linear);
  CHECK(triple.phi.param() == 0.5);
  CHECK(triple.psi.is_zero());

  CHECK_THROWS_AS(preset_banach_like(1.0), std::invalid_argument);
  CHECK_THROWS_AS(preset_banach_like(0.0), std::invalid_argument);
  CHECK_THROWS_AS(preset_banach_like(-0.2), std::invalid_argument);

  // affine identity: f(m) - phi(f(m)) + psi(n) == k*m + psi(n)
  const double k = 0.37;
  const auto t = preset_banach_like(k, GaugeFn::quad_scale(2.0));
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 4.0);
  for (int i = 0; i < 1000; ++i) {
    const double m = u(rng), n = u(rng);
    const double fm = t.f(m);
    const double via_condition = fm - t.phi(fm) + t.psi(n);
    const double via_ratio = k * m + t.psi(n);
    CHECK(std::abs(via_condition - via_ratio) <= 1e-12);
  }
}

TEST_CASE("triple validation") {
  CHECK_NOTHROW(validate_triple({GaugeFn::linear(2.0), GaugeFn::linear(0.25), GaugeFn::zero()}));
  CHECK_NOTHROW(validate_triple({GaugeFn::identity(), GaugeFn::linear(0.2), GaugeFn::quad_scale(2.0)}));
  // f = t^2 is not subadditive, so it cannot sit in the f slot
  CHECK_THROWS_AS(validate_triple({GaugeFn::power(2), GaugeFn::linear(0.25), GaugeFn::zero()}),
                  std::invalid_argument);
  // phi = t^2 has vanishing ratio at 0
  CHECK_THROWS_AS(validate_triple({GaugeFn::identity(), GaugeFn::power(2), GaugeFn::zero()}),
                  std::invalid_argument);
}

TEST_CASE("gauge json round trip") {
  using nlohmann::json;
  const auto lin = gauge_from_json(json::parse(R"({"kind":"linear","k":0.25})"));
  CHECK(lin.kind() == GaugeFn::Kind::Linear);
  CHECK(lin.param() == 0.25);
  CHECK(gauge_to_json(lin) == json::parse(R"({"kind":"linear","k":0.25})"));

  CHECK(gauge_from_json(json::parse(R"({"kind":"zero"})")).is_zero());
  CHECK(gauge_from_json(json::parse(R"({"kind":"quad-scale","c":2})"))(0.5) == 0.5);
  CHECK(gauge_from_json(json::parse(R"({"kind":"table","points":[[0,0],[1,1]]})"))(0.5) == 0.5);

  CHECK_THROWS_AS(gauge_from_json(json::parse(R"({"kind":"cubic"})")), std::invalid_argument);
  CHECK_THROWS_AS(gauge_from_json(json::parse(R"({"kind":"linear"})")), std::invalid_argument);
  CHECK_THROWS_AS(gauge_from_json(json::parse(R"([1,2])")), std::invalid_argument);
}
