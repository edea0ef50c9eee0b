#include <doctest.h>

#include "fixtures.hpp"
#include "qsw/bounds.hpp"

#include <algorithm>

using namespace qsw;

namespace {

const CheckReport& find_check(const std::vector<CheckReport>& rs, const std::string& id) {
  auto it = std::find_if(rs.begin(), rs.end(),
                         [&](const CheckReport& r) { return r.check_id == id; });
  REQUIRE(it != rs.end());
  return *it;
}

} // namespace

TEST_SUITE("bounds") {

TEST_CASE("report plumbing") {
  CheckReport r = make_check("x", {{"d", 3.0}}, 1.0, 2.0);
  CHECK(r.verdict == Verdict::holds);
  CHECK(r.margin == doctest::Approx(1.0));
  CHECK(make_check("x", {}, 2.0, 1.0).verdict == Verdict::fails);
  CHECK(make_na("x", {}, "why").verdict == Verdict::not_applicable);
  CHECK(std::string(to_string(Verdict::holds)) == "holds");
  CHECK(std::string(to_string(Verdict::fails)) == "fails");
  CHECK(std::string(to_string(Verdict::not_applicable)) == "not-applicable");
}

TEST_CASE("survival-ratio estimates hold on the fixtures") {
  for (const Model& m : {fixtures::model_b(), fixtures::model_c(), fixtures::model_d()}) {
    auto rs = check_theorem1(m, 25);
    CHECK(find_check(rs, "thm1-qn1-rho").verdict == Verdict::holds);
    CHECK(find_check(rs, "thm1-qn1-window").verdict == Verdict::holds);
    CHECK(find_check(rs, "ref-e0qn1").verdict == Verdict::holds);
  }
  // one-site walk without laziness dies immediately: checks are vacuous
  auto rs1 = check_theorem1(Model(1, 0.0, Measure::uniform(1)), 5);
  for (const auto& r : rs1) CHECK(r.verdict == Verdict::not_applicable);
}

TEST_CASE("flow-stability bounds: aperiodic fixture holds at both rates") {
  auto rs = check_theorem2(fixtures::model_c(), 15, 8);
  for (const auto& r : rs) {
    INFO(r.check_id);
    CHECK(r.verdict == Verdict::holds);
  }
}

TEST_CASE("flow-stability bounds: periodic fixture breaks the printed rate only") {
  auto rs = check_theorem2(fixtures::model_b(), 10, 8);
  bool paper_failed = false;
  for (const auto& r : rs) {
    INFO(r.check_id);
    if (r.check_id.ends_with("-estar")) CHECK(r.verdict == Verdict::holds);
    if (r.check_id.ends_with("-paper") && r.verdict == Verdict::fails) {
      paper_failed = true;
      CHECK(r.note.find("aperiodicity") != std::string::npos);
    }
  }
  CHECK(paper_failed);
}

TEST_CASE("conditioned-operator stability") {
  auto rs = check_theorem3(fixtures::model_c(), 15);
  for (const auto& r : rs) {
    INFO(r.check_id);
    if (r.check_id == "thm3-varsigma-upper")
      CHECK(r.verdict == Verdict::not_applicable); // stated only for d > 5
    else
      CHECK(r.verdict == Verdict::holds);
  }
  auto rs10 = check_theorem3(Model(10, 1.0, Measure::uniform(10)), 25);
  CHECK(find_check(rs10, "thm3-varsigma-upper").verdict == Verdict::holds);
}

TEST_CASE("gap sandwich: upper holds, printed lower fails on the fixtures") {
  for (const Model& m : {fixtures::model_b(), fixtures::model_c()}) {
    auto rs = check_theorem4(m);
    CHECK(find_check(rs, "thm4-gap-upper").verdict == Verdict::holds);
    CHECK(find_check(rs, "thm4-gap-lower").verdict == Verdict::fails);
  }
}

TEST_CASE("uniform ratio estimates and the printed eigenfunction ratio") {
  auto rs = check_prop_ratio(fixtures::model_c(), 20);
  CHECK(find_check(rs, "prop-ratio-qn1").verdict == Verdict::holds);
  CHECK(find_check(rs, "prop-ratio-phi0-printed").verdict == Verdict::holds); // odd d
  CHECK(find_check(rs, "prop-ratio-phi0-desk").verdict == Verdict::holds);

  auto rd = check_prop_ratio(fixtures::model_d(), 20);
  CHECK(find_check(rd, "prop-ratio-qn1").verdict == Verdict::holds);
  CHECK(find_check(rd, "prop-ratio-phi0-printed").verdict == Verdict::fails); // even d
  CHECK(find_check(rd, "prop-ratio-phi0-desk").verdict == Verdict::holds);
}

TEST_CASE("taylor chains hold on a dense grid") {
  for (const auto& r : check_taylor(4000)) {
    INFO(r.check_id);
    CHECK(r.verdict == Verdict::holds);
  }
}

TEST_CASE("importance-sampling degeneracy growth") {
  auto rs = check_is_degeneracy(fixtures::model_c(), 30);
  CHECK(find_check(rs, "isdeg-sandwich-upper").verdict == Verdict::holds);
  CHECK(find_check(rs, "isdeg-sandwich-lower").verdict == Verdict::holds);
  CHECK(find_check(rs, "isdeg-printed-lower-rate").verdict == Verdict::fails);
  CHECK(find_check(rs, "isdeg-log-slope").verdict == Verdict::holds);
  CHECK(find_check(rs, "tilde-e-q1").verdict == Verdict::holds);
}

TEST_CASE("printed equilibrium variance is negative for d >= 3") {
  for (const Model& m : {fixtures::model_c(), fixtures::model_d()}) {
    CheckReport r = check_vdp_printed(m);
    CHECK(r.verdict == Verdict::fails);
    CHECK(r.note.find("erratum") != std::string::npos);
  }
}

TEST_CASE("soft-sampler variance bounds") {
  Model m = fixtures::model_c();
  Vec phi0 = eigensystem(m).phi[0];
  for (const auto& r : check_soft_variance_bounds(m, 10, phi0)) {
    INFO(r.check_id);
    CHECK(r.verdict == Verdict::holds);
  }
}

} // TEST_SUITE
