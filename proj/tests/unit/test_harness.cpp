#include <doctest.h>

#include <sstream>

#include "diamag/errors.hpp"
#include "diamag/harness.hpp"

using namespace diamag;

TEST_CASE("config parsing") {
  const auto kv = harness::parse_config_text("# study\nL_list = 3, 4, 5\nbeta=2\nz = 0.25\neps=-1\n");
  const auto c = harness::study_config_from(kv);
  CHECK(c.L_list == std::vector<double>{3, 4, 5});
  CHECK(c.gas.beta == 2.0);
  CHECK(c.gas.eps == -1);

  const auto js = harness::parse_config_text(R"({"L_list": [3, 4, 5], "beta": 2, "z": 0.25, "eps": -1})");
  CHECK(harness::study_config_from(js).L_list == c.L_list);
  CHECK(harness::study_config_from(js).gas.z == 0.25);

  CHECK_THROWS_AS(harness::study_config_from({{"bogus", "1"}}), ValidationError);
  CHECK_THROWS_AS(harness::study_config_from({{"beta", "abc"}}), ValidationError);
  CHECK_THROWS_AS(harness::parse_config_text("just words"), ValidationError);
  CHECK(harness::config_hash(kv) == harness::config_hash(harness::parse_config_text("eps=-1\nz=0.25\nbeta=2\nL_list=3, 4, 5")));
}

TEST_CASE("CSV formatting") {
  CHECK(harness::fmt17(0.1) == "0.10000000000000001");
  std::ostringstream os;
  harness::CsvWriter w(os, 7, 0xabc);
  w.header({"a", "b"});
  w.row(std::vector<double>{1.0, 2.5});
  w.row(std::vector<std::string>{"x,y", "z"});
  CHECK(os.str() == "# provenance version=0.1.0 seed=7 config_hash=0000000000000abc\na,b\n1,2.5\n\"x,y\",z\n");
  CHECK_THROWS(w.row(std::vector<double>{1.0}));
}

TEST_CASE("rate fit") {
  const auto f = harness::fit_rate(0, {2, 4, 8, 16}, {1.0, 0.5, 0.25, 0.125});
  CHECK(f.slope == doctest::Approx(-1.0));
  CHECK(f.std_error == doctest::Approx(0.0).scale(1));
}

TEST_CASE("study validation") {
  StudyConfig c;
  c.L_list = {4, 6};
  std::ostringstream os;
  CHECK_THROWS_AS(harness::run_convergence_study(c, &os), ValidationError);
  CHECK(os.str().empty());
  c.L_list = {6, 4, 8};
  CHECK_THROWS_AS(harness::run_convergence_study(c), ValidationError);
  c.L_list = {4, 8, 16};
  CHECK_THROWS_AS(harness::run_convergence_study(c), ResourceError);
  CHECK(harness::grid_for(12.0, 0.125) == 95);
}

TEST_CASE("small study is deterministic") {
  StudyConfig c;
  c.L_list = {1.5, 2.0, 2.5};
  c.orders = {0, 1};
  std::ostringstream a, b;
  harness::run_convergence_study(c, &a);
  c.workers = 3;
  const auto res = harness::run_convergence_study(c, &b);
  CHECK(a.str() == b.str());
  REQUIRE(res.rows.size() == 3);
  CHECK(res.fits.size() == 2);
  CHECK(res.rows[0].N == 11);
}

TEST_CASE("battery") {
  const auto rep = harness::run_invariant_battery({1, 300, 1, ""});
  CHECK(rep.passed());
  const auto skip = harness::run_invariant_battery({1, 0, 1, ""});
  CHECK(skip.passed());
  int skipped = 0;
  for (const auto& s : skip.suites) skipped += s.status == "skipped";
  CHECK(skipped == 5);
  const auto bad = harness::run_invariant_battery({1, 100, 1, "flux_algebra"});
  CHECK_FALSE(bad.passed());
  for (const auto& s : bad.suites) CHECK((s.status == "fail") == (s.name == "flux_algebra"));
  CHECK(bad.to_json().find("\"flux_algebra\"") != std::string::npos);
}
