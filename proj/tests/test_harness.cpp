#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>

#include "opclass/harness.hpp"
#include "opclass/serialize.hpp"
#include "support.hpp"

using namespace opclass;
using namespace testing_support;

namespace {

int accounted(const TheoremReport& r) { return r.passes + r.skips + int(r.failures.size()); }

bool has_skip_reason(const TheoremReport& r, const std::string& prefix) {
  return std::any_of(r.skip_reasons.begin(), r.skip_reasons.end(),
                     [&](const auto& kv) { return kv.first.rfind(prefix, 0) == 0; });
}

Json without_wall_time(Json j) {
  for (auto& r : j["reports"]) r.erase("wall_time_ms");
  return j;
}

}  // namespace

TEST_CASE("suite ids") {
  const auto ids = suite_ids();
  CHECK(ids.size() == 9);
  for (const auto& id : {"stampfli", "quasinormal-root", "ando", "k-paranormal-root", "k-quasi-decomposition", "coprime",
                         "embry", "fuglede-putnam", "normaloid-criterion"})
    CHECK(std::find(ids.begin(), ids.end(), id) != ids.end());
}

TEST_CASE("zero trials give an empty report") {
  const auto r = verify_stampfli(0, 8, 1);
  CHECK(r.trials == 0);
  CHECK(r.passes == 0);
  CHECK(r.skips == 0);
  CHECK(r.failures.empty());
}

TEST_CASE("stampfli skips non-hyponormal instances") {
  const auto r = verify_stampfli(20, 6, 3);
  CHECK(r.failures.empty());
  CHECK(accounted(r) == r.trials);
  CHECK(r.passes > 0);
  // every fourth trial is an index-2 nilpotent
  CHECK(r.skips >= 5);
  CHECK(has_skip_reason(r, "is_hyponormal"));
  CHECK(!r.notes.empty());
}

TEST_CASE("quasinormal root and kernel inclusion") {
  const auto r = verify_quasinormal_root(20, 6, 2, 4);
  CHECK(r.failures.empty());
  CHECK(accounted(r) == r.trials);
  CHECK(r.max_residuals.count("kernel_inclusion_gap"));
}

TEST_CASE("ando records the counterexample") {
  const auto r = verify_ando(10, 6, 2, 5);
  CHECK(r.failures.empty());
  CHECK(accounted(r) == r.trials);
  REQUIRE(!r.confirmations.empty());
  const auto& c = r.confirmations.front();
  CHECK(c.instance_ref.find("counterexample") != std::string::npos);
  CHECK(r.counters.at("counterexample_confirmed") == int(r.confirmations.size()));
}

TEST_CASE("k-paranormal roots") {
  const auto r = verify_k_paranormal_root(12, 6, 3, 2, 6);
  CHECK(r.failures.empty());
  CHECK(accounted(r) == r.trials);
  const auto s = verify_k_paranormal_root(10, 6, 3, 1, 6, {}, true);
  CHECK(s.passes == 10);
  CHECK(s.max_residuals.at("identity_residual") <= 1e-9);
}

TEST_CASE("k-quasi decomposition") {
  for (auto [n, k] : {std::pair{2, 1}, {3, 1}, {3, 2}}) {
    const auto r = verify_k_quasi_decomposition(15, 6, n, k, 7);
    CHECK(r.passes == r.trials);
    CHECK(r.max_residuals.at("reassembly") < 1e-8);
  }
}

TEST_CASE("coprime") {
  CHECK(verify_coprime(10, 6, 2, 3, 8).failures.empty());
  CHECK(error_code([] { verify_coprime(10, 6, 2, 2, 8); }) == ErrorCode::NonCoprime);
  CHECK(error_code([] { verify_coprime(10, 6, 4, 6, 8); }) == ErrorCode::NonCoprime);
}

TEST_CASE("embry, fuglede-putnam and the normaloid criterion") {
  const auto e = verify_embry(25, 6, 3, 9);
  CHECK(e.passes + e.skips == 25);
  CHECK(e.failures.empty());
  CHECK(verify_fuglede_putnam(25, 6, 9).passes == 25);
  const auto n = verify_normaloid_criterion(20, 6, 1, 9);
  CHECK(n.failures.empty());
  CHECK(n.passes > 0);
}

TEST_CASE("injected failures carry reproducing seeds") {
  SuiteSpec spec{.theorem = "k-quasi-decomposition", .params = {{"n", 2}, {"k", 1}}, .trials = 8, .max_dim = 6,
                 .seed = 17, .inject_failure = true};
  const auto r = run_spec(spec);
  REQUIRE(r.failures.size() == 8);
  CHECK(r.passes == 0);
  spec.inject_failure = false;
  for (const auto& f : r.failures) {
    CHECK(f.seed == trial_seed(spec, f.trial));
    const auto again = replay_trial(spec, f.trial, f.seed);
    CHECK(again.status == TrialStatus::Pass);
    CHECK(again.instance_ref == f.instance_ref);
    CHECK(again.dim == f.dim);
    for (const auto& [key, value] : f.residuals) {
      REQUIRE(again.residuals.count(key));
      CHECK(again.residuals.at(key) <= 10 * std::max(value, 1e-300));
    }
  }
}

TEST_CASE("run_suite") {
  CHECK(run_suite({}).empty());

  SuiteConfig config{.suites = {"fuglede-putnam", "embry"}, .trials = 10, .max_dim = 5, .seed = 3};
  const auto a = run_suite(config);
  const auto b = run_suite(config);
  REQUIRE(a.size() == 2);
  CHECK(total_failures(a) == 0);
  CHECK(without_wall_time(to_json(a)) == without_wall_time(to_json(b)));

  // a suite run alone matches the same suite inside a larger run
  config.suites = {"embry"};
  const auto alone = run_suite(config);
  REQUIRE(alone.size() == 1);
  Json x = to_json(alone.front()), y = to_json(a[1]);
  x.erase("wall_time_ms");
  y.erase("wall_time_ms");
  CHECK(x == y);

  config.suites = {"k-paranormal-root"};
  CHECK(run_suite(config).size() == 6);

  config.suites = {"bogus"};
  CHECK(error_code([&] { run_suite(config); }) == ErrorCode::UnknownTheorem);

  config.suites = {"fuglede-putnam"};
  config.inject_failure = true;
  CHECK(total_failures(run_suite(config)) == 10);
}

TEST_CASE("search_q2 is informational") {
  const auto s = search_q2(20, 5, 2, 1);
  CHECK(s.trials == 20);
  CHECK(s.hypothesis_met + s.inconclusive <= 20);
  CHECK(error_code([] { search_q2(5, 1, 2, 1); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("default suites stay within the skip budget") {
  const auto reports = run_suite({.suites = {"all"}, .trials = 20, .max_dim = 6, .seed = 11});
  for (const auto& r : reports) {
    CHECK(r.skips * 10 <= r.trials * 9);
    CHECK(std::none_of(r.notes.begin(), r.notes.end(), [](const std::string& n) { return n.rfind("skip budget", 0) == 0; }));
  }
}
