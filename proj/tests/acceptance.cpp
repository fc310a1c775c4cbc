// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "opclass/decomposition.hpp"
#include "opclass/generators.hpp"
#include "opclass/harness.hpp"
#include "opclass/rng.hpp"
#include "opclass/serialize.hpp"

using namespace opclass;

namespace {

using Clock = std::chrono::steady_clock;

// pinned thresholds
constexpr double kResidualTol = 1e-8;
constexpr double kDecisionTol = 1e-8;
constexpr double kCounterexampleSeconds = 0.1;
constexpr double kFullRunSeconds = 60.0;
constexpr double kInconclusiveBudget = 0.05;

struct Result {
  bool pass = true;
  std::string detail;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

bool member(const MembershipVerdict& v) { return v.status == Status::Member; }
bool nonmember(const MembershipVerdict& v) { return v.status == Status::NonMember; }

Tolerances pinned_tolerances() {
  Tolerances tol;
  tol.decision = kDecisionTol;
  return tol;
}

// 1. normal (+) index-2 nilpotent: normaloid, square normal, not normal, not paranormal
Result counterexample() {
  Result r;
  const MembershipOptions opts{.tol = pinned_tolerances()};
  double worst_time = 0, worst_residual = 0;
  int bad = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto start = Clock::now();
    const Matrix t = normaloid_counterexample(2, 2, seed);
    const Matrix t2 = t * t;
    const bool ok = member(is_normaloid(t, opts.tol)) && member(is_normal(t2, opts.tol)) &&
                    nonmember(is_normal(t, opts.tol)) && nonmember(is_k_quasi_paranormal(t, 0, opts));
    worst_time = std::max(worst_time, seconds_since(start));
    const double norm = operator_norm(t);
    // ||T^2|| = ||T||^2 and T^2 normal, relative to ||T||^2
    const double residual = std::max(std::abs(operator_norm(t2) - norm * norm), self_commutator(t2).norm()) /
                            std::max(1.0, norm * norm);
    worst_residual = std::max(worst_residual, residual);
    bad += !ok;
  }
  r.pass = bad == 0 && worst_residual < kResidualTol && worst_time < kCounterexampleSeconds;
  std::ostringstream os;
  os << "10 seeds, verdict mismatches " << bad << ", max residual " << worst_residual << ", max time " << worst_time
     << " s";
  r.detail = os.str();
  return r;
}

// 2. index-(k+1) nilpotents are k-quasi-paranormal and not normaloid
Result nilpotent_boundary() {
  Result r;
  int bad = 0, total = 0;
  for (int k = 1; k <= 3; ++k)
    for (std::uint64_t i = 0; i < 30; ++i) {
      const std::uint64_t seed = derive_seed(1000 + k, i);
      const Index dim = k + 1 + Index(i % 3);
      const Matrix t = jordan_nilpotent(dim, k + 1, seed);
      const MembershipOptions opts{.tol = pinned_tolerances(), .seed = seed};
      bad += !(member(is_k_quasi_paranormal(t, k, opts)) && nonmember(is_normaloid(t, opts.tol)));
      ++total;
    }
  r.pass = bad == 0;
  r.detail = std::to_string(total) + " instances, " + std::to_string(bad) + " failures";
  return r;
}

// 3. pencil and sphere oracles agree on Ginibre matrices
Result oracle_equivalence() {
  Result r;
  struct Case {
    PencilFamily family;
    int k;
  };
  // k-paranormal families start at k = 1; k = 0 is the k-quasi family
  const std::vector<Case> cases = {{PencilFamily::KQuasiParanormal, 0}, {PencilFamily::KQuasiParanormal, 1},
                                   {PencilFamily::KQuasiParanormal, 2}, {PencilFamily::KParanormal, 1},
                                   {PencilFamily::KParanormal, 2},      {PencilFamily::AbsoluteKParanormal, 1},
                                   {PencilFamily::AbsoluteKParanormal, 2}};
  int disagreements = 0, inconclusive = 0, compared = 0;
  for (std::uint64_t i = 0; i < 200; ++i) {
    const std::uint64_t seed = derive_seed(3000, i);
    const Matrix t = random_ginibre(5, seed);
    const MembershipOptions opts{.tol = pinned_tolerances(), .seed = seed};
    for (const auto& c : cases) {
      const auto pair = run_oracles(t, c.family, c.k, opts);
      ++compared;
      if (pair.pencil.status == Status::Inconclusive || pair.sphere.status == Status::Inconclusive) {
        ++inconclusive;
        continue;
      }
      disagreements += pair.pencil.status != pair.sphere.status;
    }
  }
  const double rate = double(inconclusive) / compared;
  r.pass = disagreements == 0 && rate < kInconclusiveBudget;
  std::ostringstream os;
  os << "200 matrices x " << cases.size() << " (family, k) pairs, disagreements " << disagreements
     << ", inconclusive " << inconclusive << "/" << compared;
  r.detail = os.str();
  return r;
}

// 4. no verdict pattern contradicts the inclusion chains
Result chain_monotonicity() {
  Result r;
  int violations = 0, matrices = 0;
  std::string first;
  const auto check = [&](const Matrix& t, std::uint64_t seed) {
    const auto c = classify_all(t, {1, 2, 3}, {0.5}, {.tol = pinned_tolerances(), .seed = seed});
    violations += int(c.chain_violations.size());
    if (first.empty() && !c.chain_violations.empty()) first = c.chain_violations.front();
    ++matrices;
  };
  for (std::uint64_t i = 0; i < 200; ++i) {
    const std::uint64_t seed = derive_seed(4000, i);
    check(random_ginibre(2 + Index(i % 5), seed), seed);
  }
  for (std::uint64_t i = 0; i < 200; ++i) {
    const std::uint64_t seed = derive_seed(4001, i);
    const Index dim = 3 + Index(i % 4);
    Matrix t;
    switch (i % 6) {
      case 0: t = random_normal(dim, seed); break;
      case 1: t = jordan_nilpotent(dim, 2 + int(seed % std::uint64_t(dim - 1)), seed); break;
      case 2: t = normaloid_counterexample(dim - 2, 2, seed); break;
      case 3: t = k_quasi_member(dim / 2, dim - dim / 2, 1 + int(i % 3), seed); break;
      case 4: t = root_of_scalar_instance(dim, 2 + int(i % 3), Complex(1.5, -0.5), seed); break;
      default: t = rr_instance(1, (dim - 1) / 2, seed, i % 2 == 0);
    }
    check(t, seed);
  }
  r.pass = violations == 0;
  r.detail = std::to_string(matrices) + " matrices, " + std::to_string(violations) + " violations";
  if (!first.empty()) r.detail += " (first: " + first + ")";
  return r;
}

// 5. normal (+) nilpotent split of k-quasi-paranormal roots
Result decomposition_theorem() {
  Result r;
  const MembershipOptions opts{.tol = pinned_tolerances()};
  std::ostringstream os;
  for (auto [n, k] : {std::pair{2, 1}, {3, 1}, {3, 2}}) {
    const auto rep = verify_k_quasi_decomposition(50, 8, n, k, 42, opts);
    double worst = 0;
    bool complete = true;
    for (const char* key : {"reassembly", "normality", "nilpotency"}) {
      const auto it = rep.max_residuals.find(key);
      if (it == rep.max_residuals.end()) complete = false;
      else worst = std::max(worst, it->second);
    }
    const bool ok = complete && rep.passes == rep.trials && rep.failures.empty() && worst < kResidualTol;
    r.pass = r.pass && ok;
    os << (os.tellp() > 0 ? "; " : "") << "(n=" << n << ",k=" << k << ") " << rep.passes << "/" << rep.trials
       << " max " << worst;
  }
  r.detail = os.str();
  return r;
}

// 6. roots of scalars: normal and T* = |lambda|^(2/n) lambda^-1 T^(n-1)
Result scalar_root_lemma() {
  Result r;
  const MembershipOptions opts{.tol = pinned_tolerances()};
  int passes = 0, trials = 0;
  double worst = 0;
  for (int n : {2, 3, 4})
    for (int k : {1, 2}) {
      const auto rep = verify_k_paranormal_root(30, 6, n, k, 42, opts, true);
      passes += rep.passes;
      trials += rep.trials;
      const auto it = rep.max_residuals.find("identity_residual");
      if (it == rep.max_residuals.end()) r.pass = false;
      else worst = std::max(worst, it->second);
    }
  r.pass = r.pass && passes == trials && worst < kResidualTol;
  std::ostringstream os;
  os << passes << "/" << trials << " trials pass, max identity residual " << worst;
  r.detail = os.str();
  return r;
}

bool accounted_ok(const TheoremReport& rep) {
  return rep.passes + rep.skips + int(rep.failures.size()) == rep.trials;
}

// 7. Embry equivalence and Fuglede-Putnam
Result embry_fuglede_putnam() {
  Result r;
  const MembershipOptions opts{.tol = pinned_tolerances()};
  const auto embry = verify_embry(200, 6, 3, 42, opts);
  const auto fp = verify_fuglede_putnam(200, 6, 42, opts);
  r.pass = embry.failures.empty() && fp.failures.empty() && accounted_ok(embry) && fp.passes == fp.trials;
  std::ostringstream os;
  os << "embry " << embry.passes << " pass / " << embry.skips << " skip / " << embry.failures.size()
     << " fail; fuglede-putnam " << fp.passes << "/" << fp.trials;
  r.detail = os.str();
  return r;
}

// 8. B = 0 square roots: canonical [[0, C], [0, 0]] with C positive and injective
Result canonical_round_trip() {
  Result r;
  const Tolerances tol = pinned_tolerances();
  int bad = 0;
  double worst = 0;
  for (std::uint64_t i = 0; i < 30; ++i) {
    const std::uint64_t seed = derive_seed(8000, i);
    const Index dim_b = 1 + Index(i % 4);
    const Matrix t = rr_instance(0, dim_b, seed, true);
    const auto f = nilpotent2_canonical(t, tol);
    const Matrix& c = f.form.c;
    const Matrix& q = f.decomposition.change_of_basis;
    Matrix expected = Matrix::Zero(t.rows(), t.cols());
    expected.topRightCorner(c.rows(), c.cols()) = c;
    const double residual = std::max((q.adjoint() * t * q - expected).norm(),
                                     (q.adjoint() * q - Matrix::Identity(q.cols(), q.cols())).norm());
    worst = std::max(worst, residual);
    const auto sv = singular_values(c);
    const bool psd = (c - c.adjoint()).norm() <= kResidualTol && psd_defect(c, tol) >= -kResidualTol;
    bad += !(psd && c.rows() == dim_b && sv.minCoeff() > 0 && residual < kResidualTol);
  }
  r.pass = bad == 0;
  std::ostringstream os;
  os << "30 trials, " << bad << " failures, max basis residual " << worst;
  r.detail = os.str();
  return r;
}

// 9. full run: time budget, zero failures, reproducible output
Result full_run() {
  Result r;
  SuiteConfig config{.suites = {"all"}, .trials = 50, .max_dim = 8, .seed = 42};
  config.membership.tol = pinned_tolerances();
  const auto start = Clock::now();
  const auto first = run_suite(config);
  const double elapsed = seconds_since(start);
  const auto second = run_suite(config);
  const auto strip = [](const std::vector<TheoremReport>& reports) {
    Json j = to_json(reports);
    for (auto& rep : j["reports"]) rep.erase("wall_time_ms");
    return j.dump();
  };
  const bool identical = strip(first) == strip(second);
  const int failures = total_failures(first);
  r.pass = elapsed < kFullRunSeconds && failures == 0 && identical;
  std::ostringstream os;
  os << first.size() << " reports in " << elapsed << " s, failures " << failures
     << (identical ? ", rerun identical" : ", rerun differs");
  r.detail = os.str();
  return r;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Result()>>> criteria = {
      {"1 counterexample reproduction", counterexample},
      {"2 nilpotent class boundary", nilpotent_boundary},
      {"3 oracle equivalence", oracle_equivalence},
      {"4 chain monotonicity", chain_monotonicity},
      {"5 decomposition theorem", decomposition_theorem},
      {"6 scalar-root lemma", scalar_root_lemma},
      {"7 embry and fuglede-putnam", embry_fuglede_putnam},
      {"8 canonical form round trip", canonical_round_trip},
      {"9 full verify all", full_run},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Result res;
    try {
      res = run();
    } catch (const std::exception& e) {
      res = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s  %s: %s\n", res.pass ? "PASS" : "FAIL", name.c_str(), res.detail.c_str());
    std::fflush(stdout);
    failed += !res.pass;
  }
  std::printf("%d/%zu criteria passed\n", int(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
