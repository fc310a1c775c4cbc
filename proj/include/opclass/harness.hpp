#pragma once

// Randomized property suites. Each suite draws hypothesis instances from the
// generators, filters them through the membership predicates and asserts the
// conclusion, collecting a TheoremReport.
//
// In finite dimension hyponormal, quasinormal and subnormal matrices are
// normal, so the hyponormal and quasinormal root suites hold for trivial
// reasons. They still run, and their reports count the collapse; the k-quasi
// decomposition, scalar-root and counterexample checks carry the content.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "opclass/linalg.hpp"
#include "opclass/membership.hpp"

namespace opclass {

struct FailureRecord {
  int trial = 0;
  std::uint64_t seed = 0;   // trial seed; replay_trial(spec, trial, seed) rebuilds the instance
  Index dim = 0;
  std::map<std::string, double> residuals;
  std::string instance_ref;
  std::string detail;
};

struct Confirmation {
  int trial = 0;
  std::uint64_t seed = 0;
  std::string instance_ref;
  std::map<std::string, std::string> verdicts;
};

struct TheoremReport {
  std::string theorem_id;
  std::map<std::string, int> params;
  int trials = 0;
  int passes = 0;
  int skips = 0;
  std::vector<FailureRecord> failures;
  std::map<std::string, int> skip_reasons;
  std::map<std::string, int> counters;
  std::map<std::string, double> max_residuals;   // over passing trials
  std::vector<Confirmation> confirmations;
  std::vector<std::string> notes;
  Tolerances tolerances;
  double wall_time_ms = 0;
};

struct SuiteSpec {
  std::string theorem;                 // see suite_ids()
  std::map<std::string, int> params;   // n, k, m, kmax as the suite needs
  int trials = 50;
  Index max_dim = 8;
  std::uint64_t seed = 42;
  MembershipOptions membership;
  bool inject_failure = false;         // negate every passing assertion
  bool scalar_root_only = false;       // k-paranormal-root: only root_of_scalar_instance
};

enum class TrialStatus { Pass, Fail, Skip };

struct TrialOutcome {
  TrialStatus status = TrialStatus::Skip;
  std::string reason;   // skip predicate or failure detail
  Index dim = 0;
  std::map<std::string, double> residuals;
  std::string instance_ref;
  std::map<std::string, int> counters;
  std::optional<Confirmation> confirmation;
};

std::vector<std::string> suite_ids();

/// Seed of trial `trial` for a suite spec.
std::uint64_t trial_seed(const SuiteSpec& spec, int trial);

TheoremReport run_spec(const SuiteSpec& spec);
TrialOutcome replay_trial(const SuiteSpec& spec, int trial, std::uint64_t seed);

TheoremReport verify_stampfli(int trials, Index max_dim, std::uint64_t seed, const MembershipOptions& opts = {});
TheoremReport verify_quasinormal_root(int trials, Index max_dim, int n, std::uint64_t seed,
                                      const MembershipOptions& opts = {});
TheoremReport verify_ando(int trials, Index max_dim, int n, std::uint64_t seed, const MembershipOptions& opts = {});
TheoremReport verify_k_paranormal_root(int trials, Index max_dim, int n, int k, std::uint64_t seed,
                                       const MembershipOptions& opts = {}, bool scalar_root_only = false);
TheoremReport verify_k_quasi_decomposition(int trials, Index max_dim, int n, int k, std::uint64_t seed,
                                           const MembershipOptions& opts = {});
TheoremReport verify_coprime(int trials, Index max_dim, int m, int n, std::uint64_t seed,
                             const MembershipOptions& opts = {});
TheoremReport verify_embry(int trials, Index max_dim, int kmax, std::uint64_t seed, const MembershipOptions& opts = {});
TheoremReport verify_fuglede_putnam(int trials, Index max_dim, std::uint64_t seed, const MembershipOptions& opts = {});
TheoremReport verify_normaloid_criterion(int trials, Index max_dim, int k, std::uint64_t seed,
                                         const MembershipOptions& opts = {});

struct SuiteConfig {
  std::vector<std::string> suites;   // suite ids; "all" expands to every suite
  int trials = 50;
  Index max_dim = 8;
  std::uint64_t seed = 42;
  MembershipOptions membership;
  bool inject_failure = false;
};

/// Parameter sets each suite runs with when no explicit parameters are given.
std::vector<SuiteSpec> default_specs(const std::string& theorem, const SuiteConfig& config);

std::vector<TheoremReport> run_suite(const SuiteConfig& config);
int total_failures(const std::vector<TheoremReport>& reports);

/// Bounded random search for paranormal T with T^n quasinormal but T not
/// quasinormal. Informational: nothing is asserted.
struct SearchReport {
  int trials = 0;
  int n = 2;
  int hypothesis_met = 0;
  int inconclusive = 0;
  std::vector<std::uint64_t> candidates;
  Tolerances tolerances;
  double wall_time_ms = 0;
};

SearchReport search_q2(int trials, Index max_dim, int n, std::uint64_t seed, const MembershipOptions& opts = {});

}  // namespace opclass
