// opclass: classify matrices, decompose them, generate instances and run the
// property suites. Exit codes: 0 success, 1 error, 2 only inconclusive verdicts.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "opclass/decomposition.hpp"
#include "opclass/generators.hpp"
#include "opclass/harness.hpp"
#include "opclass/matrix_io.hpp"
#include "opclass/serialize.hpp"

using namespace opclass;
namespace fs = std::filesystem;

namespace {

constexpr int kOk = 0;
constexpr int kError = 1;
constexpr int kInconclusive = 2;

struct TolFlags {
  std::optional<double> decision, psd, eq, rank, recon;

  void add(CLI::App* cmd) {
    cmd->add_option("--tol", decision, "decision tolerance (definite NonMember threshold)");
    cmd->add_option("--tol-psd", psd);
    cmd->add_option("--tol-eq", eq);
    cmd->add_option("--tol-rank", rank);
    cmd->add_option("--tol-recon", recon);
  }

  Tolerances resolve() const {
    Tolerances t;
    if (decision) t.decision = *decision;
    if (psd) t.psd = *psd;
    if (eq) t.eq = *eq;
    if (rank) t.rank = *rank;
    if (recon) t.recon = *recon;
    t.validate();
    return t;
  }
};

std::uint64_t default_seed() {
  const char* env = std::getenv("OPCLASS_SEED");
  if (!env || !*env) return 0;
  try {
    std::size_t used = 0;
    const auto v = std::stoull(env, &used, 0);
    if (used != std::string(env).size()) throw std::invalid_argument(env);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::InvalidArgument, std::string("OPCLASS_SEED is not an unsigned integer: ") + env);
  }
}

std::optional<MatrixFormat> format_option(const std::string& name) {
  if (name.empty()) return std::nullopt;
  return parse_format(name);
}

void emit(const Json& j, const std::string& out_path) {
  const auto text = j.dump(2) + "\n";
  if (out_path.empty() || out_path == "-")
    std::cout << text;
  else
    write_file_atomic(out_path, text);
}

// ---------------------------------------------------------------------------

struct ClassifyArgs {
  std::string file, format, out;
  std::vector<int> k_list;
  std::vector<double> p_list;
  std::optional<std::uint64_t> seed;
  int restarts = 6;
  TolFlags tol;
};

Json classify_json(const Matrix& t, const std::vector<int>& ks, const std::vector<double>& ps,
                   const MembershipOptions& opts, bool& any_inconclusive) {
  const auto c = classify_all(t, ks, ps, opts);
  any_inconclusive = false;
  for (const auto& [cls, v] : c.verdicts) any_inconclusive |= v.status == Status::Inconclusive;
  Json j = {{"dim", t.rows()}, {"seed", opts.seed}, {"tolerances", to_json(opts.tol)}};
  j.update(to_json(c));
  return j;
}

int cmd_classify(const ClassifyArgs& a) {
  MembershipOptions opts;
  opts.tol = a.tol.resolve();
  opts.seed = a.seed.value_or(default_seed());
  opts.restarts = a.restarts;
  for (int k : a.k_list)
    if (k < 1) throw Error(ErrorCode::InvalidArgument, "--k values must be >= 1");
  for (double p : a.p_list)
    if (!(p > 0 && p <= 1)) throw Error(ErrorCode::InvalidArgument, "--p values must lie in (0, 1]");
  const Matrix t = read_matrix(a.file, format_option(a.format));
  const auto ks = a.k_list.empty() ? std::vector<int>{1, 2, 3} : a.k_list;
  const auto ps = a.p_list.empty() ? std::vector<double>{0.5} : a.p_list;
  bool inconclusive = false;
  Json j = {{"input", a.file}};
  j.update(classify_json(t, ks, ps, opts, inconclusive));
  emit(j, a.out);
  return inconclusive ? kInconclusive : kOk;
}

// ---------------------------------------------------------------------------

struct DecomposeArgs {
  std::string mode, file, format, out;
  int n = 2, k = 1;
  std::optional<std::uint64_t> seed;
  TolFlags tol;
};

int cmd_decompose(const DecomposeArgs& a) {
  MembershipOptions opts;
  opts.tol = a.tol.resolve();
  opts.seed = a.seed.value_or(default_seed());
  if (a.mode != "normal-pure" && a.mode != "root" && a.mode != "nilpotent2")
    throw Error(ErrorCode::InvalidArgument, "mode must be normal-pure, root or nilpotent2");
  const Matrix t = read_matrix(a.file, format_option(a.format));
  Json j = {{"input", a.file}, {"mode", a.mode}};
  if (a.mode == "normal-pure") {
    j.update(to_json(normal_pure_split(t, opts.tol)));
  } else if (a.mode == "root") {
    j["n"] = a.n;
    j["k"] = a.k;
    j.update(to_json(root_decompose(t, a.n, a.k, opts)));
  } else {
    j.update(to_json(nilpotent2_canonical(t, opts.tol)));
  }
  emit(j, a.out);
  return kOk;
}

// ---------------------------------------------------------------------------

struct GenerateArgs {
  std::string kind, out, format, spec_file;
  Index dim = 2;
  std::optional<std::uint64_t> seed;
  std::map<std::string, double> flags;
  std::vector<double> eigenvalues;   // re, im pairs
  double lambda_re = 1, lambda_im = 0;
  bool zero_b = false;
  TolFlags tol;
};

int cmd_generate(const GenerateArgs& a) {
  if (a.out.empty()) throw Error(ErrorCode::InvalidArgument, "generate needs -o <file>");
  GenSpec spec;
  if (!a.spec_file.empty()) {
    std::ifstream in(a.spec_file);
    if (!in) throw Error(ErrorCode::InvalidSpec, "cannot open spec file '" + a.spec_file + "'");
    try {
      spec = gen_spec_from_json(Json::parse(in));
    } catch (const Json::exception& e) {
      throw Error(ErrorCode::InvalidSpec, std::string("malformed spec JSON: ") + e.what());
    }
  } else {
    spec.kind = a.kind;
    spec.dim = a.dim;
    spec.params = a.flags;
    if (a.zero_b) spec.params["zero_b"] = 1;
    if (a.eigenvalues.size() % 2) throw Error(ErrorCode::InvalidSpec, "--eigenvalues takes re im pairs");
    for (std::size_t i = 0; i + 1 < a.eigenvalues.size(); i += 2)
      spec.eigenvalues.emplace_back(a.eigenvalues[i], a.eigenvalues[i + 1]);
    spec.lambda = {a.lambda_re, a.lambda_im};
    spec.seed = a.seed.value_or(default_seed());
  }
  if (a.seed) spec.seed = *a.seed;

  const auto format = format_option(a.format).value_or(format_from_path(a.out));
  const Matrix generated = generate(spec);
  const std::string text = format == MatrixFormat::MatrixMarket ? to_matrix_market(generated) : to_json_matrix(generated);
  // certify what a later classify will read back
  std::istringstream reread(text);
  const Matrix t = format == MatrixFormat::MatrixMarket ? parse_matrix_market(reread) : parse_json_matrix(text);

  MembershipOptions opts;
  opts.tol = a.tol.resolve();
  opts.seed = spec.seed;
  const auto cert = certify(spec, t, opts);
  bool inconclusive = false;
  Json sidecar = {{"matrix", fs::path(a.out).filename().string()},
                  {"format", format == MatrixFormat::MatrixMarket ? "matrix-market" : "json"},
                  {"spec", to_json(spec)},
                  {"certification", to_json(cert)},
                  {"classification", classify_json(t, {1, 2, 3}, {0.5}, opts, inconclusive)},
                  {"source_hash", hash_to_hex(matrix_hash(t))}};
  write_file_atomic(a.out, text);
  write_file_atomic(a.out + ".sidecar.json", sidecar.dump(2) + "\n");
  if (!cert.certified) throw Error(ErrorCode::PostconditionFailed, "generated matrix failed self-certification");
  return kOk;
}

// ---------------------------------------------------------------------------

struct VerifyArgs {
  std::string theorem, out;
  int trials = 50;
  Index max_dim = 8;
  std::optional<std::uint64_t> seed;
  std::optional<int> n, k, m, kmax;
  bool scalar_root_only = false, inject_failure = false;
  TolFlags tol;
};

int cmd_verify(const VerifyArgs& a) {
  SuiteConfig config;
  config.trials = a.trials;
  config.max_dim = a.max_dim;
  config.seed = a.seed.value_or(default_seed());
  config.membership.tol = a.tol.resolve();
  config.inject_failure = a.inject_failure;
  if (a.trials < 0) throw Error(ErrorCode::InvalidArgument, "--trials must be >= 0");

  if (a.theorem == "search-q2") {
    const auto r = search_q2(a.trials, a.max_dim, a.n.value_or(2), config.seed, config.membership);
    emit(to_json(r), a.out);
    return kOk;
  }

  std::vector<TheoremReport> reports;
  const bool explicit_params = a.n || a.k || a.m || a.kmax || a.scalar_root_only;
  if (a.theorem == "all" || !explicit_params) {
    config.suites = {a.theorem};
    reports = run_suite(config);
  } else {
    auto spec = default_specs(a.theorem, config).front();
    const auto set = [&](const char* key, const std::optional<int>& v) {
      if (v) spec.params[key] = *v;
    };
    set("n", a.n);
    set("k", a.k);
    set("m", a.m);
    set("kmax", a.kmax);
    spec.scalar_root_only = a.scalar_root_only;
    reports.push_back(run_spec(spec));
  }
  Json j = to_json(reports);
  j["seed"] = config.seed;
  emit(j, a.out);
  return total_failures(reports) == 0 ? kOk : kError;
}

// ---------------------------------------------------------------------------

int cmd_report(const std::vector<std::string>& files) {
  int failures = 0;
  for (const auto& file : files) {
    std::ifstream in(file);
    if (!in) throw Error(ErrorCode::ParseError, "cannot open '" + file + "'");
    Json j;
    try {
      j = Json::parse(in);
    } catch (const Json::exception& e) {
      throw Error(ErrorCode::ParseError, file + ": " + e.what());
    }
    if (!j.contains("reports")) throw Error(ErrorCode::ParseError, file + ": not a verify report");
    std::cout << file << "\n";
    for (const auto& r : j["reports"]) {
      const auto nfail = r["failures"].size();
      failures += int(nfail);
      std::cout << "  " << (nfail ? "FAIL " : "ok   ") << r["theorem_id"].get<std::string>()
                << "  trials=" << r["trials"] << " passes=" << r["passes"] << " skips=" << r["skips"]
                << " failures=" << nfail << " time_ms=" << r["wall_time_ms"] << "\n";
      for (const auto& f : r["failures"])
        std::cout << "       seed=" << f["seed"] << " trial=" << f["trial"] << " "
                  << f["instance_ref"].get<std::string>() << ": " << f["detail"].get<std::string>() << "\n";
    }
  }
  return failures == 0 ? kOk : kError;
}

void print_error(const Error& e) {
  Json j = {{"error", to_string(e.code())}, {"message", e.what()}};
  std::cerr << j.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Operator-class laboratory: membership tests, decompositions, generators, property suites"};
  app.require_subcommand(1, 1);

  ClassifyArgs ca;
  auto* classify = app.add_subcommand("classify", "Classify a square matrix against every operator class");
  classify->add_option("file", ca.file, "matrix file (.json or .mtx)")->required();
  classify->add_option("--k", ca.k_list, "k values for the k-indexed classes")->expected(1, -1);
  classify->add_option("--p", ca.p_list, "p values for p-hyponormal")->expected(1, -1);
  classify->add_option("--seed", ca.seed, "seed for the sphere oracle restarts");
  classify->add_option("--restarts", ca.restarts)->check(CLI::NonNegativeNumber);
  classify->add_option("--format", ca.format, "json | matrix-market (default: by extension)");
  classify->add_option("-o,--output", ca.out);
  ca.tol.add(classify);

  DecomposeArgs da;
  auto* decompose = app.add_subcommand("decompose", "Structural decomposition of a matrix");
  decompose->add_option("mode", da.mode, "normal-pure | root | nilpotent2")->required();
  decompose->add_option("file", da.file)->required();
  decompose->add_option("--n", da.n, "power with T^n normal (root mode)")->check(CLI::PositiveNumber);
  decompose->add_option("--k", da.k, "k-quasi-paranormal index (root mode)")->check(CLI::PositiveNumber);
  decompose->add_option("--seed", da.seed);
  decompose->add_option("--format", da.format);
  decompose->add_option("-o,--output", da.out);
  da.tol.add(decompose);

  GenerateArgs ga;
  auto* gen = app.add_subcommand("generate", "Generate a seeded instance plus a self-certifying sidecar");
  gen->add_option("kind", ga.kind, "ginibre | unitary | normal | jordan | counterexample | scalar-root | k-quasi | rr");
  gen->add_option("--spec", ga.spec_file, "GenSpec JSON file instead of flags");
  gen->add_option("--dim", ga.dim)->check(CLI::PositiveNumber);
  gen->add_option("--seed", ga.seed);
  gen->add_option("-o,--output", ga.out)->required();
  gen->add_option("--format", ga.format);
  gen->add_option("--eigenvalues", ga.eigenvalues, "normal: re im pairs")->expected(1, -1);
  gen->add_option("--lambda-re", ga.lambda_re);
  gen->add_option("--lambda-im", ga.lambda_im);
  gen->add_flag("--zero-b", ga.zero_b, "rr: B = 0");
  for (const auto& [flag, key] : std::vector<std::pair<std::string, std::string>>{{"--index", "index"},
                                                                                  {"--k", "k"},
                                                                                  {"--n", "n"},
                                                                                  {"--dim-m", "dim_m"},
                                                                                  {"--dim-n", "dim_n"},
                                                                                  {"--dim-normal", "dim_normal"},
                                                                                  {"--dim-nil", "dim_nil"},
                                                                                  {"--dim-a", "dim_a"},
                                                                                  {"--dim-b", "dim_b"}}) {
    gen->add_option_function<int>(flag, [&ga, key = key](int v) { ga.flags[key] = v; });
  }
  ga.tol.add(gen);

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "Run property suites and write a report");
  verify->add_option("theorem", va.theorem, "suite id, all, or search-q2")->required();
  verify->add_option("--trials", va.trials);
  verify->add_option("--max-dim", va.max_dim)->check(CLI::Range(2, 64));
  verify->add_option("--seed", va.seed);
  verify->add_option("--n", va.n);
  verify->add_option("--k", va.k);
  verify->add_option("--m", va.m);
  verify->add_option("--kmax", va.kmax);
  verify->add_flag("--scalar-root-only", va.scalar_root_only);
  verify->add_flag("--inject-failure", va.inject_failure, "negate every passing assertion (harness self-test)");
  verify->add_option("-o,--output", va.out);
  va.tol.add(verify);

  std::vector<std::string> report_files;
  auto* report = app.add_subcommand("report", "Summarize verify reports");
  report->add_option("files", report_files)->required()->expected(1, -1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kError;
  }

  try {
    if (*classify) return cmd_classify(ca);
    if (*decompose) return cmd_decompose(da);
    if (*gen) {
      if (ga.kind.empty() && ga.spec_file.empty()) throw Error(ErrorCode::InvalidSpec, "generate needs a kind or --spec");
      return cmd_generate(ga);
    }
    if (*verify) return cmd_verify(va);
    if (*report) return cmd_report(report_files);
  } catch (const Error& e) {
    print_error(e);
    return kError;
  } catch (const std::exception& e) {
    print_error(Error(ErrorCode::InvalidArgument, e.what()));
    return kError;
  }
  return kError;
}
