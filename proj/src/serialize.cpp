#include "opclass/serialize.hpp"

#include <cstdio>

#include "opclass/matrix_io.hpp"

namespace opclass {

namespace {

Json complex_pair(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from(const Json& j, const char* what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw Error(ErrorCode::InvalidSpec, std::string(what) + " must be a [re, im] pair");
  return {j[0].get<double>(), j[1].get<double>()};
}

Json class_params(const OperatorClass& cls) {
  Json p = Json::object();
  switch (cls.label) {
    case ClassLabel::KParanormal:
    case ClassLabel::AbsoluteKParanormal:
    case ClassLabel::KQuasiParanormal: p["k"] = cls.k; break;
    case ClassLabel::PHyponormal: p["p"] = cls.p; break;
    default: break;
  }
  return p;
}

std::string class_family(const OperatorClass& cls) {
  const auto name = cls.name();
  return name.substr(0, name.find('('));
}

}  // namespace

std::string hash_to_hex(std::uint64_t hash) {
  char buf[19];
  std::snprintf(buf, sizeof buf, "0x%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

Json matrix_to_json(const Matrix& t) {
  Json entries = Json::array();
  for (Index i = 0; i < t.rows(); ++i)
    for (Index j = 0; j < t.cols(); ++j) entries.push_back(complex_pair(t(i, j)));
  return {{"dim", t.rows()}, {"entries", std::move(entries)}};
}

Matrix matrix_from_json(const Json& j) { return parse_json_matrix(j.dump()); }

Json to_json(const Tolerances& tol) {
  return {{"psd", tol.psd}, {"eq", tol.eq}, {"rank", tol.rank}, {"recon", tol.recon}, {"decision", tol.decision}};
}

Json to_json(const MembershipVerdict& v) {
  Json witness = Json::object();
  if (v.witness.vector) {
    Json vec = Json::array();
    for (Index i = 0; i < v.witness.vector->size(); ++i) vec.push_back(complex_pair((*v.witness.vector)(i)));
    witness["vector"] = std::move(vec);
  }
  if (v.witness.lambda) witness["lambda"] = *v.witness.lambda;
  Json j = {{"status", to_string(v.status)}, {"defect", v.defect}, {"scale", v.scale},
            {"witness", std::move(witness)}, {"oracle", to_string(v.oracle)}, {"seed", v.seed}};
  if (!v.note.empty()) j["note"] = v.note;
  return j;
}

Json to_json(const OperatorClass& cls, const MembershipVerdict& v) {
  Json j = {{"class", class_family(cls)}, {"params", class_params(cls)}};
  j.update(to_json(v));
  return j;
}

Json to_json(const Classification& c) {
  Json verdicts = Json::object();
  for (const auto& [cls, v] : c.verdicts) verdicts[cls.name()] = to_json(cls, v);
  return {{"verdicts", std::move(verdicts)}, {"chain_violations", c.chain_violations}};
}

Json to_json(const Decomposition& d) {
  Json blocks = Json::array(), labels = Json::array();
  for (const auto& b : d.blocks) blocks.push_back(matrix_to_json(b));
  for (auto l : d.labels) labels.push_back(to_string(l));
  Json j = {{"Q", matrix_to_json(d.change_of_basis)},
            {"block_dims", d.block_dims},
            {"labels", std::move(labels)},
            {"blocks", std::move(blocks)},
            {"residuals",
             {{"reassembly", d.residuals.reassembly},
              {"normality", d.residuals.normality},
              {"nilpotency", d.residuals.nilpotency}}},
            {"source_hash", hash_to_hex(d.source_hash)}};
  if (d.nil_index_bound > 0) j["nil_index_bound"] = d.nil_index_bound;
  return j;
}

Json to_json(const Nilpotent2Form& f) {
  Json j = to_json(f.decomposition);
  j["C"] = matrix_to_json(f.form.c);
  return j;
}

Json to_json(const GenSpec& spec) {
  Json j = {{"kind", spec.kind}, {"dim", spec.dim}, {"seed", spec.seed}, {"params", spec.params}};
  if (!spec.eigenvalues.empty()) {
    Json ev = Json::array();
    for (auto z : spec.eigenvalues) ev.push_back(complex_pair(z));
    j["eigenvalues"] = std::move(ev);
  }
  if (spec.kind == "scalar-root") j["lambda"] = complex_pair(spec.lambda);
  return j;
}

Json to_json(const Certification& c) {
  Json verdicts = Json::object();
  for (const auto& [claim, v] : c.verdicts) verdicts[claim] = to_json(v);
  return {{"certified", c.certified}, {"verdicts", std::move(verdicts)}, {"values", c.values}};
}

Json to_json(const TheoremReport& r) {
  Json failures = Json::array();
  for (const auto& f : r.failures)
    failures.push_back({{"trial", f.trial},
                        {"seed", f.seed},
                        {"dim", f.dim},
                        {"residuals", f.residuals},
                        {"instance_ref", f.instance_ref},
                        {"detail", f.detail}});
  Json confirmations = Json::array();
  for (const auto& c : r.confirmations)
    confirmations.push_back(
        {{"trial", c.trial}, {"seed", c.seed}, {"instance_ref", c.instance_ref}, {"verdicts", c.verdicts}});
  return {{"theorem_id", r.theorem_id},
          {"params", r.params},
          {"trials", r.trials},
          {"passes", r.passes},
          {"skips", r.skips},
          {"failures", std::move(failures)},
          {"skip_reasons", r.skip_reasons},
          {"counters", r.counters},
          {"max_residuals", r.max_residuals},
          {"confirmations", std::move(confirmations)},
          {"notes", r.notes},
          {"tolerances", to_json(r.tolerances)},
          {"wall_time_ms", r.wall_time_ms}};
}

Json to_json(const std::vector<TheoremReport>& reports) {
  Json list = Json::array();
  for (const auto& r : reports) list.push_back(to_json(r));
  return {{"reports", std::move(list)}, {"failures_total", total_failures(reports)}};
}

Json to_json(const SearchReport& r) {
  return {{"search", "q2"},
          {"informational", true},
          {"trials", r.trials},
          {"n", r.n},
          {"hypothesis_met", r.hypothesis_met},
          {"inconclusive", r.inconclusive},
          {"candidates", r.candidates},
          {"tolerances", to_json(r.tolerances)},
          {"wall_time_ms", r.wall_time_ms}};
}

GenSpec gen_spec_from_json(const Json& j) {
  if (!j.is_object()) throw Error(ErrorCode::InvalidSpec, "generator spec must be a JSON object");
  GenSpec spec;
  if (!j.contains("kind") || !j["kind"].is_string()) throw Error(ErrorCode::InvalidSpec, "missing string field 'kind'");
  spec.kind = j["kind"].get<std::string>();
  if (j.contains("dim")) {
    if (!j["dim"].is_number_integer() || j["dim"].get<long long>() < 1)
      throw Error(ErrorCode::InvalidSpec, "dim must be a positive integer");
    spec.dim = Index(j["dim"].get<long long>());
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned() && !(j["seed"].is_number_integer() && j["seed"].get<long long>() >= 0))
      throw Error(ErrorCode::InvalidSpec, "seed must be a non-negative integer");
    spec.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("params")) {
    if (!j["params"].is_object()) throw Error(ErrorCode::InvalidSpec, "params must be an object");
    for (const auto& [key, value] : j["params"].items()) {
      if (!value.is_number()) throw Error(ErrorCode::InvalidSpec, "param '" + key + "' must be numeric");
      spec.params[key] = value.get<double>();
    }
  }
  if (j.contains("eigenvalues")) {
    if (!j["eigenvalues"].is_array()) throw Error(ErrorCode::InvalidSpec, "eigenvalues must be an array");
    for (const auto& z : j["eigenvalues"]) spec.eigenvalues.push_back(complex_from(z, "eigenvalue"));
  }
  if (j.contains("lambda")) spec.lambda = complex_from(j["lambda"], "lambda");
  return spec;
}

}  // namespace opclass
