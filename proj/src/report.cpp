#include "padicres/report.hpp"

#include <json.hpp>
#include <openssl/evp.h>

#include <array>
#include <cstdio>

#include "padicres/errors.hpp"

namespace padicres {

using nlohmann::json;

std::string sha256_hex(const std::string& bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md.data(), &len, EVP_sha256(), nullptr) != 1)
    throw Error("SHA-256 digest failed");
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", md[i]);
    hex += buf;
  }
  return hex;
}

namespace {

json exp_json(const AbsExp& e) {
  if (e.is_neg_inf()) return "-inf";
  return e.value();
}

json opt_int_json(const std::optional<std::int64_t>& v) { return v ? json(*v) : json(nullptr); }

json refutation_json(const EquiRefutation& r) {
  return {{"q", r.q},
          {"p", r.p},
          {"basis_index", r.basis_index},
          {"operator_index", r.operator_index},
          {"needed_scale", opt_int_json(r.needed_scale)},
          {"allowed_scale", r.budget}};
}

json family_json(const FamilyVerdict& v, const std::string& certificate) {
  json witnesses = json::array();
  for (const auto& w : v.full.witnesses) witnesses.push_back({{"q", w.q}, {"p", w.p}, {"scale", w.scale}});
  json needed = json::array();
  for (const auto& s : v.full.needed_scales) needed.push_back(opt_int_json(s));
  json prefix_needed = json::array();
  for (const auto& s : v.prefix.needed_scales) prefix_needed.push_back(opt_int_json(s));
  json norms = json::array();
  for (const auto& g : v.norms) {
    json entry = {{"n", g.n}, {"exponent", exp_json(g.exponent)}};
    if (!g.lambda.is_zero()) entry["lambda"] = g.lambda.to_string();
    norms.push_back(std::move(entry));
  }
  return {{"status", to_string(v.status)},
          {"certificate", certificate},
          {"horizon", v.horizon},
          {"prefix_horizon", v.prefix_horizon},
          {"stabilized", v.stabilized},
          {"witnesses", std::move(witnesses)},
          {"needed_scales", std::move(needed)},
          {"prefix_needed_scales", std::move(prefix_needed)},
          {"refutation", v.refutation ? refutation_json(*v.refutation) : json(nullptr)},
          {"max_norm_exponent", exp_json(v.max_norm)},
          {"norms", std::move(norms)}};
}

std::string powers_certificate(const VerdictReport& r) {
  const bool bounded = r.oracle == PowerBound::bounded;
  if (r.powers.status == EquiStatus::witnessed) return bounded ? "certified by oracle" : "witnessed on grid";
  return bounded ? "refuted on grid" : "refuted, oracle unbounded";
}

std::string criterion_certificate(const VerdictReport& r, const FamilyVerdict& v) {
  if (v.status == EquiStatus::witnessed) return r.forward.holds ? "certified by forward bound" : "witnessed on grid";
  return r.oracle == PowerBound::unbounded ? "refuted, oracle unbounded" : "refuted on grid";
}

json system_json(const BuiltSystem& built) {
  const OperatorSystem& s = built.system;
  json lambdas = json::array();
  for (const auto& l : built.config.lambdas) lambdas.push_back(l.to_string());
  return {{"dimension", s.a().dim()},
          {"prime", s.a().field().prime},
          {"backend", to_string(s.a().field().backend)},
          {"omega", s.omega().to_string()},
          {"declared_radius_exponent", s.declared_radius()},
          {"certified_radius_exponent", s.certified_radius() ? json(*s.certified_radius()) : json("inf")},
          {"theorem_radius_exponent", s.theorem_radius()},
          {"hypothesis", s.hypothesis_name()},
          {"hypothesis_holds", s.hypothesis_holds()},
          {"lambda_samples", std::move(lambdas)},
          {"n_max", built.config.n_max},
          {"k_max", built.config.k_max},
          {"tolerance_exponent", built.config.budget.tolerance_exponent()},
          {"scaling_budget", built.config.scaling_budget},
          {"seed", built.config.seed}};
}

json verdict_json(const VerdictReport& r) {
  json charpoly = json::array();
  for (const auto& c : r.charpoly) charpoly.push_back(c.get_str());
  json residuals = json::object();
  for (const auto& s : r.residuals)
    residuals[s.name] = {{"max_exponent", exp_json(s.max_exponent)},
                         {"allowed_exponent", exp_json(s.allowed)},
                         {"evaluations", s.evaluations},
                         {"pass", s.pass}};
  json probes = json::array();
  for (const auto& p : r.probes) {
    json bounds = json::array();
    for (const auto& [m, e] : p.probe.bounds) bounds.push_back({{"m", m}, {"exponent", exp_json(e)}});
    probes.push_back({{"k", p.k},
                      {"target_exponent", exp_json(p.probe.target)},
                      {"stabilized", p.probe.stabilized},
                      {"bounds", std::move(bounds)}});
  }
  const ForwardBound& fb = r.forward;
  return {{"oracle", {{"verdict", to_string(r.oracle)}, {"charpoly", std::move(charpoly)}}},
          {"verdicts",
           {{"powers", family_json(r.powers, powers_certificate(r))},
            {"criterion_S", family_json(r.criterion_s, criterion_certificate(r, r.criterion_s))},
            {"criterion_T", family_json(r.criterion_t, criterion_certificate(r, r.criterion_t))},
            {"agreement", r.agreement}}},
          {"forward_bound",
           {{"applicable", fb.applicable},
            {"constant_exponent", fb.applicable ? exp_json(fb.constant) : json(nullptr)},
            {"stable", fb.stable},
            {"max_S_exponent", exp_json(fb.max_s)},
            {"max_T_exponent", exp_json(fb.max_t)},
            {"holds", fb.holds}}},
          {"residuals", std::move(residuals)},
          {"lambda_to_zero", std::move(probes)},
          {"witness_spot_checks", {{"checks", r.witness_spot_checks}, {"violations", r.witness_violations}}}};
}

json error_json(const char* kind, const std::string& message) { return {{"kind", kind}, {"message", message}}; }

}  // namespace

RunResult run_and_report(const std::string& spec_text, const RunOverrides& overrides) {
  json report;
  report["tool"] = {{"name", "padicres"}, {"version", kToolVersion}};
  json errors = json::array();
  int code = kExitPass;
  std::string digest_source = spec_text;

  try {
    SpecDocument doc = parse_spec(spec_text);
    if (overrides.n_max) doc.n_max = *overrides.n_max;
    if (overrides.k_max) doc.k_max = *overrides.k_max;
    if (overrides.precision) doc.precision = *overrides.precision;
    if (overrides.seed) doc.seed = *overrides.seed;
    digest_source = serialize_spec(doc);
    const BuiltSystem built = build_system(doc);
    report["system"] = system_json(built);
    try {
      const VerdictReport verdict = hyp_verdict(built.system, built.config);
      report.update(verdict_json(verdict));
      if (!verdict.all_pass()) code = kExitFinding;
    } catch (const InvalidInput& e) {
      errors.push_back(error_json("invalid_input", e.what()));
      code = kExitInvalid;
    } catch (const InternalConsistencyError& e) {
      errors.push_back(error_json("internal_consistency", e.what()));
      code = kExitFinding;
    } catch (const DomainError& e) {
      errors.push_back(error_json("domain", e.what()));
      code = kExitFinding;
    } catch (const SingularError& e) {
      errors.push_back(error_json("singular", e.what()));
      code = kExitFinding;
    }
  } catch (const HypothesisError& e) {
    errors.push_back(error_json("hypothesis", e.what()));
    code = kExitInvalid;
  } catch (const InvalidInput& e) {
    errors.push_back(error_json("invalid_input", e.what()));
    code = kExitInvalid;
  }

  report["input_digest"] = "sha256:" + sha256_hex(digest_source);
  report["errors"] = std::move(errors);
  report["exit_code"] = code;
  report["status"] = code == kExitPass ? "pass" : code == kExitFinding ? "finding" : "invalid_input";
  return {report.dump(2) + "\n", code};
}

}  // namespace padicres
