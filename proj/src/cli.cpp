#include "padicres/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>

#include "padicres/errors.hpp"
#include "padicres/instances.hpp"
#include "padicres/report.hpp"

namespace padicres {

namespace {

bool read_file(const std::string& path, std::string& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream buf;
  buf << in.rdbuf();
  out = buf.str();
  return true;
}

bool write_file(const std::string& path, const std::string& text) {
  std::ofstream o(path, std::ios::binary | std::ios::trunc);
  if (!o) return false;
  o << text;
  return static_cast<bool>(o.flush());
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const SelftestFn& selftest) {
  CLI::App app{"p-adic resolvent calculus checker", args.empty() ? "padicres" : args.front()};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  std::string spec_path, report_path;
  RunOverrides overrides;
  std::uint32_t n_max = 0;
  std::int64_t k_max = 0;
  int precision = 0;
  std::uint64_t seed = 0;
  CLI::App* check = app.add_subcommand("check", "Run every check on a spec and write a report");
  check->add_option("--spec", spec_path, "Spec file (JSON)")->required();
  check->add_option("--report", report_path, "Report file to write (JSON)")->required();
  CLI::Option* n_opt = check->add_option("--n-max", n_max, "Criterion horizon")->check(CLI::Range(2, 1000));
  CLI::Option* k_opt = check->add_option("--k-max", k_max, "Power horizon")->check(CLI::Range(1, 100000));
  CLI::Option* p_opt = check->add_option("--precision", precision, "Precision digits")->check(CLI::Range(1, 100000));
  CLI::Option* s_opt = check->add_option("--seed", seed, "Seed for witness spot checks");

  std::string kind, params, out_path;
  CLI::App* generate = app.add_subcommand("generate", "Write a spec for a generated instance");
  generate->add_option("--kind", kind, "randomBounded, staircaseShift, jordan or diagonal")->required();
  generate->add_option("--params", params, "key=value list, list values separated by ':'");
  generate->add_option("--out", out_path, "Spec file to write")->required();

  CLI::App* self = app.add_subcommand("selftest", "Run the acceptance suite");

  try {
    std::vector<std::string> reversed(args.size() > 1 ? args.begin() + 1 : args.end(), args.end());
    std::reverse(reversed.begin(), reversed.end());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitInvalid;
  }

  if (check->parsed()) {
    if (n_opt->count()) overrides.n_max = n_max;
    if (k_opt->count()) overrides.k_max = k_max;
    if (p_opt->count()) overrides.precision = precision;
    if (s_opt->count()) overrides.seed = seed;
    std::string text;
    if (!read_file(spec_path, text)) {
      err << "error: cannot read spec file '" << spec_path << "'\n";
      return kExitInvalid;
    }
    const RunResult result = run_and_report(text, overrides);
    if (!write_file(report_path, result.report)) {
      err << "error: cannot write report file '" << report_path << "'\n";
      return kExitInvalid;
    }
    const char* status = result.exit_code == kExitPass     ? "pass"
                         : result.exit_code == kExitFinding ? "finding"
                                                            : "invalid input";
    out << spec_path << ": " << status << " (exit " << result.exit_code << "), report written to " << report_path << "\n";
    if (result.exit_code == kExitInvalid) err << "error: spec rejected, see the report's errors section\n";
    return result.exit_code;
  }

  if (generate->parsed()) {
    try {
      const SpecDocument doc = generate_instance(kind, parse_params(params));
      if (!write_file(out_path, serialize_spec(doc))) {
        err << "error: cannot write '" << out_path << "'\n";
        return kExitInvalid;
      }
      out << "wrote " << kind << " instance to " << out_path << "\n";
      return kExitPass;
    } catch (const InvalidInput& e) {
      err << "error: " << e.what() << "\n";
      return kExitInvalid;
    }
  }

  if (self->parsed()) {
    if (!selftest) {
      err << "error: this build has no acceptance suite\n";
      return kExitInvalid;
    }
    return selftest(out);
  }
  return kExitInvalid;
}

}  // namespace padicres
