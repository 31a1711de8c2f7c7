// tdscalc: batch verification and evaluation for the exterior-calculus kernel.
//
// Exit codes: 0 all cases pass, 1 at least one case failed, 2 usage/schema
// error, 3 domain error.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "tdscalc/verify.hpp"

namespace {

using tdsc::CalcError;
using tdsc::ErrorKind;
using tdsc::json;

int exit_code_for(const CalcError& e) {
  switch (e.kind()) {
    case ErrorKind::Schema:
    case ErrorKind::Syntax:
      return 2;
    default:
      return 3;
  }
}

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CalcError(ErrorKind::Schema, "cannot open file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw CalcError(ErrorKind::Schema, "malformed JSON in '" + path + "': " + e.what());
  }
  return j;
}

int run_verify(const std::string& suite, uint64_t seed, int samples, bool json_out,
               bool timings, double tolerance) {
  const auto& names = tdsc::suite_names();
  if (std::find(names.begin(), names.end(), suite) == names.end()) {
    std::cerr << "unknown suite '" << suite << "'; choose one of:";
    for (const auto& n : names) std::cerr << " " << n;
    std::cerr << "\n";
    return 2;
  }
  tdsc::Report report =
      tdsc::run_suite(suite, seed, samples, tdsc::rational_from_double(tolerance));
  if (json_out) {
    std::cout << report.to_json(timings).dump(2) << "\n";
  } else {
    for (const auto& c : report.cases) std::cout << c.id << ": " << c.status << "\n";
    std::cout << "pass " << report.count("pass") << " fail " << report.count("fail")
              << " error " << report.count("error") << " total " << report.cases.size()
              << "\n";
  }
  return report.all_pass() ? 0 : 1;
}

int run_eval(const std::string& form_path, const std::string& input_path) {
  json form = load_json(form_path);
  json input = load_json(input_path);
  tdsc::Rational value;
  if (form.contains("dim")) {
    tdsc::ExteriorForm w = tdsc::exterior_from_json(form);
    if (!input.contains("vectors"))
      throw CalcError(ErrorKind::Schema, "input needs \"vectors\" for an exterior form");
    std::vector<tdsc::RatVec> vectors;
    for (const auto& v : input.at("vectors")) vectors.push_back(tdsc::vec_from_json(v));
    value = w.evaluate(vectors);
  } else if (form.contains("domain")) {
    tdsc::DifferentialForm w = tdsc::diff_form_from_json(form);
    if (!input.contains("point"))
      throw CalcError(ErrorKind::Schema, "input needs \"point\" for a differential form");
    tdsc::ExteriorForm at = w.eval_at(tdsc::vec_from_json(input.at("point")));
    if (input.contains("vectors")) {
      std::vector<tdsc::RatVec> vectors;
      for (const auto& v : input.at("vectors")) vectors.push_back(tdsc::vec_from_json(v));
      value = at.evaluate(vectors);
    } else {
      std::cout << tdsc::exterior_to_json(at).dump(2) << "\n";
      return 0;
    }
  } else {
    throw CalcError(ErrorKind::Schema,
                    "form file is neither an exterior form (dim) nor a differential "
                    "form (domain)");
  }
  std::cout << tdsc::rational_to_json(value).dump(2) << "\n";
  return 0;
}

int run_probe(const std::string& space_name, const std::string& p1_path,
              const std::string& p2_path, const std::string& mode, int budget) {
  tdsc::DiffSpace x = tdsc::space_by_name(space_name);
  tdsc::SmoothMap p1 = tdsc::smooth_map_from_json(load_json(p1_path));
  tdsc::SmoothMap p2 = tdsc::smooth_map_from_json(load_json(p2_path));
  tdsc::JointMode m;
  if (mode == "strong")
    m = tdsc::JointMode::Strong;
  else if (mode == "weak")
    m = tdsc::JointMode::Weak;
  else
    throw CalcError(ErrorKind::Schema, "mode must be 'strong' or 'weak'");
  tdsc::ProbeResult r = tdsc::joint_plaque_probe(x, p1, p2, m, budget);
  json out = tdsc::probe_result_to_json(r);
  out["space"] = space_name;
  out["mode"] = mode;
  std::cout << out.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exterior calculus on tangent-diffeological fixtures"};
  app.require_subcommand(1);

  // verify
  std::string suite;
  uint64_t seed = 0;
  int samples = 64;
  bool json_out = true;
  bool timings = false;
  double tolerance = 1e-9;
  auto* verify = app.add_subcommand("verify", "run a verification suite");
  verify->add_option("suite", suite, "algebra|forms|def21|tds|psi|counterexamples|all")
      ->required();
  verify->add_option("--seed", seed, "PRNG seed (default 0)");
  verify->add_option("--samples", samples, "sample count (default 64)");
  verify->add_flag("--json,!--no-json", json_out, "JSON report output (default on)");
  verify->add_flag("--timings", timings, "include per-case timings (breaks byte determinism)");
  verify->add_option("--tolerance", tolerance, "black-box comparison tolerance (default 1e-9)");

  // eval
  std::string form_path, input_path;
  auto* eval = app.add_subcommand("eval", "evaluate a form from JSON files");
  eval->add_option("--form", form_path, "form JSON file")->required();
  eval->add_option("--input", input_path, "input JSON file (point / vectors)")->required();

  // probe
  std::string space_name, p1_path, p2_path, mode = "strong";
  int budget = 8;
  auto* probe = app.add_subcommand("probe", "joint-plaque probe on a fixture space");
  probe->add_option("space", space_name, "fixture name, e.g. lines or euclidean:2")
      ->required();
  probe->add_option("--p1", p1_path, "first plaque JSON file")->required();
  probe->add_option("--p2", p2_path, "second plaque JSON file")->required();
  probe->add_option("--mode", mode, "strong|weak (default strong)");
  probe->add_option("--budget", budget, "search budget");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(verify))
      return run_verify(suite, seed, samples, json_out, timings, tolerance);
    if (app.got_subcommand(eval)) return run_eval(form_path, input_path);
    if (app.got_subcommand(probe)) return run_probe(space_name, p1_path, p2_path, mode, budget);
  } catch (const CalcError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
