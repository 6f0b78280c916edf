// canal: build, inspect and export canal hypersurfaces in Minkowski 4-space

#include <CLI11.hpp>
#include <iostream>

#include "canal/io.hpp"

using namespace canal;

namespace {

struct Flags {
  std::string config, example;
  std::vector<std::pair<std::string, std::string>> settings;
};

void add_job_flags(CLI::App* cmd, Flags& fl) {
  cmd->add_option("--config", fl.config, "key=value job file (flags override it)");
  cmd->add_option("--example", fl.example, "builtin example: beta1 or beta2");
  static const char* keys[] = {"curve-x1", "curve-x2", "curve-x3", "curve-x4", "domain",  "radius",
                               "family",   "branch",   "variant",  "grid",     "range-s", "range-t",
                               "range-w",  "slice-w",  "slice-t",  "drop",     "cone-a",  "cone-b",
                               "obj",      "csv",      "json",     "check"};
  for (const char* k : keys) {
    std::string key = k;
    cmd->add_option_function<std::string>(
        "--" + key, [&fl, key](const std::string& v) { fl.settings.emplace_back(key, v); }, key);
  }
}

JobConfig resolve(const Flags& fl) {
  JobConfig job;
  if (!fl.config.empty()) load_config_file(job, fl.config);
  if (!fl.example.empty()) apply_setting(job, "example", fl.example);
  for (const auto& [k, v] : fl.settings) apply_setting(job, k, v);
  return job;
}

struct Setup {
  CurveSpec curve;
  CanalConfig cfg;
};

Setup prepare(const JobConfig& job) {
  Setup st{make_curve(job), make_canal(job)};
  auto rep = validate_config(st.curve, st.cfg, job.grid.s0, job.grid.s1);
  if (!rep.ok) {
    std::string why;
    for (const auto& r : rep.reasons) why += (why.empty() ? "" : "; ") + r;
    throw Error(rep.kind, why);
  }
  return st;
}

void emit(const std::string& path, const std::string& data) {
  if (path.empty() || path == "-") std::cout << data;
  else write_file(path, data);
}

int run_verify(const JobConfig& job) {
  Setup st = prepare(job);
  auto patch = sample_grid(st.curve, st.cfg, job.grid);
  auto nodes = patch_nodes(patch);
  std::vector<std::string> checks = job.checks.empty() ? std::vector<std::string>{"kh", "weingarten-tw"} : job.checks;
  json out = json::array();
  bool ok = true;
  for (const auto& c : checks) {
    TheoremReport r;
    if (c == "kh") r = check_kh_relation(st.curve, st.cfg, nodes);
    else if (c == "kh-numeric") r = check_kh_relation(st.curve, st.cfg, nodes, Route::Numeric);
    else if (c == "weingarten-st") r = weingarten_check(st.curve, st.cfg, nodes, WeingartenPair::st);
    else if (c == "weingarten-sw") r = weingarten_check(st.curve, st.cfg, nodes, WeingartenPair::sw);
    else if (c == "weingarten-tw") r = weingarten_check(st.curve, st.cfg, nodes, WeingartenPair::tw);
    else if (c == "tables") r = check_tables(st.curve, st.cfg, nodes);
    else throw Error(ErrorKind::InvalidConfig, "unknown check '" + c + "'");
    if (r.nodes == 0) r.pass = false;
    ok = ok && r.pass;
    std::printf("%s %-14s max_residual=%.3e tol=%.0e nodes=%d skipped=%d\n", r.pass ? "PASS" : "FAIL",
                r.theorem.c_str(), r.max_residual, r.tolerance, r.nodes, r.skipped);
    out.push_back(report_json(r));
  }
  if (!job.json.empty()) write_file(job.json, out.dump(2) + "\n");
  return ok ? 0 : 1;
}

int run_classify(const JobConfig& job) {
  CurveSpec curve = make_curve(job);
  RadiusProfile radius = RadiusProfile::parse(job.radius);
  auto flat = classify_flat(curve, radius, job.grid.s0, job.grid.s1);
  int lam = job.lambda == 0 ? 1 : job.lambda;
  auto minimal = classify_minimal(curve, radius, lam, job.grid.s0, job.grid.s1);
  std::printf("flat: %s (%s) max|K|=%.3e\n", verdict_name(flat.verdict), flat.reason.c_str(), flat.witness);
  std::printf("minimal[l=%d]: %s (%s) max|H|=%.3e\n", lam, verdict_name(minimal.verdict), minimal.reason.c_str(),
              minimal.witness);
  if (!job.json.empty()) {
    json j = {{"flat", verdict_name(flat.verdict)}, {"flat_witness", flat.witness},
              {"minimal", verdict_name(minimal.verdict)}, {"minimal_witness", minimal.witness}};
    write_file(job.json, j.dump(2) + "\n");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"canal and tubular hypersurfaces in Minkowski 4-space"};
  app.require_subcommand(1);
  Flags fl;
  std::string example_name;

  auto* ex = app.add_subcommand("example", "print the job file of a builtin example");
  ex->add_option("name", example_name, "beta1 or beta2")->required();
  auto* build = app.add_subcommand("build", "sample the hypersurface and write the patch as JSON");
  auto* curv = app.add_subcommand("curvature", "write closed-form and numeric curvatures as CSV");
  auto* verify = app.add_subcommand("verify", "check the structural identities on the grid");
  auto* classify = app.add_subcommand("classify", "flat and minimal verdicts for curve and radius");
  auto* exp = app.add_subcommand("export", "write the projected slice as OBJ (and CSV)");
  for (auto* c : {build, curv, verify, classify, exp}) add_job_flags(c, fl);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*ex) {
      std::cout << config_text(cmd_example(example_name));
      return 0;
    }
    JobConfig job = resolve(fl);
    if (*build) {
      Setup st = prepare(job);
      auto patch = sample_grid(st.curve, st.cfg, job.grid);
      emit(job.json, patch_json(patch, job).dump() + "\n");
      return 0;
    }
    if (*curv) {
      Setup st = prepare(job);
      if (st.cfg.lambda == 0) throw Error(ErrorKind::InadmissibleConfig, "null-cone canals carry no curvature formulas");
      auto patch = sample_grid(st.curve, st.cfg, job.grid);
      emit(job.csv, export_csv(st.curve, st.cfg, patch));
      return 0;
    }
    if (*verify) return run_verify(job);
    if (*classify) return run_classify(job);
    if (*exp) {
      if (job.obj.empty() && job.csv.empty()) throw Error(ErrorKind::InvalidConfig, "export needs --obj or --csv");
      Setup st = prepare(job);
      auto patch = sample_grid(st.curve, st.cfg, job.grid);
      if (!job.obj.empty()) emit(job.obj, export_obj(patch, job.drop));
      if (!job.csv.empty()) emit(job.csv, export_csv(st.curve, st.cfg, patch));
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "canal: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "canal: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
