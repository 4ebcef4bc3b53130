// Command-line front end: solve instances, verify schedules, run the
// enumeration oracle, generate random instances, and dump solver traces.
//
// Exit codes: 0 ok, 1 input/parse error, 2 infeasible instance,
// 3 verification failure.

#include <exception>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "focs/focs.hpp"
#include "focs/generator.hpp"
#include "focs/io.hpp"
#include "focs/oracle.hpp"
#include "focs/rational.hpp"
#include "focs/verify.hpp"

namespace {

namespace fs = std::filesystem;

struct Options {
  std::string instance_path;
  std::string schedule_path;
  std::string out_dir;
  int alpha = 2;
  std::string delta = "1/4";
  std::string tol = "0";
  bool trace = false;
  int jobs = 5;
  long long horizon = 8;
  uint64_t seed = 1;
};

fs::path ensure_out_dir(const std::string& dir) {
  fs::path path(dir);
  std::error_code ec;
  fs::create_directories(path, ec);
  if (ec) throw focs::ParseError("cannot create output directory " + dir);
  return path;
}

int cmd_solve(const Options& opt, bool trace_only) {
  focs::Instance instance = focs::read_instance_json(opt.instance_path);
  focs::FocsOptions focs_options;
  focs_options.keep_iteration_trace = opt.trace || trace_only;
  focs::FocsResult result = focs::run_focs(instance, focs_options);
  focs::Objective objective{opt.alpha};
  fs::path out = ensure_out_dir(opt.out_dir);

  if (trace_only || opt.trace)
    focs::detail::write_file(out / "trace.jsonl", focs::trace_to_jsonl(result));
  if (!trace_only) {
    focs::write_schedule_csv(out / "schedule.csv", result.schedule);
    focs::write_profile_csv(out / "profile.csv", result.profile, result.schedule.partition());
    focs::detail::write_file(out / "summary.json", focs::summary_to_json(result, objective));
  }

  std::cout << "objective(alpha=" << opt.alpha
            << ") = " << focs::rat_to_string(focs::objective_value(result.profile, objective))
            << ", rounds = " << result.rounds.size() << ", iterations = " << result.total_iterations
            << "\n";
  return 0;
}

int cmd_verify(const Options& opt) {
  focs::Instance instance = focs::read_instance_json(opt.instance_path);
  focs::AtomicPartition partition = focs::build_partition(instance);
  focs::Schedule schedule = focs::read_schedule_csv(opt.schedule_path, instance, partition);
  focs::Objective objective{opt.alpha};
  focs::Rat tolerance = focs::rat_from_string(opt.tol);

  focs::KktReport report;
  try {
    report = focs::check_kkt(schedule, tolerance);
  } catch (const std::invalid_argument& error) {
    throw focs::ParseError(error.what());  // incomplete schedule: an input defect
  }
  focs::DualCertificate cert = focs::recover_duals(schedule, objective);

  fs::path out = ensure_out_dir(opt.out_dir);
  focs::detail::write_file(out / "kkt_report.json",
                           focs::kkt_report_to_json(report, cert, instance));

  std::cout << "KKT1-3: " << (report.pass ? "pass" : "fail") << " ("
            << report.violations.size() << " violations)\n";
  std::cout << "dual certificate: " << (cert.valid ? "valid" : "invalid") << "\n";
  for (const focs::KktViolation& v : report.violations)
    std::cout << "  " << v.condition << " job " << instance.job(v.job).id << ": p(I"
              << v.interval + 1 << ") = " << focs::rat_to_string(v.power) << " vs p(I"
              << v.other_interval + 1 << ") = " << focs::rat_to_string(v.other_power) << "\n";
  return report.pass && cert.valid ? 0 : 3;
}

int cmd_oracle(const Options& opt) {
  focs::Instance instance = focs::read_instance_json(opt.instance_path);
  focs::Objective objective{opt.alpha};
  focs::OracleResult result =
      focs::oracle_solve(instance, objective, focs::rat_from_string(opt.delta));
  if (result.demands_rounded)
    std::cerr << "warning: demands were rounded to the enumeration grid\n";

  fs::path out = ensure_out_dir(opt.out_dir);
  focs::write_schedule_csv(out / "oracle_schedule.csv", result.schedule);
  focs::write_profile_csv(out / "oracle_profile.csv", result.profile,
                          result.schedule.partition());
  std::cout << "oracle objective(alpha=" << opt.alpha
            << ") = " << focs::rat_to_string(result.objective) << " over " << result.candidates
            << " candidates\n";
  return 0;
}

int cmd_gen(const Options& opt) {
  focs::GenParams params;
  params.jobs = opt.jobs;
  params.horizon = opt.horizon;
  params.seed = opt.seed;
  focs::Instance instance = focs::generate_instance(params);
  fs::path out = ensure_out_dir(opt.out_dir);
  focs::write_instance_json(out / "instance.json", instance);
  std::cout << (out / "instance.json").string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimal EV fleet charging via critical-interval maximum flows"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&](CLI::App* cmd, bool needs_instance) {
    if (needs_instance)
      cmd->add_option("--instance", opt.instance_path, "instance JSON file")->required();
    cmd->add_option("--out", opt.out_dir, "output directory")->required();
  };

  CLI::App* solve = app.add_subcommand("solve", "compute the optimal schedule");
  add_common(solve, true);
  solve->add_option("--alpha", opt.alpha, "objective exponent (integer >= 2)");
  solve->add_flag("--trace", opt.trace, "also write the iteration trace");

  CLI::App* verify = app.add_subcommand("verify", "check a schedule against the KKT conditions");
  add_common(verify, true);
  verify->add_option("--schedule", opt.schedule_path, "schedule CSV file")->required();
  verify->add_option("--alpha", opt.alpha, "objective exponent (integer >= 2)");
  verify->add_option("--tol", opt.tol,
                     "relative tolerance for float schedules (rational, e.g. 0.000000001)");

  CLI::App* oracle = app.add_subcommand("oracle", "brute-force optimum on an energy grid");
  add_common(oracle, true);
  oracle->add_option("--alpha", opt.alpha, "objective exponent (integer >= 2)");
  oracle->add_option("--delta", opt.delta, "grid step (rational)");

  CLI::App* gen = app.add_subcommand("gen", "generate a random feasible instance");
  add_common(gen, false);
  gen->add_option("--jobs", opt.jobs, "number of jobs");
  gen->add_option("--horizon", opt.horizon, "integer horizon length");
  gen->add_option("--seed", opt.seed, "generator seed");

  CLI::App* trace = app.add_subcommand("trace", "write the iteration trace only");
  add_common(trace, true);

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) return cmd_solve(opt, false);
    if (verify->parsed()) return cmd_verify(opt);
    if (oracle->parsed()) return cmd_oracle(opt);
    if (gen->parsed()) return cmd_gen(opt);
    if (trace->parsed()) return cmd_solve(opt, true);
  } catch (const focs::InfeasibleError& error) {
    std::cerr << "infeasible: " << error.what() << "\n";
    return 2;
  } catch (const focs::ParseError& error) {
    std::cerr << "error: " << error.what() << "\n";
    return 1;
  } catch (const focs::OracleTooLarge& error) {
    std::cerr << "error: " << error.what() << "\n";
    return 1;
  } catch (const std::exception& error) {
    std::cerr << "error: " << error.what() << "\n";
    return 1;
  }
  return 1;
}
