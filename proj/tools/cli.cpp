#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "vcsim/checks.hpp"
#include "vcsim/metrics.hpp"
#include "vcsim/scenario.hpp"

namespace vcsim::cli {

namespace fs = std::filesystem;

namespace {

struct RunOptions {
  std::string scenario;
  std::string log_path;
  std::string metrics_path;
  std::string batch_dir;
  bool check = false;
};

bool write_file(const std::string& path, const std::string& text, std::ostream& err) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) {
    err << "error: cannot write " << path << "\n";
    return false;
  }
  return true;
}

void print_summary(const metrics::Metrics& m, std::ostream& out) {
  out << "orders " << m.orders_total << " closed " << m.orders_closed << " rejected " << m.orders_rejected << "\n";
  out << "fill_rate " << m.fill_rate.fraction() << " (" << m.fill_rate.decimal6() << ")\n";
  out << "mean_cycle_time ";
  if (m.cycle_time_defined) {
    out << m.mean_cycle_time.fraction() << " (" << m.mean_cycle_time.decimal6() << ")\n";
  } else {
    out << "undefined\n";
  }
  out << "replenishments " << m.replenishments << " declines " << m.declines << "\n";
}

// Maps any failure of loading or running onto an exit code.
template <typename Fn>
int guarded(std::ostream& err, const std::string& label, Fn&& fn) {
  try {
    return fn();
  } catch (const scenario::ParseError& e) {
    err << label << ": " << e.what() << "\n";
    return kValidation;
  } catch (const scenario::ValidationError& e) {
    err << label << ": " << e.what() << "\n";
    return kValidation;
  } catch (const sim::SimError& e) {
    err << label << ": " << e.what() << "\n";
    return e.code() == sim::SimErrc::EventBudgetExceeded ? kLivelock : kInvariant;
  } catch (const std::exception& e) {
    err << label << ": invariant violated during run: " << e.what() << "\n";
    return kInvariant;
  }
}

int run_one(const RunOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, opt.scenario, [&] {
    const scenario::Scenario s = scenario::load_scenario(opt.scenario);
    const scenario::RunResult result = scenario::run_scenario(s);
    if (!opt.log_path.empty() && !write_file(opt.log_path, result.rendered, err)) return kInvariant;

    const metrics::Metrics m = metrics::compute_metrics(result.rendered);
    print_summary(m, out);
    if (!opt.metrics_path.empty() && !write_file(opt.metrics_path, metrics::to_json(m), err)) return kInvariant;

    if (opt.check) {
      const checks::CheckReport report = checks::check_run(s, *result.world);
      for (const auto& v : report.violations) err << "violation " << v.invariant << ": " << v.detail << "\n";
      if (!report.ok()) return kInvariant;
      out << "checks passed\n";
    }
    return kOk;
  });
}

int run_batch(const RunOptions& opt, std::ostream& out, std::ostream& err) {
  std::error_code ec;
  if (!fs::is_directory(opt.batch_dir, ec)) {
    err << "error: " << opt.batch_dir << " is not a directory\n";
    return kValidation;
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(opt.batch_dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());

  struct Outcome {
    int code = kOk;
    std::string out;
    std::string err;
  };
  std::vector<std::future<Outcome>> jobs;
  for (const auto& file : files) {
    jobs.push_back(std::async(std::launch::async, [&opt, file] {
      RunOptions one = opt;
      one.scenario = file.string();
      one.log_path.clear();
      one.metrics_path.clear();
      std::ostringstream o, e;
      const int code = run_one(one, o, e);
      return Outcome{code, o.str(), e.str()};
    }));
  }

  int worst = kOk;
  for (std::size_t i = 0; i < files.size(); ++i) {
    const Outcome r = jobs[i].get();
    out << "== " << files[i].filename().string() << " exit " << r.code << "\n" << r.out;
    err << r.err;
    worst = std::max(worst, r.code);
  }
  return worst;
}

}  // namespace

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Deterministic retail value-chain simulator", "vcsim"};
  app.require_subcommand(1);

  RunOptions run_opt;
  auto* run = app.add_subcommand("run", "Run a scenario to quiescence");
  auto* scenario_opt = run->add_option("scenario", run_opt.scenario, "Scenario JSON file");
  run->add_option("--log", run_opt.log_path, "Write the event log here");
  run->add_option("--metrics", run_opt.metrics_path, "Write metrics JSON here");
  run->add_flag("--check", run_opt.check, "Verify run invariants");
  auto* batch_opt = run->add_option("--batch", run_opt.batch_dir, "Run every *.json in a directory");
  scenario_opt->excludes(batch_opt);

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "Parse and validate a scenario");
  validate->add_option("scenario", validate_path, "Scenario JSON file")->required();

  std::string replay_path;
  auto* replay = app.add_subcommand("replay", "Run a scenario twice and compare logs");
  replay->add_option("scenario", replay_path, "Scenario JSON file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n" << app.help();
    return kValidation;
  }

  if (run->parsed()) {
    if (!run_opt.batch_dir.empty()) return run_batch(run_opt, out, err);
    if (run_opt.scenario.empty()) {
      err << "run: a scenario file or --batch is required\n";
      return kValidation;
    }
    return run_one(run_opt, out, err);
  }
  if (validate->parsed()) {
    return guarded(err, validate_path, [&] {
      const scenario::Scenario s = scenario::load_scenario(validate_path);
      out << "valid: " << s.warehouses.size() << " warehouses, " << s.manufacturers.size() << " manufacturers, "
          << s.customers.size() << " customers, " << s.orders.size() << " orders\n";
      return kOk;
    });
  }
  return guarded(err, replay_path, [&] {
    const scenario::Scenario s = scenario::load_scenario(replay_path);
    const scenario::ReplayReport r = scenario::replay_check(s);
    if (r.pass) {
      out << "replay identical\n";
      return kOk;
    }
    out << "replay differs at line " << r.line << "\n< " << r.first << "\n> " << r.second << "\n";
    return kInvariant;
  });
}

}  // namespace vcsim::cli
