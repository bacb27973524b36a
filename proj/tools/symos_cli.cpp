// symos: run workload files through the paging, allocation and scheduling
// model and print tables, traces and audits.

#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "symos/workload.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Symbolic OS resource-management model"};
  app.require_subcommand(1);

  std::string workload_path;
  std::string emit_what = "all";
  std::string format = "human";
  std::string hoist = "off";
  std::string cooperative = "off";
  bool audit = false;
  std::string out_path;

  auto* run_cmd = app.add_subcommand("run", "Run a workload and emit its report");
  run_cmd->add_option("workload", workload_path, "Workload file")->required();
  run_cmd->add_option("--emit", emit_what, "What to emit")
      ->check(CLI::IsMember({"tables", "trace", "all"}));
  run_cmd->add_option("--format", format, "Output format")
      ->check(CLI::IsMember({"human", "machine"}));
  run_cmd->add_option("--hoist-frames", hoist, "Frame physical memory before the loop")
      ->check(CLI::IsMember({"on", "off"}));
  run_cmd->add_option("--cooperative", cooperative, "Attribute Sel/Close to the outgoing procedure")
      ->check(CLI::IsMember({"on", "off"}));
  run_cmd->add_flag("--audit", audit, "Emit partition audits");
  run_cmd->add_option("--out", out_path, "Write the report here instead of stdout");

  auto* check_cmd = app.add_subcommand("check", "Validate a workload without running it");
  check_cmd->add_option("workload", workload_path, "Workload file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    const symos::WorkloadSpec spec = symos::parse_workload(read_file(workload_path));
    if (*check_cmd) {
      std::cout << workload_path << ": ok (" << spec.procedures.size() << " procedures)\n";
      return 0;
    }

    symos::RunOptions options;
    options.hoist_frames = hoist == "on";
    options.switch_mode =
        cooperative == "on" ? symos::SwitchMode::Cooperative : symos::SwitchMode::Preemptive;
    const symos::RunReport report = symos::run(spec, options);

    symos::EmitOptions emit;
    emit.what = emit_what == "tables" ? symos::EmitWhat::Tables
                : emit_what == "trace" ? symos::EmitWhat::Trace
                                       : symos::EmitWhat::All;
    emit.format = format == "machine" ? symos::Format::Machine : symos::Format::Human;
    emit.audit = audit;

    if (out_path.empty()) {
      symos::emit(report, emit, std::cout);
    } else {
      std::ofstream out(out_path);
      if (!out) throw std::runtime_error("cannot open " + out_path);
      symos::emit(report, emit, out);
    }

    if (report.failure) {
      std::cerr << "error in phase " << report.failure->phase << ": " << report.failure->message
                << '\n';
      if (!report.audits_ok()) return symos::kExitAuditFailure;
      return symos::exit_code_for(report.failure->code);
    }
    if (!report.audits_ok()) {
      std::cerr << "partition audit failed\n";
      return symos::kExitAuditFailure;
    }
    return 0;
  } catch (const symos::Error& e) {
    std::cerr << e.what() << '\n';
    return symos::exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << e.what() << '\n';
    return 1;
  }
}
