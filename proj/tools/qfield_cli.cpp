#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "qfield/qfield.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kUsage = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantized electromagnetic field simulator and consistency checker"};
  app.require_subcommand(1);
  std::string config_path;
  std::string out_path;
  bool quiet = false;
  app.add_option("--config", config_path, "JSON run configuration (built-in default when omitted)");
  app.add_option("--out", out_path, "output file ('-' for stdout)");
  app.add_flag("--quiet", quiet, "suppress the per-check summary on stderr");

  auto* simulate = app.add_subcommand("simulate", "write the field profile of the configured state as CSV");
  auto* verify = app.add_subcommand("verify", "run the configured checks and write a JSON report");
  auto* modes = app.add_subcommand("modes", "list the mode table");
  auto* describe = app.add_subcommand("describe-state", "occupancy statistics of the configured state");
  for (auto* sub : {simulate, verify, modes, describe}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  qfield::RunConfig config;
  try {
    config = qfield::parse_config(config_path.empty() ? std::string(qfield::default_config_text())
                                                      : read_file(config_path));
  } catch (const std::exception& e) {
    std::cerr << "config error:\n" << e.what() << '\n';
    return kUsage;
  }

  try {
    if (simulate->parsed()) {
      std::ostringstream csv;
      qfield::write_simulation(csv, config);
      emit(csv.str(), out_path.empty() ? config.outputs.csv.value_or("") : out_path);
      return kOk;
    }
    if (modes->parsed()) {
      std::ostringstream table;
      qfield::write_mode_table(table, config);
      emit(table.str(), out_path);
      return kOk;
    }
    if (describe->parsed()) {
      emit(qfield::describe_state(config).dump(2) + "\n", out_path);
      return kOk;
    }
    const qfield::SuiteResult result = qfield::run_suite(config);
    emit(qfield::suite_to_json(result).dump(2) + "\n", out_path.empty() ? config.outputs.report.value_or("") : out_path);
    if (!quiet) {
      for (const auto& r : result.reports) {
        std::cerr << (r.pass ? "PASS " : "FAIL ") << r.check << "  relative=" << qfield::format_double(r.relative())
                  << "  tolerance=" << qfield::format_double(r.tolerance);
        if (r.order) std::cerr << "  order=" << qfield::format_double(*r.order);
        std::cerr << '\n';
      }
    }
    return result.pass ? kOk : kCheckFailed;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
}
