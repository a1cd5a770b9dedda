// hcsnet-sim: batch driver for scenario runs, parameter sweeps and plotting.

#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hcsnet/config.hpp"
#include "hcsnet/error.hpp"
#include "hcsnet/report.hpp"
#include "hcsnet/simulation.hpp"
#include "hcsnet/topology.hpp"

namespace {

namespace fs = std::filesystem;
using hcsnet::ConfigError;
using nlohmann::json;

json load_document(const std::string& path, const std::vector<std::string>& overrides) {
  const std::string text = hcsnet::read_text_file(path);
  // Parse once for validation and key checking, then keep the raw document
  // so sweeps can address keys by path.
  json doc = hcsnet::to_json(hcsnet::parse_config(text));
  for (const std::string& kv : overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(kv, "override must look like key=value");
    }
    doc = hcsnet::with_value(doc, kv.substr(0, eq),
                             hcsnet::parse_value_literal(kv.substr(eq + 1)));
  }
  hcsnet::config_from_json(doc);
  return doc;
}

std::vector<json> parse_list(const std::string& text) {
  std::vector<json> out;
  std::string item;
  std::istringstream is(text);
  while (std::getline(is, item, ',')) {
    if (item.empty()) throw ConfigError("--values", "empty list item");
    out.push_back(hcsnet::parse_value_literal(item));
  }
  if (out.empty()) throw ConfigError("--values", "no values given");
  return out;
}

void report_written(const std::vector<fs::path>& files) {
  for (const fs::path& f : files) std::cout << "wrote " << f.string() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Heterogeneous cloud small cell network simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::vector<std::string> overrides;

  auto* run = app.add_subcommand("run", "Run one scenario and write CSVs and figures");
  run->add_option("--config", config_path, "Scenario configuration (JSON)")->required();
  run->add_option("--out", out_dir, "Output directory")->required();
  run->add_option("--set", overrides, "Override a configuration value, key=value");
  bool trace = false;
  run->add_flag("--trace", trace, "Also write per-step UE positions to trace.csv");

  std::string param;
  std::string values;
  std::size_t reps = 1;
  std::vector<std::string> handover_schemes;
  auto* sweep = app.add_subcommand("sweep", "Sweep one configuration value");
  sweep->add_option("--config", config_path, "Scenario configuration (JSON)")->required();
  sweep->add_option("--param", param, "Dotted configuration key")->required();
  sweep->add_option("--values", values, "Comma-separated values")->required();
  sweep->add_option("--reps", reps, "Replications per value")->check(CLI::PositiveNumber);
  sweep->add_option("--out", out_dir, "Output directory")->required();
  sweep->add_option("--set", overrides, "Override a configuration value, key=value");
  sweep->add_option("--handover-schemes", handover_schemes,
                    "Repeat the sweep for each handover scheme")
      ->delimiter(',');

  std::string in_dir;
  auto* plot = app.add_subcommand("plot", "Re-render figures from emitted CSVs");
  plot->add_option("--in", in_dir, "Directory holding cdf/timings/sweep CSVs")->required();
  plot->add_option("--out", out_dir, "Output directory")->required();

  auto* dump = app.add_subcommand("dump-layout", "Print the generated RRH layout as CSV");
  dump->add_option("--config", config_path, "Scenario configuration (JSON)")->required();
  dump->add_option("--set", overrides, "Override a configuration value, key=value");

  auto* check = app.add_subcommand("validate-config",
                                   "Validate a configuration and print it with defaults");
  check->add_option("--config", config_path, "Scenario configuration (JSON)")->required();
  check->add_option("--set", overrides, "Override a configuration value, key=value");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      const auto config = hcsnet::config_from_json(load_document(config_path, overrides));
      report_written(hcsnet::write_run_outputs(
          hcsnet::run_scenario(config, hcsnet::RunOptions{trace}), out_dir));
    } else if (*sweep) {
      const json doc = load_document(config_path, overrides);
      hcsnet::SweepSpec spec{param, parse_list(values), reps};
      std::vector<hcsnet::SweepTable> tables;
      if (handover_schemes.empty()) {
        tables.push_back(hcsnet::run_sweep(doc, spec));
      }
      for (const std::string& scheme : handover_schemes) {
        hcsnet::handover_scheme_from_string(scheme);
        tables.push_back(
            hcsnet::run_sweep(hcsnet::with_value(doc, "handover.scheme", scheme), spec));
      }
      report_written(hcsnet::write_sweep_outputs(tables, out_dir));
    } else if (*plot) {
      hcsnet::PlotInputs inputs;
      const fs::path in(in_dir);
      if (fs::exists(in / "cdf.csv")) {
        inputs.cdfs = hcsnet::parse_cdf_csv(hcsnet::read_text_file(in / "cdf.csv"));
      }
      if (fs::exists(in / "timings.csv")) {
        inputs.timings = hcsnet::parse_timings_csv(hcsnet::read_text_file(in / "timings.csv"));
      }
      if (fs::exists(in / "sweep.csv")) {
        inputs.sweeps = hcsnet::parse_sweep_csv(hcsnet::read_text_file(in / "sweep.csv"));
      }
      report_written(hcsnet::emit_plots(inputs, out_dir));
    } else if (*dump) {
      const auto config = hcsnet::config_from_json(load_document(config_path, overrides));
      std::cout << hcsnet::layout_csv(hcsnet::generate_layout(config.layout, config.sim.seed));
    } else if (*check) {
      const auto config = hcsnet::config_from_json(load_document(config_path, overrides));
      std::cout << hcsnet::serialize_config(config) << '\n';
    }
  } catch (const hcsnet::Error& e) {
    std::cerr << "hcsnet-sim: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "hcsnet-sim: unexpected failure: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
