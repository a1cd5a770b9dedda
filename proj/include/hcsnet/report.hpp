#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hcsnet/metrics.hpp"
#include "hcsnet/simulation.hpp"

namespace hcsnet {

struct LabelledCdf {
  std::string scheme;
  Cdf cdf;
};

// Everything a figure can be drawn from. Each member maps to one CSV.
struct PlotInputs {
  std::vector<LabelledCdf> cdfs;     // cdf.csv
  std::vector<RunTiming> timings;    // timings.csv
  std::vector<SweepTable> sweeps;    // sweep.csv

  bool empty() const { return cdfs.empty() && timings.empty() && sweeps.empty(); }
};

PlotInputs plot_inputs(const ScenarioResult& result);

std::string cdf_csv(std::span<const LabelledCdf> cdfs);
std::string timings_csv(std::span<const RunTiming> timings);
std::string overhead_csv(std::span<const OverheadSummary> rows);
std::string clusters_csv(std::span<const ClusterRow> rows);
std::string sweep_csv(std::span<const SweepTable> tables);

std::vector<LabelledCdf> parse_cdf_csv(const std::string& text);
std::vector<RunTiming> parse_timings_csv(const std::string& text);
std::vector<SweepTable> parse_sweep_csv(const std::string& text);

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> y_err;  // optional, same length as y
  bool steps = false;         // draw as a right-continuous staircase
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Series> series;
};

// Minimal deterministic SVG line plot. The plot area spans exactly the data
// range, which is also recorded in data-x-min/data-x-max attributes.
std::string render_svg(const PlotSpec& spec);

// File name and contents of every figure the inputs support.
std::vector<std::pair<std::string, std::string>> render_figures(const PlotInputs& inputs);

// Writes the figures and their CSVs. Nothing is written when the inputs are
// empty or a figure fails to render.
std::vector<std::filesystem::path> emit_plots(const PlotInputs& inputs,
                                              const std::filesystem::path& out_dir);

// All artifacts of a single run: cdf, timings, handover log, overhead,
// clusters, layout and figures.
std::vector<std::filesystem::path> write_run_outputs(const ScenarioResult& result,
                                                     const std::filesystem::path& out_dir);

std::vector<std::filesystem::path> write_sweep_outputs(std::span<const SweepTable> tables,
                                                       const std::filesystem::path& out_dir);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace hcsnet
