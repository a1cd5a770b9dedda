#include "hcsnet/report.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "csv_format.hpp"
#include "hcsnet/error.hpp"

namespace hcsnet {
namespace {

namespace fs = std::filesystem;

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream is(line);
  while (std::getline(is, field, sep)) out.push_back(field);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

// Data rows of a CSV whose header must match exactly.
std::vector<std::vector<std::string>> csv_rows(const std::string& text,
                                               const std::string& header) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line) || line != header) {
    throw ShapeError("expected CSV header '" + header + "'");
  }
  const std::size_t width = split(header, ',').size();
  std::vector<std::vector<std::string>> rows;
  std::size_t line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto fields = split(line, ',');
    if (fields.size() != width) {
      throw ShapeError("CSV line " + std::to_string(line_no) + " has " +
                       std::to_string(fields.size()) + " fields, expected " +
                       std::to_string(width));
    }
    rows.push_back(std::move(fields));
  }
  return rows;
}

double to_double(const std::string& s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ShapeError("not a number: '" + s + "'");
  }
  return v;
}

std::size_t to_size(const std::string& s) {
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ShapeError("not a count: '" + s + "'");
  }
  return v;
}

// Sweep values are written bare: numbers in shortest form, strings unquoted.
std::string value_cell(const nlohmann::json& v) {
  if (v.is_number()) return fmt_double(v.get<double>());
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

nlohmann::json value_from_cell(const std::string& cell) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec == std::errc() && ptr == cell.data() + cell.size()) return v;
  return cell;
}

// ---------------------------------------------------------------------------
// SVG

constexpr double kWidth = 640.0;
constexpr double kHeight = 420.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 160.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;
constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                    "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", std::abs(v) < 1e-12 ? 0.0 : v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Range {
  double lo = 0.0;
  double hi = 0.0;
};

Range padded(Range r) {
  if (r.hi > r.lo) return r;
  const double pad = std::max(0.5, std::abs(r.lo) * 0.1);
  return {r.lo - pad, r.hi + pad};
}

std::string sanitize(const std::string& key) {
  std::string out;
  for (char c : key) out += std::isalnum(static_cast<unsigned char>(c)) ? c : '_';
  return out;
}

void check_writable(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw IoError("cannot create output directory " + dir.string());
  }
}

}  // namespace

PlotInputs plot_inputs(const ScenarioResult& result) {
  PlotInputs in;
  for (const SampleSet& s : result.edge_se) {
    if (s.values.empty()) continue;
    in.cdfs.push_back({s.label, empirical_cdf(s)});
  }
  in.timings = result.timings;
  return in;
}

std::string cdf_csv(std::span<const LabelledCdf> cdfs) {
  std::ostringstream os;
  os << "scheme,value,probability\n";
  for (const LabelledCdf& c : cdfs) {
    for (const CdfPoint& p : c.cdf) {
      os << c.scheme << ',' << fmt_double(p.value) << ',' << fmt_double(p.probability)
         << '\n';
    }
  }
  return os.str();
}

std::string timings_csv(std::span<const RunTiming> timings) {
  std::ostringstream os;
  os << "scheme,n_rrhs,wall_time_s,iterations,nondeterministic\n";
  for (const RunTiming& t : timings) {
    // Wall time varies between runs; the last column says so.
    os << t.scheme << ',' << t.n_rrhs << ',' << fmt_double(t.wall_time_s) << ','
       << t.iterations << ",true\n";
  }
  return os.str();
}

std::string overhead_csv(std::span<const OverheadSummary> rows) {
  std::ostringstream os;
  os << "scheme,handovers,suppressed,rlf_events";
  for (std::size_t i = 0; i < kLabelCount; ++i) {
    os << ',' << to_string(static_cast<HandoverLabel>(i));
  }
  os << ",overhead,overhead_to_srrh\n";
  for (const OverheadSummary& r : rows) {
    os << r.scheme << ',' << r.handovers << ',' << r.suppressed << ',' << r.rlf_events;
    for (std::size_t n : r.label_counts) os << ',' << n;
    os << ',' << fmt_double(r.overhead) << ',' << fmt_double(r.overhead_to_srrh) << '\n';
  }
  return os.str();
}

std::string clusters_csv(std::span<const ClusterRow> rows) {
  std::ostringstream os;
  os << "scheme,anchor_id,member_ids,exemplar_id,iterations,converged\n";
  for (const ClusterRow& r : rows) {
    os << r.scheme << ',' << r.anchor << ',';
    for (std::size_t i = 0; i < r.members.size(); ++i) {
      os << (i ? ";" : "") << r.members[i];
    }
    os << ',' << r.exemplar << ',' << r.iterations << ',' << (r.converged ? 1 : 0) << '\n';
  }
  return os.str();
}

std::string sweep_csv(std::span<const SweepTable> tables) {
  std::ostringstream os;
  os << "scheme,parameter,value,metric,mean,stddev,replications\n";
  for (const SweepTable& t : tables) {
    for (const SweepPoint& p : t.points) {
      for (const SweepStat& s : p.stats) {
        os << t.handover_scheme << ',' << t.parameter << ',' << value_cell(p.value) << ','
           << s.metric << ',' << fmt_double(s.mean) << ',' << fmt_double(s.stddev) << ','
           << p.replications << '\n';
      }
    }
  }
  return os.str();
}

std::vector<LabelledCdf> parse_cdf_csv(const std::string& text) {
  std::vector<LabelledCdf> out;
  for (const auto& row : csv_rows(text, "scheme,value,probability")) {
    if (out.empty() || out.back().scheme != row[0]) out.push_back({row[0], {}});
    out.back().cdf.push_back({to_double(row[1]), to_double(row[2])});
  }
  return out;
}

std::vector<RunTiming> parse_timings_csv(const std::string& text) {
  std::vector<RunTiming> out;
  for (const auto& row :
       csv_rows(text, "scheme,n_rrhs,wall_time_s,iterations,nondeterministic")) {
    out.push_back({row[0], to_size(row[1]), to_double(row[2]), to_size(row[3])});
  }
  return out;
}

std::vector<SweepTable> parse_sweep_csv(const std::string& text) {
  std::vector<SweepTable> out;
  for (const auto& row :
       csv_rows(text, "scheme,parameter,value,metric,mean,stddev,replications")) {
    if (out.empty() || out.back().handover_scheme != row[0] ||
        out.back().parameter != row[1]) {
      SweepTable t;
      t.handover_scheme = row[0];
      t.parameter = row[1];
      out.push_back(std::move(t));
    }
    SweepTable& t = out.back();
    const nlohmann::json value = value_from_cell(row[2]);
    if (t.points.empty() || t.points.back().value != value) {
      SweepPoint p;
      p.value = value;
      p.replications = to_size(row[6]);
      t.points.push_back(std::move(p));
    }
    t.points.back().stats.push_back({row[3], to_double(row[4]), to_double(row[5])});
  }
  return out;
}

std::string render_svg(const PlotSpec& spec) {
  Range xr{0.0, 0.0}, yr{0.0, 0.0};
  bool any = false;
  for (const Series& s : spec.series) {
    if (s.x.size() != s.y.size() || (!s.y_err.empty() && s.y_err.size() != s.y.size())) {
      throw ShapeError("series '" + s.label + "' has mismatched lengths");
    }
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      const double e = s.y_err.empty() ? 0.0 : s.y_err[i];
      if (!any) {
        xr = {s.x[i], s.x[i]};
        yr = {s.y[i] - e, s.y[i] + e};
        any = true;
      }
      xr = {std::min(xr.lo, s.x[i]), std::max(xr.hi, s.x[i])};
      yr = {std::min(yr.lo, s.y[i] - e), std::max(yr.hi, s.y[i] + e)};
    }
    if (s.steps) yr = {std::min(yr.lo, 0.0), yr.hi};
  }
  if (!any) throw InsufficientDataError("plot '" + spec.title + "' has no points");

  const Range data_x = xr;
  xr = padded(xr);
  yr = padded(yr);
  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  const auto px = [&](double x) { return kLeft + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
  const auto py = [&](double y) { return kTop + (yr.hi - y) / (yr.hi - yr.lo) * ph; };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
     << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << num(kLeft + pw / 2) << "\" y=\"24\" text-anchor=\"middle\" "
     << "font-family=\"sans-serif\" font-size=\"15\">" << escape(spec.title) << "</text>\n";
  os << "<g class=\"plot-area\" data-x-min=\"" << fmt_double(data_x.lo)
     << "\" data-x-max=\"" << fmt_double(data_x.hi) << "\">\n";
  os << "<rect x=\"" << num(kLeft) << "\" y=\"" << num(kTop) << "\" width=\"" << num(pw)
     << "\" height=\"" << num(ph) << "\" fill=\"none\" stroke=\"black\"/>\n";

  constexpr int kTicks = 5;
  for (int i = 0; i <= kTicks; ++i) {
    const double fx = xr.lo + (xr.hi - xr.lo) * i / kTicks;
    const double fy = yr.lo + (yr.hi - yr.lo) * i / kTicks;
    os << "<line x1=\"" << num(px(fx)) << "\" y1=\"" << num(kTop + ph) << "\" x2=\""
       << num(px(fx)) << "\" y2=\"" << num(kTop + ph + 5) << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << num(px(fx)) << "\" y=\"" << num(kTop + ph + 18)
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
       << tick_label(fx) << "</text>\n";
    os << "<line x1=\"" << num(kLeft - 5) << "\" y1=\"" << num(py(fy)) << "\" x2=\""
       << num(kLeft) << "\" y2=\"" << num(py(fy)) << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << num(kLeft - 8) << "\" y=\"" << num(py(fy) + 4)
       << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
       << tick_label(fy) << "</text>\n";
  }

  for (std::size_t k = 0; k < spec.series.size(); ++k) {
    const Series& s = spec.series[k];
    const char* color = kPalette[k % std::size(kPalette)];
    if (s.x.empty()) continue;
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    double prev_y = 0.0;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (s.steps) os << num(px(s.x[i])) << ',' << num(py(prev_y)) << ' ';
      os << num(px(s.x[i])) << ',' << num(py(s.y[i])) << ' ';
      prev_y = s.y[i];
    }
    os << "\"/>\n";
    if (!s.steps) {
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        os << "<circle cx=\"" << num(px(s.x[i])) << "\" cy=\"" << num(py(s.y[i]))
           << "\" r=\"3\" fill=\"" << color << "\"/>\n";
        if (!s.y_err.empty() && s.y_err[i] > 0.0) {
          os << "<line x1=\"" << num(px(s.x[i])) << "\" y1=\""
             << num(py(s.y[i] - s.y_err[i])) << "\" x2=\"" << num(px(s.x[i]))
             << "\" y2=\"" << num(py(s.y[i] + s.y_err[i])) << "\" stroke=\"" << color
             << "\"/>\n";
        }
      }
    }
    const double ly = kTop + 14.0 + 18.0 * static_cast<double>(k);
    os << "<line x1=\"" << num(kLeft + pw + 12) << "\" y1=\"" << num(ly) << "\" x2=\""
       << num(kLeft + pw + 32) << "\" y2=\"" << num(ly) << "\" stroke=\"" << color
       << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << num(kLeft + pw + 38) << "\" y=\"" << num(ly + 4)
       << "\" font-family=\"sans-serif\" font-size=\"12\">" << escape(s.label)
       << "</text>\n";
  }
  os << "</g>\n";
  os << "<text x=\"" << num(kLeft + pw / 2) << "\" y=\"" << num(kHeight - 16)
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
     << escape(spec.x_label) << "</text>\n";
  os << "<text transform=\"translate(18," << num(kTop + ph / 2)
     << ") rotate(-90)\" text-anchor=\"middle\" font-family=\"sans-serif\" "
     << "font-size=\"12\">" << escape(spec.y_label) << "</text>\n";
  os << "</svg>\n";
  return os.str();
}

std::vector<std::pair<std::string, std::string>> render_figures(const PlotInputs& inputs) {
  std::vector<std::pair<std::string, std::string>> out;
  if (!inputs.cdfs.empty()) {
    PlotSpec spec{"Edge-UE spectral efficiency", "spectral efficiency (bit/s/Hz)",
                  "CDF", {}};
    for (const LabelledCdf& c : inputs.cdfs) {
      Series s;
      s.label = c.scheme;
      s.steps = true;
      for (const CdfPoint& p : c.cdf) {
        s.x.push_back(p.value);
        s.y.push_back(p.probability);
      }
      spec.series.push_back(std::move(s));
    }
    out.emplace_back("fig4a_edge_se_cdf.svg", render_svg(spec));
  }
  if (!inputs.timings.empty()) {
    PlotSpec spec{"Clustering run time", "number of RRHs", "wall time (ms)", {}};
    std::map<std::string, Series> by_scheme;
    std::vector<std::string> order;
    for (const RunTiming& t : inputs.timings) {
      if (!by_scheme.contains(t.scheme)) order.push_back(t.scheme);
      Series& s = by_scheme[t.scheme];
      s.label = t.scheme;
      s.x.push_back(static_cast<double>(t.n_rrhs));
      s.y.push_back(t.wall_time_s * 1e3);
    }
    for (const std::string& name : order) spec.series.push_back(by_scheme[name]);
    out.emplace_back("fig4b_runtime.svg", render_svg(spec));
  }
  std::vector<std::string> params;
  for (const SweepTable& t : inputs.sweeps) {
    if (std::find(params.begin(), params.end(), t.parameter) == params.end()) {
      params.push_back(t.parameter);
    }
  }
  for (const std::string& param : params) {
    PlotSpec spec{"Handover signaling overhead", param, "overhead (cost units)", {}};
    for (const SweepTable& t : inputs.sweeps) {
      if (t.parameter != param) continue;
      Series s;
      s.label = t.handover_scheme;
      for (std::size_t i = 0; i < t.points.size(); ++i) {
        const SweepPoint& p = t.points[i];
        s.x.push_back(p.value.is_number() ? p.value.get<double>() : static_cast<double>(i));
        const SweepStat& st = p.stat("overhead");
        s.y.push_back(st.mean);
        s.y_err.push_back(st.stddev);
      }
      spec.series.push_back(std::move(s));
    }
    out.emplace_back("fig6_overhead_vs_" + sanitize(param) + ".svg", render_svg(spec));
  }
  return out;
}

std::vector<fs::path> emit_plots(const PlotInputs& inputs, const fs::path& out_dir) {
  if (inputs.empty()) throw InsufficientDataError("no results to plot");
  // Render everything before touching the filesystem so a failure leaves no
  // partial output behind.
  std::vector<std::pair<std::string, std::string>> files = render_figures(inputs);
  if (!inputs.cdfs.empty()) files.emplace_back("cdf.csv", cdf_csv(inputs.cdfs));
  if (!inputs.timings.empty()) files.emplace_back("timings.csv", timings_csv(inputs.timings));
  if (!inputs.sweeps.empty()) files.emplace_back("sweep.csv", sweep_csv(inputs.sweeps));

  check_writable(out_dir);
  std::vector<fs::path> written;
  for (const auto& [name, text] : files) {
    write_text_file(out_dir / name, text);
    written.push_back(out_dir / name);
  }
  return written;
}

std::vector<fs::path> write_run_outputs(const ScenarioResult& result, const fs::path& out_dir) {
  const PlotInputs inputs = plot_inputs(result);
  std::vector<fs::path> written = emit_plots(inputs, out_dir);
  const OverheadSummary rows[] = {result.overhead};
  const std::pair<const char*, std::string> extra[] = {
      {"handover_log.csv", handover_log_csv(result.handover_log)},
      {"overhead.csv", overhead_csv(rows)},
      {"clusters.csv", clusters_csv(result.clusters)},
      {"layout.csv", layout_csv(result.layout)},
      {"links.csv", links_csv(result.links)},
  };
  for (const auto& [name, text] : extra) {
    write_text_file(out_dir / name, text);
    written.push_back(out_dir / name);
  }
  if (!result.trace.empty()) {
    write_text_file(out_dir / "trace.csv", trace_csv(result.trace));
    written.push_back(out_dir / "trace.csv");
  }
  return written;
}

std::vector<fs::path> write_sweep_outputs(std::span<const SweepTable> tables,
                                          const fs::path& out_dir) {
  PlotInputs inputs;
  inputs.sweeps.assign(tables.begin(), tables.end());
  return emit_plots(inputs, out_dir);
}

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  if (in.bad()) throw IoError("cannot read " + path.string());
  return os.str();
}

void write_text_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace hcsnet
