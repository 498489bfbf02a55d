#include "evodyn/output.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "evodyn/canonical.hpp"

namespace evodyn {

namespace {

// Viewport geometry: unit triangle side scaled to 600 px inside 800x693.
constexpr double kSide = 600.0;
constexpr double kOriginX = 100.0;
constexpr double kOriginY = 606.0;
const double kTriangleHeight = kSide * std::sqrt(3.0) / 2.0;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                          "#9467bd", "#8c564b", "#17becf", "#7f7f7f"};

std::string format_pixel(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.3f", value);
  return buffer;
}

std::string escape_json(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

std::string escape_xml(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string json_real_array(std::span<const double> values) {
  std::string out = "[";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ", ";
    out += format_real17(values[i]);
  }
  out += "]";
  return out;
}

}  // namespace

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  out.flush();
  if (!out) throw Error("failed writing '" + path + "'");
}

std::string trajectory_csv(const Trajectory& trajectory) {
  std::ostringstream out;
  out << "step,time";
  for (std::size_t i = 1; i <= trajectory.dimension; ++i) out << ",x" << i;
  out << ",kl,euclidean\n";
  for (const TrajectoryRecord& record : trajectory.records) {
    out << record.step << ',' << format_real17(record.time);
    for (double c : record.state) out << ',' << format_real17(c);
    out << ',';
    if (record.lyapunov_kl) out << format_real17(*record.lyapunov_kl);
    out << ',';
    if (record.lyapunov_euclidean) out << format_real17(*record.lyapunov_euclidean);
    out << '\n';
  }
  out << "# status=" << to_string(trajectory.status) << '\n';
  return out.str();
}

void write_trajectory_csv(const Trajectory& trajectory, const std::string& path) {
  write_file(path, trajectory_csv(trajectory));
}

std::string summary_json(const SweepResult& result) {
  std::ostringstream out;
  out << "{\"base_steps\": " << result.base_steps << ", \"config_digest\": \""
      << escape_json(result.config_digest) << "\", \"rows\": [";
  for (std::size_t i = 0; i < result.rows.size(); ++i) {
    const SweepRow& row = result.rows[i];
    if (i > 0) out << ", ";
    out << "{\"beta\": " << format_real17(row.beta)
        << ", \"predicted\": " << format_real17(row.predicted)
        << ", \"ratio\": " << format_real17(row.ratio) << ", \"steps\": " << row.steps << "}";
  }
  out << "]}\n";
  return out.str();
}

std::string summary_json(const CyclingVerdict& verdict, const std::string& config_digest) {
  std::ostringstream out;
  out << "{\"classification\": \"" << to_string(verdict.classification)
      << "\", \"config_digest\": \"" << escape_json(config_digest)
      << "\", \"kl_end\": " << format_real17(verdict.kl_end)
      << ", \"kl_start\": " << format_real17(verdict.kl_start)
      << ", \"kl_trend_slope\": " << format_real17(verdict.kl_trend_slope) << "}\n";
  return out.str();
}

std::string summary_json(const EssReport& report, const std::string& config_digest) {
  std::ostringstream out;
  out << "{\"candidate\": " << json_real_array(report.candidate.coords())
      << ", \"config_digest\": \"" << escape_json(config_digest)
      << "\", \"is_strict_ess\": " << (report.is_strict_ess ? "true" : "false")
      << ", \"radius\": " << format_real17(report.radius)
      << ", \"samples_tested\": " << report.samples_tested << ", \"seed\": " << report.seed
      << ", \"worst_margin\": " << format_real17(report.worst_margin) << "}\n";
  return out.str();
}

void write_summary_json(const SweepResult& result, const std::string& path) {
  write_file(path, summary_json(result));
}

void write_summary_json(const CyclingVerdict& verdict, const std::string& path,
                        const std::string& config_digest) {
  write_file(path, summary_json(verdict, config_digest));
}

void write_summary_json(const EssReport& report, const std::string& path,
                        const std::string& config_digest) {
  write_file(path, summary_json(report, config_digest));
}

std::string ternary_svg(std::span<const Trajectory> trajectories,
                        std::span<const std::string> labels) {
  if (labels.size() != trajectories.size()) {
    throw ValidationError("labels", "ternary_svg: one label per trajectory");
  }
  for (const Trajectory& trajectory : trajectories) {
    if (trajectory.dimension != 3) {
      throw DimensionError("ternary_svg: only 3-dimensional states can be rendered");
    }
  }

  const auto project = [](std::span<const double> state) {
    const double u = state[1] + state[2] / 2.0;
    const double v = std::sqrt(3.0) / 2.0 * state[2];
    return std::pair<double, double>(kOriginX + kSide * u, kOriginY - kSide * v);
  };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"693\" "
         "viewBox=\"0 0 800 693\">\n";
  out << "<rect x=\"0\" y=\"0\" width=\"800\" height=\"693\" fill=\"#ffffff\"/>\n";
  out << "<path d=\"M " << format_pixel(kOriginX) << ' ' << format_pixel(kOriginY) << " L "
      << format_pixel(kOriginX + kSide) << ' ' << format_pixel(kOriginY) << " L "
      << format_pixel(kOriginX + kSide / 2.0) << ' '
      << format_pixel(kOriginY - kTriangleHeight)
      << " Z\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1.5\"/>\n";

  for (std::size_t t = 0; t < trajectories.size(); ++t) {
    const char* color = kPalette[t % (sizeof kPalette / sizeof kPalette[0])];
    out << "<polyline points=\"";
    bool first = true;
    for (const TrajectoryRecord& record : trajectories[t].records) {
      const auto [px, py] = project(record.state);
      if (!first) out << ' ';
      out << format_pixel(px) << ',' << format_pixel(py);
      first = false;
    }
    out << "\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.2\"/>\n";
  }

  for (std::size_t t = 0; t < labels.size(); ++t) {
    const char* color = kPalette[t % (sizeof kPalette / sizeof kPalette[0])];
    const double y = 18.0 + 20.0 * static_cast<double>(t);
    out << "<rect x=\"640\" y=\"" << format_pixel(y)
        << "\" width=\"14\" height=\"14\" fill=\"" << color << "\"/>\n";
    out << "<text x=\"660\" y=\"" << format_pixel(y + 12.0)
        << "\" font-family=\"monospace\" font-size=\"13\">" << escape_xml(labels[t])
        << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

void render_ternary_svg(std::span<const Trajectory> trajectories, const std::string& path,
                        std::span<const std::string> labels) {
  write_file(path, ternary_svg(trajectories, labels));
}

}  // namespace evodyn
