// output.hpp — trajectory CSV, canonical JSON summaries, and the ternary
// SVG renderer. All writers are byte-stable for identical inputs.
#pragma once

#include <span>
#include <string>

#include "evodyn/dynamics.hpp"
#include "evodyn/experiments.hpp"
#include "evodyn/lyapunov.hpp"

namespace evodyn {

// Header `step,time,x1,...,xn,kl,euclidean`, one row per record (reals at 17
// significant digits, absent Lyapunov values empty), then `# status=<...>`.
std::string trajectory_csv(const Trajectory& trajectory);
void write_trajectory_csv(const Trajectory& trajectory, const std::string& path);

// Canonical JSON: keys sorted, reals at 17 significant digits, config digest
// included. Byte-stable across runs with equal inputs.
std::string summary_json(const SweepResult& result);
std::string summary_json(const CyclingVerdict& verdict, const std::string& config_digest);
std::string summary_json(const EssReport& report, const std::string& config_digest);

void write_summary_json(const SweepResult& result, const std::string& path);
void write_summary_json(const CyclingVerdict& verdict, const std::string& path,
                        const std::string& config_digest);
void write_summary_json(const EssReport& report, const std::string& path,
                        const std::string& config_digest);

// Barycentric projection u = x2 + x3/2, v = (sqrt(3)/2) x3 onto a fixed
// 800x693 viewport (triangle side 600 px): simplex boundary, one polyline
// per trajectory, and a legend. Throws DimensionError unless every
// trajectory is 3-dimensional.
std::string ternary_svg(std::span<const Trajectory> trajectories,
                        std::span<const std::string> labels);
void render_ternary_svg(std::span<const Trajectory> trajectories, const std::string& path,
                        std::span<const std::string> labels);

// Writes bytes exactly; throws Error on I/O failure.
void write_file(const std::string& path, const std::string& bytes);

}  // namespace evodyn
