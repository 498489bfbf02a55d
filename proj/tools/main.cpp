// evodyn command-line interface: simulate single runs, sweep momentum
// coefficients, classify cycling on zero-sum landscapes, and verify the
// scaling identity and ESS candidates.
//
// Exit codes: 0 success, 1 validation/parse error, 2 runtime error
// (non-convergence, I/O).

#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "evodyn/canonical.hpp"
#include "evodyn/dynamics.hpp"
#include "evodyn/experiments.hpp"
#include "evodyn/lyapunov.hpp"
#include "evodyn/output.hpp"
#include "evodyn/run_spec.hpp"
#include "evodyn/sampling.hpp"

namespace {

using namespace evodyn;

std::vector<double> parse_list(const std::string& field, const std::string& value) {
  std::vector<double> out;
  std::stringstream stream(value);
  std::string part;
  while (std::getline(stream, part, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(part, &used));
      while (used < part.size() && std::isspace(static_cast<unsigned char>(part[used]))) ++used;
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::exception&) {
      throw ValidationError(field, field + ": cannot parse '" + part + "' as a real");
    }
  }
  if (out.empty()) throw ValidationError(field, field + ": empty list");
  return out;
}

MatrixLandscape parse_matrix_arg(const std::string& value) {
  std::vector<std::vector<double>> rows;
  std::stringstream stream(value);
  std::string row;
  while (std::getline(stream, row, ';')) {
    rows.push_back(parse_list("matrix", row));
  }
  try {
    return MatrixLandscape(rows);
  } catch (const DimensionMismatch& error) {
    throw ValidationError("matrix", error.what());
  }
}

// Flags shared by every subcommand that needs a payoff landscape.
struct LandscapeArgs {
  double a = 0.0;
  double b = 0.0;
  bool has_a = false;
  bool has_b = false;
  std::string matrix_text;

  void attach(CLI::App* cmd) {
    cmd->add_option("--a", a, "Cyclic payoff a (rows (0,a,b),(b,0,a),(a,b,0))")
        ->each([this](const std::string&) { has_a = true; });
    cmd->add_option("--b", b, "Cyclic payoff b")->each([this](const std::string&) {
      has_b = true;
    });
    cmd->add_option("--matrix", matrix_text,
                    "Explicit payoff matrix, rows ';'-separated: \"0,1,-1;-1,0,1;1,-1,0\"");
  }

  [[nodiscard]] MatrixLandscape landscape() const {
    const bool cyclic = has_a || has_b;
    if (cyclic == !matrix_text.empty()) {
      throw ValidationError("landscape", "give exactly one of --a/--b or --matrix");
    }
    if (cyclic) {
      if (!has_a || !has_b) {
        throw ValidationError(has_a ? "b" : "a", "--a and --b go together");
      }
      return make_cyclic_matrix(a, b);
    }
    return parse_matrix_arg(matrix_text);
  }
};

SimplexPoint resolve_point(const std::string& field, const std::string& text, std::size_t n) {
  if (text == "barycenter") return SimplexPoint::barycenter(n);
  try {
    return SimplexPoint(parse_list(field, text));
  } catch (const InvalidSimplexPoint& error) {
    throw ValidationError(field, field + ": " + error.what());
  }
}

std::string run_summary_json(const std::string& digest, const Trajectory& trajectory) {
  const TrajectoryRecord& last = trajectory.records.back();
  std::ostringstream out;
  out << "{\"config_digest\": \"" << digest << "\"";
  if (last.lyapunov_euclidean) {
    out << ", \"final_euclidean\": " << format_real17(*last.lyapunov_euclidean);
  }
  if (last.lyapunov_kl) {
    out << ", \"final_kl\": " << format_real17(*last.lyapunov_kl);
  }
  out << ", \"final_state\": [";
  for (std::size_t i = 0; i < last.state.size(); ++i) {
    if (i > 0) out << ", ";
    out << format_real17(last.state[i]);
  }
  out << "], \"status\": \"" << to_string(trajectory.status) << "\", \"steps\": " << last.step
      << "}\n";
  return out.str();
}

int run_simulate(const RunSpec& spec) {
  const MatrixLandscape landscape = spec.landscape();
  const SimplexPoint x0(spec.x0);
  std::optional<SimplexPoint> reference;
  if (spec.reference) reference.emplace(*spec.reference);

  Trajectory trajectory;
  if (spec.dynamic == RunDynamic::Continuous) {
    trajectory = continuous_integrate(landscape, x0, spec.beta, spec.horizon, spec.ode_step);
    if (reference) {
      for (TrajectoryRecord& record : trajectory.records) {
        record.lyapunov_kl = detail::kl_on_span(reference->coords(), record.state);
        record.lyapunov_euclidean = detail::euclidean_on_span(reference->coords(), record.state);
      }
    }
  } else {
    trajectory = iterate(spec.dynamics_config(), landscape, x0, reference, spec.record_every);
  }

  const std::string digest = to_hex(fnv1a64(dump_config(spec)));
  std::vector<std::string> written;
  for (OutputFormat format : spec.formats) {
    const std::string path = spec.output_path + "." + to_string(format);
    switch (format) {
      case OutputFormat::Csv:
        write_trajectory_csv(trajectory, path);
        break;
      case OutputFormat::Json:
        write_file(path, run_summary_json(digest, trajectory));
        break;
      case OutputFormat::Svg: {
        std::ostringstream label;
        label << to_string(spec.dynamic) << ' ' << to_string(spec.momentum)
              << " beta=" << format_real17(spec.beta);
        const std::vector<std::string> labels{label.str()};
        const std::vector<Trajectory> list{trajectory};
        render_ternary_svg(list, path, labels);
        break;
      }
    }
    written.push_back(path);
  }

  std::cout << "status=" << to_string(trajectory.status)
            << " steps=" << trajectory.records.back().step;
  if (trajectory.records.back().lyapunov_kl) {
    std::cout << " final_kl=" << format_real17(*trajectory.records.back().lyapunov_kl);
  }
  for (const std::string& path : written) std::cout << ' ' << path;
  std::cout << '\n';
  return 0;
}

int dispatch(CLI::App& app, int argc, char** argv);

}  // namespace

int cli_main(int argc, char** argv) {
  CLI::App app{"Evolutionary dynamics on the probability simplex with momentum"};
  app.require_subcommand(1);
  try {
    return dispatch(app, argc, argv);
  } catch (const CLI::CallForHelp& help) {
    return app.exit(help);
  } catch (const CLI::ParseError& error) {
    app.exit(error);
    return 1;
  } catch (const ValidationError& error) {
    std::cerr << "validation error (" << error.field() << "): " << error.what() << '\n';
    return 1;
  } catch (const ParseError& error) {
    std::cerr << "config error: " << error.what() << '\n';
    return 1;
  } catch (const InvalidSimplexPoint& error) {
    std::cerr << "validation error: " << error.what() << '\n';
    return 1;
  } catch (const DimensionMismatch& error) {
    std::cerr << "validation error: " << error.what() << '\n';
    return 1;
  } catch (const DimensionError& error) {
    std::cerr << "validation error: " << error.what() << '\n';
    return 1;
  } catch (const BetaSingularity& error) {
    std::cerr << "validation error: " << error.what() << '\n';
    return 1;
  } catch (const DidNotConverge& error) {
    std::cerr << "runtime error: " << error.what() << '\n';
    return 2;
  } catch (const Error& error) {
    std::cerr << "runtime error: " << error.what() << '\n';
    return 2;
  } catch (const std::exception& error) {
    std::cerr << "runtime error: " << error.what() << '\n';
    return 2;
  }
}

namespace {

int dispatch(CLI::App& app, int argc, char** argv) {
  // ---- simulate ----------------------------------------------------------
  auto* simulate = app.add_subcommand(
      "simulate", "Run one trajectory and write CSV/JSON/SVG outputs");
  LandscapeArgs sim_landscape;
  sim_landscape.attach(simulate);
  std::string sim_config;
  std::string sim_dynamic = "replicator";
  std::string sim_momentum = "none";
  double sim_alpha = 0.0, sim_beta = 0.0, sim_epsilon = 1e-6, sim_delta = 1e-9;
  double sim_horizon = 50.0, sim_h = 0.01;
  bool sim_normalize = false;
  std::string sim_x0, sim_reference = "barycenter", sim_out, sim_formats = "csv,json,svg";
  std::uint64_t sim_max_steps = 10'000'000, sim_seed = 0, sim_record_every = 1;
  std::string sim_dump;
  simulate->add_option("--config", sim_config, "Config file (key = value); flags override");
  simulate->add_option("--dynamic", sim_dynamic, "replicator | projection | continuous")
      ->capture_default_str();
  simulate->add_option("--momentum", sim_momentum, "none | polyak | nesterov")
      ->capture_default_str();
  simulate->add_option("--alpha", sim_alpha, "Learning rate (step size)");
  simulate->add_option("--beta", sim_beta, "Momentum coefficient")->capture_default_str();
  simulate->add_flag("--normalize", sim_normalize, "Divide the field by the mean fitness");
  simulate->add_option("--x0", sim_x0, "Initial state, e.g. 0.8,0.15,0.05 (or 'barycenter')");
  simulate->add_option("--reference", sim_reference,
                       "Lyapunov reference state, 'barycenter', or 'none'")
      ->capture_default_str();
  simulate->add_option("--max-steps", sim_max_steps, "Step budget")->capture_default_str();
  simulate->add_option("--epsilon", sim_epsilon, "Convergence threshold (Lyapunov units)")
      ->capture_default_str();
  simulate->add_option("--boundary-delta", sim_delta, "Divergence boundary (probability units)")
      ->capture_default_str();
  simulate->add_option("--seed", sim_seed, "Seed recorded in outputs")->capture_default_str();
  simulate->add_option("--record-every", sim_record_every, "Record every k-th step")
      ->capture_default_str();
  simulate->add_option("--horizon", sim_horizon, "Continuous dynamic: integration time")
      ->capture_default_str();
  simulate->add_option("--dt", sim_h, "Continuous dynamic: RK4 step size")
      ->capture_default_str();
  simulate->add_option("--out", sim_out, "Output base path (suffixes .csv/.json/.svg)");
  simulate->add_option("--formats", sim_formats, "Subset of csv,json,svg")
      ->capture_default_str();
  simulate->add_option("--dump-config", sim_dump, "Write the effective config to this path");

  // ---- sweep -------------------------------------------------------------
  auto* sweep = app.add_subcommand(
      "sweep", "Convergence-step ratios over a list of momentum coefficients");
  LandscapeArgs sweep_landscape;
  sweep_landscape.attach(sweep);
  std::string sweep_dynamic = "replicator", sweep_momentum = "polyak";
  std::string sweep_betas, sweep_x0, sweep_reference = "barycenter", sweep_out;
  double sweep_alpha = 0.0, sweep_epsilon = 1e-6, sweep_delta = 1e-9;
  std::uint64_t sweep_max_steps = 10'000'000;
  bool sweep_normalize = false;
  sweep->add_option("--dynamic", sweep_dynamic, "replicator | projection")
      ->capture_default_str();
  sweep->add_option("--momentum", sweep_momentum, "polyak | nesterov")->capture_default_str();
  sweep->add_option("--alpha", sweep_alpha, "Learning rate")->required();
  sweep->add_option("--betas", sweep_betas, "Comma list of momentum coefficients")->required();
  sweep->add_option("--x0", sweep_x0, "Initial state")->required();
  sweep->add_option("--reference", sweep_reference, "ESS reference (default barycenter)")
      ->capture_default_str();
  sweep->add_option("--epsilon", sweep_epsilon, "Convergence threshold")->capture_default_str();
  sweep->add_option("--max-steps", sweep_max_steps, "Step budget per run")
      ->capture_default_str();
  sweep->add_option("--boundary-delta", sweep_delta, "Divergence boundary")
      ->capture_default_str();
  sweep->add_flag("--normalize", sweep_normalize, "Divide fields by the mean fitness");
  sweep->add_option("--out", sweep_out, "Write SweepResult JSON to <out>.json");

  // ---- classify ----------------------------------------------------------
  auto* classify = app.add_subcommand(
      "classify", "Cycling verdict for a zero-sum landscape (KL trend vs the barycenter)");
  LandscapeArgs classify_landscape;
  classify_landscape.attach(classify);
  std::string classify_momentum = "none", classify_x0;
  double classify_alpha = 0.0, classify_beta = 0.0;
  std::uint64_t classify_steps = 100'000, classify_window = 1'000;
  std::string classify_out;
  classify->add_option("--momentum", classify_momentum, "none | polyak | nesterov")
      ->capture_default_str();
  classify->add_option("--alpha", classify_alpha, "Learning rate")->required();
  classify->add_option("--beta", classify_beta, "Momentum coefficient")->capture_default_str();
  classify->add_option("--x0", classify_x0, "Initial state")->required();
  classify->add_option("--steps", classify_steps, "Total steps")->capture_default_str();
  classify->add_option("--window", classify_window, "KL averaging window")
      ->capture_default_str();
  classify->add_option("--out", classify_out, "Write verdict JSON to <out>.json");

  // ---- verify-scaling ----------------------------------------------------
  auto* scaling = app.add_subcommand(
      "verify-scaling", "Max relative error of d/dt scaling across momentum coefficients");
  LandscapeArgs scaling_landscape;
  scaling_landscape.attach(scaling);
  std::string scaling_betas, scaling_reference = "barycenter", scaling_out;
  std::uint64_t scaling_samples = 100, scaling_seed = 0;
  scaling->add_option("--betas", scaling_betas, "Comma list of momentum coefficients")
      ->required();
  scaling->add_option("--samples", scaling_samples, "Sampled interior points")
      ->capture_default_str();
  scaling->add_option("--seed", scaling_seed, "Sampler seed")->capture_default_str();
  scaling->add_option("--reference", scaling_reference, "Reference state")
      ->capture_default_str();
  scaling->add_option("--out", scaling_out, "Write result JSON to <out>.json");

  // ---- verify-ess --------------------------------------------------------
  auto* ess = app.add_subcommand(
      "verify-ess", "Sampled invasion-margin check of an ESS candidate");
  LandscapeArgs ess_landscape;
  ess_landscape.attach(ess);
  std::string ess_candidate = "barycenter", ess_out;
  double ess_radius = 0.1;
  std::uint64_t ess_samples = 10'000, ess_seed = 0;
  ess->add_option("--candidate", ess_candidate, "Candidate state (default barycenter)")
      ->capture_default_str();
  ess->add_option("--radius", ess_radius, "Neighborhood radius")->capture_default_str();
  ess->add_option("--samples", ess_samples, "Sample count")->capture_default_str();
  ess->add_option("--seed", ess_seed, "Sampler seed")->capture_default_str();
  ess->add_option("--out", ess_out, "Write EssReport JSON to <out>.json");

  app.parse(argc, argv);

  const auto parse_momentum = [](const std::string& text) {
    if (text == "none") return MomentumKind::None;
    if (text == "polyak") return MomentumKind::Polyak;
    if (text == "nesterov") return MomentumKind::Nesterov;
    throw ValidationError("momentum", "momentum: unknown value '" + text + "'");
  };

  if (simulate->parsed()) {
    RunSpec spec;
    if (!sim_config.empty()) spec = parse_config(sim_config);

    const auto given = [&](const std::string& name) { return simulate->count(name) > 0; };
    if (sim_landscape.has_a || sim_landscape.has_b || !sim_landscape.matrix_text.empty()) {
      const MatrixLandscape landscape = sim_landscape.landscape();
      if (!sim_landscape.matrix_text.empty()) {
        spec.matrix = landscape;
        spec.cyclic_ab.reset();
      } else {
        spec.cyclic_ab = std::make_pair(sim_landscape.a, sim_landscape.b);
        spec.matrix.reset();
      }
    }
    if (given("--dynamic")) {
      if (sim_dynamic == "replicator") spec.dynamic = RunDynamic::Replicator;
      else if (sim_dynamic == "projection") spec.dynamic = RunDynamic::Projection;
      else if (sim_dynamic == "continuous") spec.dynamic = RunDynamic::Continuous;
      else throw ValidationError("dynamic", "dynamic: unknown value '" + sim_dynamic + "'");
    }
    if (given("--momentum")) spec.momentum = parse_momentum(sim_momentum);
    if (given("--alpha")) spec.alpha = sim_alpha;
    if (given("--beta")) spec.beta = sim_beta;
    if (given("--normalize")) spec.normalize = sim_normalize;
    if (given("--max-steps")) spec.max_steps = sim_max_steps;
    if (given("--epsilon")) spec.epsilon = sim_epsilon;
    if (given("--boundary-delta")) spec.boundary_delta = sim_delta;
    if (given("--seed")) spec.seed = sim_seed;
    if (given("--record-every")) spec.record_every = sim_record_every;
    if (given("--horizon")) spec.horizon = sim_horizon;
    if (given("--dt")) spec.ode_step = sim_h;
    if (given("--out")) spec.output_path = sim_out;
    if (given("--formats")) {
      spec.formats.clear();
      std::stringstream stream(sim_formats);
      std::string part;
      while (std::getline(stream, part, ',')) {
        if (part == "csv") spec.formats.push_back(OutputFormat::Csv);
        else if (part == "json") spec.formats.push_back(OutputFormat::Json);
        else if (part == "svg") spec.formats.push_back(OutputFormat::Svg);
        else throw ValidationError("formats", "formats: unknown format '" + part + "'");
      }
    }

    // Landscape dimension is needed to resolve 'barycenter' arguments.
    if (!spec.cyclic_ab && !spec.matrix) {
      throw ValidationError("landscape", "give exactly one of --a/--b or --matrix");
    }
    const std::size_t n = spec.landscape().dim();
    if (given("--x0")) spec.x0 = resolve_point("x0", sim_x0, n).coords();
    // Explicit --reference wins ('none' drops it); config files keep their
    // own reference semantics; flag-only invocations default to barycenter.
    if (given("--reference")) {
      if (sim_reference == "none") spec.reference.reset();
      else spec.reference = resolve_point("reference", sim_reference, n).coords();
    } else if (sim_config.empty()) {
      spec.reference = SimplexPoint::barycenter(n).coords();
    }
    spec.validate();
    if (!sim_dump.empty()) write_file(sim_dump, dump_config(spec));
    return run_simulate(spec);
  }

  if (sweep->parsed()) {
    const MatrixLandscape landscape = sweep_landscape.landscape();
    const std::size_t n = landscape.dim();
    DynamicsConfig config;
    if (sweep_dynamic == "replicator") config.dynamic = DynamicKind::Replicator;
    else if (sweep_dynamic == "projection") config.dynamic = DynamicKind::Projection;
    else throw ValidationError("dynamic", "sweep dynamic must be replicator or projection");
    config.momentum = parse_momentum(sweep_momentum);
    if (config.momentum == MomentumKind::None) {
      throw ValidationError("momentum", "sweep momentum must be polyak or nesterov");
    }
    config.learning_rate = sweep_alpha;
    config.normalize_by_mean = sweep_normalize;
    config.max_steps = sweep_max_steps;
    config.convergence_epsilon = sweep_epsilon;
    config.boundary_delta = sweep_delta;
    const SimplexPoint x0 = resolve_point("x0", sweep_x0, n);
    const SimplexPoint reference = resolve_point("reference", sweep_reference, n);
    const std::vector<double> betas = parse_list("betas", sweep_betas);
    const SweepResult result = beta_sweep_ratio(config, landscape, x0, reference, betas);
    std::cout << "base_steps=" << result.base_steps << " digest=" << result.config_digest
              << '\n';
    std::printf("%10s %12s %12s %12s\n", "beta", "steps", "ratio", "1-beta");
    for (const SweepRow& row : result.rows) {
      std::printf("%10g %12llu %12.6f %12.6f\n", row.beta,
                  static_cast<unsigned long long>(row.steps), row.ratio, row.predicted);
    }
    if (!sweep_out.empty()) write_summary_json(result, sweep_out + ".json");
    return 0;
  }

  if (classify->parsed()) {
    const MatrixLandscape landscape = classify_landscape.landscape();
    DynamicsConfig config;
    config.dynamic = DynamicKind::Replicator;
    config.momentum = parse_momentum(classify_momentum);
    config.learning_rate = classify_alpha;
    config.momentum_coefficient = classify_beta;
    const SimplexPoint x0 = resolve_point("x0", classify_x0, landscape.dim());
    const CyclingVerdict verdict =
        classify_cycling(config, landscape, x0, classify_steps, classify_window);
    std::cout << "classification=" << to_string(verdict.classification)
              << " kl_start=" << format_real17(verdict.kl_start)
              << " kl_end=" << format_real17(verdict.kl_end)
              << " slope=" << format_real17(verdict.kl_trend_slope) << '\n';
    if (!classify_out.empty()) {
      std::ostringstream canonical;
      canonical << "classify;alpha=" << format_real17(classify_alpha)
                << ";beta=" << format_real17(classify_beta)
                << ";momentum=" << classify_momentum << ";steps=" << classify_steps
                << ";window=" << classify_window << ";x0=";
      for (double v : x0.coords()) canonical << format_real17(v) << ',';
      canonical << ";matrix=";
      for (double v : landscape.row_major()) canonical << format_real17(v) << ',';
      write_summary_json(verdict, classify_out + ".json",
                         to_hex(fnv1a64(canonical.str())));
    }
    return 0;
  }

  if (scaling->parsed()) {
    const MatrixLandscape landscape = scaling_landscape.landscape();
    const SimplexPoint reference =
        resolve_point("reference", scaling_reference, landscape.dim());
    const std::vector<double> betas = parse_list("betas", scaling_betas);
    const double worst =
        scaling_identity_check(landscape, reference, betas, scaling_samples, scaling_seed);
    std::cout << "max_relative_error=" << format_real17(worst) << '\n';
    if (!scaling_out.empty()) {
      std::ostringstream canonical;
      canonical << "verify-scaling;betas=";
      for (double v : betas) canonical << format_real17(v) << ',';
      canonical << ";samples=" << scaling_samples << ";seed=" << scaling_seed << ";matrix=";
      for (double v : landscape.row_major()) canonical << format_real17(v) << ',';
      std::ostringstream json;
      json << "{\"betas\": [";
      for (std::size_t i = 0; i < betas.size(); ++i) {
        if (i > 0) json << ", ";
        json << format_real17(betas[i]);
      }
      json << "], \"config_digest\": \"" << to_hex(fnv1a64(canonical.str()))
           << "\", \"max_relative_error\": " << format_real17(worst)
           << ", \"samples\": " << scaling_samples << ", \"seed\": " << scaling_seed << "}\n";
      write_file(scaling_out + ".json", json.str());
    }
    return 0;
  }

  if (ess->parsed()) {
    const MatrixLandscape landscape = ess_landscape.landscape();
    const SimplexPoint candidate =
        resolve_point("candidate", ess_candidate, landscape.dim());
    const EssReport report =
        verify_ess(landscape, candidate, ess_radius, ess_samples, ess_seed);
    std::cout << "is_strict_ess=" << (report.is_strict_ess ? "true" : "false")
              << " worst_margin=" << format_real17(report.worst_margin)
              << " samples=" << report.samples_tested << '\n';
    if (!ess_out.empty()) {
      std::ostringstream canonical;
      canonical << "verify-ess;radius=" << format_real17(ess_radius)
                << ";samples=" << ess_samples << ";seed=" << ess_seed << ";candidate=";
      for (double v : candidate.coords()) canonical << format_real17(v) << ',';
      canonical << ";matrix=";
      for (double v : landscape.row_major()) canonical << format_real17(v) << ',';
      write_summary_json(report, ess_out + ".json", to_hex(fnv1a64(canonical.str())));
    }
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) { return cli_main(argc, argv); }
