#include "evodyn/run_spec.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "evodyn/canonical.hpp"

namespace evodyn {

namespace {

std::string trim(const std::string& text) {
  std::size_t begin = 0;
  std::size_t end = text.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(text[begin]))) ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(text[end - 1]))) --end;
  return text.substr(begin, end - begin);
}

std::vector<std::string> split(const std::string& text, char separator) {
  std::vector<std::string> parts;
  std::string current;
  for (char c : text) {
    if (c == separator) {
      parts.push_back(trim(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  parts.push_back(trim(current));
  return parts;
}

double parse_double(const std::string& field, const std::string& value) {
  const std::string v = trim(value);
  char* end = nullptr;
  const double parsed = std::strtod(v.c_str(), &end);
  if (v.empty() || end != v.c_str() + v.size()) {
    throw ValidationError(field, field + ": cannot parse real value '" + value + "'");
  }
  return parsed;
}

std::uint64_t parse_uint(const std::string& field, const std::string& value) {
  const std::string v = trim(value);
  std::uint64_t parsed = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), parsed);
  if (ec != std::errc{} || ptr != v.data() + v.size()) {
    throw ValidationError(field, field + ": cannot parse integer value '" + value + "'");
  }
  return parsed;
}

bool parse_bool(const std::string& field, const std::string& value) {
  const std::string v = trim(value);
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ValidationError(field, field + ": expected true/false, got '" + value + "'");
}

std::vector<double> parse_real_list(const std::string& field, const std::string& value) {
  std::vector<double> out;
  for (const std::string& part : split(value, ',')) {
    out.push_back(parse_double(field, part));
  }
  return out;
}

MatrixLandscape parse_matrix_value(const std::string& value) {
  std::vector<std::vector<double>> rows;
  for (const std::string& row : split(value, ';')) {
    rows.push_back(parse_real_list("matrix", row));
  }
  try {
    return MatrixLandscape(rows);
  } catch (const DimensionMismatch& error) {
    throw ValidationError("matrix", error.what());
  }
}

std::string join_reals(const std::vector<double>& values, char separator) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out.push_back(separator);
    out += format_real17(values[i]);
  }
  return out;
}

}  // namespace

const char* to_string(RunDynamic dynamic) {
  switch (dynamic) {
    case RunDynamic::Replicator: return "replicator";
    case RunDynamic::Projection: return "projection";
    case RunDynamic::Continuous: return "continuous";
  }
  return "?";
}

const char* to_string(MomentumKind momentum) {
  switch (momentum) {
    case MomentumKind::None: return "none";
    case MomentumKind::Polyak: return "polyak";
    case MomentumKind::Nesterov: return "nesterov";
  }
  return "?";
}

const char* to_string(OutputFormat format) {
  switch (format) {
    case OutputFormat::Csv: return "csv";
    case OutputFormat::Json: return "json";
    case OutputFormat::Svg: return "svg";
  }
  return "?";
}

MatrixLandscape RunSpec::landscape() const {
  if (matrix) return *matrix;
  if (cyclic_ab) return make_cyclic_matrix(cyclic_ab->first, cyclic_ab->second);
  throw ValidationError("landscape", "no landscape: set a/b or matrix");
}

DynamicsConfig RunSpec::dynamics_config() const {
  DynamicsConfig config;
  switch (dynamic) {
    case RunDynamic::Replicator: config.dynamic = DynamicKind::Replicator; break;
    case RunDynamic::Projection: config.dynamic = DynamicKind::Projection; break;
    case RunDynamic::Continuous:
      throw ValidationError("dynamic", "continuous runs use the integrator, not iterate");
  }
  config.momentum = momentum;
  config.learning_rate = alpha;
  config.momentum_coefficient = beta;
  config.normalize_by_mean = normalize;
  config.max_steps = max_steps;
  config.convergence_epsilon = epsilon;
  config.boundary_delta = boundary_delta;
  return config;
}

void RunSpec::validate() const {
  if (static_cast<bool>(cyclic_ab) == static_cast<bool>(matrix)) {
    throw ValidationError("landscape", "exactly one of a/b or matrix must be given");
  }
  const MatrixLandscape L = landscape();
  const std::size_t n = L.dim();
  if (x0.empty()) {
    throw ValidationError("x0", "x0 is required");
  }
  if (x0.size() != n) {
    throw ValidationError("x0", "x0 has dimension " + std::to_string(x0.size()) +
                                    ", landscape expects " + std::to_string(n));
  }
  try {
    [[maybe_unused]] const SimplexPoint probe(x0);
  } catch (const InvalidSimplexPoint& error) {
    throw ValidationError("x0", std::string("x0: ") + error.what());
  }
  if (reference) {
    if (reference->size() != n) {
      throw ValidationError("reference", "reference dimension mismatch");
    }
    try {
      [[maybe_unused]] const SimplexPoint probe(*reference);
    } catch (const InvalidSimplexPoint& error) {
      throw ValidationError("reference", std::string("reference: ") + error.what());
    }
  }
  if (!(alpha > 0.0)) {
    throw ValidationError("alpha", "alpha must be positive");
  }
  if (max_steps < 1) {
    throw ValidationError("max_steps", "max_steps must be at least 1");
  }
  if (!(epsilon > 0.0)) {
    throw ValidationError("epsilon", "epsilon must be positive");
  }
  if (!(boundary_delta > 0.0) || !(boundary_delta < 1.0 / static_cast<double>(n))) {
    throw ValidationError("boundary_delta", "boundary_delta must lie in (0, 1/n)");
  }
  if (record_every < 1) {
    throw ValidationError("record_every", "record_every must be at least 1");
  }
  if (formats.empty()) {
    throw ValidationError("formats", "at least one output format is required");
  }
  if (dynamic == RunDynamic::Continuous) {
    if (std::abs(1.0 - beta) < 1e-9) {
      throw ValidationError("beta", "beta = 1 is singular for the continuous dynamic");
    }
    if (!(ode_step > 0.0) || !(ode_step <= horizon)) {
      throw ValidationError("h", "need 0 < h <= horizon");
    }
  }
}

namespace {

struct ParserState {
  RunSpec spec;
  std::optional<double> a;
  std::optional<double> b;
  bool x0_barycenter = false;
  bool reference_barycenter = false;
};

void apply_key(ParserState& state, const std::string& key, const std::string& value,
               std::size_t line) {
  RunSpec& spec = state.spec;
  if (key == "a") {
    state.a = parse_double("a", value);
  } else if (key == "b") {
    state.b = parse_double("b", value);
  } else if (key == "matrix") {
    spec.matrix = parse_matrix_value(value);
  } else if (key == "dynamic") {
    if (value == "replicator") spec.dynamic = RunDynamic::Replicator;
    else if (value == "projection") spec.dynamic = RunDynamic::Projection;
    else if (value == "continuous") spec.dynamic = RunDynamic::Continuous;
    else throw ValidationError("dynamic", "dynamic: unknown value '" + value + "'");
  } else if (key == "momentum") {
    if (value == "none") spec.momentum = MomentumKind::None;
    else if (value == "polyak") spec.momentum = MomentumKind::Polyak;
    else if (value == "nesterov") spec.momentum = MomentumKind::Nesterov;
    else throw ValidationError("momentum", "momentum: unknown value '" + value + "'");
  } else if (key == "alpha") {
    spec.alpha = parse_double("alpha", value);
  } else if (key == "beta") {
    spec.beta = parse_double("beta", value);
  } else if (key == "normalize") {
    spec.normalize = parse_bool("normalize", value);
  } else if (key == "x0") {
    if (value == "barycenter") state.x0_barycenter = true;
    else spec.x0 = parse_real_list("x0", value);
  } else if (key == "reference") {
    if (value == "barycenter") state.reference_barycenter = true;
    else spec.reference = parse_real_list("reference", value);
  } else if (key == "max_steps") {
    spec.max_steps = parse_uint("max_steps", value);
  } else if (key == "epsilon") {
    spec.epsilon = parse_double("epsilon", value);
  } else if (key == "boundary_delta") {
    spec.boundary_delta = parse_double("boundary_delta", value);
  } else if (key == "seed") {
    spec.seed = parse_uint("seed", value);
  } else if (key == "out") {
    spec.output_path = value;
  } else if (key == "formats") {
    spec.formats.clear();
    for (const std::string& part : split(value, ',')) {
      if (part == "csv") spec.formats.push_back(OutputFormat::Csv);
      else if (part == "json") spec.formats.push_back(OutputFormat::Json);
      else if (part == "svg") spec.formats.push_back(OutputFormat::Svg);
      else throw ValidationError("formats", "formats: unknown format '" + part + "'");
    }
  } else if (key == "record_every") {
    spec.record_every = parse_uint("record_every", value);
  } else if (key == "horizon") {
    spec.horizon = parse_double("horizon", value);
  } else if (key == "h") {
    spec.ode_step = parse_double("h", value);
  } else {
    throw ParseError(line, "unknown key '" + key + "'");
  }
}

}  // namespace

RunSpec parse_config_text(const std::string& text) {
  ParserState state;
  std::istringstream stream(text);
  std::string raw;
  std::size_t line_number = 0;
  while (std::getline(stream, raw)) {
    ++line_number;
    const std::size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;
    const std::size_t equals = line.find('=');
    if (equals == std::string::npos) {
      throw ParseError(line_number, "expected 'key = value', got '" + line + "'");
    }
    const std::string key = trim(line.substr(0, equals));
    const std::string value = trim(line.substr(equals + 1));
    if (key.empty()) {
      throw ParseError(line_number, "empty key");
    }
    apply_key(state, key, value, line_number);
  }

  RunSpec& spec = state.spec;
  if (state.a || state.b) {
    if (!state.a) throw ValidationError("a", "b given without a");
    if (!state.b) throw ValidationError("b", "a given without b");
    spec.cyclic_ab = std::make_pair(*state.a, *state.b);
  }
  if (state.x0_barycenter || state.reference_barycenter) {
    if (!spec.cyclic_ab && !spec.matrix) {
      throw ValidationError("landscape", "'barycenter' needs a landscape to fix the dimension");
    }
    const std::size_t n = spec.landscape().dim();
    const std::vector<double> barycenter(n, 1.0 / static_cast<double>(n));
    if (state.x0_barycenter) spec.x0 = barycenter;
    if (state.reference_barycenter) spec.reference = barycenter;
  }
  spec.validate();
  return spec;
}

RunSpec parse_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ParseError("cannot open config file '" + path + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

std::string dump_config(const RunSpec& spec) {
  std::ostringstream out;
  if (spec.cyclic_ab) {
    out << "a = " << format_real17(spec.cyclic_ab->first) << '\n';
  }
  out << "alpha = " << format_real17(spec.alpha) << '\n';
  if (spec.cyclic_ab) {
    out << "b = " << format_real17(spec.cyclic_ab->second) << '\n';
  }
  out << "beta = " << format_real17(spec.beta) << '\n';
  out << "boundary_delta = " << format_real17(spec.boundary_delta) << '\n';
  out << "dynamic = " << to_string(spec.dynamic) << '\n';
  out << "epsilon = " << format_real17(spec.epsilon) << '\n';
  out << "formats = ";
  for (std::size_t i = 0; i < spec.formats.size(); ++i) {
    if (i > 0) out << ',';
    out << to_string(spec.formats[i]);
  }
  out << '\n';
  out << "h = " << format_real17(spec.ode_step) << '\n';
  out << "horizon = " << format_real17(spec.horizon) << '\n';
  if (spec.matrix) {
    out << "matrix = ";
    const std::size_t n = spec.matrix->dim();
    for (std::size_t i = 0; i < n; ++i) {
      if (i > 0) out << "; ";
      for (std::size_t j = 0; j < n; ++j) {
        if (j > 0) out << ',';
        out << format_real17(spec.matrix->at(i, j));
      }
    }
    out << '\n';
  }
  out << "max_steps = " << spec.max_steps << '\n';
  out << "momentum = " << to_string(spec.momentum) << '\n';
  out << "normalize = " << (spec.normalize ? "true" : "false") << '\n';
  out << "out = " << spec.output_path << '\n';
  out << "record_every = " << spec.record_every << '\n';
  if (spec.reference) {
    out << "reference = " << join_reals(*spec.reference, ',') << '\n';
  }
  out << "seed = " << spec.seed << '\n';
  out << "x0 = " << join_reals(spec.x0, ',') << '\n';
  return out.str();
}

}  // namespace evodyn
