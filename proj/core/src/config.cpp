#include "kvevp/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace kvevp {

namespace {

constexpr double kDegree = std::numbers::pi / 180.0;

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_words(std::string_view s) {
  std::vector<std::string_view> words;
  std::size_t pos = 0;
  while (pos < s.size()) {
    const auto start = s.find_first_not_of(" \t", pos);
    if (start == std::string_view::npos) break;
    auto end = s.find_first_of(" \t", start);
    if (end == std::string_view::npos) end = s.size();
    words.push_back(s.substr(start, end - start));
    pos = end;
  }
  return words;
}

double to_double(std::string_view key, std::string_view text) {
  double value = 0.0;
  const auto* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), last, value);
  if (ec != std::errc{} || ptr != last)
    throw ConfigParseError("key '" + std::string(key) + "': not a number: '" + std::string(text) + "'");
  return value;
}

long long to_integer(std::string_view key, std::string_view text) {
  long long value = 0;
  const auto* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), last, value);
  if (ec != std::errc{} || ptr != last)
    throw ConfigParseError("key '" + std::string(key) + "': not an integer: '" + std::string(text) + "'");
  return value;
}

bool to_bool(std::string_view key, std::string_view text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ConfigParseError("key '" + std::string(key) + "': not a boolean: '" + std::string(text) + "'");
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

enum class FieldShape { scalar, vector, stress };

int shape_components(FieldShape shape) {
  switch (shape) {
    case FieldShape::scalar: return 1;
    case FieldShape::vector: return 2;
    case FieldShape::stress: return 3;
  }
  return 1;
}

// Component labels used in `fourier` terms: vectors use 1, 2; stresses use 11, 12, 22.
int component_from_label(std::string_view key, FieldShape shape, long long label) {
  if (shape == FieldShape::vector && (label == 1 || label == 2)) return static_cast<int>(label - 1);
  if (shape == FieldShape::stress) {
    if (label == 11) return 0;
    if (label == 12) return 1;
    if (label == 22) return 2;
  }
  throw ConfigParseError("key '" + std::string(key) + "': bad component label " + std::to_string(label));
}

std::string component_label(FieldShape shape, int component) {
  if (shape == FieldShape::vector) return std::to_string(component + 1);
  static constexpr const char* stress[] = {"11", "12", "22"};
  return stress[component];
}

FieldSpec parse_field(std::string_view key, std::string_view value, FieldShape shape) {
  const auto words = split_words(value);
  if (words.empty()) throw ConfigParseError("key '" + std::string(key) + "': empty field description");
  FieldSpec spec;
  const auto kind = words[0];
  if (kind == "zero") {
    if (words.size() != 1) throw ConfigParseError("key '" + std::string(key) + "': 'zero' takes no arguments");
    spec.kind = FieldSpec::Kind::zero;
  } else if (kind == "steady") {
    if (shape != FieldShape::stress || words.size() != 1)
      throw ConfigParseError("key '" + std::string(key) + "': 'steady' applies to the stress only");
    spec.kind = FieldSpec::Kind::steady;
  } else if (kind == "constant") {
    const auto n = static_cast<std::size_t>(shape_components(shape));
    if (words.size() != n + 1)
      throw ConfigParseError("key '" + std::string(key) + "': 'constant' expects " + std::to_string(n) + " values");
    spec.kind = FieldSpec::Kind::constant;
    for (std::size_t i = 1; i < words.size(); ++i) spec.values.push_back(to_double(key, words[i]));
  } else if (kind == "random") {
    if (words.size() != 3) throw ConfigParseError("key '" + std::string(key) + "': 'random' expects <amplitude> <max_mode>");
    spec.kind = FieldSpec::Kind::random;
    spec.amplitude = to_double(key, words[1]);
    spec.max_mode = static_cast<int>(to_integer(key, words[2]));
  } else if (kind == "fourier") {
    spec.kind = FieldSpec::Kind::fourier;
    const std::size_t expected = shape == FieldShape::scalar ? 4 : 5;
    for (std::size_t i = 1; i < words.size(); ++i) {
      std::vector<std::string_view> parts;
      std::string_view rest = words[i];
      std::size_t colon;
      while ((colon = rest.find(':')) != std::string_view::npos) {
        parts.push_back(rest.substr(0, colon));
        rest.remove_prefix(colon + 1);
      }
      parts.push_back(rest);
      if (parts.size() != expected)
        throw ConfigParseError("key '" + std::string(key) + "': malformed fourier term '" + std::string(words[i]) + "'");
      FourierTerm term;
      std::size_t p = 0;
      if (shape != FieldShape::scalar) term.component = component_from_label(key, shape, to_integer(key, parts[p++]));
      term.k1 = static_cast<int>(to_integer(key, parts[p++]));
      term.k2 = static_cast<int>(to_integer(key, parts[p++]));
      term.amplitude = to_double(key, parts[p++]);
      term.phase = to_double(key, parts[p++]);
      spec.terms.push_back(term);
    }
  } else {
    throw ConfigParseError("key '" + std::string(key) + "': unknown field kind '" + std::string(kind) + "'");
  }
  return spec;
}

std::string format_field(const FieldSpec& spec, FieldShape shape) {
  std::ostringstream out;
  switch (spec.kind) {
    case FieldSpec::Kind::zero: out << "zero"; break;
    case FieldSpec::Kind::steady: out << "steady"; break;
    case FieldSpec::Kind::constant:
      out << "constant";
      for (double v : spec.values) out << ' ' << format_double(v);
      break;
    case FieldSpec::Kind::random:
      out << "random " << format_double(spec.amplitude) << ' ' << spec.max_mode;
      break;
    case FieldSpec::Kind::fourier:
      out << "fourier";
      for (const auto& t : spec.terms) {
        out << ' ';
        if (shape != FieldShape::scalar) out << component_label(shape, t.component) << ':';
        out << t.k1 << ':' << t.k2 << ':' << format_double(t.amplitude) << ':' << format_double(t.phase);
      }
      break;
  }
  return out.str();
}

void validate_field(const std::string& key, const FieldSpec& spec, FieldShape shape, int modes) {
  if (spec.kind == FieldSpec::Kind::constant &&
      spec.values.size() != static_cast<std::size_t>(shape_components(shape)))
    throw ConfigValidationError(key, "wrong number of constant values");
  if (spec.kind == FieldSpec::Kind::random) {
    if (!(spec.amplitude >= 0.0) || !std::isfinite(spec.amplitude))
      throw ConfigValidationError(key, "random amplitude must be finite and >= 0");
    if (spec.max_mode < 1 || spec.max_mode > modes)
      throw ConfigValidationError(key, "random max_mode must lie in [1, N]");
  }
  for (const auto& t : spec.terms) {
    if (std::abs(t.k1) > modes || std::abs(t.k2) > modes)
      throw ConfigValidationError(key, "fourier wavenumber exceeds N (fields must be band-limited)");
    if (!std::isfinite(t.amplitude) || !std::isfinite(t.phase))
      throw ConfigValidationError(key, "fourier term must be finite");
  }
  for (double v : spec.values)
    if (!std::isfinite(v)) throw ConfigValidationError(key, "constant values must be finite");
  if (spec.omega && !std::isfinite(*spec.omega)) throw ConfigValidationError(key + "_omega", "must be finite");
}

void require(bool ok, const char* key, const char* what) {
  if (!ok) throw ConfigValidationError(key, what);
}

}  // namespace

FieldSpec FieldSpec::constant(std::vector<double> v) {
  FieldSpec spec;
  spec.kind = Kind::constant;
  spec.values = std::move(v);
  return spec;
}

FieldSpec FieldSpec::random(double amplitude, int max_mode) {
  FieldSpec spec;
  spec.kind = Kind::random;
  spec.amplitude = amplitude;
  spec.max_mode = max_mode;
  return spec;
}

PhysicalParams default_params() { return PhysicalParams{}; }

void PhysicalParams::validate() const {
  require(P > 0.0 && std::isfinite(P), "P", "internal ice strength must be > 0");
  require(E > 0.0 && std::isfinite(E), "E", "elastic modulus must be > 0");
  require(rho_a > 0.0 && std::isfinite(rho_a), "rho_a", "air density must be > 0");
  require(rho_w > 0.0 && std::isfinite(rho_w), "rho_w", "water density must be > 0");
  require(c_a >= 0.0 && std::isfinite(c_a), "c_a", "air drag coefficient must be >= 0");
  require(c_w >= 0.0 && std::isfinite(c_w), "c_w", "ocean drag coefficient must be >= 0");
  require(g >= 0.0 && std::isfinite(g), "g", "gravitational constant must be >= 0");
  require(std::isfinite(phi), "phi", "must be finite");
  require(std::isfinite(theta), "theta", "must be finite");
  require(std::isfinite(Omega), "Omega", "must be finite");
}

void RegularizationParams::validate() const {
  require(alpha > 0.0 && std::isfinite(alpha), "alpha", "Voigt length must be > 0");
  require(beta >= 0.0 && std::isfinite(beta), "beta", "must be >= 0");
  require(delta >= 0.0 && std::isfinite(delta), "delta", "must be >= 0");
  require(epsilon >= 0.0 && std::isfinite(epsilon), "epsilon", "must be >= 0");
}

void RunConfig::validate() const {
  require(modes >= 1, "N", "mode order must be >= 1");
  require(points % 2 == 0, "M", "grid size must be even");
  require(points >= 2 * modes + 2, "M", "grid size must be >= 2N + 2");
  require(dt >= 0.0 && std::isfinite(dt), "dt", "time step must be > 0 (or 0 for automatic)");
  require(t_final >= 0.0 && std::isfinite(t_final), "t_final", "must be >= 0");
  require(output_every >= 1, "output_every", "must be >= 1");
  require(threads >= 1, "threads", "must be >= 1");
}

void Config::validate() const {
  physical.validate();
  regularization.validate();
  run.validate();
  const int n = run.modes;
  validate_field("U_a", forcing.wind, FieldShape::vector, n);
  validate_field("U_w", forcing.current, FieldShape::vector, n);
  validate_field("H0", forcing.surface_height, FieldShape::scalar, n);
  validate_field("u0", initial.velocity, FieldShape::vector, n);
  validate_field("sigma0", initial.stress, FieldShape::stress, n);
  validate_field("antisym0", initial.antisym, FieldShape::scalar, n);
}

Config default_config() {
  Config c;
  c.initial.velocity = FieldSpec::random(0.2, 4);
  c.initial.stress = FieldSpec::random(0.5, 4);
  return c;
}

Config parse_config(std::string_view text) {
  std::map<std::string, std::string, std::less<>> entries;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos)
      throw ConfigParseError("line " + std::to_string(line_no) + ": expected 'key = value'");
    const auto key = std::string(trim(view.substr(0, eq)));
    const auto value = std::string(trim(view.substr(eq + 1)));
    if (key.empty() || value.empty())
      throw ConfigParseError("line " + std::to_string(line_no) + ": empty key or value");
    if (!entries.emplace(key, value).second)
      throw ConfigParseError("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
  }

  Config c = default_config();
  std::set<std::string> used;
  auto take = [&](const char* key) -> const std::string* {
    const auto it = entries.find(key);
    if (it == entries.end()) return nullptr;
    used.insert(key);
    return &it->second;
  };
  auto number = [&](const char* key, double& target) {
    if (const auto* v = take(key)) target = to_double(key, *v);
  };
  auto angle = [&](const char* deg_key, const char* rad_key, double& target) {
    const auto* deg = take(deg_key);
    const auto* rad = take(rad_key);
    if (deg && rad) throw ConfigParseError(std::string("both ") + deg_key + " and " + rad_key + " given");
    if (deg) target = to_double(deg_key, *deg) * kDegree;
    if (rad) target = to_double(rad_key, *rad);
  };
  auto integer = [&](const char* key, auto& target) {
    if (const auto* v = take(key)) target = static_cast<std::remove_reference_t<decltype(target)>>(to_integer(key, *v));
  };
  auto boolean = [&](const char* key, bool& target) {
    if (const auto* v = take(key)) target = to_bool(key, *v);
  };
  auto field = [&](const char* key, FieldSpec& target, FieldShape shape) {
    if (const auto* v = take(key)) target = parse_field(key, *v, shape);
  };
  auto omega = [&](const char* key, FieldSpec& target) {
    if (const auto* v = take(key)) target.omega = to_double(key, *v);
  };

  auto& ph = c.physical;
  number("P", ph.P);
  number("E", ph.E);
  number("c_a", ph.c_a);
  number("c_w", ph.c_w);
  number("rho_a", ph.rho_a);
  number("rho_w", ph.rho_w);
  angle("phi_deg", "phi_rad", ph.phi);
  angle("theta_deg", "theta_rad", ph.theta);
  number("Omega", ph.Omega);
  number("g", ph.g);

  auto& reg = c.regularization;
  number("alpha", reg.alpha);
  number("beta", reg.beta);
  number("delta", reg.delta);
  number("epsilon", reg.epsilon);

  auto& var = c.variant;
  boolean("advection", var.advection);
  var.voigt_biharmonic = reg.beta > 0.0;
  boolean("biharmonic", var.voigt_biharmonic);
  boolean("full_stress", var.full_stress);
  if (const auto* v = take("inject_fault")) {
    if (*v == "none") var.fault = Fault::none;
    else if (*v == "drag_sign") var.fault = Fault::drag_sign;
    else throw ConfigParseError("key 'inject_fault': unknown fault '" + *v + "'");
  }

  auto& run = c.run;
  const bool has_points = entries.count("M") != 0;
  integer("N", run.modes);
  integer("M", run.points);
  if (!has_points) run.points = 4 * run.modes;
  number("t_final", run.t_final);
  number("dt", run.dt);
  integer("output_every", run.output_every);
  integer("threads", run.threads);
  if (const auto* v = take("seed")) {
    // Full 64-bit range; a leading minus is a range error rather than a syntax error.
    if (v->starts_with('-')) {
      to_integer("seed", *v);
      throw ConfigValidationError("seed", "must be >= 0");
    }
    const auto* last = v->data() + v->size();
    const auto [ptr, ec] = std::from_chars(v->data(), last, run.seed);
    if (ec != std::errc{} || ptr != last) throw ConfigParseError("key 'seed': not an integer: '" + *v + "'");
  }

  field("U_a", c.forcing.wind, FieldShape::vector);
  field("U_w", c.forcing.current, FieldShape::vector);
  field("H0", c.forcing.surface_height, FieldShape::scalar);
  omega("U_a_omega", c.forcing.wind);
  omega("U_w_omega", c.forcing.current);
  omega("H0_omega", c.forcing.surface_height);

  // Default random data follows N down when N is small.
  for (auto* spec : {&c.initial.velocity, &c.initial.stress})
    if (spec->kind == FieldSpec::Kind::random) spec->max_mode = std::min(spec->max_mode, run.modes);
  field("u0", c.initial.velocity, FieldShape::vector);
  field("sigma0", c.initial.stress, FieldShape::stress);
  field("antisym0", c.initial.antisym, FieldShape::scalar);

  for (const auto& [key, value] : entries)
    if (!used.count(key)) throw ConfigParseError("unknown key '" + key + "'");

  c.validate();
  return c;
}

Config load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigParseError("cannot open config file '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string serialize_config(const Config& c) {
  std::ostringstream out;
  const auto& ph = c.physical;
  out << "# physical parameters\n";
  out << "P = " << format_double(ph.P) << '\n';
  out << "E = " << format_double(ph.E) << '\n';
  out << "c_a = " << format_double(ph.c_a) << '\n';
  out << "c_w = " << format_double(ph.c_w) << '\n';
  out << "rho_a = " << format_double(ph.rho_a) << '\n';
  out << "rho_w = " << format_double(ph.rho_w) << '\n';
  out << "phi_rad = " << format_double(ph.phi) << '\n';
  out << "theta_rad = " << format_double(ph.theta) << '\n';
  out << "Omega = " << format_double(ph.Omega) << '\n';
  out << "g = " << format_double(ph.g) << '\n';
  out << "# regularisation\n";
  out << "alpha = " << format_double(c.regularization.alpha) << '\n';
  out << "beta = " << format_double(c.regularization.beta) << '\n';
  out << "delta = " << format_double(c.regularization.delta) << '\n';
  out << "epsilon = " << format_double(c.regularization.epsilon) << '\n';
  out << "# model variant\n";
  out << "advection = " << (c.variant.advection ? "true" : "false") << '\n';
  out << "biharmonic = " << (c.variant.voigt_biharmonic ? "true" : "false") << '\n';
  out << "full_stress = " << (c.variant.full_stress ? "true" : "false") << '\n';
  out << "inject_fault = " << (c.variant.fault == Fault::drag_sign ? "drag_sign" : "none") << '\n';
  out << "# run\n";
  out << "N = " << c.run.modes << '\n';
  out << "M = " << c.run.points << '\n';
  out << "t_final = " << format_double(c.run.t_final) << '\n';
  out << "dt = " << format_double(c.run.dt) << '\n';
  out << "output_every = " << c.run.output_every << '\n';
  out << "seed = " << c.run.seed << '\n';
  out << "threads = " << c.run.threads << '\n';
  out << "# forcing\n";
  out << "U_a = " << format_field(c.forcing.wind, FieldShape::vector) << '\n';
  out << "U_w = " << format_field(c.forcing.current, FieldShape::vector) << '\n';
  out << "H0 = " << format_field(c.forcing.surface_height, FieldShape::scalar) << '\n';
  if (c.forcing.wind.omega) out << "U_a_omega = " << format_double(*c.forcing.wind.omega) << '\n';
  if (c.forcing.current.omega) out << "U_w_omega = " << format_double(*c.forcing.current.omega) << '\n';
  if (c.forcing.surface_height.omega) out << "H0_omega = " << format_double(*c.forcing.surface_height.omega) << '\n';
  out << "# initial data\n";
  out << "u0 = " << format_field(c.initial.velocity, FieldShape::vector) << '\n';
  out << "sigma0 = " << format_field(c.initial.stress, FieldShape::stress) << '\n';
  out << "antisym0 = " << format_field(c.initial.antisym, FieldShape::scalar) << '\n';
  return out.str();
}

}  // namespace kvevp
