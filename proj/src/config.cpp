#include "ferro/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "ferro/norms.hpp"
#include "ferro/random_field.hpp"

namespace ferro {

namespace {
using nlohmann::json;

// Walks one JSON object, remembering the dotted path for error messages and
// rejecting keys nobody asked for.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
  }

  std::string key(const std::string& k) const { return path_.empty() ? k : path_ + "." + k; }
  bool has(const std::string& k) {
    seen_.insert(k);
    return j_.contains(k);
  }
  const json& raw(const std::string& k) { return j_.at(k); }

  void number(const std::string& k, double& out) {
    if (!has(k)) return;
    const json& v = j_.at(k);
    if (!v.is_number()) throw ConfigError(key(k), "expected a number");
    out = v.get<double>();
    if (!std::isfinite(out)) throw ConfigError(key(k), "must be finite");
  }
  void integer(const std::string& k, int& out) {
    if (!has(k)) return;
    const json& v = j_.at(k);
    if (!v.is_number_integer()) throw ConfigError(key(k), "expected an integer");
    out = v.get<int>();
  }
  void unsigned_integer(const std::string& k, std::uint64_t& out) {
    if (!has(k)) return;
    const json& v = j_.at(k);
    if (!v.is_number_integer() || v.get<long long>() < 0) {
      throw ConfigError(key(k), "expected a non-negative integer");
    }
    out = v.get<std::uint64_t>();
  }
  void boolean(const std::string& k, bool& out) {
    if (!has(k)) return;
    if (!j_.at(k).is_boolean()) throw ConfigError(key(k), "expected true or false");
    out = j_.at(k).get<bool>();
  }
  void string(const std::string& k, std::string& out) {
    if (!has(k)) return;
    if (!j_.at(k).is_string()) throw ConfigError(key(k), "expected a string");
    out = j_.at(k).get<std::string>();
  }
  void numbers(const std::string& k, std::vector<double>& out) {
    if (!has(k)) return;
    const json& v = j_.at(k);
    if (!v.is_array()) throw ConfigError(key(k), "expected an array of numbers");
    out.clear();
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number()) throw ConfigError(key(k) + "[" + std::to_string(i) + "]", "expected a number");
      out.push_back(v[i].get<double>());
    }
  }
  void strings(const std::string& k, std::vector<std::string>& out) {
    if (!has(k)) return;
    const json& v = j_.at(k);
    if (!v.is_array()) throw ConfigError(key(k), "expected an array of strings");
    out.clear();
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_string()) throw ConfigError(key(k) + "[" + std::to_string(i) + "]", "expected a string");
      out.push_back(v[i].get<std::string>());
    }
  }

  /// Call after reading: any key not asked for is a typo.
  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key())) throw ConfigError(key(it.key()), "unknown key");
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

const std::set<std::string>& experiment_names() {
  static const std::set<std::string> names{
      "parabolic_smoothing", "multiplier_decay",   "damping_estimate",      "product_rule",
      "limit_identity",      "picard_contraction", "etd_order",             "smallness_diagnostics",
      "energy_bound"};
  return names;
}

void read_component(Section& parent, const std::string& name, ComponentInit& c) {
  if (!parent.has(name)) return;
  Section s(parent.raw(name), parent.key(name));
  s.string("preset", c.preset);
  s.unsigned_integer("seed", c.seed);
  s.number("s_decay", c.s_decay);
  s.number("amplitude", c.amplitude);
  s.finish();
}

ForceMode read_mode(const json& j, const std::string& path) {
  Section s(j, path);
  ForceMode m;
  if (!s.has("k")) throw ConfigError(s.key("k"), "missing");
  const json& k = s.raw("k");
  if (!k.is_array() || k.size() != 3) throw ConfigError(s.key("k"), "expected three integers");
  for (int d = 0; d < 3; ++d) {
    if (!k[d].is_number_integer()) throw ConfigError(s.key("k"), "expected three integers");
    m.k[d] = k[d].get<int>();
  }
  if (!s.has("amplitude")) throw ConfigError(s.key("amplitude"), "missing");
  const json& a = s.raw("amplitude");
  if (!a.is_array() || a.size() != 2 || !a[0].is_number() || !a[1].is_number()) {
    throw ConfigError(s.key("amplitude"), "expected [re, im]");
  }
  m.amplitude = Complex(a[0].get<double>(), a[1].get<double>());
  if (s.has("envelope")) {
    Section e(s.raw("envelope"), s.key("envelope"));
    std::string kind = "constant";
    e.string("kind", kind);
    if (kind == "constant") {
      m.envelope = Envelope::constant();
    } else if (kind == "exp") {
      double rate = 0.0;
      e.number("rate", rate);
      m.envelope = Envelope::exponential(rate);
    } else if (kind == "sin") {
      double omega = 0.0, phase = 0.0;
      e.number("omega", omega);
      e.number("phase", phase);
      m.envelope = Envelope::sinusoidal(omega, phase);
    } else {
      throw ConfigError(e.key("kind"), "expected constant, exp or sin, got \"" + kind + "\"");
    }
    e.finish();
  }
  s.finish();
  return m;
}

std::string envelope_kind(const Envelope& e) {
  switch (e.kind) {
    case Envelope::Kind::exponential: return "exp";
    case Envelope::Kind::sinusoidal: return "sin";
    default: return "constant";
  }
}

void positive(double v, const std::string& key) {
  if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(key, "must be a positive finite number");
}

void check_component(const ComponentInit& c, const std::string& key, bool velocity) {
  if (c.preset == "zero") return;
  if (c.preset == "taylor-green" && !velocity) {
    throw ConfigError(key + ".preset", "taylor-green is a velocity preset");
  }
  if (c.preset != "taylor-green" && c.preset != "random-band") {
    throw ConfigError(key + ".preset", "expected zero, taylor-green or random-band, got \"" + c.preset + "\"");
  }
  if (!(c.amplitude >= 0.0) || !std::isfinite(c.amplitude)) {
    throw ConfigError(key + ".amplitude", "must be a non-negative finite number");
  }
  if (!std::isfinite(c.s_decay)) throw ConfigError(key + ".s_decay", "must be finite");
}

// Rescale v to the requested Hdot^{1/2} norm.
VectorField normalized(VectorField v, double amplitude) {
  const double norm = hs_norm(v, 0.5);
  if (norm > 0.0) v *= amplitude / norm;
  return v;
}

VectorField component_field(const ComponentInit& c, std::uint64_t seed, const GridPtr& g, Sector sector) {
  if (c.preset == "zero" || c.amplitude == 0.0) return VectorField(g);
  if (c.preset == "taylor-green") {
    const double k = 2.0 * std::numbers::pi / g->box_length();
    return normalized(sample_vector(g,
                                    [k](const std::array<double, 3>& x) {
                                      const double a = k * x[0], b = k * x[1], z = k * x[2];
                                      return std::array<double, 3>{std::sin(a) * std::cos(b) * std::cos(z),
                                                                   -std::cos(a) * std::sin(b) * std::cos(z),
                                                                   0.0};
                                    }),
                      c.amplitude);
  }
  return random_band(g, seed, c.s_decay, c.amplitude, sector);
}

Json component_json(const ComponentInit& c) {
  return {{"preset", c.preset}, {"seed", c.seed}, {"s_decay", c.s_decay}, {"amplitude", c.amplitude}};
}
}  // namespace

RunConfig parse_config(const nlohmann::json& j) {
  RunConfig c;
  Section root(j, "");
  if (!root.has("version")) throw ConfigError("version", "missing (expected " + std::to_string(kConfigVersion) + ")");
  root.integer("version", c.version);
  if (c.version != kConfigVersion) {
    throw ConfigError("version", "unsupported version " + std::to_string(c.version));
  }
  if (root.has("grid")) {
    Section s(root.raw("grid"), "grid");
    s.integer("n", c.n);
    s.number("box_length", c.box_length);
    s.boolean("dealias", c.dealias);
    s.finish();
  }
  if (root.has("params")) {
    Section s(root.raw("params"), "params");
    s.number("nu", c.params.nu);
    s.number("sigma", c.params.sigma);
    s.number("tau", c.params.tau);
    s.number("chi0", c.params.chi0);
    s.finish();
  }
  if (root.has("time")) {
    Section s(root.raw("time"), "time");
    s.number("t_end", c.time.t_end);
    s.integer("n_steps", c.time.n_steps);
    s.number("eps_fraction", c.eps_fraction);
    s.finish();
  }
  if (root.has("initial")) {
    Section s(root.raw("initial"), "initial");
    read_component(s, "u", c.u);
    read_component(s, "m", c.m);
    read_component(s, "r", c.r);
    s.finish();
  }
  if (root.has("external_field")) {
    Section s(root.raw("external_field"), "external_field");
    if (s.has("modes")) {
      const json& modes = s.raw("modes");
      if (!modes.is_array()) throw ConfigError("external_field.modes", "expected an array");
      for (std::size_t i = 0; i < modes.size(); ++i) {
        c.field_modes.push_back(read_mode(modes[i], "external_field.modes[" + std::to_string(i) + "]"));
      }
    }
    s.finish();
  }
  if (root.has("experiment")) {
    Section s(root.raw("experiment"), "experiment");
    auto& e = c.experiment;
    s.numbers("tau_list", e.tau_list);
    s.integer("trials", e.trials);
    s.strings("select", e.select);
    s.number("h_target", e.h_target);
    s.number("min_reduction", e.min_reduction);
    s.number("gamma", e.gamma);
    s.number("mu", e.mu);
    s.number("picard_u0_norm", e.picard_u0_norm);
    s.number("picard_t_end", e.picard_t_end);
    s.integer("picard_steps", e.picard_steps);
    s.number("etd_t_end", e.etd_t_end);
    s.integer("etd_steps", e.etd_steps);
    s.finish();
  }
  if (root.has("output")) {
    Section s(root.raw("output"), "output");
    s.string("dir", c.output_dir);
    s.integer("checkpoint_every", c.checkpoint_every);
    s.finish();
  }
  root.unsigned_integer("seed", c.seed);
  root.finish();
  validate(c);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config", std::string("not valid JSON: ") + e.what());
  }
  return parse_config(j);
}

void validate(const RunConfig& c) {
  if (c.n < 4 || c.n % 2 != 0) throw ConfigError("grid.n", "must be an even integer >= 4, got " + std::to_string(c.n));
  positive(c.box_length, "grid.box_length");
  positive(c.params.nu, "params.nu");
  positive(c.params.sigma, "params.sigma");
  positive(c.params.tau, "params.tau");
  if (!(c.params.chi0 >= 0.0) || !std::isfinite(c.params.chi0)) {
    throw ConfigError("params.chi0", "must be a non-negative finite number");
  }
  positive(c.time.t_end, "time.t_end");
  if (c.time.n_steps < 1) throw ConfigError("time.n_steps", "must be a positive integer");
  if (!(c.eps_fraction >= 0.0 && c.eps_fraction < 1.0)) {
    throw ConfigError("time.eps_fraction", "must lie in [0, 1)");
  }
  check_component(c.u, "initial.u", true);
  check_component(c.m, "initial.m", false);
  check_component(c.r, "initial.r", false);

  const auto& e = c.experiment;
  if (e.tau_list.empty()) throw ConfigError("experiment.tau_list", "must not be empty");
  for (std::size_t i = 0; i < e.tau_list.size(); ++i) {
    positive(e.tau_list[i], "experiment.tau_list[" + std::to_string(i) + "]");
    if (i > 0 && !(e.tau_list[i] < e.tau_list[i - 1])) {
      throw ConfigError("experiment.tau_list", "must be strictly decreasing");
    }
  }
  if (e.trials < 20) throw ConfigError("experiment.trials", "must be at least 20, got " + std::to_string(e.trials));
  for (std::size_t i = 0; i < e.select.size(); ++i) {
    if (!experiment_names().count(e.select[i])) {
      throw ConfigError("experiment.select[" + std::to_string(i) + "]", "unknown experiment \"" + e.select[i] + "\"");
    }
  }
  if (!(e.h_target >= 0.0)) throw ConfigError("experiment.h_target", "must be non-negative");
  positive(e.min_reduction, "experiment.min_reduction");
  positive(e.gamma, "experiment.gamma");
  positive(e.mu, "experiment.mu");
  positive(e.picard_u0_norm, "experiment.picard_u0_norm");
  positive(e.picard_t_end, "experiment.picard_t_end");
  if (e.picard_steps < 1) throw ConfigError("experiment.picard_steps", "must be a positive integer");
  positive(e.etd_t_end, "experiment.etd_t_end");
  if (e.etd_steps < 1) throw ConfigError("experiment.etd_steps", "must be a positive integer");
  if (c.output_dir.empty()) throw ConfigError("output.dir", "must not be empty");
  if (c.checkpoint_every < 0) throw ConfigError("output.checkpoint_every", "must be non-negative");

  // Mode validity depends on the grid; reuse the field's own checks.
  const GridPtr g = make_grid(c);
  for (std::size_t i = 0; i < c.field_modes.size(); ++i) {
    try {
      ExternalField probe(g, {c.field_modes[i]});
    } catch (const std::invalid_argument& err) {
      throw ConfigError("external_field.modes[" + std::to_string(i) + "]", err.what());
    }
  }
}

nlohmann::ordered_json config_json(const RunConfig& c) {
  Json modes = Json::array();
  for (const auto& m : c.field_modes) {
    Json env = {{"kind", envelope_kind(m.envelope)}};
    if (m.envelope.kind == Envelope::Kind::exponential) env["rate"] = m.envelope.rate;
    if (m.envelope.kind == Envelope::Kind::sinusoidal) {
      env["omega"] = m.envelope.omega;
      env["phase"] = m.envelope.phase;
    }
    modes.push_back({{"k", m.k}, {"amplitude", {m.amplitude.real(), m.amplitude.imag()}}, {"envelope", env}});
  }
  const auto& e = c.experiment;
  return {
      {"version", c.version},
      {"grid", {{"n", c.n}, {"box_length", c.box_length}, {"dealias", c.dealias}}},
      {"params", {{"nu", c.params.nu}, {"sigma", c.params.sigma}, {"tau", c.params.tau}, {"chi0", c.params.chi0}}},
      {"time", {{"t_end", c.time.t_end}, {"n_steps", c.time.n_steps}, {"eps_fraction", c.eps_fraction}}},
      {"initial", {{"u", component_json(c.u)}, {"m", component_json(c.m)}, {"r", component_json(c.r)}}},
      {"external_field", {{"modes", modes}}},
      {"experiment",
       {{"tau_list", e.tau_list},
        {"trials", e.trials},
        {"select", e.select},
        {"h_target", e.h_target},
        {"min_reduction", e.min_reduction},
        {"gamma", e.gamma},
        {"mu", e.mu},
        {"picard_u0_norm", e.picard_u0_norm},
        {"picard_t_end", e.picard_t_end},
        {"picard_steps", e.picard_steps},
        {"etd_t_end", e.etd_t_end},
        {"etd_steps", e.etd_steps}}},
      {"output", {{"dir", c.output_dir}, {"checkpoint_every", c.checkpoint_every}}},
      {"seed", c.seed}};
}

GridPtr make_grid(const RunConfig& c) { return make_grid(c.n, c.box_length, c.dealias); }

State initial_state(const RunConfig& c, const GridPtr& g) {
  // Component seeds are offsets from the run seed, so --seed moves all of them.
  auto seed = [&](const ComponentInit& ci, int index) { return 1000 * c.seed + 3 * ci.seed + index; };
  return State(component_field(c.u, seed(c.u, 0), g, Sector::solenoidal),
               component_field(c.m, seed(c.m, 1), g, Sector::solenoidal),
               component_field(c.r, seed(c.r, 2), g, Sector::gradient));
}

ExternalField external_field(const RunConfig& c, const GridPtr& g) {
  if (c.field_modes.empty()) return ExternalField(g);
  return ExternalField(g, c.field_modes);
}

}  // namespace ferro
