#include "bcsgp/cli/config.hpp"
#include <fstream>
#include <sstream>

namespace bcsgp::cli {

json default_config() {
  return json::parse(R"({
  "model": {
    "interaction": {"kind": "gaussian_well", "depth": 0.0, "range": 1.0, "target_E0": 1.0},
    "trap": {"kind": "harmonic", "coefficient": 1.0, "beta": 2.0},
    "h": 0.3,
    "D_offset": 0.5
  },
  "grids": {
    "relative": {"spacing": 0.001, "r_max": 0.0, "decay_lengths": 20.0},
    "trap": {"r_max": 8.0, "n": 8000}
  },
  "twobody": {"epsilon": 0.5, "l_max": 4, "beta": 2.0, "require_gap": true},
  "solver": {
    "gp": {"grad_tol": 1e-8, "max_iterations": 500},
    "admissibility_delta": 1e-9
  },
  "mc": {"samples": 1000000, "seed": 1, "threads": 1},
  "sweep": {"h_list": [0.5, 0.4, 0.3, 0.2, 0.15]},
  "mu_c": {"h_list": [0.4, 0.3, 0.2], "bracket": [0.0, 0.5], "width": 0.001},
  "gp": {"scan_offsets": [-0.1, 0.05, 0.5]},
  "verify": {"mc_samples": 200000},
  "output": {"csv": true}
})");
}

namespace {
std::string line_col(const std::string &text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

// First line on which the quoted key appears, for validation messages.
std::string key_position(const std::string &text, const std::string &key) {
  const auto pos = text.find("\"" + key + "\"");
  if (pos == std::string::npos)
    return "";
  return " (" + line_col(text, pos) + ")";
}

bool same_kind(const json &def, const json &v) {
  if (def.is_number())
    return v.is_number();
  return def.type() == v.type();
}

void merge(json &into, const json &user, const std::string &path, const std::string &text,
           const std::string &origin) {
  if (!user.is_object())
    throw ConfigError(origin + ": '" + (path.empty() ? "<root>" : path) +
                      "' must be an object");
  for (auto it = user.begin(); it != user.end(); ++it) {
    const std::string key = path.empty() ? it.key() : path + "." + it.key();
    if (!into.contains(it.key()))
      throw ConfigError(origin + ": unknown key '" + key + "'" + key_position(text, it.key()));
    json &slot = into[it.key()];
    if (!same_kind(slot, it.value()))
      throw ConfigError(origin + ": key '" + key + "' expects " + slot.type_name() +
                        ", got " + it.value().type_name() + key_position(text, it.key()));
    if (slot.is_object())
      merge(slot, it.value(), key, text, origin);
    else
      slot = it.value();
  }
}
} // namespace

json load_config_text(const std::string &text, const std::string &origin) {
  json user;
  try {
    user = json::parse(text);
  } catch (const json::parse_error &e) {
    std::string msg = e.what();
    if (const auto p = msg.find("syntax error"); p != std::string::npos)
      msg = msg.substr(p);
    throw ConfigError(origin + ": parse error at " + line_col(text, e.byte ? e.byte - 1 : 0) +
                      ": " + msg);
  }
  json cfg = default_config();
  merge(cfg, user, "", text, origin);
  try {
    decode(cfg);
  } catch (const ConfigError &e) {
    std::string msg = e.what();
    std::string key = msg.substr(0, msg.find_first_of(" :"));
    key = key.substr(key.rfind('.') + 1);
    throw ConfigError(origin + ": " + msg + key_position(text, key));
  }
  return cfg;
}

json load_config(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_config_text(ss.str(), path);
}

void apply_override(json &cfg, const std::string &assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
    throw ConfigError("override '" + assignment + "' is not of the form key=value");
  const std::string key = assignment.substr(0, eq), raw = assignment.substr(eq + 1);
  json value;
  try {
    value = json::parse(raw);
  } catch (const json::parse_error &) {
    value = raw;
  }
  json *node = &cfg;
  std::string path;
  std::size_t start = 0;
  for (;;) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? dot : dot - start);
    path += (path.empty() ? "" : ".") + part;
    if (!node->is_object() || !node->contains(part))
      throw ConfigError("override: unknown key '" + path + "'");
    node = &(*node)[part];
    if (dot == std::string::npos)
      break;
    start = dot + 1;
  }
  if (!same_kind(*node, value))
    throw ConfigError("override: key '" + key + "' expects " + node->type_name() + ", got " +
                      value.type_name());
  if (node->is_object())
    throw ConfigError("override: key '" + key + "' names a section, not a value");
  *node = value;
}

namespace {
void require(bool ok, const std::string &msg) {
  if (!ok)
    throw ConfigError(msg);
}

std::vector<double> h_list(const json &a, const std::string &key) {
  std::vector<double> v;
  for (const auto &x : a) {
    require(x.is_number(), key + ": entries must be numbers");
    const double h = x.get<double>();
    require(h > 0.0 && h < 1.0, key + ": h = " + std::to_string(h) + " outside (0, 1)");
    require(v.empty() || h < v.back(), key + ": values must be strictly decreasing");
    v.push_back(h);
  }
  require(!v.empty(), key + ": must not be empty");
  return v;
}

std::uint64_t count(const json &v, const std::string &key, std::uint64_t min) {
  require(v.is_number_integer() && v.get<std::int64_t>() >= static_cast<std::int64_t>(min),
          key + " must be an integer >= " + std::to_string(min));
  return v.get<std::uint64_t>();
}
} // namespace

Settings decode(const json &c) {
  Settings s;
  const auto &mi = c["model"]["interaction"];
  const auto kind = mi["kind"].get<std::string>();
  const double depth = mi["depth"].get<double>(), range = mi["range"].get<double>();
  s.target_E0 = mi["target_E0"].get<double>();
  require(range > 0.0, "model.interaction.range must be positive");
  require(depth >= 0.0, "model.interaction.depth must be >= 0 (0 tunes the depth)");
  s.tune_depth = depth == 0.0;
  if (kind == "gaussian_well") {
    s.V = numerics::Interaction::gaussian_well(s.tune_depth ? 1.0 : depth, range);
    require(s.target_E0 > 0.0, "model.interaction.target_E0 must be positive");
  } else if (kind == "spherical_well") {
    require(!s.tune_depth, "model.interaction.depth is required for a spherical well");
    s.V = numerics::Interaction::spherical_well(depth, range);
  } else {
    throw ConfigError("model.interaction.kind must be 'gaussian_well' or 'spherical_well'");
  }

  const auto &mt = c["model"]["trap"];
  const auto tk = mt["kind"].get<std::string>();
  const double coef = mt["coefficient"].get<double>();
  require(coef > 0.0, "model.trap.coefficient must be positive");
  if (tk == "harmonic")
    s.W = numerics::Trap::harmonic(coef);
  else if (tk == "power")
    s.W = numerics::Trap::power(mt["beta"].get<double>(), coef);
  else
    throw ConfigError("model.trap.kind must be 'harmonic' or 'power'");
  s.W.validate();

  s.h = c["model"]["h"].get<double>();
  require(s.h > 0.0 && s.h < 1.0, "model.h must lie in (0, 1), got " + std::to_string(s.h));
  s.D_offset = c["model"]["D_offset"].get<double>();

  const auto &gr = c["grids"]["relative"];
  s.twobody.grid.spacing = gr["spacing"].get<double>();
  s.twobody.grid.r_max = gr["r_max"].get<double>();
  s.twobody.grid.decay_lengths = gr["decay_lengths"].get<double>();
  require(s.twobody.grid.spacing > 0.0, "grids.relative.spacing must be positive");
  require(s.twobody.grid.r_max >= 0.0, "grids.relative.r_max must be >= 0 (0 is adaptive)");
  require(s.twobody.grid.decay_lengths > 0.0, "grids.relative.decay_lengths must be positive");
  s.trap_r_max = c["grids"]["trap"]["r_max"].get<double>();
  s.trap_n = count(c["grids"]["trap"]["n"], "grids.trap.n", 100);
  require(s.trap_r_max > 0.0, "grids.trap.r_max must be positive");

  const auto &tb = c["twobody"];
  s.twobody.epsilon = tb["epsilon"].get<double>();
  require(s.twobody.epsilon > 0.0 && s.twobody.epsilon < 1.0, "twobody.epsilon must lie in (0, 1)");
  s.twobody.l_max = static_cast<int>(count(tb["l_max"], "twobody.l_max", 0));
  s.twobody.beta = tb["beta"].get<double>();
  s.twobody.require_gap = tb["require_gap"].get<bool>();

  s.gp.grad_tol = c["solver"]["gp"]["grad_tol"].get<double>();
  require(s.gp.grad_tol > 0.0, "solver.gp.grad_tol must be positive");
  s.gp.max_iterations = static_cast<int>(count(c["solver"]["gp"]["max_iterations"],
                                               "solver.gp.max_iterations", 1));
  s.admissibility_delta = c["solver"]["admissibility_delta"].get<double>();
  require(s.admissibility_delta >= 0.0, "solver.admissibility_delta must be >= 0");

  s.mc.samples = count(c["mc"]["samples"], "mc.samples", 2);
  s.mc.seed = count(c["mc"]["seed"], "mc.seed", 0);
  s.mc.threads = static_cast<int>(count(c["mc"]["threads"], "mc.threads", 1));

  s.sweep_h = h_list(c["sweep"]["h_list"], "sweep.h_list");
  s.mu_c_h = h_list(c["mu_c"]["h_list"], "mu_c.h_list");
  const auto &br = c["mu_c"]["bracket"];
  require(br.size() == 2 && br[0].is_number() && br[1].is_number(),
          "mu_c.bracket must be [lo, hi] offsets from E_W");
  s.bracket_lo = br[0].get<double>();
  s.bracket_hi = br[1].get<double>();
  require(s.bracket_lo < s.bracket_hi, "mu_c.bracket must satisfy lo < hi");
  s.bracket_width = c["mu_c"]["width"].get<double>();
  require(s.bracket_width > 0.0, "mu_c.width must be positive");
  for (const auto &x : c["gp"]["scan_offsets"]) {
    require(x.is_number(), "gp.scan_offsets: entries must be numbers");
    s.scan_offsets.push_back(x.get<double>());
  }
  s.verify_samples = count(c["verify"]["mc_samples"], "verify.mc_samples", 2);
  s.write_csv = c["output"]["csv"].get<bool>();
  return s;
}

} // namespace bcsgp::cli
