#pragma once
#include "bcsgp/bcs/bcs.hpp"
#include "bcsgp/gp/gp.hpp"
#include "bcsgp/twobody/twobody.hpp"
#include <json.hpp>
#include <string>
#include <vector>

namespace bcsgp::cli {

using nlohmann::json;

/// The complete configuration tree with every default filled in. It doubles as
/// the schema: a user key must exist here and match the type of its default.
json default_config();

/// Parses JSON text, merges it over the defaults and validates the result.
/// `origin` names the source in error messages.
json load_config_text(const std::string &text, const std::string &origin);
json load_config(const std::string &path);

/// Applies "a.b.c=value"; the value is read as JSON when it parses, otherwise
/// as a string. Only the key and the type are checked; call decode() after
/// the last override.
void apply_override(json &cfg, const std::string &assignment);

/// Decoded, range-checked settings.
struct Settings {
  numerics::Interaction V;
  bool tune_depth{true};
  double target_E0{1.0};
  numerics::Trap W;
  double h{0.3};
  double D_offset{0.5};
  twobody::TwoBodyOptions twobody{};
  double trap_r_max{8.0};
  std::size_t trap_n{8000};
  gp::GPOptions gp{};
  double admissibility_delta{1e-9};
  bcs::MCOptions mc{};
  std::vector<double> sweep_h;
  std::vector<double> mu_c_h;
  double bracket_lo{0.0}, bracket_hi{0.5};
  double bracket_width{1e-3};
  std::vector<double> scan_offsets;
  std::uint64_t verify_samples{200000};
  bool write_csv{true};
};

Settings decode(const json &cfg);

} // namespace bcsgp::cli
