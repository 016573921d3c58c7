#include "bcsgp/cli/commands.hpp"
#include <fstream>
#include <random>
#include <sstream>

namespace bcsgp::cli {

std::vector<std::string> energy_columns() {
  return {"h", "E_bcs", "E_gp", "residual", "residual_stderr", "lambda", "s1", "D_c"};
}

namespace {
std::string quote(const std::string &field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos)
    return field;
  std::string s = "\"";
  for (char c : field) {
    if (c == '"')
      s += '"';
    s += c;
  }
  return s + "\"";
}
} // namespace

std::string to_csv(const Table &t) {
  std::ostringstream os;
  auto line = [&](const std::vector<std::string> &v) {
    for (std::size_t i = 0; i < v.size(); ++i)
      os << (i ? "," : "") << quote(v[i]);
    os << "\r\n";
  };
  line(t.header);
  for (const auto &r : t.rows)
    line(r);
  return os.str();
}

void write_atomic(const std::filesystem::path &path, const std::string &content) {
  namespace fs = std::filesystem;
  if (path.has_parent_path())
    fs::create_directories(path.parent_path());
  std::random_device rd;
  auto tmp = path;
  tmp += ".tmp." + std::to_string(rd());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
      throw std::runtime_error("cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out)
      throw std::runtime_error("write to '" + tmp.string() + "' failed");
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw std::runtime_error("cannot rename onto '" + path.string() + "': " + ec.message());
  }
}

json make_report(const std::string &name, const json &cfg, const Outcome &out) {
  static const char *status[] = {"ok", "validation_failure", "non_convergence"};
  json r;
  r["tool"] = "bcsgp";
  r["version"] = k_version;
  r["subcommand"] = name;
  r["status"] = status[out.exit_code];
  r["exit_code"] = out.exit_code;
  r["seed"] = cfg["mc"]["seed"];
  r["threads"] = cfg["mc"]["threads"];
  r["config"] = cfg;
  r["warnings"] = out.warnings;
  r["result"] = out.result;
  r["error"] = out.error;
  return r;
}

int run(const std::string &name, const json &cfg, const std::filesystem::path &out_dir,
        std::ostream &log) {
  Outcome out = run_subcommand(name, cfg, log);
  const auto stem = out_dir / name;
  write_atomic(stem.string() + ".json", make_report(name, cfg, out).dump(2) + "\n");
  if (cfg["output"]["csv"].get<bool>() && !out.table.header.empty())
    write_atomic(stem.string() + ".csv", to_csv(out.table));
  return out.exit_code;
}

} // namespace bcsgp::cli
