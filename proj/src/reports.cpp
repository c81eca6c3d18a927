#include "steadylab/reports.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "steadylab/errors.hpp"

namespace steadylab {
namespace {

std::string fmt17(double x) {
  if (!std::isfinite(x)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  std::string s(buf);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

void dump(std::ostringstream& os, const nlohmann::json& j, int indent, int depth) {
  const std::string pad = indent > 0 ? std::string(static_cast<std::size_t>(indent * (depth + 1)), ' ') : "";
  const std::string close = indent > 0 ? std::string(static_cast<std::size_t>(indent * depth), ' ') : "";
  const char* nl = indent > 0 ? "\n" : "";
  if (j.is_number_float()) {
    os << fmt17(j.get<double>());
  } else if (j.is_object()) {
    if (j.empty()) { os << "{}"; return; }
    os << "{" << nl;
    bool first = true;
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (!first) os << "," << nl;
      first = false;
      os << pad << nlohmann::json(it.key()).dump() << (indent > 0 ? ": " : ":");
      dump(os, it.value(), indent, depth + 1);
    }
    os << nl << close << "}";
  } else if (j.is_array()) {
    if (j.empty()) { os << "[]"; return; }
    os << "[" << nl;
    for (std::size_t i = 0; i < j.size(); ++i) {
      if (i) os << "," << nl;
      os << pad;
      dump(os, j[i], indent, depth + 1);
    }
    os << nl << close << "]";
  } else {
    os << j.dump();
  }
}

}  // namespace

std::string dump_json(const nlohmann::json& j, int indent) {
  std::ostringstream os;
  dump(os, j, indent, 0);
  os << "\n";
  return os.str();
}

nlohmann::json envelope(const std::string& command, const RunConfig& cfg, nlohmann::json result) {
  return {{"command", command}, {"config", to_json(cfg)}, {"result", std::move(result)}};
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("write failed for " + path.string());
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  write_text(path, dump_json(j));
}

void write_two_column(const std::filesystem::path& path, const std::vector<double>& x,
                      const std::vector<double>& y) {
  if (x.size() != y.size()) throw InvalidArgument("plot columns differ in length");
  std::ostringstream os;
  for (std::size_t i = 0; i < x.size(); ++i) os << fmt17(x[i]) << ' ' << fmt17(y[i]) << '\n';
  write_text(path, os.str());
}

}  // namespace steadylab
