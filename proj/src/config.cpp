#include "steadylab/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "steadylab/errors.hpp"
#include "steadylab/spectral.hpp"

namespace steadylab {
namespace pt = boost::property_tree;

namespace {

const std::map<std::string, std::set<std::string>>& allowed_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"model", {"equation", "preset"}},
      {"coefficients",
       {"a", "b", "kappa", "mu", "alpha", "beta", "m", "n", "a1", "a2", "a3", "a4", "a5", "b1",
        "b2", "b3", "b4", "b5", "b6", "b7", "b8", "b9", "b10", "b11", "b12"}},
      {"grid", {"L", "N"}},
      {"time", {"t_end", "dt", "snapshot_every"}},
      {"initial",
       {"kind", "amplitude", "width", "center", "offset", "phase", "mode", "c3", "c4", "omega",
        "values", "path"}},
      {"run", {"seed", "bumps"}},
      {"verify", {"c3", "c4"}},
  };
  return keys;
}

const std::set<std::string> kRkrlwKeys = {"a", "b", "kappa", "mu", "alpha", "beta", "m"};

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string clean_value(std::string v) {
  for (const char* mark : {" #", "\t#", " ;", "\t;"}) {
    const auto p = v.find(mark);
    if (p != std::string::npos) v = v.substr(0, p);
  }
  v = trim(v);
  if (v.size() >= 2 && (v.front() == '"' || v.front() == '\'') && v.back() == v.front()) {
    v = v.substr(1, v.size() - 2);
  }
  return v;
}

class Reader {
 public:
  Reader(pt::ptree tree, std::map<std::string, int> lines, std::string source)
      : tree_(std::move(tree)), lines_(std::move(lines)), source_(std::move(source)) {}

  [[noreturn]] void fail(const std::string& field, const std::string& msg) const {
    std::ostringstream os;
    os << source_;
    const auto it = lines_.find(field);
    if (it != lines_.end() && it->second > 0) os << ":" << it->second;
    os << ": field '" << field << "': " << msg;
    throw ConfigurationError(os.str());
  }

  void check_unknown() const {
    for (const auto& [section, sub] : tree_) {
      const auto it = allowed_keys().find(section);
      if (it == allowed_keys().end()) {
        if (!sub.data().empty() && sub.empty()) fail(section, "key outside any [section]");
        fail(section, "unknown section");
      }
      for (const auto& [key, val] : sub) {
        if (!it->second.count(key)) fail(section + "." + key, "unknown key");
      }
    }
  }

  bool has(const std::string& field) const { return tree_.get_optional<std::string>(field).has_value(); }

  std::optional<std::string> str(const std::string& field) const {
    auto v = tree_.get_optional<std::string>(field);
    if (!v) return std::nullopt;
    return clean_value(*v);
  }

  std::optional<double> num(const std::string& field) const {
    auto s = str(field);
    if (!s) return std::nullopt;
    double v = 0.0;
    if (!eval_number(*s, v)) fail(field, "expected a number, got '" + *s + "'");
    if (!std::isfinite(v)) fail(field, "must be finite");
    return v;
  }

  std::optional<long long> integer(const std::string& field) const {
    auto s = str(field);
    if (!s) return std::nullopt;
    long long v = 0;
    const auto r = std::from_chars(s->data(), s->data() + s->size(), v);
    if (r.ec != std::errc() || r.ptr != s->data() + s->size()) {
      fail(field, "expected an integer, got '" + *s + "'");
    }
    return v;
  }

  std::vector<double> list(const std::string& field) const {
    auto s = str(field);
    std::vector<double> out;
    if (!s) return out;
    std::string body = *s;
    if (!body.empty() && body.front() == '[') body = body.substr(1);
    if (!body.empty() && body.back() == ']') body.pop_back();
    std::stringstream ss(body);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      tok = trim(tok);
      if (tok.empty()) continue;
      double v = 0.0;
      if (!eval_number(tok, v)) fail(field, "bad list entry '" + tok + "'");
      out.push_back(v);
    }
    return out;
  }

 private:
  // number, pi, and products/quotients of those: "2*pi", "pi/4", "3pi/2"
  static bool eval_number(const std::string& text, double& out) {
    std::string s;
    for (char c : text) if (c != ' ') s += c;
    if (s.empty()) return false;
    double acc = 1.0;
    char op = '*';
    std::size_t i = 0;
    while (i < s.size()) {
      double term = 0.0;
      bool neg = false;
      if (s[i] == '-' || s[i] == '+') { neg = s[i] == '-'; ++i; }
      if (s.compare(i, 2, "pi") == 0) {
        term = std::numbers::pi;
        i += 2;
      } else {
        const auto r = std::from_chars(s.data() + i, s.data() + s.size(), term);
        if (r.ec != std::errc()) return false;
        i = static_cast<std::size_t>(r.ptr - s.data());
        if (s.compare(i, 2, "pi") == 0) { term *= std::numbers::pi; i += 2; }
      }
      if (neg) term = -term;
      acc = (op == '*') ? acc * term : acc / term;
      if (i == s.size()) break;
      if (s[i] != '*' && s[i] != '/') return false;
      op = s[i++];
      if (i == s.size()) return false;
    }
    out = acc;
    return true;
  }

  pt::ptree tree_;
  std::map<std::string, int> lines_;
  std::string source_;
};

std::map<std::string, int> ini_lines(const std::string& text) {
  std::map<std::string, int> lines;
  std::istringstream is(text);
  std::string line, section;
  int no = 0;
  while (std::getline(is, line)) {
    ++no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[' && t.back() == ']') {
      section = trim(t.substr(1, t.size() - 2));
      lines.emplace(section, no);
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = trim(t.substr(0, eq));
    lines.emplace(section.empty() ? key : section + "." + key, no);
  }
  return lines;
}

std::string json_scalar(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_float()) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v.get<double>());
    return buf;
  }
  return v.dump();
}

pt::ptree json_tree(const nlohmann::json& j, const std::string& source) {
  if (!j.is_object()) throw ConfigurationError(source + ": top level must be an object of sections");
  pt::ptree tree;
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!it.value().is_object()) {
      throw ConfigurationError(source + ": field '" + it.key() + "': section must be an object");
    }
    for (auto kv = it.value().begin(); kv != it.value().end(); ++kv) {
      std::string val;
      if (kv.value().is_array()) {
        for (std::size_t i = 0; i < kv.value().size(); ++i) {
          if (i) val += ",";
          val += json_scalar(kv.value()[i]);
        }
      } else if (kv.value().is_object()) {
        throw ConfigurationError(source + ": field '" + it.key() + "." + kv.key() +
                                 "': nested objects are not supported");
      } else {
        val = json_scalar(kv.value());
      }
      tree.put(pt::ptree::path_type(it.key() + "." + kv.key(), '.'), val);
    }
  }
  return tree;
}

template <class F>
void guarded(const Reader& r, const std::string& field, F&& f) {
  try {
    f();
  } catch (const Error& e) {
    r.fail(field, e.what());
  }
}

double wrap_centered(double x, double L) {
  return x - L * std::floor(x / L + 0.5);
}

std::vector<double> read_values_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigurationError("cannot open initial data file '" + path + "'");
  std::vector<double> out;
  if (std::filesystem::path(path).extension() == ".json") {
    nlohmann::json j;
    try {
      in >> j;
    } catch (const std::exception& e) {
      throw ConfigurationError("initial data file '" + path + "': " + e.what());
    }
    if (j.contains("values") && j["values"].is_array() && !j["values"].empty() &&
        j["values"][0].is_array()) {
      return j["values"].back().get<std::vector<double>>();
    }
    if (j.contains("values")) return j["values"].get<std::vector<double>>();
    throw ConfigurationError("initial data file '" + path + "' has no 'values'");
  }
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    double v = 0.0, last = 0.0;
    bool any = false;
    while (ls >> v) { last = v; any = true; }
    if (any) out.push_back(last);
  }
  return out;
}

}  // namespace

RunConfig parse_config(const std::string& text, const std::string& source) {
  pt::ptree tree;
  std::map<std::string, int> lines;
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw ConfigurationError(source + ": " + e.what());
    }
    tree = json_tree(j, source);
  } else {
    std::istringstream is(text);
    try {
      pt::ini_parser::read_ini(is, tree);
    } catch (const pt::ini_parser_error& e) {
      throw ConfigurationError(source + ":" + std::to_string(e.line()) + ": " + e.message());
    }
    lines = ini_lines(text);
  }
  const Reader r(tree, lines, source);
  r.check_unknown();

  RunConfig cfg;
  cfg.source = source;
  if (auto eq = r.str("model.equation")) {
    if (*eq != "rkrlw" && *eq != "perturbed") r.fail("model.equation", "must be rkrlw or perturbed");
    cfg.equation = *eq;
  }
  cfg.preset = r.str("model.preset");

  for (const auto& key : allowed_keys().at("coefficients")) {
    const std::string field = "coefficients." + key;
    if (!r.has(field)) continue;
    const bool rk = kRkrlwKeys.count(key) > 0;
    const bool shared = key == "m";
    if (!shared && rk != (cfg.equation == "rkrlw")) {
      r.fail(field, "not a coefficient of the " + cfg.equation + " equation");
    }
    if (key == "m" || key == "n") {
      const auto v = *r.integer(field);
      if (key == "m") { cfg.rkrlw.m = static_cast<int>(v); cfg.perturbed.m = static_cast<int>(v); }
      else cfg.perturbed.n = static_cast<int>(v);
    } else {
      set_coefficient(cfg, key, *r.num(field));
    }
  }

  if (auto v = r.num("grid.L")) cfg.L = *v;
  if (auto v = r.integer("grid.N")) {
    if (*v < 0) r.fail("grid.N", "must be positive");
    cfg.N = static_cast<std::size_t>(*v);
  }
  if (!(cfg.L > 0.0) || !std::isfinite(cfg.L)) r.fail("grid.L", "must be positive and finite");
  guarded(r, "grid.N", [&] { (void)cfg.grid(); });

  if (auto v = r.num("time.t_end")) cfg.t_end = *v;
  if (cfg.t_end < 0.0) r.fail("time.t_end", "must be non-negative");
  if (auto v = r.num("time.dt")) cfg.dt = *v;
  if (auto v = r.integer("time.snapshot_every")) {
    if (*v < 1) r.fail("time.snapshot_every", "must be at least 1");
    cfg.snapshot_every = static_cast<int>(*v);
  }

  if (cfg.equation == "rkrlw") {
    guarded(r, "coefficients", [&] { cfg.rkrlw.validate(); });
    if (cfg.preset) {
      guarded(r, "model.preset", [&] {
        const PresetMask mask = preset(*cfg.preset);
        mask.check(cfg.rkrlw);
        cfg.rkrlw = mask.apply(cfg.rkrlw);
      });
    }
  } else {
    if (cfg.preset) r.fail("model.preset", "presets apply to the rkrlw equation only");
    guarded(r, "coefficients", [&] {
      cfg.perturbed.validate();
      cfg.perturbed.validate_on(cfg.grid());
    });
  }

  InitialSpec& in = cfg.initial;
  if (auto k = r.str("initial.kind")) in.kind = *k;
  static const std::set<std::string> kinds = {"zero", "sech2", "gaussian", "cosine", "trig",
                                              "kdv_soliton", "samples", "file"};
  if (!kinds.count(in.kind)) r.fail("initial.kind", "unknown kind '" + in.kind + "'");
  if (auto v = r.num("initial.amplitude")) in.amplitude = *v;
  if (auto v = r.num("initial.width")) in.width = *v;
  if (auto v = r.num("initial.center")) in.center = *v;
  if (auto v = r.num("initial.offset")) in.offset = *v;
  if (auto v = r.num("initial.phase")) in.phase = *v;
  if (auto v = r.integer("initial.mode")) in.mode = static_cast<int>(*v);
  if (auto v = r.num("initial.c3")) in.c3 = *v;
  if (auto v = r.num("initial.c4")) in.c4 = *v;
  if (auto v = r.num("initial.omega")) in.omega = *v;
  if (auto v = r.str("initial.path")) in.path = *v;
  in.values = r.list("initial.values");
  if ((in.kind == "sech2" || in.kind == "gaussian") && !(in.width > 0.0)) {
    r.fail("initial.width", "must be positive");
  }
  if (in.kind == "samples" && in.values.size() != cfg.N) {
    r.fail("initial.values", "expected " + std::to_string(cfg.N) + " values, got " +
                                 std::to_string(in.values.size()));
  }
  if (in.kind == "file") {
    if (in.path.empty()) r.fail("initial.path", "required for kind = file");
    std::filesystem::path p(in.path);
    if (p.is_relative() && source != "<memory>") {
      p = std::filesystem::path(source).parent_path() / p;
    }
    guarded(r, "initial.path", [&] { in.values = read_values_file(p.string()); });
    if (in.values.size() != cfg.N) {
      r.fail("initial.path", "file holds " + std::to_string(in.values.size()) +
                                 " values, grid has " + std::to_string(cfg.N));
    }
  }
  if (in.kind == "kdv_soliton") {
    const auto& p = cfg.rkrlw;
    if (cfg.equation != "rkrlw" || p.alpha != 0.0 || p.beta != 0.0 || p.mu != 0.0 || p.m != 1) {
      r.fail("initial.kind", "kdv_soliton needs the rkrlw equation with alpha = beta = mu = 0, m = 1");
    }
    if (!(p.b * in.amplitude / p.kappa > 0.0)) {
      r.fail("initial.amplitude", "kdv_soliton needs b * amplitude / kappa > 0");
    }
  }

  if (auto v = r.integer("run.seed")) {
    if (*v < 0) r.fail("run.seed", "must be non-negative");
    cfg.seed = static_cast<std::uint64_t>(*v);
  }
  if (auto v = r.integer("run.bumps")) {
    if (*v < 1) r.fail("run.bumps", "must be at least 1");
    cfg.bumps = static_cast<int>(*v);
  }
  cfg.c3 = r.num("verify.c3");
  cfg.c4 = r.num("verify.c4");
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigurationError("cannot open config '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.string());
}

namespace {

double* coefficient_slot(RunConfig& cfg, const std::string& name) {
  auto& g = cfg.rkrlw;
  auto& p = cfg.perturbed;
  static const std::map<std::string, int> idx = {
      {"a1", 0}, {"a2", 1}, {"a3", 2}, {"a4", 3}, {"a5", 4}, {"b1", 5}, {"b2", 6}, {"b3", 7},
      {"b4", 8}, {"b5", 9}, {"b6", 10}, {"b7", 11}, {"b8", 12}, {"b9", 13}, {"b10", 14},
      {"b11", 15}, {"b12", 16}};
  if (name == "a") return &g.a;
  if (name == "b") return &g.b;
  if (name == "kappa") return &g.kappa;
  if (name == "mu") return &g.mu;
  if (name == "alpha") return &g.alpha;
  if (name == "beta") return &g.beta;
  const auto it = idx.find(name);
  if (it == idx.end()) return nullptr;
  double* slots[] = {&p.a1, &p.a2, &p.a3, &p.a4, &p.a5, &p.b1, &p.b2, &p.b3, &p.b4,
                     &p.b5, &p.b6, &p.b7, &p.b8, &p.b9, &p.b10, &p.b11, &p.b12};
  return slots[it->second];
}

}  // namespace

void set_coefficient(RunConfig& cfg, const std::string& name, double value) {
  double* s = coefficient_slot(cfg, name);
  if (!s) throw ConfigurationError("unknown coefficient '" + name + "'");
  *s = value;
}

double get_coefficient(const RunConfig& cfg, const std::string& name) {
  double* s = coefficient_slot(const_cast<RunConfig&>(cfg), name);
  if (!s) throw ConfigurationError("unknown coefficient '" + name + "'");
  return *s;
}

nlohmann::json to_json(const RunConfig& cfg) {
  nlohmann::json coeffs;
  if (cfg.equation == "rkrlw") {
    const auto& g = cfg.rkrlw;
    coeffs = {{"a", g.a}, {"b", g.b}, {"kappa", g.kappa}, {"mu", g.mu},
              {"alpha", g.alpha}, {"beta", g.beta}, {"m", g.m}};
  } else {
    const auto& p = cfg.perturbed;
    const auto a = p.a_coeffs();
    const auto b = p.b_coeffs();
    for (std::size_t i = 0; i < a.size(); ++i) coeffs["a" + std::to_string(i + 1)] = a[i];
    for (std::size_t i = 0; i < b.size(); ++i) coeffs["b" + std::to_string(i + 1)] = b[i];
    coeffs["m"] = p.m;
    coeffs["n"] = p.n;
  }
  const auto& in = cfg.initial;
  nlohmann::json init = {{"kind", in.kind}};
  if (in.kind == "sech2" || in.kind == "gaussian" || in.kind == "kdv_soliton") {
    init["amplitude"] = in.amplitude;
    init["width"] = in.width;
    init["center"] = in.center;
    init["offset"] = in.offset;
  } else if (in.kind == "cosine") {
    init["amplitude"] = in.amplitude;
    init["mode"] = in.mode;
    init["phase"] = in.phase;
    init["offset"] = in.offset;
  } else if (in.kind == "trig") {
    init["c3"] = in.c3;
    init["c4"] = in.c4;
    init["omega"] = in.omega;
    init["offset"] = in.offset;
  } else if (in.kind == "samples" || in.kind == "file") {
    init["values"] = in.values;
    if (!in.path.empty()) init["path"] = in.path;
  }
  nlohmann::json j = {{"model", {{"equation", cfg.equation}}},
                      {"coefficients", coeffs},
                      {"grid", {{"L", cfg.L}, {"N", cfg.N}}},
                      {"time", {{"t_end", cfg.t_end}, {"dt", cfg.dt}, {"snapshot_every", cfg.snapshot_every}}},
                      {"initial", init},
                      {"run", {{"seed", cfg.seed}, {"bumps", cfg.bumps}}}};
  if (cfg.preset) j["model"]["preset"] = *cfg.preset;
  if (cfg.c3) j["verify"]["c3"] = *cfg.c3;
  if (cfg.c4) j["verify"]["c4"] = *cfg.c4;
  return j;
}

std::function<double(double)> initial_function(const RunConfig& cfg) {
  const InitialSpec in = cfg.initial;
  const double L = cfg.L;
  if (in.kind == "zero") return [](double) { return 0.0; };
  if (in.kind == "sech2") {
    return [in, L](double x) {
      const double c = 1.0 / std::cosh(wrap_centered(x - in.center, L) / in.width);
      return in.offset + in.amplitude * c * c;
    };
  }
  if (in.kind == "gaussian") {
    return [in, L](double x) {
      const double s = wrap_centered(x - in.center, L) / in.width;
      return in.offset + in.amplitude * std::exp(-s * s);
    };
  }
  if (in.kind == "cosine") {
    return [in, L](double x) {
      return in.offset + in.amplitude * std::cos(2.0 * std::numbers::pi * in.mode * x / L + in.phase);
    };
  }
  if (in.kind == "trig") {
    return [in](double x) {
      return in.offset + in.c3 * std::cos(in.omega * x) + in.c4 * std::sin(in.omega * x);
    };
  }
  if (in.kind == "kdv_soliton") {
    const auto& p = cfg.rkrlw;
    const double B = std::sqrt(p.b * in.amplitude / (12.0 * p.kappa));
    return [in, L, B](double x) {
      const double c = 1.0 / std::cosh(B * wrap_centered(x - in.center, L));
      return in.offset + in.amplitude * c * c;
    };
  }
  // samples / file: trigonometric interpolant of the nodal values
  const Grid grid = cfg.grid();
  const Spectrum spec = forward(grid, in.values);
  return [grid, spec](double x) { return evaluate(grid, spec, x); };
}

Field initial_field(const RunConfig& cfg) {
  const Grid grid = cfg.grid();
  if (cfg.initial.kind == "samples" || cfg.initial.kind == "file") {
    return Field(grid, cfg.initial.values, 0.0);
  }
  return Field::sample(grid, initial_function(cfg));
}

}  // namespace steadylab
