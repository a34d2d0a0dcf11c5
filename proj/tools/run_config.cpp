#include "run_config.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace confcov::cli {

using nlohmann::json;

std::string num(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string num(const Scalar& q) { return q.get_str(); }

namespace {

[[noreturn]] void bad(const std::string& key, const std::string& why) {
  throw ConfigError("config key '" + key + "': " + why);
}

double as_double(const json& v, const std::string& key) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    try {
      std::size_t pos = 0;
      std::string s = v.get<std::string>();
      double x = std::stod(s, &pos);
      if (pos == s.size()) return x;
    } catch (const std::exception&) {
    }
  }
  bad(key, "expected a number or decimal string");
}

std::uint64_t as_u64(const json& v, const std::string& key) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<long long>() >= 0) return static_cast<std::uint64_t>(v.get<long long>());
  if (v.is_string()) {
    try {
      std::size_t pos = 0;
      std::string s = v.get<std::string>();
      unsigned long long x = std::stoull(s, &pos);
      if (pos == s.size() && s[0] != '-') return x;
    } catch (const std::exception&) {
    }
  }
  bad(key, "expected a non-negative integer");
}

int as_dim(const json& v, const std::string& key) {
  std::uint64_t d = as_u64(v, key);
  if (d < 1 || d > static_cast<std::uint64_t>(kMaxDim)) bad(key, "dimension must be in 1..5");
  return static_cast<int>(d);
}

Scalar as_scalar(const json& v, const std::string& key) {
  try {
    if (v.is_string()) return parse_scalar(v.get<std::string>());
    if (v.is_number_integer()) return Scalar(v.get<long>());
  } catch (const std::exception&) {
  }
  bad(key, "expected an exact rational such as \"-4/3\"");
}

std::array<Scalar, 3> as_triple(const json& v, const std::string& key) {
  if (!v.is_array() || v.size() != 3) bad(key, "expected three rationals");
  return {as_scalar(v[0], key), as_scalar(v[1], key), as_scalar(v[2], key)};
}

template <class T, class F>
std::vector<T> as_list(const json& v, const std::string& key, F&& each) {
  if (!v.is_array() || v.empty()) bad(key, "expected a non-empty list");
  std::vector<T> out;
  for (const auto& e : v) out.push_back(each(e, key));
  return out;
}

QuadMethod as_method(const json& v, const std::string& key) {
  if (v == "adaptive") return QuadMethod::Adaptive;
  if (v == "monte_carlo") return QuadMethod::MonteCarlo;
  bad(key, "expected \"adaptive\" or \"monte_carlo\"");
}

// Calls fn(key, value) for each entry, rejecting keys outside `allowed`.
template <class F>
void each_key(const json& obj, const std::string& where, const std::set<std::string>& allowed, F&& fn) {
  if (!obj.is_object()) bad(where, "expected an object");
  for (const auto& [k, v] : obj.items()) {
    std::string full = where.empty() ? k : where + "." + k;
    if (!allowed.count(k)) bad(full, "unknown key");
    fn(k, v, full);
  }
}

}  // namespace

void apply_json(RunConfig& c, const json& j) {
  each_key(j, "",
           {"schema", "seed", "out", "verify_bs", "symbols", "covariance", "quad_c0", "quad_a1", "closed",
            "knapp_stein", "identities"},
           [&](const std::string& k, const json& v, const std::string& key) {
             if (k == "schema") {
               if (v != kConfigSchema) bad(key, std::string("expected \"") + kConfigSchema + "\"");
             } else if (k == "seed") {
               c.seed = as_u64(v, key);
             } else if (k == "out") {
               if (!v.is_string()) bad(key, "expected a path");
               c.out = v.get<std::string>();
             } else if (k == "verify_bs") {
               each_key(v, key, {"oracle_cases", "oracle_dims"}, [&](const std::string& k2, const json& v2, const std::string& key2) {
                 if (k2 == "oracle_cases") c.verify_bs.oracle_cases = as_u64(v2, key2);
                 else c.verify_bs.oracle_dims = as_list<int>(v2, key2, as_dim);
               });
             } else if (k == "symbols") {
               each_key(v, key, {"k", "d", "convention"}, [&](const std::string& k2, const json& v2, const std::string& key2) {
                 if (k2 == "k") {
                   std::uint64_t kk = as_u64(v2, key2);
                   if (kk > 3) bad(key2, "k must be <= 3");
                   c.symbols.k = static_cast<unsigned>(kk);
                 } else if (k2 == "d") {
                   c.symbols.dim = as_dim(v2, key2);
                   if (c.symbols.dim < 2) bad(key2, "d must be in 2..5");
                 } else {
                   if (v2.is_null()) c.symbols.convention.reset();
                   else if (v2 == "formula" || v2 == "display") c.symbols.convention = v2.get<std::string>();
                   else bad(key2, "expected \"formula\", \"display\" or null");
                 }
               });
             } else if (k == "covariance") {
               each_key(v, key, {"points", "d", "tolerance"}, [&](const std::string& k2, const json& v2, const std::string& key2) {
                 if (k2 == "points") c.covariance.points = as_u64(v2, key2);
                 else if (k2 == "d") c.covariance.dim = as_dim(v2, key2);
                 else c.covariance.tolerance = as_double(v2, key2);
               });
             } else if (k == "quad_c0") {
               each_key(v, key, {"d", "beta", "method", "budget", "tolerance"},
                        [&](const std::string& k2, const json& v2, const std::string& key2) {
                          if (k2 == "d") c.quad_c0.dim = as_dim(v2, key2);
                          else if (k2 == "beta") c.quad_c0.beta = as_triple(v2, key2);
                          else if (k2 == "method") c.quad_c0.method = as_method(v2, key2);
                          else if (k2 == "budget") c.quad_c0.budget = as_u64(v2, key2);
                          else c.quad_c0.tolerance = as_double(v2, key2);
                        });
             } else if (k == "quad_a1") {
               each_key(v, key, {"d", "beta", "budget", "ratio_tolerance", "isotropy_sigmas"},
                        [&](const std::string& k2, const json& v2, const std::string& key2) {
                          if (k2 == "d") c.quad_a1.dim = as_dim(v2, key2);
                          else if (k2 == "beta") c.quad_a1.beta = as_triple(v2, key2);
                          else if (k2 == "budget") c.quad_a1.budget = as_u64(v2, key2);
                          else if (k2 == "ratio_tolerance") c.quad_a1.ratio_tolerance = as_double(v2, key2);
                          else c.quad_a1.isotropy_sigmas = as_double(v2, key2);
                        });
             } else if (k == "closed") {
               each_key(v, key, {"dims", "radial_tolerance", "volume_tolerance"},
                        [&](const std::string& k2, const json& v2, const std::string& key2) {
                          if (k2 == "dims") c.closed.dims = as_list<int>(v2, key2, as_dim);
                          else if (k2 == "radial_tolerance") c.closed.radial_tolerance = as_double(v2, key2);
                          else c.closed.volume_tolerance = as_double(v2, key2);
                        });
             } else if (k == "knapp_stein") {
               each_key(v, key, {"d", "nu", "xi", "tolerance"}, [&](const std::string& k2, const json& v2, const std::string& key2) {
                 if (k2 == "d") c.knapp_stein.dim = as_dim(v2, key2);
                 else if (k2 == "nu") c.knapp_stein.nu = as_list<double>(v2, key2, as_double);
                 else if (k2 == "xi") c.knapp_stein.xi = as_list<double>(v2, key2, as_double);
                 else c.knapp_stein.tolerance = as_double(v2, key2);
               });
             } else if (k == "identities") {
               each_key(v, key, {"n", "duality_cases", "d", "tolerance", "duality_tolerance"},
                        [&](const std::string& k2, const json& v2, const std::string& key2) {
                          if (k2 == "n") c.identities.n = as_u64(v2, key2);
                          else if (k2 == "duality_cases") c.identities.duality_cases = as_u64(v2, key2);
                          else if (k2 == "d") c.identities.dim = as_dim(v2, key2);
                          else if (k2 == "tolerance") c.identities.tolerance = as_double(v2, key2);
                          else c.identities.duality_tolerance = as_double(v2, key2);
                        });
             }
           });
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config file " + path + " is not valid JSON: " + e.what());
  }
  if (j.is_object() && j.value("schema", "") == kReportSchema) {
    if (!j.contains("config")) throw ConfigError("report has no embedded config");
    j = j["config"];
  }
  RunConfig c;
  apply_json(c, j);
  return c;
}

json to_json(const RunConfig& c) {
  auto triple = [](const std::array<Scalar, 3>& b) { return json::array({num(b[0]), num(b[1]), num(b[2])}); };
  auto list = [](const std::vector<double>& v) {
    json a = json::array();
    for (double x : v) a.push_back(num(x));
    return a;
  };
  json j;
  j["schema"] = kConfigSchema;
  j["seed"] = std::to_string(c.seed);
  j["out"] = c.out;
  j["verify_bs"] = {{"oracle_cases", c.verify_bs.oracle_cases}, {"oracle_dims", c.verify_bs.oracle_dims}};
  j["symbols"] = {{"k", c.symbols.k}, {"d", c.symbols.dim},
                  {"convention", c.symbols.convention ? json(*c.symbols.convention) : json(nullptr)}};
  j["covariance"] = {{"points", c.covariance.points}, {"d", c.covariance.dim}, {"tolerance", num(c.covariance.tolerance)}};
  j["quad_c0"] = {{"d", c.quad_c0.dim},
                  {"beta", triple(c.quad_c0.beta)},
                  {"method", to_string(c.quad_c0.method)},
                  {"budget", std::to_string(c.quad_c0.budget)},
                  {"tolerance", num(c.quad_c0.tolerance)}};
  j["quad_a1"] = {{"d", c.quad_a1.dim},
                  {"beta", triple(c.quad_a1.beta)},
                  {"budget", std::to_string(c.quad_a1.budget)},
                  {"ratio_tolerance", num(c.quad_a1.ratio_tolerance)},
                  {"isotropy_sigmas", num(c.quad_a1.isotropy_sigmas)}};
  j["closed"] = {{"dims", c.closed.dims},
                 {"radial_tolerance", num(c.closed.radial_tolerance)},
                 {"volume_tolerance", num(c.closed.volume_tolerance)}};
  j["knapp_stein"] = {{"d", c.knapp_stein.dim},
                      {"nu", list(c.knapp_stein.nu)},
                      {"xi", list(c.knapp_stein.xi)},
                      {"tolerance", num(c.knapp_stein.tolerance)}};
  j["identities"] = {{"n", c.identities.n},
                     {"duality_cases", c.identities.duality_cases},
                     {"d", c.identities.dim},
                     {"tolerance", num(c.identities.tolerance)},
                     {"duality_tolerance", num(c.identities.duality_tolerance)}};
  return j;
}

std::array<Scalar, 3> parse_triple(const std::string& text) {
  std::array<Scalar, 3> out;
  std::stringstream ss(text);
  std::string part;
  int n = 0;
  while (std::getline(ss, part, ',')) {
    if (n == 3) throw ConfigError("expected three comma-separated rationals: " + text);
    try {
      out[n++] = parse_scalar(part);
    } catch (const std::exception&) {
      throw ConfigError("not a rational: " + part);
    }
  }
  if (n != 3) throw ConfigError("expected three comma-separated rationals: " + text);
  return out;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    try {
      std::size_t pos = 0;
      out.push_back(std::stod(part, &pos));
      if (pos != part.size()) throw std::invalid_argument(part);
    } catch (const std::exception&) {
      throw ConfigError("not a number: " + part);
    }
  }
  if (out.empty()) throw ConfigError("empty list");
  return out;
}

}  // namespace confcov::cli
