#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "confcov/exact_ring.hpp"
#include "confcov/sphere_quad.hpp"

namespace confcov::cli {

inline constexpr const char* kConfigSchema = "confcov-config/v1";
inline constexpr const char* kReportSchema = "confcov-report/v1";

struct RunConfig {
  std::uint64_t seed = 20240917;
  std::string out;

  struct {
    std::size_t oracle_cases = 20;
    std::vector<int> oracle_dims{2, 3, 4};
  } verify_bs;

  struct {
    unsigned k = 1;
    int dim = 2;
    std::optional<std::string> convention;  // both when unset
  } symbols;

  struct {
    std::size_t points = 20;
    int dim = 2;
    double tolerance = 1e-6;
  } covariance;

  struct {
    int dim = 2;
    std::array<Scalar, 3> beta{Scalar(-4, 3), Scalar(-4, 3), Scalar(-4, 3)};
    QuadMethod method = QuadMethod::Adaptive;
    std::uint64_t budget = 1 << 22;
    double tolerance = 5e-3;
  } quad_c0;

  struct {
    int dim = 3;
    std::array<Scalar, 3> beta{Scalar(-8, 3), Scalar(-8, 3), Scalar(-8, 3)};
    std::uint64_t budget = 1 << 22;
    double ratio_tolerance = 0.03;
    double isotropy_sigmas = 3;
  } quad_a1;

  struct {
    std::vector<int> dims{2, 3};
    double radial_tolerance = 1e-8;
    double volume_tolerance = 1e-6;
  } closed;

  struct {
    int dim = 2;
    std::vector<double> nu{0.5, 1.0};
    std::vector<double> xi{0.5, 1.0, 2.0};
    double tolerance = 1e-4;
  } knapp_stein;

  struct {
    std::size_t n = 500;
    std::size_t duality_cases = 20;
    int dim = 2;
    double tolerance = 1e-10;
    double duality_tolerance = 1e-6;
  } identities;
};

// Shortest decimal text that reads back to the same double.
std::string num(double x);
std::string num(const Scalar& q);

// Throws ConfigError on unknown keys or malformed values.  Accepts a config
// file or a report (its embedded config).
RunConfig load_config(const std::string& path);
void apply_json(RunConfig& cfg, const nlohmann::json& j);
nlohmann::json to_json(const RunConfig& cfg);

std::array<Scalar, 3> parse_triple(const std::string& text);
std::vector<double> parse_list(const std::string& text);

}  // namespace confcov::cli
