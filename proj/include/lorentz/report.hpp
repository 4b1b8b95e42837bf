#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "lorentz/conditions.hpp"
#include "lorentz/geodesic.hpp"
#include "lorentz/perturb.hpp"
#include "lorentz/submanifold.hpp"
#include "lorentz/tolerances.hpp"

namespace lorentz {

using Json = nlohmann::ordered_json;

inline constexpr const char* kToolName = "lorentz";
inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr int kReportSchema = 1;

/// 64-bit FNV-1a, lower-case hex.
std::string fnv1a_hex(const std::string& data);

Json to_json(const Vec& v);
Json to_json(const Mat& m);
Json to_json(const Tolerances& t);
Json to_json(const ConditionReport& r);
Json to_json(const AuditReport& r);
Json to_json(const TrappedVerdict& v);
Json to_json(const PerturbationFamily& f);
Json to_json(const GsResult& r);
Json to_json(const GeodesicSolution& s, const std::vector<std::vector<Vec>>* transported = nullptr);

/// Finite doubles pass through; non-finite values become strings ("inf", "-inf", "nan").
Json number(double x);

struct ReportHeader {
  std::string command;
  std::string input_digest;
  std::uint64_t seed = 0;
  Tolerances tolerances{};
  std::optional<double> wall_time_s;  // only with --timing; breaks byte-identity
};

/// {tool, version, schema, command, input_digest, seed, tolerances, results, [error], [wall_time_s]}
Json envelope(const ReportHeader& h, Json results, std::optional<Json> error = std::nullopt);

std::string dump(const Json& j);

/// Certificate table then seminorm table, comma separated with a header row each.
std::string family_csv(const PerturbationFamily& f);

}  // namespace lorentz
