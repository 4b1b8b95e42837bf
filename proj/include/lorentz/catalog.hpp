#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lorentz/conditions.hpp"
#include "lorentz/metric.hpp"
#include "lorentz/submanifold.hpp"

namespace lorentz {

struct Spacetime;

struct FactResult {
  std::string id;
  bool holds = false;
  std::string detail;
};

/// Expected property of a bundle together with the computation that confirms it.
struct KnownFact {
  std::string id;
  std::string statement;
  std::function<FactResult(const Spacetime&, std::uint64_t seed, int jobs)> check;
};

struct NamedSubmanifold {
  std::string name;
  std::string description;
  EmbeddingPtr embedding;
};

struct Spacetime {
  std::string name;
  std::map<std::string, double> params;
  MetricFieldPtr metric;
  VectorFieldPtr orientation;
  ScalarFieldPtr temporal;
  std::string chart;  // human-readable description
  std::map<std::string, Region> regions;
  std::vector<NamedSubmanifold> submanifolds;
  std::vector<KnownFact> facts;
  std::optional<Vec> marked_parameter;  // distinguished submanifold point, if any

  /// Throws DomainError for an unknown name.
  const Embedding& submanifold(const std::string& name) const;
  EmbeddingPtr submanifold_ptr(const std::string& name) const;
  /// "default" always exists. Throws DomainError for an unknown name.
  Region region(const std::string& name = "default") const;
};

struct CatalogEntry {
  std::string name;
  std::map<std::string, double> defaults;
  std::string summary;
};

const std::vector<CatalogEntry>& catalog_entries();

/// Throws UnknownSpacetime or ParamError.
Spacetime load(const std::string& name, const std::map<std::string, double>& params = {});

std::vector<FactResult> verify_facts(const Spacetime& st, std::uint64_t seed = 0, int jobs = 1);

}  // namespace lorentz
