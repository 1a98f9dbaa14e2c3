#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

// Core domain model for remote renewable energy hubs: commodities, located
// technologies, commodity-flow hyperedges, and the characteristic sets
// (commodities, exports, imports, byproducts, opportunities) derived from
// the technology graph.
namespace rreh::model {

// Trims and collapses internal whitespace runs to a single space. Every
// identifier (commodity id, technology name, location id) is stored in this
// normalized form.
std::string normalize_id(std::string_view raw);

enum class Level { Low, Medium, High };

std::string to_string(Level level);
std::optional<Level> level_from_string(std::string_view text);

// A commodity is identified by an opaque string; an optional phase tag is
// part of the identity ("CH4(g)" and "CH4(l)" are distinct commodities).
struct Commodity {
  std::string id;  // canonical id, phase tag included when present
  std::optional<std::string> display_name;
  std::optional<std::string> phase_tag;

  static Commodity from_id(std::string_view id);
  bool operator==(const Commodity& other) const { return id == other.id; }
};

// "CH4(g)" -> {"CH4", "g"}; ids without a tag yield an empty optional.
std::pair<std::string, std::optional<std::string>> split_commodity_id(
    std::string_view id);
std::string make_commodity_id(std::string_view base,
                              std::optional<std::string_view> phase_tag);

struct ResourceLevel {
  std::string resource;
  Level level = Level::Low;

  auto operator<=>(const ResourceLevel&) const = default;
};

struct Location {
  std::string id;
  std::string name;
  std::vector<ResourceLevel> potential;  // sorted by resource, at least one
  Level demand = Level::Low;

  bool operator==(const Location&) const = default;
};

enum class TechKind { Generic, Import, Export, Opportunity };

std::string to_string(TechKind kind);
std::optional<TechKind> tech_kind_from_string(std::string_view text);

struct Technology {
  std::string name;
  TechKind kind = TechKind::Generic;
  std::set<std::string> inputs;   // commodity ids
  std::set<std::string> outputs;  // commodity ids
  std::string location;           // location id

  std::string qualified_name() const { return name + "@" + location; }
  bool operator==(const Technology&) const = default;
};

// A flow of one commodity from a set of producing technologies to a set of
// consuming technologies. Consumers may be empty (a vented flow); producers
// may not. Endpoints are qualified technology names, stored sorted + unique.
struct Hyperedge {
  std::string commodity;
  std::vector<std::string> producers;
  std::vector<std::string> consumers;

  std::size_t expansion_count() const {
    return producers.size() * consumers.size();
  }
  // "(c, {p1, p2}, {k1})" — used for diffing, diagnostics and sorting.
  std::string canonical_key() const;
  bool operator==(const Hyperedge&) const = default;
};

Hyperedge make_hyperedge(std::string commodity,
                         std::vector<std::string> producers,
                         std::vector<std::string> consumers);

struct TechGraph {
  std::vector<Technology> technologies;
  std::vector<Hyperedge> edges;  // declaration order preserved

  const Technology* find(std::string_view qualified_name) const;
};

// Optional transcription of a reference table's per-set contents; mismatches
// against the derived sets are reported as warnings, never errors.
struct DeclaredSets {
  std::optional<std::set<std::string>> commodities;
  std::optional<std::set<std::string>> exports;
  std::optional<std::set<std::string>> imports;
  std::optional<std::set<std::string>> byproducts;
  std::optional<std::set<std::string>> opportunities;

  bool any() const {
    return commodities || exports || imports || byproducts || opportunities;
  }
  bool operator==(const DeclaredSets&) const = default;
};

struct DerivedSets {
  std::set<std::string> commodities;    // C
  std::set<std::string> exports;        // E
  std::set<std::string> imports;        // I
  std::set<std::string> byproducts;     // B
  std::set<std::string> opportunities;  // O

  bool operator==(const DerivedSets&) const = default;
};

struct Hub {
  std::string id;
  std::vector<Location> locations;  // sorted by id
  TechGraph graph;
  std::optional<DeclaredSets> declared_sets;
  DerivedSets derived;  // filled by assemble_hub

  const Location* find_location(std::string_view id) const;
};

// Structural equality; hyperedge order is irrelevant (set semantics).
bool operator==(const Hub& a, const Hub& b);

struct Finding {
  std::string code;
  std::string message;
  std::string subject;

  auto operator<=>(const Finding&) const = default;
};

struct ValidationReport {
  std::vector<Finding> errors;
  std::vector<Finding> warnings;
  std::vector<Finding> infos;

  bool valid() const { return errors.empty(); }
};

struct UndeclaredTechnology : std::runtime_error {
  explicit UndeclaredTechnology(const std::string& what)
      : std::runtime_error(what) {}
};

struct SimpleEdge {
  std::string commodity;
  std::string producer;
  std::string consumer;

  bool operator==(const SimpleEdge&) const = default;
};

// Derived-set operations. All throw UndeclaredTechnology if an edge names an
// unknown technology; otherwise they are pure and deterministic.
std::set<std::string> derive_commodities(const TechGraph& graph);
std::set<std::string> derive_exports(const TechGraph& graph);
std::set<std::string> derive_imports(const TechGraph& graph);
std::set<std::string> derive_opportunities(const TechGraph& graph);

// Per-producer rule: a commodity is a byproduct if some technology outputs it
// and no hyperedge routes that technology's output to a non-empty consumer
// set. A commodity consumed when produced by one technology but vented when
// produced by another is still a byproduct.
std::set<std::string> derive_byproducts(const TechGraph& graph);

DerivedSets derive_all(const TechGraph& graph);

// Cartesian expansion of every hyperedge, in declaration order,
// producer-major.
std::vector<SimpleEdge> expand_hyperedges(const TechGraph& graph);

// Total check of every structural invariant. Never throws; findings are
// ordered by (code, subject, message) within each severity.
//
// Errors:   E001 flow commodity not an output of a producer
//           E002 flow commodity not an input of a consumer
//           E003 kind constraint violated (import with inputs,
//                export/opportunity with outputs)
//           E004 technology placed at an undeclared location
//           E005 duplicate declaration (technology, location or flow)
//           E000 flow endpoint names an undeclared technology
// Warnings: W001 generic technology input never supplied and not importable
//           W002 declared set differs from derived set
// Infos:    I001 byproduct occurrence (per producer/commodity pair)
//           I002 commodity vented by one producer but consumed from another
ValidationReport validate(const Hub& hub);

// Builds a hub and computes its derived sets. Throws UndeclaredTechnology on
// unresolvable edge endpoints and std::invalid_argument on malformed inputs
// (empty producer sets, locations without potential tags).
Hub assemble_hub(std::string id, std::vector<Location> locations,
                 TechGraph graph,
                 std::optional<DeclaredSets> declared_sets = std::nullopt);

}  // namespace rreh::model
