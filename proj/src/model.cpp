#include "rreh/model.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace rreh::model {

std::string normalize_id(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  bool pending_space = false;
  for (char c : raw) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(c);
  }
  return out;
}

std::string to_string(Level level) {
  switch (level) {
    case Level::Low: return "low";
    case Level::Medium: return "medium";
    case Level::High: return "high";
  }
  return "low";
}

std::optional<Level> level_from_string(std::string_view text) {
  if (text == "low") return Level::Low;
  if (text == "medium") return Level::Medium;
  if (text == "high") return Level::High;
  return std::nullopt;
}

std::pair<std::string, std::optional<std::string>> split_commodity_id(
    std::string_view id) {
  if (!id.empty() && id.back() == ')') {
    auto open = id.rfind('(');
    if (open != std::string_view::npos && open + 2 <= id.size() - 1) {
      std::string base(id.substr(0, open));
      std::string tag(id.substr(open + 1, id.size() - open - 2));
      if (!base.empty() && !tag.empty()) {
        while (!base.empty() && base.back() == ' ') base.pop_back();
        return {base, tag};
      }
    }
  }
  return {std::string(id), std::nullopt};
}

std::string make_commodity_id(std::string_view base,
                              std::optional<std::string_view> phase_tag) {
  std::string id = normalize_id(base);
  if (phase_tag && !phase_tag->empty()) {
    id += "(";
    id += normalize_id(*phase_tag);
    id += ")";
  }
  return id;
}

Commodity Commodity::from_id(std::string_view id) {
  Commodity c;
  c.id = normalize_id(id);
  auto [base, tag] = split_commodity_id(c.id);
  c.phase_tag = tag;
  return c;
}

std::string to_string(TechKind kind) {
  switch (kind) {
    case TechKind::Generic: return "generic";
    case TechKind::Import: return "import";
    case TechKind::Export: return "export";
    case TechKind::Opportunity: return "opportunity";
  }
  return "generic";
}

std::optional<TechKind> tech_kind_from_string(std::string_view text) {
  if (text == "generic") return TechKind::Generic;
  if (text == "import") return TechKind::Import;
  if (text == "export") return TechKind::Export;
  if (text == "opportunity") return TechKind::Opportunity;
  return std::nullopt;
}

namespace {

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ", ";
    out += items[i];
  }
  return out;
}

void sort_unique(std::vector<std::string>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace

std::string Hyperedge::canonical_key() const {
  std::string key = "(" + commodity + ", {" + join(producers) + "}, {" +
                    join(consumers) + "})";
  return key;
}

Hyperedge make_hyperedge(std::string commodity,
                         std::vector<std::string> producers,
                         std::vector<std::string> consumers) {
  Hyperedge e;
  e.commodity = normalize_id(commodity);
  e.producers = std::move(producers);
  e.consumers = std::move(consumers);
  for (auto& p : e.producers) p = normalize_id(p);
  for (auto& c : e.consumers) c = normalize_id(c);
  sort_unique(e.producers);
  sort_unique(e.consumers);
  return e;
}

const Technology* TechGraph::find(std::string_view qualified_name) const {
  for (const auto& t : technologies) {
    if (t.qualified_name() == qualified_name) return &t;
  }
  return nullptr;
}

const Location* Hub::find_location(std::string_view loc_id) const {
  for (const auto& l : locations) {
    if (l.id == loc_id) return &l;
  }
  return nullptr;
}

bool operator==(const Hub& a, const Hub& b) {
  if (a.id != b.id) return false;
  if (a.declared_sets != b.declared_sets) return false;

  auto locs_a = a.locations;
  auto locs_b = b.locations;
  auto by_id = [](const Location& x, const Location& y) { return x.id < y.id; };
  std::sort(locs_a.begin(), locs_a.end(), by_id);
  std::sort(locs_b.begin(), locs_b.end(), by_id);
  if (locs_a != locs_b) return false;

  auto techs_a = a.graph.technologies;
  auto techs_b = b.graph.technologies;
  auto by_qname = [](const Technology& x, const Technology& y) {
    return x.qualified_name() < y.qualified_name();
  };
  std::sort(techs_a.begin(), techs_a.end(), by_qname);
  std::sort(techs_b.begin(), techs_b.end(), by_qname);
  if (techs_a != techs_b) return false;

  auto edges_a = a.graph.edges;
  auto edges_b = b.graph.edges;
  auto by_key = [](const Hyperedge& x, const Hyperedge& y) {
    return x.canonical_key() < y.canonical_key();
  };
  std::sort(edges_a.begin(), edges_a.end(), by_key);
  std::sort(edges_b.begin(), edges_b.end(), by_key);
  return edges_a == edges_b;
}

namespace {

void check_endpoints(const TechGraph& graph) {
  for (const auto& e : graph.edges) {
    for (const auto& p : e.producers) {
      if (!graph.find(p)) {
        throw UndeclaredTechnology("flow " + e.commodity +
                                   " references undeclared technology '" + p +
                                   "'");
      }
    }
    for (const auto& c : e.consumers) {
      if (!graph.find(c)) {
        throw UndeclaredTechnology("flow " + e.commodity +
                                   " references undeclared technology '" + c +
                                   "'");
      }
    }
  }
}

}  // namespace

std::set<std::string> derive_commodities(const TechGraph& graph) {
  check_endpoints(graph);
  std::set<std::string> out;
  for (const auto& t : graph.technologies) {
    out.insert(t.inputs.begin(), t.inputs.end());
    out.insert(t.outputs.begin(), t.outputs.end());
  }
  return out;
}

std::set<std::string> derive_exports(const TechGraph& graph) {
  check_endpoints(graph);
  std::set<std::string> out;
  for (const auto& t : graph.technologies) {
    if (t.kind == TechKind::Export) out.insert(t.inputs.begin(), t.inputs.end());
  }
  return out;
}

std::set<std::string> derive_imports(const TechGraph& graph) {
  check_endpoints(graph);
  std::set<std::string> out;
  for (const auto& t : graph.technologies) {
    if (t.kind == TechKind::Import)
      out.insert(t.outputs.begin(), t.outputs.end());
  }
  return out;
}

std::set<std::string> derive_opportunities(const TechGraph& graph) {
  check_endpoints(graph);
  std::set<std::string> out;
  for (const auto& t : graph.technologies) {
    if (t.kind == TechKind::Opportunity)
      out.insert(t.inputs.begin(), t.inputs.end());
  }
  return out;
}

std::set<std::string> derive_byproducts(const TechGraph& graph) {
  check_endpoints(graph);
  std::set<std::string> out;
  for (const auto& t : graph.technologies) {
    const std::string qname = t.qualified_name();
    for (const auto& c : t.outputs) {
      bool routed = false;
      for (const auto& e : graph.edges) {
        if (e.commodity != c || e.consumers.empty()) continue;
        if (std::find(e.producers.begin(), e.producers.end(), qname) !=
            e.producers.end()) {
          routed = true;
          break;
        }
      }
      if (!routed) out.insert(c);
    }
  }
  return out;
}

DerivedSets derive_all(const TechGraph& graph) {
  DerivedSets d;
  d.commodities = derive_commodities(graph);
  d.exports = derive_exports(graph);
  d.imports = derive_imports(graph);
  d.byproducts = derive_byproducts(graph);
  d.opportunities = derive_opportunities(graph);
  return d;
}

std::vector<SimpleEdge> expand_hyperedges(const TechGraph& graph) {
  check_endpoints(graph);
  std::vector<SimpleEdge> out;
  for (const auto& e : graph.edges) {
    for (const auto& p : e.producers) {
      for (const auto& c : e.consumers) {
        out.push_back({e.commodity, p, c});
      }
    }
  }
  return out;
}

namespace {

std::string edge_subject(const TechGraph& graph, std::size_t index) {
  return "flow " + graph.edges[index].commodity + " #" +
         std::to_string(index + 1);
}

void sort_findings(std::vector<Finding>& findings) {
  std::sort(findings.begin(), findings.end());
  findings.erase(std::unique(findings.begin(), findings.end()),
                 findings.end());
}

std::string set_to_string(const std::set<std::string>& s) {
  std::string out = "{";
  bool first = true;
  for (const auto& e : s) {
    if (!first) out += ", ";
    out += e;
    first = false;
  }
  out += "}";
  return out;
}

void compare_declared(const char* set_name,
                      const std::optional<std::set<std::string>>& declared,
                      const std::set<std::string>& derived,
                      std::vector<Finding>& warnings) {
  if (!declared) return;
  std::set<std::string> missing_from_declared;   // derived only
  std::set<std::string> declared_not_derived;    // declared only
  std::set_difference(derived.begin(), derived.end(), declared->begin(),
                      declared->end(),
                      std::inserter(missing_from_declared,
                                    missing_from_declared.begin()));
  std::set_difference(declared->begin(), declared->end(), derived.begin(),
                      derived.end(),
                      std::inserter(declared_not_derived,
                                    declared_not_derived.begin()));
  if (missing_from_declared.empty() && declared_not_derived.empty()) return;
  std::string msg = std::string("declared ") + set_name +
                    " differs from derived " + set_name;
  if (!missing_from_declared.empty())
    msg += "; derived but not declared: " + set_to_string(missing_from_declared);
  if (!declared_not_derived.empty())
    msg += "; declared but not derived: " + set_to_string(declared_not_derived);
  warnings.push_back({"W002", msg, std::string("set ") + set_name});
}

}  // namespace

ValidationReport validate(const Hub& hub) {
  ValidationReport report;
  const TechGraph& graph = hub.graph;

  // Duplicates (E005).
  {
    std::set<std::string> seen;
    for (const auto& l : hub.locations) {
      if (!seen.insert(l.id).second) {
        report.errors.push_back(
            {"E005", "duplicate location id '" + l.id + "'", l.id});
      }
    }
  }
  {
    std::set<std::string> seen;
    for (const auto& t : graph.technologies) {
      if (!seen.insert(t.qualified_name()).second) {
        report.errors.push_back(
            {"E005", "duplicate technology '" + t.qualified_name() + "'",
             t.qualified_name()});
      }
    }
  }
  {
    std::set<std::string> seen;
    for (std::size_t i = 0; i < graph.edges.size(); ++i) {
      if (!seen.insert(graph.edges[i].canonical_key()).second) {
        report.errors.push_back({"E005",
                                 "duplicate flow " +
                                     graph.edges[i].canonical_key(),
                                 edge_subject(graph, i)});
      }
    }
  }

  // Kind constraints (E003) and location binding (E004).
  for (const auto& t : graph.technologies) {
    if (t.kind == TechKind::Import && !t.inputs.empty()) {
      report.errors.push_back(
          {"E003",
           "import technology '" + t.qualified_name() +
               "' must have no inputs, has " + set_to_string(t.inputs),
           t.qualified_name()});
    }
    if ((t.kind == TechKind::Export || t.kind == TechKind::Opportunity) &&
        !t.outputs.empty()) {
      report.errors.push_back(
          {"E003",
           to_string(t.kind) + " technology '" + t.qualified_name() +
               "' must have no outputs, has " + set_to_string(t.outputs),
           t.qualified_name()});
    }
    if (!hub.find_location(t.location)) {
      report.errors.push_back(
          {"E004",
           "technology '" + t.qualified_name() +
               "' is placed at undeclared location '" + t.location + "'",
           t.qualified_name()});
    }
  }

  // Edge endpoint semantics (E000/E001/E002).
  bool endpoints_ok = true;
  for (std::size_t i = 0; i < graph.edges.size(); ++i) {
    const auto& e = graph.edges[i];
    for (const auto& p : e.producers) {
      const Technology* t = graph.find(p);
      if (!t) {
        endpoints_ok = false;
        report.errors.push_back(
            {"E000", "flow names undeclared technology '" + p + "'",
             edge_subject(graph, i)});
        continue;
      }
      if (!t->outputs.count(e.commodity)) {
        report.errors.push_back(
            {"E001",
             "flow commodity '" + e.commodity + "' is not an output of producer '" +
                 p + "' (outputs: " + set_to_string(t->outputs) + ")",
             edge_subject(graph, i)});
      }
    }
    for (const auto& c : e.consumers) {
      const Technology* t = graph.find(c);
      if (!t) {
        endpoints_ok = false;
        report.errors.push_back(
            {"E000", "flow names undeclared technology '" + c + "'",
             edge_subject(graph, i)});
        continue;
      }
      if (!t->inputs.count(e.commodity)) {
        report.errors.push_back(
            {"E002",
             "flow commodity '" + e.commodity + "' is not an input of consumer '" +
                 c + "' (inputs: " + set_to_string(t->inputs) + ")",
             edge_subject(graph, i)});
      }
    }
    if (e.producers.empty()) {
      report.errors.push_back(
          {"E005", "flow has an empty producer set", edge_subject(graph, i)});
    }
  }

  // Dangling demand (W001): generic technology input neither supplied by an
  // edge nor available from an import technology.
  std::set<std::string> importable;
  for (const auto& t : graph.technologies) {
    if (t.kind == TechKind::Import)
      importable.insert(t.outputs.begin(), t.outputs.end());
  }
  for (const auto& t : graph.technologies) {
    if (t.kind != TechKind::Generic) continue;
    const std::string qname = t.qualified_name();
    for (const auto& c : t.inputs) {
      bool supplied = false;
      for (const auto& e : graph.edges) {
        if (e.commodity != c || e.producers.empty()) continue;
        if (std::find(e.consumers.begin(), e.consumers.end(), qname) !=
            e.consumers.end()) {
          supplied = true;
          break;
        }
      }
      if (!supplied && !importable.count(c)) {
        report.warnings.push_back(
            {"W001",
             "input '" + c + "' of '" + qname +
                 "' is never supplied by any flow and no import provides it",
             qname});
      }
    }
  }

  if (endpoints_ok) {
    // Byproduct occurrences (I001) and per-producer/global divergences (I002).
    std::set<std::string> byproducts = derive_byproducts(graph);
    for (const auto& t : graph.technologies) {
      const std::string qname = t.qualified_name();
      for (const auto& c : t.outputs) {
        bool routed = false;
        for (const auto& e : graph.edges) {
          if (e.commodity != c || e.consumers.empty()) continue;
          if (std::find(e.producers.begin(), e.producers.end(), qname) !=
              e.producers.end()) {
            routed = true;
            break;
          }
        }
        if (!routed) {
          report.infos.push_back(
              {"I001",
               "output '" + c + "' of '" + qname +
                   "' is never consumed (byproduct)",
               qname + "/" + c});
        }
      }
    }
    for (const auto& c : byproducts) {
      std::set<std::string> consuming_producers;
      for (const auto& e : graph.edges) {
        if (e.commodity != c || e.consumers.empty()) continue;
        consuming_producers.insert(e.producers.begin(), e.producers.end());
      }
      if (!consuming_producers.empty()) {
        report.infos.push_back(
            {"I002",
             "commodity '" + c + "' is consumed when produced by " +
                 set_to_string(consuming_producers) +
                 " but vented by other producers",
             c});
      }
    }

    // Declared vs derived sets (W002).
    if (hub.declared_sets) {
      DerivedSets derived = derive_all(graph);
      compare_declared("C", hub.declared_sets->commodities,
                       derived.commodities, report.warnings);
      compare_declared("E", hub.declared_sets->exports, derived.exports,
                       report.warnings);
      compare_declared("I", hub.declared_sets->imports, derived.imports,
                       report.warnings);
      compare_declared("B", hub.declared_sets->byproducts, derived.byproducts,
                       report.warnings);
      compare_declared("O", hub.declared_sets->opportunities,
                       derived.opportunities, report.warnings);
    }
  }

  sort_findings(report.errors);
  sort_findings(report.warnings);
  sort_findings(report.infos);
  return report;
}

Hub assemble_hub(std::string id, std::vector<Location> locations,
                 TechGraph graph, std::optional<DeclaredSets> declared_sets) {
  Hub hub;
  hub.id = normalize_id(id);
  hub.locations = std::move(locations);
  for (auto& l : hub.locations) {
    if (l.potential.empty()) {
      throw std::invalid_argument("location '" + l.id +
                                  "' has no renewable potential tags");
    }
    std::sort(l.potential.begin(), l.potential.end());
  }
  std::sort(hub.locations.begin(), hub.locations.end(),
            [](const Location& a, const Location& b) { return a.id < b.id; });
  for (const auto& e : graph.edges) {
    if (e.producers.empty()) {
      throw std::invalid_argument("flow " + e.commodity +
                                  " has an empty producer set");
    }
  }
  hub.graph = std::move(graph);
  hub.declared_sets = std::move(declared_sets);
  hub.derived = derive_all(hub.graph);
  return hub;
}

}  // namespace rreh::model
