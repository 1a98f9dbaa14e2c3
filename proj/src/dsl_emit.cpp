#include <algorithm>
#include <sstream>

#include "rreh/dsl.hpp"

namespace rreh::dsl {

namespace {

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ", ";
    out += items[i];
  }
  return out;
}

std::string join(const std::set<std::string>& items) {
  return join(std::vector<std::string>(items.begin(), items.end()));
}

std::vector<const model::Technology*> sorted_techs(const model::Hub& hub) {
  std::vector<const model::Technology*> techs;
  for (const auto& t : hub.graph.technologies) techs.push_back(&t);
  std::sort(techs.begin(), techs.end(),
            [](const model::Technology* a, const model::Technology* b) {
              return a->qualified_name() < b->qualified_name();
            });
  return techs;
}

std::vector<const model::Hyperedge*> sorted_edges(const model::Hub& hub) {
  std::vector<const model::Hyperedge*> edges;
  for (const auto& e : hub.graph.edges) edges.push_back(&e);
  std::sort(edges.begin(), edges.end(),
            [](const model::Hyperedge* a, const model::Hyperedge* b) {
              return a->canonical_key() < b->canonical_key();
            });
  return edges;
}

std::vector<const model::Location*> sorted_locations(const model::Hub& hub) {
  std::vector<const model::Location*> locs;
  for (const auto& l : hub.locations) locs.push_back(&l);
  std::sort(locs.begin(), locs.end(),
            [](const model::Location* a, const model::Location* b) {
              return a->id < b->id;
            });
  return locs;
}

}  // namespace

std::string serialize(const model::Hub& hub) {
  std::ostringstream os;
  os << "hub " << quote(hub.id) << " {\n";

  for (const auto* l : sorted_locations(hub)) {
    os << "  location " << l->id << " {\n";
    os << "    name = " << quote(l->name) << ";\n";
    os << "    potential = ";
    for (std::size_t i = 0; i < l->potential.size(); ++i) {
      if (i) os << ", ";
      os << l->potential[i].resource << ":"
         << model::to_string(l->potential[i].level);
    }
    os << ";\n";
    os << "    demand = " << model::to_string(l->demand) << ";\n";
    os << "  }\n";
  }

  for (const auto* t : sorted_techs(hub)) {
    os << "  tech " << t->name << "@" << t->location;
    if (t->kind != model::TechKind::Generic)
      os << " kind " << model::to_string(t->kind);
    os << " {\n";
    os << "    in: " << join(t->inputs) << ";\n";
    os << "    out: " << join(t->outputs) << ";\n";
    os << "  }\n";
  }

  auto edges = sorted_edges(hub);
  if (edges.empty()) {
    os << "  flows {}\n";
  } else {
    os << "  flows {\n";
    for (const auto* e : edges) {
      os << "    flow " << e->commodity << " {\n";
      os << "      from: " << join(e->producers) << ";\n";
      os << "      to: " << join(e->consumers) << ";\n";
      os << "    }\n";
    }
    os << "  }\n";
  }

  if (hub.declared_sets && hub.declared_sets->any()) {
    os << "  assert {\n";
    const auto& d = *hub.declared_sets;
    auto emit = [&](const char* name,
                    const std::optional<std::set<std::string>>& s) {
      if (s) os << "    " << name << " = {" << join(*s) << "};\n";
    };
    emit("C", d.commodities);
    emit("E", d.exports);
    emit("I", d.imports);
    emit("B", d.byproducts);
    emit("O", d.opportunities);
    os << "  }\n";
  }

  os << "}\n";
  return os.str();
}

namespace {

const char* shape_for(model::TechKind kind) {
  switch (kind) {
    case model::TechKind::Generic: return "box";
    case model::TechKind::Import: return "invhouse";
    case model::TechKind::Export: return "house";
    case model::TechKind::Opportunity: return "diamond";
  }
  return "box";
}

}  // namespace

std::string export_dot(const model::Hub& hub, bool expand) {
  std::ostringstream os;
  os << "digraph " << quote(hub.id) << " {\n";
  os << "  rankdir=LR;\n";
  for (const auto* t : sorted_techs(hub)) {
    os << "  " << quote(t->qualified_name()) << " [kind="
       << quote(model::to_string(t->kind)) << ", shape=" << shape_for(t->kind)
       << "];\n";
  }
  if (expand) {
    for (const auto* e : sorted_edges(hub)) {
      for (const auto& p : e->producers) {
        for (const auto& c : e->consumers) {
          os << "  " << quote(p) << " -> " << quote(c) << " [commodity="
             << quote(e->commodity) << ", label=" << quote(e->commodity)
             << "];\n";
        }
      }
    }
  } else {
    auto edges = sorted_edges(hub);
    for (std::size_t i = 0; i < edges.size(); ++i) {
      std::string junction = "flow#" + std::to_string(i + 1);
      os << "  " << quote(junction) << " [kind=\"junction\", shape=point, "
         << "commodity=" << quote(edges[i]->commodity) << ", xlabel="
         << quote(edges[i]->commodity) << "];\n";
      for (const auto& p : edges[i]->producers) {
        os << "  " << quote(p) << " -> " << quote(junction) << " [commodity="
           << quote(edges[i]->commodity) << "];\n";
      }
      for (const auto& c : edges[i]->consumers) {
        os << "  " << quote(junction) << " -> " << quote(c) << " [commodity="
           << quote(edges[i]->commodity) << "];\n";
      }
    }
  }
  os << "}\n";
  return os.str();
}

std::string export_model_skeleton(const model::Hub& hub) {
  std::ostringstream os;
  os << "# rreh-skeleton v1\n";
  os << "# hub: " << hub.id << "\n";
  os << "# horizon length T is a free parameter\n";
  os << "\n";
  for (const auto* t : sorted_techs(hub)) {
    os << "node " << quote(t->qualified_name()) << " {\n";
    os << "  kind: " << model::to_string(t->kind) << ";\n";
    os << "  var capacity >= 0;\n";
    os << "  var activity[T] >= 0;\n";
    os << "  constraint activity[t] <= capacity;\n";
    os << "  consumes: " << join(t->inputs) << ";\n";
    os << "  produces: " << join(t->outputs) << ";\n";
    os << "}\n";
  }
  auto edges = sorted_edges(hub);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    os << "hyperedge " << quote("flow#" + std::to_string(i + 1)) << " {\n";
    os << "  commodity: " << edges[i]->commodity << ";\n";
    os << "  from: " << join(edges[i]->producers) << ";\n";
    os << "  to: " << join(edges[i]->consumers) << ";\n";
    os << "  constraint balance: sum(outputs) == sum(inputs);\n";
    os << "}\n";
  }
  return os.str();
}

}  // namespace rreh::dsl
