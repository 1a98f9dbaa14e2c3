#include <algorithm>
#include <map>
#include <sstream>

#include "nlohmann/json.hpp"
#include "rreh/diff.hpp"

namespace rreh::diff {

std::string to_string(SetName set) {
  switch (set) {
    case SetName::L: return "L";
    case SetName::T: return "T";
    case SetName::H: return "H";
    case SetName::C: return "C";
    case SetName::E: return "E";
    case SetName::I: return "I";
    case SetName::B: return "B";
    case SetName::O: return "O";
  }
  return "?";
}

namespace {

std::string location_key(const model::Location& l) {
  std::string key = l.name + " (";
  for (std::size_t i = 0; i < l.potential.size(); ++i) {
    if (i) key += ", ";
    key += l.potential[i].resource + ":" + model::to_string(l.potential[i].level);
  }
  key += "; demand=" + model::to_string(l.demand) + ")";
  return key;
}

std::string tech_signature(const model::Technology& t) {
  std::string sig = t.qualified_name() + "|" + model::to_string(t.kind) + "|in:";
  for (const auto& c : t.inputs) sig += c + ",";
  sig += "|out:";
  for (const auto& c : t.outputs) sig += c + ",";
  return sig;
}

SetDelta set_delta(SetName name, const std::set<std::string>& left,
                   const std::set<std::string>& right) {
  SetDelta d;
  d.set = name;
  std::set_difference(left.begin(), left.end(), right.begin(), right.end(),
                      std::back_inserter(d.only_left));
  std::set_difference(right.begin(), right.end(), left.begin(), left.end(),
                      std::back_inserter(d.only_right));
  std::vector<std::string> common;
  std::set_intersection(left.begin(), left.end(), right.begin(), right.end(),
                        std::back_inserter(common));
  d.common = common.size();
  return d;
}

SetDelta tech_delta(const model::Hub& left, const model::Hub& right) {
  SetDelta d;
  d.set = SetName::T;
  std::map<std::string, const model::Technology*> by_name_left, by_name_right;
  std::set<std::string> sig_left, sig_right;
  for (const auto& t : left.graph.technologies) {
    by_name_left[t.qualified_name()] = &t;
    sig_left.insert(tech_signature(t));
  }
  for (const auto& t : right.graph.technologies) {
    by_name_right[t.qualified_name()] = &t;
    sig_right.insert(tech_signature(t));
  }
  for (const auto& [qname, t] : by_name_left) {
    auto it = by_name_right.find(qname);
    if (it == by_name_right.end()) {
      d.only_left.push_back(qname);
    } else if (tech_signature(*t) != tech_signature(*it->second)) {
      d.only_left.push_back(qname + " (changed)");
      d.only_right.push_back(qname + " (changed)");
    } else {
      ++d.common;
    }
  }
  for (const auto& [qname, t] : by_name_right) {
    if (!by_name_left.count(qname)) d.only_right.push_back(qname);
  }
  std::sort(d.only_left.begin(), d.only_left.end());
  std::sort(d.only_right.begin(), d.only_right.end());
  return d;
}

std::string verdict(const DiffReport& report, SetName set) {
  const SetDelta& d = report.delta(set);
  const std::string label = to_string(set);
  if (d.same()) return "Same as " + label + "_r1";
  if (set == SetName::E) return "Energy export differs";
  if (set == SetName::T || set == SetName::H)
    return "Different technological and hub structures";
  auto join = [](const std::vector<std::string>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) out += ", ";
      out += v[i];
    }
    return out;
  };
  if (d.only_left.empty()) {
    return join(d.only_right) +
           (d.only_right.size() == 1 ? " is" : " are") +
           " present in r2 but not in r1";
  }
  if (d.only_right.empty()) {
    return join(d.only_left) + (d.only_left.size() == 1 ? " is" : " are") +
           " present in r1 but not in r2";
  }
  return "r1 only: " + join(d.only_left) + "; r2 only: " + join(d.only_right);
}

}  // namespace

DiffReport diff_hubs(const model::Hub& left, const model::Hub& right) {
  if (!model::validate(left).valid()) {
    throw InvalidOperand("left hub '" + left.id + "' has validation errors");
  }
  if (!model::validate(right).valid()) {
    throw InvalidOperand("right hub '" + right.id + "' has validation errors");
  }

  DiffReport report;
  report.left_id = left.id;
  report.right_id = right.id;

  std::set<std::string> locs_left, locs_right;
  for (const auto& l : left.locations) locs_left.insert(location_key(l));
  for (const auto& l : right.locations) locs_right.insert(location_key(l));

  std::set<std::string> edges_left, edges_right;
  for (const auto& e : left.graph.edges) edges_left.insert(e.canonical_key());
  for (const auto& e : right.graph.edges) edges_right.insert(e.canonical_key());

  const model::DerivedSets dl = model::derive_all(left.graph);
  const model::DerivedSets dr = model::derive_all(right.graph);

  report.deltas[0] = set_delta(SetName::L, locs_left, locs_right);
  report.deltas[1] = tech_delta(left, right);
  report.deltas[2] = set_delta(SetName::H, edges_left, edges_right);
  report.deltas[3] = set_delta(SetName::C, dl.commodities, dr.commodities);
  report.deltas[4] = set_delta(SetName::E, dl.exports, dr.exports);
  report.deltas[5] = set_delta(SetName::I, dl.imports, dr.imports);
  report.deltas[6] = set_delta(SetName::B, dl.byproducts, dr.byproducts);
  report.deltas[7] = set_delta(SetName::O, dl.opportunities, dr.opportunities);

  for (std::size_t i = 0; i < report.deltas.size(); ++i) {
    report.summary[i] = verdict(report, static_cast<SetName>(i));
  }
  return report;
}

namespace {

std::string braced(const std::vector<std::string>& v) {
  std::string out = "{";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += v[i];
  }
  out += "}";
  return out;
}

}  // namespace

std::string render_diff(const DiffReport& report, DiffFormat format) {
  if (format == DiffFormat::Json) {
    nlohmann::ordered_json doc;
    doc["schema"] = "rreh-diff/1";
    doc["left"] = report.left_id;
    doc["right"] = report.right_id;
    doc["deltas"] = nlohmann::ordered_json::array();
    for (const auto& d : report.deltas) {
      nlohmann::ordered_json jd;
      jd["set"] = to_string(d.set);
      jd["onlyLeft"] = d.only_left;
      jd["onlyRight"] = d.only_right;
      jd["common"] = d.common;
      doc["deltas"].push_back(jd);
    }
    return doc.dump(2) + "\n";
  }

  // Fixed-width table: Set | r1 | r2 | Differences.
  std::vector<std::array<std::string, 4>> rows;
  rows.push_back({"Set", "r1 = " + report.left_id, "r2 = " + report.right_id,
                  "Differences"});
  for (std::size_t i = 0; i < report.deltas.size(); ++i) {
    const SetDelta& d = report.deltas[i];
    std::string left_cell, right_cell;
    if (d.set == SetName::T || d.set == SetName::H || d.set == SetName::L) {
      const char* noun = d.set == SetName::T   ? "technologies"
                         : d.set == SetName::H ? "flows"
                                               : "locations";
      left_cell = std::to_string(d.common + d.only_left.size()) + " " + noun;
      right_cell = std::to_string(d.common + d.only_right.size()) + " " + noun;
      if (!d.only_left.empty())
        left_cell += "; only here: " + braced(d.only_left);
      if (!d.only_right.empty())
        right_cell += "; only here: " + braced(d.only_right);
    } else if (d.same()) {
      left_cell = d.common == 0
                      ? "{}"
                      : "(" + std::to_string(d.common) + " common)";
      right_cell = left_cell;
    } else {
      left_cell = braced(d.only_left);
      right_cell = braced(d.only_right);
      if (d.common > 0) {
        left_cell += " (+" + std::to_string(d.common) + " common)";
        right_cell += " (+" + std::to_string(d.common) + " common)";
      }
    }
    rows.push_back({to_string(d.set) + "_r", left_cell, right_cell,
                    report.summary[i]});
  }

  std::array<std::size_t, 4> widths = {0, 0, 0, 0};
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < 4; ++c)
      widths[c] = std::max(widths[c], row[c].size());
  }
  std::ostringstream os;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < 4; ++c) {
      os << rows[r][c];
      if (c + 1 < 4) {
        os << std::string(widths[c] - rows[r][c].size(), ' ') << " | ";
      }
    }
    os << "\n";
    if (r == 0) {
      std::size_t total = widths[0] + widths[1] + widths[2] + 3 * 3 +
                          rows[0][3].size();
      os << std::string(std::max<std::size_t>(total, 8), '-') << "\n";
    }
  }
  return os.str();
}

}  // namespace rreh::diff
