#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "rreh/model.hpp"

// Structured per-set comparison of two hubs, one delta per characteristic
// set in the fixed order L, T, H, C, E, I, B, O.
namespace rreh::diff {

enum class SetName { L, T, H, C, E, I, B, O };

std::string to_string(SetName set);

struct SetDelta {
  SetName set = SetName::L;
  std::vector<std::string> only_left;   // canonical, sorted
  std::vector<std::string> only_right;  // canonical, sorted
  std::size_t common = 0;

  bool same() const { return only_left.empty() && only_right.empty(); }
};

struct DiffReport {
  std::string left_id;
  std::string right_id;
  std::array<SetDelta, 8> deltas;  // fixed order L,T,H,C,E,I,B,O
  std::array<std::string, 8> summary;

  const SetDelta& delta(SetName set) const {
    return deltas[static_cast<std::size_t>(set)];
  }
};

struct InvalidOperand : std::runtime_error {
  explicit InvalidOperand(const std::string& what)
      : std::runtime_error(what) {}
};

// Compares derived sets (never declared ones). Technologies compare by their
// full (name, location, kind, inputs, outputs) value; a technology present on
// both sides under the same qualified name but with a different signature is
// listed on both sides with a "(changed)" annotation. Locations compare by
// (name, potential, demand). Hyperedges compare by full value.
//
// Throws InvalidOperand if either hub has validation errors.
DiffReport diff_hubs(const model::Hub& left, const model::Hub& right);

enum class DiffFormat { Table, Json };

std::string render_diff(const DiffReport& report, DiffFormat format);

}  // namespace rreh::diff
