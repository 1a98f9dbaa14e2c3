#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rreh/model.hpp"

// Textual hub-description language (".rreh" files), its parser and the
// canonical serializer, plus graph exports (DOT, model skeleton).
//
// Grammar (comments run from '#' to end of line; names may span several
// words, which are joined by single spaces):
//
//   document     := hubDecl
//   hubDecl      := "hub" STRING "{" locationDecl* techDecl* flowsBlock
//                   assertBlock? "}"
//   locationDecl := "location" IDENT "{" "name" "=" STRING ";"
//                   "potential" "=" potentialList ";" "demand" "=" LEVEL ";"
//                   "}"
//   potentialList:= IDENT ":" LEVEL ("," IDENT ":" LEVEL)*
//   techDecl     := "tech" NAME "@" IDENT ("kind" KIND)?
//                   "{" "in" ":" commodityList? ";" "out" ":" commodityList?
//                   ";" "}"
//   flowsBlock   := "flows" "{" flowDecl* "}"
//   flowDecl     := "flow" COMMODITY "{" "from" ":" techRefList ";"
//                   "to" ":" techRefList? ";" "}"
//   techRef      := NAME "@" IDENT
//   assertBlock  := "assert" "{" (SETNAME "=" "{" commodityList? "}" ";")* "}"
//   SETNAME      := "C" | "E" | "I" | "B" | "O"
//   COMMODITY    := NAME ("(" IDENT ")")?
//   NAME         := IDENT+            (joined with single spaces)
//   LEVEL        := "low" | "medium" | "high"
//   KIND         := "import" | "export" | "opportunity"
namespace rreh::dsl {

struct SourceSpan {
  std::string file;
  int line = 1;    // 1-based
  int column = 1;  // 1-based
  int length = 0;

  std::string to_string() const;
};

enum class Severity { Error, Warning };

struct ParseDiagnostic {
  SourceSpan span;
  Severity severity = Severity::Error;
  std::string message;
  std::optional<std::string> expected;  // token-set or near-miss note
};

struct HubDocument {
  model::Hub hub;
  // Span per declared entity. Keys: "location:<id>", "tech:<name>@<loc>",
  // "flow:#<n>" (1-based declaration index), "assert:<SETNAME>".
  std::map<std::string, SourceSpan> spans;
  std::string source_hash;  // FNV-1a 64 of the raw source, 16 hex chars
};

struct ParseResult {
  std::optional<HubDocument> document;  // present iff no error diagnostics
  std::vector<ParseDiagnostic> diagnostics;

  bool ok() const { return document.has_value(); }
};

ParseResult parse(std::string_view source, const std::string& file_name);

// Canonical text form: fixed section order, entities sorted lexicographically,
// 2-space indent, LF endings. parse(serialize(h)) yields a hub equal to h.
std::string serialize(const model::Hub& hub);

// Graphviz rendering. expand=true emits one edge per expanded simple edge;
// expand=false emits a junction node per hyperedge. Node attribute "kind",
// edge attribute "commodity".
std::string export_dot(const model::Hub& hub, bool expand);

// Node/hyperedge text skeleton with capacity/activity variable stubs,
// stable header "# rreh-skeleton v1".
std::string export_model_skeleton(const model::Hub& hub);

std::string fnv1a_hash(std::string_view data);

// Levenshtein distance, used for near-miss suggestions (cutoff at <= 2).
std::size_t edit_distance(std::string_view a, std::string_view b);

}  // namespace rreh::dsl
