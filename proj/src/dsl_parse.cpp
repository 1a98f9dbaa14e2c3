#include <algorithm>
#include <cctype>
#include <cstdint>
#include <sstream>

#include "rreh/dsl.hpp"

namespace rreh::dsl {

std::string SourceSpan::to_string() const {
  std::ostringstream os;
  os << file << ":" << line << ":" << column;
  return os.str();
}

std::string fnv1a_hash(std::string_view data) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::size_t edit_distance(std::string_view a, std::string_view b) {
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      std::size_t up = row[j];
      std::size_t cost = (a[i - 1] == b[j - 1]) ? 0 : 1;
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + cost});
      diag = up;
    }
  }
  return row[b.size()];
}

namespace {

enum class Tok {
  Ident,
  String,
  LBrace,
  RBrace,
  LParen,
  RParen,
  Colon,
  Semi,
  Comma,
  At,
  Eq,
  End,
  Bad,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  int line = 1;
  int column = 1;
  int length = 0;
};

const char* tok_name(Tok t) {
  switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::String: return "string";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::Colon: return "':'";
    case Tok::Semi: return "';'";
    case Tok::Comma: return "','";
    case Tok::At: return "'@'";
    case Tok::Eq: return "'='";
    case Tok::End: return "end of input";
    case Tok::Bad: return "invalid character";
  }
  return "?";
}

bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' ||
         c == '.';
}

class Lexer {
 public:
  Lexer(std::string_view src, std::vector<ParseDiagnostic>* diags)
      : src_(src), diags_(diags) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_trivia();
      Token t;
      t.line = line_;
      t.column = col_;
      if (pos_ >= src_.size()) {
        t.kind = Tok::End;
        t.length = 0;
        out.push_back(t);
        break;
      }
      char c = src_[pos_];
      if (c == '"') {
        t.kind = Tok::String;
        lex_string(t);
      } else if (ident_char(c)) {
        std::size_t start = pos_;
        while (pos_ < src_.size() && ident_char(src_[pos_])) advance();
        t.kind = Tok::Ident;
        t.text = std::string(src_.substr(start, pos_ - start));
        t.length = static_cast<int>(pos_ - start);
      } else {
        t.length = 1;
        switch (c) {
          case '{': t.kind = Tok::LBrace; break;
          case '}': t.kind = Tok::RBrace; break;
          case '(': t.kind = Tok::LParen; break;
          case ')': t.kind = Tok::RParen; break;
          case ':': t.kind = Tok::Colon; break;
          case ';': t.kind = Tok::Semi; break;
          case ',': t.kind = Tok::Comma; break;
          case '@': t.kind = Tok::At; break;
          case '=': t.kind = Tok::Eq; break;
          default:
            t.kind = Tok::Bad;
            t.text = std::string(1, c);
            break;
        }
        advance();
      }
      out.push_back(t);
    }
    return out;
  }

 private:
  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_trivia() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  void lex_string(Token& t) {
    int start_line = line_;
    int start_col = col_;
    advance();  // opening quote
    std::string value;
    while (pos_ < src_.size() && src_[pos_] != '"' && src_[pos_] != '\n') {
      if (src_[pos_] == '\\' && pos_ + 1 < src_.size()) {
        char next = src_[pos_ + 1];
        if (next == '"' || next == '\\') {
          advance();
          value.push_back(src_[pos_]);
          advance();
          continue;
        }
      }
      value.push_back(src_[pos_]);
      advance();
    }
    if (pos_ < src_.size() && src_[pos_] == '"') {
      advance();
    } else {
      diags_->push_back({{"", start_line, start_col, 1},
                         Severity::Error,
                         "unterminated string literal",
                         std::nullopt});
    }
    t.text = value;
    t.length = col_ - start_col;
    if (line_ != start_line) t.length = 1;
  }

  std::string_view src_;
  std::vector<ParseDiagnostic>* diags_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

struct PendingTech {
  model::Technology tech;
  SourceSpan span;
  SourceSpan location_span;
};

struct PendingFlowRef {
  std::string name;
  std::string location;
  SourceSpan span;
};

struct PendingFlow {
  std::string commodity;
  std::vector<PendingFlowRef> producers;
  std::vector<PendingFlowRef> consumers;
  SourceSpan span;
};

class Parser {
 public:
  Parser(std::vector<Token> tokens, std::string file)
      : tokens_(std::move(tokens)), file_(std::move(file)) {}

  ParseResult run(std::string_view source) {
    ParseResult result;
    parse_document();
    result.diagnostics = std::move(diags_);
    bool has_error = std::any_of(
        result.diagnostics.begin(), result.diagnostics.end(),
        [](const ParseDiagnostic& d) { return d.severity == Severity::Error; });
    if (!has_error) {
      model::TechGraph graph;
      for (auto& pt : techs_) graph.technologies.push_back(pt.tech);
      for (auto& pf : flows_) {
        std::vector<std::string> producers;
        std::vector<std::string> consumers;
        for (auto& r : pf.producers) producers.push_back(r.name + "@" + r.location);
        for (auto& r : pf.consumers) consumers.push_back(r.name + "@" + r.location);
        graph.edges.push_back(model::make_hyperedge(pf.commodity, producers,
                                                    consumers));
      }
      HubDocument doc;
      doc.hub = model::assemble_hub(hub_id_, locations_, std::move(graph),
                                    declared_sets_);
      doc.spans = std::move(spans_);
      doc.source_hash = fnv1a_hash(source);
      result.document = std::move(doc);
    }
    return result;
  }

 private:
  const Token& peek(int ahead = 0) const {
    std::size_t i = std::min(pos_ + ahead, tokens_.size() - 1);
    return tokens_[i];
  }
  const Token& advance() { return tokens_[std::min(pos_++, tokens_.size() - 1)]; }
  bool at(Tok kind) const { return peek().kind == kind; }
  bool at_keyword(const char* kw) const {
    return peek().kind == Tok::Ident && peek().text == kw;
  }

  SourceSpan span_of(const Token& t) const {
    return {file_, t.line, t.column, t.length};
  }

  void error_at(const Token& t, std::string message,
                std::optional<std::string> expected = std::nullopt) {
    diags_.push_back(
        {span_of(t), Severity::Error, std::move(message), std::move(expected)});
  }

  bool expect(Tok kind, const char* what) {
    if (at(kind)) {
      advance();
      return true;
    }
    error_at(peek(), std::string("expected ") + what, tok_name(peek().kind));
    return false;
  }

  bool expect_keyword(const char* kw) {
    if (at_keyword(kw)) {
      advance();
      return true;
    }
    error_at(peek(), std::string("expected '") + kw + "'");
    return false;
  }

  // Skips to a safe continuation point after a parse error inside a block.
  void recover_to_decl() {
    int depth = 0;
    while (!at(Tok::End)) {
      if (at(Tok::LBrace)) {
        ++depth;
        advance();
        continue;
      }
      if (at(Tok::RBrace)) {
        if (depth == 0) {
          advance();
          return;
        }
        --depth;
        advance();
        continue;
      }
      if (depth == 0 &&
          (at_keyword("location") || at_keyword("tech") || at_keyword("flows") ||
           at_keyword("assert") || at_keyword("flow"))) {
        return;
      }
      advance();
    }
  }

  // One-or-more IDENT tokens joined with single spaces. Stops before
  // punctuation. The span covers the first token.
  std::optional<std::pair<std::string, Token>> parse_name(const char* what) {
    if (!at(Tok::Ident)) {
      error_at(peek(), std::string("expected ") + what, tok_name(peek().kind));
      return std::nullopt;
    }
    Token first = advance();
    std::string name = first.text;
    while (at(Tok::Ident)) name += " " + advance().text;
    return std::make_pair(name, first);
  }

  // NAME ("(" IDENT ")")?
  std::optional<std::pair<std::string, Token>> parse_commodity() {
    auto name = parse_name("commodity");
    if (!name) return std::nullopt;
    if (at(Tok::LParen)) {
      advance();
      if (!at(Tok::Ident)) {
        error_at(peek(), "expected phase tag identifier");
        return std::nullopt;
      }
      std::string tag = advance().text;
      if (!expect(Tok::RParen, "')'")) return std::nullopt;
      name->first += "(" + tag + ")";
    }
    return name;
  }

  bool parse_commodity_list(std::set<std::string>& out) {
    // May be empty; terminated by ';' or '}'.
    while (at(Tok::Ident)) {
      auto c = parse_commodity();
      if (!c) return false;
      out.insert(c->first);
      if (at(Tok::Comma)) {
        advance();
        continue;
      }
      break;
    }
    return true;
  }

  std::optional<model::Level> parse_level() {
    if (at(Tok::Ident)) {
      auto level = model::level_from_string(peek().text);
      if (level) {
        advance();
        return level;
      }
    }
    error_at(peek(), "expected level 'low', 'medium' or 'high'");
    return std::nullopt;
  }

  void parse_document() {
    if (!at_keyword("hub")) {
      error_at(peek(), "expected 'hub'", tok_name(peek().kind));
      return;
    }
    advance();
    if (!at(Tok::String)) {
      error_at(peek(), "expected hub id string");
      return;
    }
    hub_id_ = advance().text;
    if (!expect(Tok::LBrace, "'{'")) return;

    while (!at(Tok::RBrace) && !at(Tok::End)) {
      if (at_keyword("location")) {
        parse_location();
      } else if (at_keyword("tech")) {
        parse_tech();
      } else if (at_keyword("flows")) {
        parse_flows();
      } else if (at_keyword("assert")) {
        parse_assert();
      } else {
        error_at(peek(),
                 "expected 'location', 'tech', 'flows', 'assert' or '}'",
                 tok_name(peek().kind));
        recover_to_decl();
      }
    }
    expect(Tok::RBrace, "'}'");
    if (!at(Tok::End)) {
      error_at(peek(), "unexpected content after hub declaration");
    }
    if (!saw_flows_ && diags_.empty()) {
      error_at(peek(), "hub is missing its 'flows' block");
    }
    resolve_references();
  }

  void parse_location() {
    advance();  // 'location'
    if (!at(Tok::Ident)) {
      error_at(peek(), "expected location id");
      recover_to_decl();
      return;
    }
    Token id_tok = advance();
    model::Location loc;
    loc.id = id_tok.text;
    if (!expect(Tok::LBrace, "'{'")) {
      recover_to_decl();
      return;
    }
    bool ok = true;
    ok = ok && expect_keyword("name") && expect(Tok::Eq, "'='");
    if (ok) {
      if (!at(Tok::String)) {
        error_at(peek(), "expected location name string");
        ok = false;
      } else {
        loc.name = advance().text;
      }
    }
    ok = ok && expect(Tok::Semi, "';'");
    ok = ok && expect_keyword("potential") && expect(Tok::Eq, "'='");
    while (ok) {
      if (!at(Tok::Ident)) {
        error_at(peek(), "expected resource tag");
        ok = false;
        break;
      }
      model::ResourceLevel rl;
      rl.resource = advance().text;
      ok = expect(Tok::Colon, "':'");
      if (!ok) break;
      auto level = parse_level();
      if (!level) {
        ok = false;
        break;
      }
      rl.level = *level;
      loc.potential.push_back(rl);
      if (at(Tok::Comma)) {
        advance();
        continue;
      }
      break;
    }
    ok = ok && expect(Tok::Semi, "';'");
    ok = ok && expect_keyword("demand") && expect(Tok::Eq, "'='");
    if (ok) {
      auto level = parse_level();
      if (level) {
        loc.demand = *level;
      } else {
        ok = false;
      }
    }
    ok = ok && expect(Tok::Semi, "';'") && expect(Tok::RBrace, "'}'");
    if (!ok) {
      recover_to_decl();
      return;
    }
    for (const auto& l : locations_) {
      if (l.id == loc.id) {
        error_at(id_tok, "duplicate declaration of location '" + loc.id + "'");
        return;
      }
    }
    spans_["location:" + loc.id] = span_of(id_tok);
    locations_.push_back(std::move(loc));
  }

  void parse_tech() {
    advance();  // 'tech'
    auto name = parse_name("technology name");
    if (!name) {
      recover_to_decl();
      return;
    }
    PendingTech pt;
    pt.tech.name = name->first;
    pt.span = span_of(name->second);
    if (!expect(Tok::At, "'@'")) {
      recover_to_decl();
      return;
    }
    if (!at(Tok::Ident)) {
      error_at(peek(), "expected location id after '@'");
      recover_to_decl();
      return;
    }
    Token loc_tok = advance();
    pt.tech.location = loc_tok.text;
    pt.location_span = span_of(loc_tok);
    if (at_keyword("kind")) {
      advance();
      if (at(Tok::Ident)) {
        auto kind = model::tech_kind_from_string(peek().text);
        if (kind && *kind != model::TechKind::Generic) {
          pt.tech.kind = *kind;
          advance();
        } else {
          error_at(peek(), "expected kind 'import', 'export' or 'opportunity'");
          recover_to_decl();
          return;
        }
      } else {
        error_at(peek(), "expected kind 'import', 'export' or 'opportunity'");
        recover_to_decl();
        return;
      }
    }
    bool ok = expect(Tok::LBrace, "'{'");
    ok = ok && expect_keyword("in") && expect(Tok::Colon, "':'");
    ok = ok && parse_commodity_list(pt.tech.inputs);
    ok = ok && expect(Tok::Semi, "';'");
    ok = ok && expect_keyword("out") && expect(Tok::Colon, "':'");
    ok = ok && parse_commodity_list(pt.tech.outputs);
    ok = ok && expect(Tok::Semi, "';'") && expect(Tok::RBrace, "'}'");
    if (!ok) {
      recover_to_decl();
      return;
    }
    const std::string qname = pt.tech.qualified_name();
    for (const auto& other : techs_) {
      if (other.tech.qualified_name() == qname) {
        error_at(name->second,
                 "duplicate declaration of technology '" + qname + "'");
        return;
      }
    }
    spans_["tech:" + qname] = pt.span;
    techs_.push_back(std::move(pt));
  }

  std::optional<PendingFlowRef> parse_tech_ref() {
    auto name = parse_name("technology reference");
    if (!name) return std::nullopt;
    if (!expect(Tok::At, "'@'")) return std::nullopt;
    if (!at(Tok::Ident)) {
      error_at(peek(), "expected location id after '@'");
      return std::nullopt;
    }
    Token loc_tok = advance();
    PendingFlowRef ref;
    ref.name = name->first;
    ref.location = loc_tok.text;
    ref.span = span_of(name->second);
    return ref;
  }

  bool parse_tech_ref_list(std::vector<PendingFlowRef>& out, bool allow_empty) {
    if (!at(Tok::Ident)) {
      if (allow_empty) return true;
      error_at(peek(), "expected at least one technology reference");
      return false;
    }
    for (;;) {
      auto ref = parse_tech_ref();
      if (!ref) return false;
      out.push_back(*ref);
      if (at(Tok::Comma)) {
        advance();
        continue;
      }
      break;
    }
    return true;
  }

  void parse_flows() {
    advance();  // 'flows'
    saw_flows_ = true;
    if (!expect(Tok::LBrace, "'{'")) {
      recover_to_decl();
      return;
    }
    while (!at(Tok::RBrace) && !at(Tok::End)) {
      if (!at_keyword("flow")) {
        error_at(peek(), "expected 'flow' or '}'", tok_name(peek().kind));
        recover_to_decl();
        continue;
      }
      parse_flow();
    }
    expect(Tok::RBrace, "'}'");
  }

  void parse_flow() {
    Token kw = advance();  // 'flow'
    auto commodity = parse_commodity();
    if (!commodity) {
      recover_to_decl();
      return;
    }
    PendingFlow pf;
    pf.commodity = commodity->first;
    pf.span = span_of(commodity->second);
    bool ok = expect(Tok::LBrace, "'{'");
    ok = ok && expect_keyword("from") && expect(Tok::Colon, "':'");
    ok = ok && parse_tech_ref_list(pf.producers, /*allow_empty=*/false);
    ok = ok && expect(Tok::Semi, "';'");
    ok = ok && expect_keyword("to") && expect(Tok::Colon, "':'");
    ok = ok && parse_tech_ref_list(pf.consumers, /*allow_empty=*/true);
    ok = ok && expect(Tok::Semi, "';'") && expect(Tok::RBrace, "'}'");
    if (!ok) {
      recover_to_decl();
      return;
    }
    (void)kw;
    flows_.push_back(std::move(pf));
    spans_["flow:#" + std::to_string(flows_.size())] = flows_.back().span;
  }

  void parse_assert() {
    Token kw = advance();  // 'assert'
    (void)kw;
    if (!expect(Tok::LBrace, "'{'")) {
      recover_to_decl();
      return;
    }
    if (!declared_sets_) declared_sets_ = model::DeclaredSets{};
    while (!at(Tok::RBrace) && !at(Tok::End)) {
      if (!at(Tok::Ident)) {
        error_at(peek(), "expected set name 'C', 'E', 'I', 'B' or 'O'");
        recover_to_decl();
        return;
      }
      Token set_tok = advance();
      std::optional<std::set<std::string>>* slot = nullptr;
      if (set_tok.text == "C") slot = &declared_sets_->commodities;
      else if (set_tok.text == "E") slot = &declared_sets_->exports;
      else if (set_tok.text == "I") slot = &declared_sets_->imports;
      else if (set_tok.text == "B") slot = &declared_sets_->byproducts;
      else if (set_tok.text == "O") slot = &declared_sets_->opportunities;
      if (!slot) {
        error_at(set_tok, "expected set name 'C', 'E', 'I', 'B' or 'O'");
        recover_to_decl();
        return;
      }
      if (slot->has_value()) {
        error_at(set_tok, "duplicate assert for set '" + set_tok.text + "'");
      }
      bool ok = expect(Tok::Eq, "'='") && expect(Tok::LBrace, "'{'");
      std::set<std::string> values;
      ok = ok && parse_commodity_list(values);
      ok = ok && expect(Tok::RBrace, "'}'") && expect(Tok::Semi, "';'");
      if (!ok) {
        recover_to_decl();
        return;
      }
      *slot = std::move(values);
      spans_["assert:" + set_tok.text] = span_of(set_tok);
    }
    expect(Tok::RBrace, "'}'");
  }

  std::vector<std::string> near_misses(const std::string& needle,
                                       const std::vector<std::string>& pool) {
    std::vector<std::pair<std::size_t, std::string>> scored;
    for (const auto& cand : pool) {
      std::size_t d = edit_distance(needle, cand);
      if (d > 0 && d <= 2) scored.push_back({d, cand});
    }
    std::sort(scored.begin(), scored.end());
    std::vector<std::string> out;
    for (std::size_t i = 0; i < scored.size() && i < 3; ++i)
      out.push_back(scored[i].second);
    return out;
  }

  void unknown_reference(const SourceSpan& span, const std::string& what,
                         const std::string& needle,
                         const std::vector<std::string>& pool) {
    std::string note;
    auto suggestions = near_misses(needle, pool);
    if (!suggestions.empty()) {
      note = "did you mean ";
      for (std::size_t i = 0; i < suggestions.size(); ++i) {
        if (i) note += " or ";
        note += "'" + suggestions[i] + "'";
      }
      note += "?";
    }
    diags_.push_back({span, Severity::Error,
                      "unknown " + what + " '" + needle + "'",
                      note.empty() ? std::nullopt
                                   : std::optional<std::string>(note)});
  }

  void resolve_references() {
    std::vector<std::string> location_ids;
    for (const auto& l : locations_) location_ids.push_back(l.id);
    std::vector<std::string> tech_names;
    for (const auto& t : techs_) tech_names.push_back(t.tech.qualified_name());

    for (const auto& t : techs_) {
      if (std::find(location_ids.begin(), location_ids.end(),
                    t.tech.location) == location_ids.end()) {
        unknown_reference(t.location_span, "location", t.tech.location,
                          location_ids);
      }
    }
    for (const auto& f : flows_) {
      for (const auto& r : f.producers) {
        std::string qname = r.name + "@" + r.location;
        if (std::find(tech_names.begin(), tech_names.end(), qname) ==
            tech_names.end()) {
          unknown_reference(r.span, "technology", qname, tech_names);
        }
      }
      for (const auto& r : f.consumers) {
        std::string qname = r.name + "@" + r.location;
        if (std::find(tech_names.begin(), tech_names.end(), qname) ==
            tech_names.end()) {
          unknown_reference(r.span, "technology", qname, tech_names);
        }
      }
    }
    // Duplicate flow triples.
    std::set<std::string> seen;
    for (std::size_t i = 0; i < flows_.size(); ++i) {
      std::vector<std::string> producers, consumers;
      for (const auto& r : flows_[i].producers)
        producers.push_back(r.name + "@" + r.location);
      for (const auto& r : flows_[i].consumers)
        consumers.push_back(r.name + "@" + r.location);
      auto edge = model::make_hyperedge(flows_[i].commodity, producers,
                                        consumers);
      if (!seen.insert(edge.canonical_key()).second) {
        diags_.push_back({flows_[i].span, Severity::Error,
                          "duplicate declaration of flow " +
                              edge.canonical_key(),
                          std::nullopt});
      }
    }
  }

  std::vector<Token> tokens_;
  std::string file_;
  std::size_t pos_ = 0;
  std::vector<ParseDiagnostic> diags_;

  std::string hub_id_;
  std::vector<model::Location> locations_;
  std::vector<PendingTech> techs_;
  std::vector<PendingFlow> flows_;
  std::optional<model::DeclaredSets> declared_sets_;
  std::map<std::string, SourceSpan> spans_;
  bool saw_flows_ = false;
};

}  // namespace

ParseResult parse(std::string_view source, const std::string& file_name) {
  ParseResult result;
  if (source.size() >= 3 && source.substr(0, 3) == "\xEF\xBB\xBF") {
    result.diagnostics.push_back(
        {{file_name, 1, 1, 3},
         Severity::Error,
         "byte order mark not allowed; save as UTF-8 without BOM",
         std::nullopt});
    return result;
  }
  std::vector<ParseDiagnostic> lex_diags;
  Lexer lexer(source, &lex_diags);
  std::vector<Token> tokens = lexer.run();
  for (auto& d : lex_diags) d.span.file = file_name;

  Parser parser(std::move(tokens), file_name);
  result = parser.run(source);
  result.diagnostics.insert(result.diagnostics.begin(), lex_diags.begin(),
                            lex_diags.end());
  if (!lex_diags.empty()) result.document.reset();
  return result;
}

}  // namespace rreh::dsl
