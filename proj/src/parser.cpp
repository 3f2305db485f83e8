#include <cctype>
#include <set>
#include <unordered_set>

#include "deon/syntax.hpp"
#include "deon/theory.hpp"

namespace deon {

std::string Diagnostic::render() const {
  std::string out = std::to_string(pos.line) + ":" + std::to_string(pos.col) + ": " + message;
  if (!expected.empty()) {
    out += " (expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i) out += ", ";
      out += expected[i];
    }
    out += ")";
  }
  return out;
}

namespace {

enum class Tok {
  Word,       // identifiers, keywords, modal words
  BracketId,  // [ident] — agent selector after O
  Tilde,
  Amp,
  Pipe,
  Arrow,
  Iff,
  LParen,
  RParen,
  LBrace,
  RBrace,
  Comma,
  Colon,
  Box,     // []
  BoxAv,   // [av]
  BoxPv,   // [pv]
  BoxRel,  // [rel IDENT]
  DiaTok,  // <>
  DiaAv,   // <av>
  DiaPv,   // <pv>
  End,
  Error,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;  // Word/BracketId/BoxRel payload, or error message
  SourcePos pos;
};

const char* tok_name(Tok t) {
  switch (t) {
    case Tok::Word: return "identifier";
    case Tok::BracketId: return "'[agent]'";
    case Tok::Tilde: return "'~'";
    case Tok::Amp: return "'&'";
    case Tok::Pipe: return "'|'";
    case Tok::Arrow: return "'->'";
    case Tok::Iff: return "'<->'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::Comma: return "','";
    case Tok::Colon: return "':'";
    case Tok::Box: return "'[]'";
    case Tok::BoxAv: return "'[av]'";
    case Tok::BoxPv: return "'[pv]'";
    case Tok::BoxRel: return "'[rel ID]'";
    case Tok::DiaTok: return "'<>'";
    case Tok::DiaAv: return "'<av>'";
    case Tok::DiaPv: return "'<pv>'";
    case Tok::End: return "end of input";
    case Tok::Error: return "error";
  }
  return "?";
}

bool is_word_start(char c) { return std::isalpha(static_cast<unsigned char>(c)); }
bool is_word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  Token next() {
    skip_ws();
    Token t;
    t.pos = pos_;
    if (at_end()) {
      t.kind = Tok::End;
      return t;
    }
    char c = peek();
    if (is_word_start(c)) {
      t.kind = Tok::Word;
      t.text = word();
      return t;
    }
    switch (c) {
      case '~': get(); t.kind = Tok::Tilde; return t;
      case '&': get(); t.kind = Tok::Amp; return t;
      case '|': get(); t.kind = Tok::Pipe; return t;
      case '(': get(); t.kind = Tok::LParen; return t;
      case ')': get(); t.kind = Tok::RParen; return t;
      case '{': get(); t.kind = Tok::LBrace; return t;
      case '}': get(); t.kind = Tok::RBrace; return t;
      case ',': get(); t.kind = Tok::Comma; return t;
      case ':': get(); t.kind = Tok::Colon; return t;
      case '-':
        get();
        if (!at_end() && peek() == '>') { get(); t.kind = Tok::Arrow; return t; }
        t.kind = Tok::Error;
        t.text = "stray '-'";
        return t;
      case '<': return lex_angle(t);
      case '[': return lex_bracket(t);
      default:
        get();
        t.kind = Tok::Error;
        t.text = std::string("unexpected character '") + c + "'";
        return t;
    }
  }

 private:
  Token lex_angle(Token t) {
    get();  // <
    if (!at_end() && peek() == '-') {
      get();
      if (!at_end() && peek() == '>') { get(); t.kind = Tok::Iff; return t; }
      t.kind = Tok::Error;
      t.text = "expected '<->'";
      return t;
    }
    if (!at_end() && peek() == '>') { get(); t.kind = Tok::DiaTok; return t; }
    if (!at_end() && is_word_start(peek())) {
      std::string w = word();
      if (!at_end() && peek() == '>') {
        get();
        if (w == "av") { t.kind = Tok::DiaAv; return t; }
        if (w == "pv") { t.kind = Tok::DiaPv; return t; }
      }
    }
    t.kind = Tok::Error;
    t.text = "expected '<>', '<av>', '<pv>' or '<->'";
    return t;
  }

  Token lex_bracket(Token t) {
    get();  // [
    if (!at_end() && peek() == ']') { get(); t.kind = Tok::Box; return t; }
    if (!at_end() && is_word_start(peek())) {
      std::string w = word();
      if (w == "rel") {
        skip_ws();
        if (!at_end() && is_word_start(peek())) {
          t.text = word();
          if (!at_end() && peek() == ']') { get(); t.kind = Tok::BoxRel; return t; }
        }
        t.kind = Tok::Error;
        t.text = "expected '[rel NAME]'";
        return t;
      }
      if (!at_end() && peek() == ']') {
        get();
        if (w == "av") { t.kind = Tok::BoxAv; return t; }
        if (w == "pv") { t.kind = Tok::BoxPv; return t; }
        t.kind = Tok::BracketId;
        t.text = w;
        return t;
      }
    }
    t.kind = Tok::Error;
    t.text = "expected '[]', '[av]', '[pv]', '[rel NAME]' or '[agent]'";
    return t;
  }

  void skip_ws() {
    while (!at_end()) {
      char c = peek();
      if (c == '#') {
        while (!at_end() && peek() != '\n') get();
      } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        get();
      } else {
        break;
      }
    }
  }

  std::string word() {
    std::string out;
    while (!at_end() && is_word_char(peek())) out += get();
    return out;
  }

  bool at_end() const { return i_ >= text_.size(); }
  char peek() const { return text_[i_]; }
  char get() {
    char c = text_[i_++];
    if (c == '\n') {
      pos_.line++;
      pos_.col = 1;
    } else {
      pos_.col++;
    }
    return c;
  }

  std::string_view text_;
  std::size_t i_ = 0;
  SourcePos pos_{1, 1};
};

const std::unordered_set<std::string>& reserved_words() {
  static const std::unordered_set<std::string> r = {
      "theory", "atom",    "agent",      "global", "local", "query",
      "expect", "entails", "consistent", "true",   "false", "stit"};
  return r;
}

bool is_section_keyword(const std::string& w) {
  return w == "theory" || w == "atom" || w == "agent" || w == "global" || w == "local" ||
         w == "query";
}

bool valid_lower_ident(const std::string& s) {
  if (s.empty() || !std::islower(static_cast<unsigned char>(s[0]))) return false;
  for (char c : s)
    if (!(std::islower(static_cast<unsigned char>(c)) ||
          std::isdigit(static_cast<unsigned char>(c)) || c == '_'))
      return false;
  return true;
}

// Recursive-descent parser over the token stream. Formulas terminate
// naturally when the next token cannot extend them, so problem files can
// parse formulas in-stream and resume at section keywords.
class Parser {
 public:
  Parser(std::string_view text, const Signature& sig) : lex_(text), sig_(sig) { advance(); }

  std::optional<Formula> formula() { return iff_level(false); }

  const Token& cur() const { return cur_; }
  void advance() { cur_ = lex_.next(); }
  bool at_end() const { return cur_.kind == Tok::End; }

  std::optional<Diagnostic> error;

 private:
  const TheorySpec& spec() const { return builtin_theory(sig_.theory); }

  std::optional<Formula> iff_level(bool in_slot) {
    auto lhs = imp_level(in_slot);
    if (!lhs) return std::nullopt;
    while (cur_.kind == Tok::Iff) {
      advance();
      auto rhs = imp_level(in_slot);
      if (!rhs) return std::nullopt;
      lhs = Formula::iff(*lhs, *rhs);
    }
    return lhs;
  }

  std::optional<Formula> imp_level(bool in_slot) {
    auto lhs = in_slot ? and_level(in_slot) : or_level();
    if (!lhs) return std::nullopt;
    if (cur_.kind == Tok::Arrow) {
      advance();
      auto rhs = imp_level(in_slot);  // right-associative
      if (!rhs) return std::nullopt;
      return Formula::implies(*lhs, *rhs);
    }
    return lhs;
  }

  std::optional<Formula> or_level() {
    auto lhs = and_level(false);
    if (!lhs) return std::nullopt;
    while (cur_.kind == Tok::Pipe) {
      advance();
      auto rhs = and_level(false);
      if (!rhs) return std::nullopt;
      lhs = Formula::disj(*lhs, *rhs);
    }
    return lhs;
  }

  std::optional<Formula> and_level(bool in_slot) {
    auto lhs = unary(in_slot);
    if (!lhs) return std::nullopt;
    while (cur_.kind == Tok::Amp) {
      advance();
      auto rhs = unary(in_slot);
      if (!rhs) return std::nullopt;
      lhs = Formula::conj(*lhs, *rhs);
    }
    return lhs;
  }

  std::optional<Formula> unary(bool in_slot) {
    SourcePos at = cur_.pos;
    switch (cur_.kind) {
      case Tok::Tilde: {
        advance();
        auto f = unary(in_slot);
        return f ? std::optional(Formula::neg(*f)) : std::nullopt;
      }
      case Tok::Box: return modal(at, in_slot, [](Formula f) { return Formula::box(f); });
      case Tok::DiaTok: return modal(at, in_slot, [](Formula f) { return Formula::dia(f); });
      case Tok::BoxAv: return modal(at, in_slot, [](Formula f) { return Formula::box_av(f); });
      case Tok::BoxPv: return modal(at, in_slot, [](Formula f) { return Formula::box_pv(f); });
      case Tok::DiaAv:
        // <av> f is sugar for ~[av] ~f
        return modal(at, in_slot,
                     [](Formula f) { return Formula::neg(Formula::box_av(Formula::neg(f))); },
                     Formula::Kind::BoxAv);
      case Tok::DiaPv:
        return modal(at, in_slot,
                     [](Formula f) { return Formula::neg(Formula::box_pv(Formula::neg(f))); },
                     Formula::Kind::BoxPv);
      case Tok::BoxRel: {
        std::string rel = cur_.text;
        advance();
        if (!theory_has_relation(sig_.theory, rel))
          return fail(at, "undeclared relation '" + rel + "'");
        auto f = unary(in_slot);
        if (!f) return std::nullopt;
        return check_op(Formula::box_rel(rel, *f), at);
      }
      case Tok::LParen: {
        advance();
        auto f = iff_level(false);
        if (!f) return std::nullopt;
        if (cur_.kind != Tok::RParen) return expect_fail({Tok::RParen});
        advance();
        return f;
      }
      case Tok::Word:
        return word_formula(at, in_slot);
      case Tok::Error:
        return fail(cur_.pos, cur_.text);
      default:
        return formula_fail();
    }
  }

  template <typename Make>
  std::optional<Formula> modal(SourcePos at, bool in_slot, Make make,
                               std::optional<Formula::Kind> check_kind = std::nullopt) {
    advance();
    auto f = unary(in_slot);
    if (!f) return std::nullopt;
    Formula built = make(*f);
    Formula::Kind k = check_kind ? *check_kind : built.kind();
    if (!spec().allows(k)) return fail(at, "operator not in theory " + to_string(sig_.theory));
    return built;
  }

  std::optional<Formula> word_formula(SourcePos at, bool in_slot) {
    std::string w = cur_.text;
    if (w == "true") { advance(); return Formula::truth(); }
    if (w == "false") { advance(); return Formula::falsity(); }
    if (w == "O") {
      advance();
      if (cur_.kind == Tok::LBrace) return cond_ob_tail(at, "");
      if (cur_.kind == Tok::BracketId) {
        std::string agent = cur_.text;
        SourcePos agent_at = cur_.pos;
        advance();
        if (!known_agent(agent)) return fail(agent_at, "undeclared agent '" + agent + "'");
        if (cur_.kind == Tok::LBrace) return cond_ob_tail(at, agent);
        auto f = unary(in_slot);
        if (!f) return std::nullopt;
        return check_op(Formula::agent_ob(agent, *f), at);
      }
      auto f = unary(in_slot);
      if (!f) return std::nullopt;
      return check_op(Formula::ob(*f), at);
    }
    if (w == "Oa" || w == "Op" || w == "P" || w == "Fb") {
      advance();
      auto f = unary(in_slot);
      if (!f) return std::nullopt;
      Formula built = w == "Oa"  ? Formula::actual_ob(*f)
                      : w == "Op" ? Formula::primary_ob(*f)
                      : w == "P"  ? Formula::perm(*f)
                                  : Formula::forb(*f);
      return check_op(built, at);
    }
    if (w == "stit") {
      advance();
      if (cur_.kind != Tok::LParen) return expect_fail({Tok::LParen});
      advance();
      if (cur_.kind != Tok::Word) return expect_fail({Tok::Word});
      std::string agent = cur_.text;
      SourcePos agent_at = cur_.pos;
      advance();
      if (!known_agent(agent)) return fail(agent_at, "undeclared agent '" + agent + "'");
      if (cur_.kind != Tok::Comma) return expect_fail({Tok::Comma});
      advance();
      auto f = iff_level(false);
      if (!f) return std::nullopt;
      if (cur_.kind != Tok::RParen) return expect_fail({Tok::RParen});
      advance();
      return check_op(Formula::stit(agent, *f), at);
    }
    if (reserved_words().count(w)) return formula_fail();
    if (!valid_lower_ident(w)) return fail(at, "unknown operator or malformed atom '" + w + "'");
    advance();
    if (!sig_.has_atom(w)) return fail(at, "undeclared atom '" + w + "'");
    return Formula::prop(w);
  }

  std::optional<Formula> cond_ob_tail(SourcePos at, const std::string& agent) {
    advance();  // {
    auto body = iff_level(true);
    if (!body) return std::nullopt;
    if (cur_.kind != Tok::Pipe) return expect_fail({Tok::Pipe});
    advance();
    auto ctx = iff_level(true);
    if (!ctx) return std::nullopt;
    if (cur_.kind != Tok::RBrace) return expect_fail({Tok::RBrace});
    advance();
    if (!agent.empty() && sig_.theory != TheoryId::Xddl1 && sig_.theory != TheoryId::Xddl2)
      return fail(at, "agent-tagged conditional obligation is not in theory " +
                          to_string(sig_.theory));
    Formula f = agent.empty() ? Formula::cond_ob(*body, *ctx)
                              : Formula::cond_ob(agent, *body, *ctx);
    return check_op(f, at);
  }

  bool known_agent(const std::string& a) const {
    return sig_.has_agent(a) || theory_has_builtin_agent(sig_.theory, a);
  }

  std::optional<Formula> check_op(Formula f, SourcePos at) {
    if (!spec().allows(f.kind()))
      return fail(at, "operator not in theory " + to_string(sig_.theory));
    return f;
  }

  std::optional<Formula> fail(SourcePos at, std::string msg) {
    if (!error) error = Diagnostic{at, std::move(msg), {}};
    return std::nullopt;
  }

  std::optional<Formula> expect_fail(std::initializer_list<Tok> expected) {
    if (!error) {
      Diagnostic d;
      d.pos = cur_.pos;
      d.message = cur_.kind == Tok::End ? "unexpected end of input"
                  : cur_.kind == Tok::Error
                      ? cur_.text
                      : std::string("unexpected ") + tok_name(cur_.kind);
      for (Tok t : expected) d.expected.push_back(tok_name(t));
      error = d;
    }
    return std::nullopt;
  }

  std::optional<Formula> formula_fail() {
    if (!error) {
      Diagnostic d;
      d.pos = cur_.pos;
      d.message = cur_.kind == Tok::End ? "unexpected end of input, expected formula"
                  : cur_.kind == Tok::Error
                      ? cur_.text
                      : std::string("unexpected ") + tok_name(cur_.kind) + ", expected formula";
      d.expected.push_back("formula");
      error = d;
    }
    return std::nullopt;
  }

  Lexer lex_;
  Token cur_;
  const Signature& sig_;
};

}  // namespace

FormulaParse parse_formula(std::string_view text, const Signature& sig) {
  Parser p(text, sig);
  auto f = p.formula();
  FormulaParse out;
  if (f && !p.error && p.at_end()) {
    out.formula = *f;
    return out;
  }
  if (p.error) {
    out.error = *p.error;
  } else {
    out.error = Diagnostic{p.cur().pos, "trailing input after formula", {}};
  }
  return out;
}

ProblemParse parse_problem(std::string_view text) {
  ProblemParse out;
  auto& diags = out.diagnostics;

  Problem prob;
  Parser p(text, prob.signature);  // signature fills in as declarations parse

  bool section_seen = false;
  std::set<std::string> labels;
  std::set<std::string> names;

  auto diag = [&](SourcePos pos, std::string msg, std::vector<std::string> expected = {}) {
    diags.push_back({pos, std::move(msg), std::move(expected)});
  };
  // On a section-level error, skip tokens until the next section keyword.
  auto resync = [&]() {
    while (!p.at_end() &&
           !(p.cur().kind == Tok::Word && is_section_keyword(p.cur().text)))
      p.advance();
  };

  // theory header
  if (!(p.cur().kind == Tok::Word && p.cur().text == "theory")) {
    diag(p.cur().pos, "file must start with a theory declaration", {"theory"});
    return out;
  }
  p.advance();
  if (p.cur().kind != Tok::Word) {
    diag(p.cur().pos, "expected a theory id", {"sdl", "cjddl", "xddl1", "xddl2", "tds"});
    return out;
  }
  if (auto t = theory_from_string(p.cur().text)) {
    prob.signature.theory = *t;
  } else {
    diag(p.cur().pos, "unknown theory '" + p.cur().text + "'",
         {"sdl", "cjddl", "xddl1", "xddl2", "tds"});
    return out;
  }
  p.advance();

  while (!p.at_end()) {
    p.error.reset();
    if (p.cur().kind != Tok::Word || !is_section_keyword(p.cur().text)) {
      if (p.cur().kind == Tok::Error)
        diag(p.cur().pos, p.cur().text);
      else
        diag(p.cur().pos, "expected a section keyword",
             {"atom", "agent", "global", "local", "query"});
      p.advance();
      resync();
      continue;
    }
    std::string kw = p.cur().text;
    SourcePos kw_pos = p.cur().pos;
    p.advance();

    if (kw == "theory") {
      diag(kw_pos, "duplicate theory declaration");
      resync();
      continue;
    }

    if (kw == "atom" || kw == "agent") {
      if (p.cur().kind != Tok::Word) {
        diag(p.cur().pos, "expected an identifier", {"identifier"});
        resync();
        continue;
      }
      std::string name = p.cur().text;
      SourcePos name_pos = p.cur().pos;
      p.advance();
      if (section_seen)
        diag(kw_pos, "declarations must precede sections");
      else if (!valid_lower_ident(name))
        diag(name_pos, "invalid name '" + name + "' (must match [a-z][a-z0-9_]*)");
      else if (reserved_words().count(name))
        diag(name_pos, "'" + name + "' is a reserved word");
      else if (!names.insert(name).second)
        diag(name_pos, "duplicate declaration of '" + name + "'");
      else if (kw == "atom")
        prob.signature.atoms.push_back({name});
      else
        prob.signature.agents.push_back({name});
      continue;
    }

    // global / local / query
    section_seen = true;
    if (p.cur().kind != Tok::Word) {
      diag(p.cur().pos, "expected a label", {"label"});
      resync();
      continue;
    }
    std::string label = p.cur().text;
    SourcePos label_pos = p.cur().pos;
    p.advance();
    if (p.cur().kind != Tok::Colon) {
      diag(p.cur().pos, "expected ':' after label", {"':'"});
      resync();
      continue;
    }
    p.advance();
    bool label_ok = labels.insert(label).second;
    if (!label_ok) diag(label_pos, "duplicate label '" + label + "'");

    if (kw == "global" || kw == "local") {
      auto f = p.formula();
      if (!f) {
        diag(p.error ? p.error->pos : p.cur().pos,
             p.error ? p.error->message : "malformed formula",
             p.error ? p.error->expected : std::vector<std::string>{});
        resync();
        continue;
      }
      if (!label_ok) continue;
      if (kw == "global")
        prob.globals.push_back({label, *f});
      else
        prob.locals.push_back({label, *f});
      continue;
    }

    // query LABEL : (consistent | entails formula) [expect TAG]
    Query q;
    q.label = label;
    if (p.cur().kind == Tok::Word && p.cur().text == "consistent") {
      q.kind = QueryKind::Consistent;
      p.advance();
    } else if (p.cur().kind == Tok::Word && p.cur().text == "entails") {
      q.kind = QueryKind::Entails;
      p.advance();
      auto f = p.formula();
      if (!f) {
        diag(p.error ? p.error->pos : p.cur().pos,
             p.error ? p.error->message : "malformed goal formula",
             p.error ? p.error->expected : std::vector<std::string>{});
        resync();
        continue;
      }
      q.goal = *f;
    } else {
      diag(p.cur().pos, "expected 'consistent' or 'entails'", {"consistent", "entails"});
      resync();
      continue;
    }
    if (p.cur().kind == Tok::Word && p.cur().text == "expect") {
      p.advance();
      if (p.cur().kind != Tok::Word) {
        diag(p.cur().pos, "expected an expectation tag", {kExpectModel, kExpectNoModel,
                                                          kExpectValid, kExpectCountermodel});
        resync();
        continue;
      }
      std::string tag = p.cur().text;
      SourcePos tag_pos = p.cur().pos;
      p.advance();
      bool entails = q.kind == QueryKind::Entails;
      bool fits = entails ? (tag == kExpectValid || tag == kExpectCountermodel)
                          : (tag == kExpectModel || tag == kExpectNoModel);
      if (!fits) {
        diag(tag_pos, "expect tag '" + tag + "' does not fit the query kind");
        continue;
      }
      q.expected = tag;
    }
    if (label_ok) prob.queries.push_back(std::move(q));
  }

  if (diags.empty()) out.problem = std::move(prob);
  return out;
}

}  // namespace deon
