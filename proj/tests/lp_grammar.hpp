#pragma once

// Standalone validator for the CPLEX-style LP subset the exporter emits.
// Deliberately written against the published grammar, not the writer.

#include <cctype>
#include <sstream>
#include <string>
#include <vector>

namespace tsdc {

namespace lp_detail {

struct Token {
  enum Kind { Ident, Number, Plus, Minus, Le, Ge, Eq, Colon } kind;
  std::string text;
};

inline bool tokenize(const std::string& text, std::vector<Token>& out, std::string* why) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] == '\\') continue; // comment line
    std::size_t i = 0;
    while (i < line.size()) {
      const char c = line[i];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++i;
        continue;
      }
      if (c == '+') {
        out.push_back({Token::Plus, "+"});
        ++i;
      } else if (c == '-') {
        out.push_back({Token::Minus, "-"});
        ++i;
      } else if (c == ':') {
        out.push_back({Token::Colon, ":"});
        ++i;
      } else if (c == '<' || c == '>') {
        if (i + 1 < line.size() && line[i + 1] == '=') {
          out.push_back({c == '<' ? Token::Le : Token::Ge, ""});
          i += 2;
        } else {
          out.push_back({c == '<' ? Token::Le : Token::Ge, ""});
          ++i;
        }
      } else if (c == '=') {
        out.push_back({Token::Eq, "="});
        ++i;
      } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
        std::size_t j = i;
        while (j < line.size() &&
               (std::isdigit(static_cast<unsigned char>(line[j])) || line[j] == '.' ||
                line[j] == 'e' || line[j] == 'E' ||
                ((line[j] == '+' || line[j] == '-') && j > i &&
                 (line[j - 1] == 'e' || line[j - 1] == 'E'))))
          ++j;
        out.push_back({Token::Number, line.substr(i, j - i)});
        i = j;
      } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::size_t j = i;
        while (j < line.size() && (std::isalnum(static_cast<unsigned char>(line[j])) ||
                                   line[j] == '_'))
          ++j;
        out.push_back({Token::Ident, line.substr(i, j - i)});
        i = j;
      } else {
        if (why) *why = std::string("unexpected character '") + c + "'";
        return false;
      }
    }
  }
  return true;
}

struct Cursor {
  const std::vector<Token>& toks;
  std::size_t at = 0;
  bool done() const { return at >= toks.size(); }
  const Token* peek() const { return done() ? nullptr : &toks[at]; }
  const Token* take() { return done() ? nullptr : &toks[at++]; }
  bool is_keyword(const char* kw) const {
    const Token* t = peek();
    return t && t->kind == Token::Ident && t->text == kw;
  }
};

// linear expression: [sign] [number] ident { (+|-) [number] ident }
inline bool parse_expr(Cursor& c, std::string* why) {
  bool first = true;
  int terms = 0;
  while (true) {
    std::size_t mark = c.at;
    const Token* t = c.peek();
    if (!t) break;
    if (t->kind == Token::Plus || t->kind == Token::Minus) {
      c.take();
      t = c.peek();
    } else if (!first) {
      break; // next section or the row sense
    }
    if (t && t->kind == Token::Number) {
      c.take();
      t = c.peek();
    }
    if (!t || t->kind != Token::Ident) {
      if (first || terms == 0) {
        if (why) *why = "expected a variable in expression";
        return false;
      }
      c.at = mark;
      break;
    }
    c.take();
    ++terms;
    first = false;
  }
  if (terms == 0) {
    if (why) *why = "empty expression";
    return false;
  }
  return true;
}

inline bool is_section_ident(const Token& t) {
  return t.kind == Token::Ident &&
         (t.text == "Subject" || t.text == "Bounds" || t.text == "Binaries" ||
          t.text == "Binary" || t.text == "Generals" || t.text == "General" ||
          t.text == "End");
}

} // namespace lp_detail

inline bool lp_grammar_ok(const std::string& text, std::string* why = nullptr) {
  using namespace lp_detail;
  std::vector<Token> toks;
  if (!tokenize(text, toks, why)) return false;
  Cursor c{toks};

  if (!(c.is_keyword("Maximize") || c.is_keyword("Minimize"))) {
    if (why) *why = "missing Maximize/Minimize";
    return false;
  }
  c.take();

  // objective: [name :] expr
  if (c.peek() && c.peek()->kind == Token::Ident && c.at + 1 < toks.size() &&
      toks[c.at + 1].kind == Token::Colon) {
    c.take();
    c.take();
  }
  if (!parse_expr(c, why)) return false;

  if (!(c.is_keyword("Subject"))) {
    if (why) *why = "missing Subject To";
    return false;
  }
  c.take();
  if (!c.is_keyword("To")) {
    if (why) *why = "missing To after Subject";
    return false;
  }
  c.take();

  // rows until a section keyword
  int rows = 0;
  while (c.peek() && !is_section_ident(*c.peek())) {
    if (c.peek()->kind == Token::Ident && c.at + 1 < toks.size() &&
        toks[c.at + 1].kind == Token::Colon) {
      c.take();
      c.take();
    }
    if (!parse_expr(c, why)) return false;
    const Token* sense = c.take();
    if (!sense || (sense->kind != Token::Le && sense->kind != Token::Ge &&
                   sense->kind != Token::Eq)) {
      if (why) *why = "row missing sense";
      return false;
    }
    const Token* sign = c.peek();
    if (sign && (sign->kind == Token::Plus || sign->kind == Token::Minus)) c.take();
    const Token* rhs = c.take();
    if (!rhs || rhs->kind != Token::Number) {
      if (why) *why = "row missing rhs number";
      return false;
    }
    ++rows;
  }
  if (rows == 0) {
    if (why) *why = "no constraint rows";
    return false;
  }

  if (c.is_keyword("Bounds")) {
    c.take();
    while (c.peek() && !is_section_ident(*c.peek())) {
      // forms: n <= x <= n | x <= n | x >= n | x = n | x free
      const Token* t = c.take();
      if (t->kind == Token::Number || t->kind == Token::Minus) {
        if (t->kind == Token::Minus && (!c.peek() || c.take()->kind != Token::Number)) {
          if (why) *why = "bad bound number";
          return false;
        }
        if (!c.peek() || c.take()->kind != Token::Le) {
          if (why) *why = "bound missing <=";
          return false;
        }
        if (!c.peek() || c.take()->kind != Token::Ident) {
          if (why) *why = "bound missing variable";
          return false;
        }
        if (!c.peek() || c.take()->kind != Token::Le) {
          if (why) *why = "bound missing second <=";
          return false;
        }
        const Token* up = c.peek();
        if (up && up->kind == Token::Minus) c.take();
        if (!c.peek() || c.take()->kind != Token::Number) {
          if (why) *why = "bound missing upper number";
          return false;
        }
      } else if (t->kind == Token::Ident) {
        const Token* op = c.peek();
        if (op && op->kind == Token::Ident && op->text == "free") {
          c.take();
          continue;
        }
        if (!op || (op->kind != Token::Le && op->kind != Token::Ge && op->kind != Token::Eq)) {
          if (why) *why = "bound missing operator";
          return false;
        }
        c.take();
        const Token* num = c.peek();
        if (num && num->kind == Token::Minus) {
          c.take();
          num = c.peek();
        }
        if (!num || c.take()->kind != Token::Number) {
          if (why) *why = "bound missing number";
          return false;
        }
      } else {
        if (why) *why = "bad bounds line";
        return false;
      }
    }
  }

  while (c.is_keyword("Binaries") || c.is_keyword("Binary") || c.is_keyword("Generals") ||
         c.is_keyword("General")) {
    c.take();
    while (c.peek() && !is_section_ident(*c.peek())) {
      if (c.take()->kind != Token::Ident) {
        if (why) *why = "non-identifier in integer section";
        return false;
      }
    }
  }

  if (!c.is_keyword("End")) {
    if (why) *why = "missing End";
    return false;
  }
  c.take();
  if (!c.done()) {
    if (why) *why = "trailing tokens after End";
    return false;
  }
  return true;
}

} // namespace tsdc
