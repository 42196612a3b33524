#include "lang/lexer.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstring>

#include "model/error.hpp"

namespace simclone::lang {

std::pair<int, int> line_col(std::string_view text, std::uint32_t offset) {
  int line = 1;
  int col = 1;
  for (std::uint32_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

void throw_parse_error(std::string_view path, std::string_view text, std::uint32_t offset,
                       const std::string& message) {
  auto [line, col] = line_col(text, offset);
  std::string where = path.empty() ? std::string("<source>") : std::string(path);
  throw Error(ErrorCode::parse, where + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + message);
}

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$' || (c & 0x80); }
bool ident_char(char c) { return ident_start(c) || std::isdigit(static_cast<unsigned char>(c)); }

// Longest-match operator tables.
constexpr std::array<std::string_view, 48> kPythonOps = {
    "**=", "//=", ">>=", "<<=", "...", "->", ":=", "**", "//", "<<", ">>", "<=", ">=", "==", "!=", "<>",
    "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "@=", "+", "-", "*", "/", "%", "@", "&", "|", "^",
    "~", "<", ">", "(", ")", "[", "]", "{", "}", ",", ":", ".", ";", "="};

constexpr std::array<std::string_view, 54> kJavaOps = {
    ">>>=", "<<=", ">>=", "...", "->", "::", "++", "--", "&&", "||", "==", "!=", "<=", ">=", "+=", "-=",
    "*=", "/=", "%=", "&=", "|=", "^=", "<<", "+", "-", "*", "/", "%", "&", "|", "^", "~", "!", "<",
    ">", "(", ")", "[", "]", "{", "}", ",", ";", ":", ".", "=", "?", "@", "#", "\\", "`", "'", "\"", "$"};

template <std::size_t N>
std::size_t match_op(std::string_view text, std::size_t pos, const std::array<std::string_view, N>& table) {
  for (auto op : table) {
    if (text.substr(pos, op.size()) == op) return op.size();
  }
  return 0;
}

// Scans a numeric literal starting at pos; returns end offset and whether it is real.
std::pair<std::size_t, bool> scan_number(std::string_view text, std::size_t pos, bool java) {
  std::size_t i = pos;
  bool real = false;
  auto digit = [&](std::size_t k) { return k < text.size() && (std::isdigit(static_cast<unsigned char>(text[k])) || text[k] == '_'); };
  if (text[i] == '0' && i + 1 < text.size() && std::strchr("xXoObB", text[i + 1])) {
    i += 2;
    while (i < text.size() && (std::isxdigit(static_cast<unsigned char>(text[i])) || text[i] == '_')) ++i;
  } else {
    while (digit(i)) ++i;
    if (i < text.size() && text[i] == '.' && (i + 1 >= text.size() || text[i + 1] != '.')) {
      // `1.foo` is a method call on an int in neither language; treat '.' as fraction.
      real = true;
      ++i;
      while (digit(i)) ++i;
    }
    if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
      std::size_t k = i + 1;
      if (k < text.size() && (text[k] == '+' || text[k] == '-')) ++k;
      if (digit(k)) {
        real = true;
        i = k;
        while (digit(i)) ++i;
      }
    }
  }
  if (i < text.size()) {
    const char s = text[i];
    if (java) {
      if (s == 'l' || s == 'L') {
        ++i;
      } else if (s == 'f' || s == 'F' || s == 'd' || s == 'D') {
        real = true;
        ++i;
      }
    } else {
      if (s == 'l' || s == 'L') {
        ++i;
      } else if (s == 'j' || s == 'J') {
        real = true;
        ++i;
      }
    }
  }
  return {i, real};
}

}  // namespace

std::string decode_string_literal(std::string_view token) {
  std::size_t i = 0;
  bool raw = false;
  while (i < token.size() && token[i] != '\'' && token[i] != '"') {
    if (token[i] == 'r' || token[i] == 'R') raw = true;
    ++i;
  }
  if (i >= token.size()) return std::string(token);
  const char q = token[i];
  std::size_t qlen = (token.substr(i, 3) == std::string(3, q)) ? 3 : 1;
  if (token.size() < i + 2 * qlen) return {};
  std::string_view body = token.substr(i + qlen, token.size() - i - 2 * qlen);
  std::string out;
  for (std::size_t k = 0; k < body.size(); ++k) {
    char c = body[k];
    if (c == '\\' && !raw && k + 1 < body.size()) {
      char n = body[++k];
      switch (n) {
        case 'n': out += '\n'; break;
        case 't': out += '\t'; break;
        case 'r': out += '\r'; break;
        case '0': out += '\0'; break;
        case '\\': out += '\\'; break;
        case '\'': out += '\''; break;
        case '"': out += '"'; break;
        case '\n': break;
        default:
          out += '\\';
          out += n;
      }
    } else {
      out += c;
    }
  }
  return out;
}

std::vector<Token> lex_python(std::string_view text) {
  std::vector<Token> toks;
  std::vector<int> indents{0};
  int depth = 0;
  std::size_t i = 0;
  bool at_line_start = true;
  auto push = [&](TokType t, std::size_t b, std::size_t e) {
    toks.push_back({t, std::string(text.substr(b, e - b)), {static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(e)}});
  };

  while (i < text.size()) {
    if (at_line_start && depth == 0) {
      int col = 0;
      std::size_t k = i;
      while (k < text.size() && (text[k] == ' ' || text[k] == '\t' || text[k] == '\f')) {
        col = text[k] == '\t' ? (col / 8 + 1) * 8 : col + 1;
        ++k;
      }
      if (k >= text.size()) {
        i = k;
        break;
      }
      if (text[k] == '\n' || text[k] == '\r' || text[k] == '#') {
        // blank or comment-only line
        while (k < text.size() && text[k] != '\n') ++k;
        i = k + 1;
        continue;
      }
      if (text[k] == '\\' && k + 1 < text.size() && text[k + 1] == '\n') {
        i = k + 2;
        continue;
      }
      if (col > indents.back()) {
        indents.push_back(col);
        push(TokType::indent, k, k);
      } else {
        while (col < indents.back()) {
          indents.pop_back();
          push(TokType::dedent, k, k);
        }
        if (col != indents.back()) throw_parse_error({}, text, static_cast<std::uint32_t>(k), "inconsistent dedent");
      }
      i = k;
      at_line_start = false;
    }

    const char c = text[i];
    if (c == '\n') {
      if (depth == 0) {
        if (!toks.empty() && toks.back().type != TokType::newline) push(TokType::newline, i, i);
        at_line_start = true;
      }
      ++i;
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\r' || c == '\f') {
      ++i;
      continue;
    }
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') ++i;
      continue;
    }
    if (c == '\\' && i + 1 < text.size() && (text[i + 1] == '\n' || text[i + 1] == '\r')) {
      i += 2;
      if (i < text.size() && text[i - 1] == '\r' && text[i] == '\n') ++i;
      continue;
    }

    // string literal with optional prefix
    std::size_t p = i;
    while (p < text.size() && p - i < 2 && std::strchr("rRbBuUfF", text[p]) && text[p] != '\0') ++p;
    if (p < text.size() && (text[p] == '\'' || text[p] == '"') && (p == i || ident_start(text[i]))) {
      const char q = text[p];
      const bool triple = text.substr(p, 3) == std::string(3, q);
      std::size_t k = p + (triple ? 3 : 1);
      bool raw = false;
      for (std::size_t r = i; r < p; ++r) raw = raw || text[r] == 'r' || text[r] == 'R';
      while (true) {
        if (k >= text.size()) throw_parse_error({}, text, static_cast<std::uint32_t>(i), "unterminated string literal");
        if (text[k] == '\\') {
          k += 2;
          continue;
        }
        if (!triple && text[k] == '\n') throw_parse_error({}, text, static_cast<std::uint32_t>(i), "unterminated string literal");
        if (triple ? text.substr(k, 3) == std::string(3, q) : text[k] == q) {
          k += triple ? 3 : 1;
          break;
        }
        ++k;
      }
      (void)raw;
      push(TokType::string, i, k);
      i = k;
      continue;
    }

    if (ident_start(c)) {
      std::size_t k = i;
      while (k < text.size() && ident_char(text[k])) ++k;
      push(TokType::name, i, k);
      i = k;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && i + 1 < text.size() && std::isdigit(static_cast<unsigned char>(text[i + 1])))) {
      auto [end, real] = scan_number(text, i, false);
      push(real ? TokType::real_number : TokType::int_number, i, end);
      i = end;
      continue;
    }
    if (std::size_t n = match_op(text, i, kPythonOps); n > 0) {
      const auto op = text.substr(i, n);
      if (op == "(" || op == "[" || op == "{") ++depth;
      if ((op == ")" || op == "]" || op == "}") && depth > 0) --depth;
      push(TokType::op, i, i + n);
      i += n;
      continue;
    }
    if (c == '`' || c == '!' || c == '$' || c == '?') {
      push(TokType::op, i, i + 1);
      ++i;
      continue;
    }
    throw_parse_error({}, text, static_cast<std::uint32_t>(i), std::string("unexpected character '") + c + "'");
  }
  const auto end = static_cast<std::uint32_t>(text.size());
  if (!toks.empty() && toks.back().type != TokType::newline) toks.push_back({TokType::newline, "", {end, end}});
  while (indents.size() > 1) {
    indents.pop_back();
    toks.push_back({TokType::dedent, "", {end, end}});
  }
  toks.push_back({TokType::end, "", {end, end}});
  return toks;
}

std::vector<Token> lex_java(std::string_view text) {
  std::vector<Token> toks;
  std::size_t i = 0;
  auto push = [&](TokType t, std::size_t b, std::size_t e) {
    toks.push_back({t, std::string(text.substr(b, e - b)), {static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(e)}});
  };
  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (text.substr(i, 2) == "//") {
      while (i < text.size() && text[i] != '\n') ++i;
      continue;
    }
    if (text.substr(i, 2) == "/*") {
      auto end = text.find("*/", i + 2);
      if (end == std::string_view::npos) throw_parse_error({}, text, static_cast<std::uint32_t>(i), "unterminated comment");
      i = end + 2;
      continue;
    }
    if (text.substr(i, 3) == "\"\"\"") {
      auto end = text.find("\"\"\"", i + 3);
      if (end == std::string_view::npos) throw_parse_error({}, text, static_cast<std::uint32_t>(i), "unterminated text block");
      push(TokType::string, i, end + 3);
      i = end + 3;
      continue;
    }
    if (c == '"' || c == '\'') {
      std::size_t k = i + 1;
      while (true) {
        if (k >= text.size() || text[k] == '\n') throw_parse_error({}, text, static_cast<std::uint32_t>(i), "unterminated literal");
        if (text[k] == '\\') {
          k += 2;
          continue;
        }
        if (text[k] == c) break;
        ++k;
      }
      push(c == '"' ? TokType::string : TokType::character, i, k + 1);
      i = k + 1;
      continue;
    }
    if (ident_start(c)) {
      std::size_t k = i;
      while (k < text.size() && ident_char(text[k])) ++k;
      push(TokType::name, i, k);
      i = k;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && i + 1 < text.size() && std::isdigit(static_cast<unsigned char>(text[i + 1])))) {
      auto [end, real] = scan_number(text, i, true);
      push(real ? TokType::real_number : TokType::int_number, i, end);
      i = end;
      continue;
    }
    // '>>' and '>>>' are emitted as single '>' tokens so generic closers stay
    // splittable; the expression parser re-joins adjacent '>' into shifts.
    if (c == '>') {
      if (text.substr(i, 2) == ">=") {
        push(TokType::op, i, i + 2);
        i += 2;
      } else if (text.substr(i, 3) == ">>=" || text.substr(i, 4) == ">>>=") {
        const std::size_t n = text.substr(i, 4) == ">>>=" ? 4 : 3;
        push(TokType::op, i, i + n);
        i += n;
      } else {
        push(TokType::op, i, i + 1);
        ++i;
      }
      continue;
    }
    if (std::size_t n = match_op(text, i, kJavaOps); n > 0) {
      push(TokType::op, i, i + n);
      i += n;
      continue;
    }
    throw_parse_error({}, text, static_cast<std::uint32_t>(i), std::string("unexpected character '") + c + "'");
  }
  const auto end = static_cast<std::uint32_t>(text.size());
  toks.push_back({TokType::end, "", {end, end}});
  return toks;
}

}  // namespace simclone::lang
