#include "inputs/constants.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>

namespace simclone::inputs {

namespace {

std::string strip_number(std::string_view text) {
  std::string out;
  for (char c : text) {
    if (c != '_') out += c;
  }
  return out;
}

// First code point of a UTF-8 string.
std::optional<char32_t> first_code_point(std::string_view s) {
  if (s.empty()) return std::nullopt;
  const auto b0 = static_cast<unsigned char>(s[0]);
  if (b0 < 0x80) return b0;
  int len = b0 >= 0xF0 ? 4 : b0 >= 0xE0 ? 3 : 2;
  if (static_cast<int>(s.size()) < len) return std::nullopt;
  char32_t cp = b0 & (0x3F >> (len - 1));
  for (int i = 1; i < len; ++i) cp = (cp << 6) | (static_cast<unsigned char>(s[i]) & 0x3F);
  return cp;
}

}  // namespace

std::optional<std::int64_t> parse_int_literal(std::string_view text) {
  std::string t = strip_number(text);
  bool negative = false;
  if (!t.empty() && (t[0] == '-' || t[0] == '+')) {
    negative = t[0] == '-';
    t.erase(0, 1);
  }
  while (!t.empty() && (t.back() == 'L' || t.back() == 'l')) t.pop_back();
  if (t.empty()) return std::nullopt;
  int base = 10;
  if (t.size() > 2 && t[0] == '0' && (t[1] == 'x' || t[1] == 'X')) {
    base = 16;
    t.erase(0, 2);
  } else if (t.size() > 2 && t[0] == '0' && (t[1] == 'b' || t[1] == 'B')) {
    base = 2;
    t.erase(0, 2);
  } else if (t.size() > 2 && t[0] == '0' && (t[1] == 'o' || t[1] == 'O')) {
    base = 8;
    t.erase(0, 2);
  } else if (t.size() > 1 && t[0] == '0') {
    base = 8;  // Java / Python 2 octal
  }
  errno = 0;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(t.c_str(), &end, base);
  if (errno != 0 || end == t.c_str() || *end != '\0') return std::nullopt;
  if (negative) {
    if (v > static_cast<unsigned long long>(INT64_MAX) + 1ULL) return std::nullopt;
    return static_cast<std::int64_t>(0ULL - v);
  }
  // hex literals may spell the two's complement of a negative value
  if (v > static_cast<unsigned long long>(INT64_MAX) && base == 10) return std::nullopt;
  return static_cast<std::int64_t>(v);
}

std::optional<double> parse_real_literal(std::string_view text) {
  std::string t = strip_number(text);
  while (!t.empty() && (t.back() == 'f' || t.back() == 'F' || t.back() == 'd' || t.back() == 'D' ||
                        t.back() == 'j' || t.back() == 'J')) {
    if (t.back() == 'j' || t.back() == 'J') return std::nullopt;  // complex
    t.pop_back();
  }
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (end == t.c_str() || *end != '\0' || !std::isfinite(v)) return std::nullopt;
  return v;
}

void ConstantBank::add(const lang::AstNode& literal) {
  switch (literal.kind) {
    case lang::NodeKind::int_lit:
      if (auto v = parse_int_literal(literal.text)) ++ints[*v];
      break;
    case lang::NodeKind::real_lit:
      if (auto v = parse_real_literal(literal.text)) ++reals[*v];
      break;
    case lang::NodeKind::char_lit:
      if (auto c = first_code_point(literal.text)) ++chars[*c];
      break;
    case lang::NodeKind::str_lit:
      ++strings[literal.text];
      break;
    default:
      break;
  }
}

void ConstantBank::fill_defaults() {
  if (ints.empty()) ints = {{-1, 1}, {0, 1}, {1, 1}};
  if (reals.empty()) reals = {{-1.0, 1}, {0.0, 1}, {1.0, 1}};
  if (chars.empty()) chars = {{U'a', 1}};
  if (strings.empty()) strings = {{"", 1}};
}

ConstantBank ConstantBank::defaults() {
  ConstantBank b;
  b.fill_defaults();
  return b;
}

ConstantBank mine_constants(std::span<const lang::ParsedFile* const> files) {
  ConstantBank bank;
  for (const auto* f : files) {
    for (const auto& lit : f->literals) bank.add(lit);
  }
  bank.fill_defaults();
  return bank;
}

}  // namespace simclone::inputs
