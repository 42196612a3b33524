#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "lang/ast.hpp"

namespace simclone::lang {

enum class TokType { name, int_number, real_number, string, character, op, newline, indent, dedent, end };

struct Token {
  TokType type = TokType::end;
  std::string text;
  Span span;

  [[nodiscard]] bool is(TokType t, std::string_view s) const noexcept { return type == t && text == s; }
  [[nodiscard]] bool is_op(std::string_view s) const noexcept { return is(TokType::op, s); }
  [[nodiscard]] bool is_name(std::string_view s) const noexcept { return is(TokType::name, s); }
};

// Python tokens with INDENT/DEDENT/NEWLINE synthesized from layout.
std::vector<Token> lex_python(std::string_view text);
// Java tokens; comments and whitespace dropped, annotations kept as '@' + name.
std::vector<Token> lex_java(std::string_view text);

// Decodes the body of a quoted literal token (Python or Java) into its value.
std::string decode_string_literal(std::string_view token);

[[noreturn]] void throw_parse_error(std::string_view path, std::string_view text, std::uint32_t offset,
                                    const std::string& message);

}  // namespace simclone::lang
