#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>

#include "lang/ast.hpp"

namespace simclone::inputs {

// Literals mined from the corpus, with occurrence counts.
struct ConstantBank {
  std::map<std::int64_t, std::size_t> ints;
  std::map<double, std::size_t> reals;
  std::map<char32_t, std::size_t> chars;
  std::map<std::string, std::size_t> strings;

  void add(const lang::AstNode& literal);
  // Kinds that received no literal get {-1, 0, 1}, {-1.0, 0.0, 1.0}, {'a'}, {""}.
  void fill_defaults();

  static ConstantBank defaults();
};

ConstantBank mine_constants(std::span<const lang::ParsedFile* const> files);

std::optional<std::int64_t> parse_int_literal(std::string_view text);
std::optional<double> parse_real_literal(std::string_view text);

}  // namespace simclone::inputs
