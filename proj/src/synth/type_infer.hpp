#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>

#include "lang/ast.hpp"
#include "model/types.hpp"

namespace simclone::synth {

// Evidence-based typing for dynamic-language snippets. Names are typed from
// the literals and typed locals they meet in comparisons and arithmetic, from
// indexing, iteration and well-known builtins; names without evidence stay
// generic.
class PythonTypes {
 public:
  explicit PythonTypes(std::span<const lang::Statement> stmts);

  [[nodiscard]] TypeDescriptor of(const std::string& name) const;
  [[nodiscard]] TypeDescriptor expression(const lang::AstNode& expr) const;

 private:
  enum Ev : unsigned { ev_int = 1, ev_real = 2, ev_str = 4, ev_bool = 8, ev_arr = 16, ev_file = 32 };

  std::map<std::string, std::optional<TypeDescriptor>> locals_;  // nullopt marks conflicting definitions
  std::map<std::string, unsigned> evidence_;  // keyed by name, name[], name[][] ...

  [[nodiscard]] std::optional<TypeDescriptor> type_of(const lang::AstNode& e) const;
  [[nodiscard]] std::optional<TypeDescriptor> build(const std::string& slot, int depth) const;
  void add(const std::string& slot, unsigned ev);
  void add_from_type(const std::string& slot, const std::optional<TypeDescriptor>& t);
  void collect_definitions(const lang::Statement& s, std::vector<std::pair<std::string, const lang::AstNode*>>& defs,
                           std::vector<std::pair<const lang::AstNode*, const lang::AstNode*>>& iterations) const;
  void evidence_stmt(const lang::Statement& s);
  void evidence_expr(const lang::AstNode& e);
};

}  // namespace simclone::synth
