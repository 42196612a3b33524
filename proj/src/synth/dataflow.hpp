#pragma once

#include <functional>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "lang/ast.hpp"

namespace simclone::synth {

// How a free name in a snippet resolves in its enclosing context.
enum class NameRole {
  variable,      // candidate argument / return variable
  context,       // resolved by replicated context (module item, builtin, type name)
  static_member, // Java static field: rewritten to a qualified reference
  unresolved,    // cannot be supplied: the snippet is dropped
};

struct NameResolver {
  std::function<NameRole(const std::string&)> role;
  // Replacement text for a static member reference (Java only).
  std::function<std::string(const std::string&)> qualify;
  // Whether a bare call of this name must be qualified / is an error.
  std::function<NameRole(const std::string&)> callee_role;
};

struct VarInfo {
  std::string name;
  bool upward_exposed = false;  // read before any definite definition: an argument
  bool modified = false;        // defined or modified inside the snippet
  bool header_bound = false;    // bound by a loop header, except/with clause, import or def
  bool declared_top = false;    // Java: declared at the snippet's own level
  bool declared_nested = false; // Java: declared only inside a nested scope
  bool last_def_constant = false;
  std::optional<std::string> declared_type;
};

struct Rewrite {
  lang::Span span;
  std::string text;
};

struct Dataflow {
  std::vector<VarInfo> vars;  // order of first appearance
  std::vector<std::string> arg_order;     // upward-exposed names, first use first
  std::vector<std::string> def_order;     // modified names, first definition first
  std::set<std::string> definite_at_end;  // definitely assigned after the last statement
  const lang::AstNode* trailing_return = nullptr;  // expression of a final `return expr`
  bool trailing_bare_return = false;
  std::vector<std::string> errors;  // reasons the snippet cannot be synthesized
  std::vector<Rewrite> rewrites;

  [[nodiscard]] const VarInfo* find(const std::string& name) const;
};

Dataflow analyze(std::span<const lang::Statement> stmts, Lang language, const NameResolver& resolver);

// Literal node kinds treated as constants by the return-variable rule.
bool is_literal(const lang::AstNode& node);

}  // namespace simclone::synth
