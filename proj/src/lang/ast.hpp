#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "model/types.hpp"

namespace simclone::lang {

struct Span {
  std::uint32_t begin = 0;
  std::uint32_t end = 0;

  [[nodiscard]] bool contains(const Span& other) const noexcept {
    return begin <= other.begin && other.end <= end;
  }
  friend bool operator==(const Span&, const Span&) = default;
};

// Expression-level node kinds shared by both front ends.
enum class NodeKind {
  name,
  int_lit,
  real_lit,
  str_lit,
  char_lit,
  bool_lit,
  null_lit,
  binary,      // text = operator
  unary,       // text = operator
  compare,     // text = operator; chained comparisons nest left to right
  logical,     // text = and/or
  ternary,     // children: then, cond, else
  call,        // children: callee, args...
  attribute,   // text = member; children: object
  index,       // children: object, subscript
  slice,
  tuple,
  list,
  dict,
  set,
  comprehension,  // children: element..., comp_for...
  comp_for,       // children: target, iterable, conditions...
  lambda,         // children: params (names), body
  keyword_arg,    // text = keyword; children: value
  starred,
  assign,         // text = operator ("=", "+=", ...); children: targets..., value
  incdec,         // text = "++"/"--"; children: target
  declaration,    // text = declared type; children: declarator...
  declarator,     // text = variable name; children: optional initializer
  new_object,     // text = class name; children: args...
  new_array,      // text = element type; children: dims/initializer
  array_init,
  cast,           // text = target type; children: operand
  instance_of,
  method_ref,
  this_ref,
  type_ref,
  // statement heads
  expr_stmt,
  return_stmt,
  break_stmt,
  continue_stmt,
  pass_stmt,
  raise_stmt,
  import_stmt,
  global_stmt,
  del_stmt,
  assert_stmt,
  print_stmt,
  yield_expr,
  condition,      // if/elif/while/switch header
  for_in,         // children: target, iterable
  for_classic,    // children: init (block), cond (or empty), update (block)
  except_clause,  // text = bound name (may be empty); children: type expr
  with_items,     // children: (item, optional target) pairs as with_item
  with_item,
  case_label,
  empty,
  block,
  other,
};

std::string_view node_kind_name(NodeKind kind) noexcept;

struct AstNode {
  NodeKind kind = NodeKind::other;
  std::string text;
  Span span;
  std::vector<AstNode> children;
};

enum class StmtKind { declaration, assignment, block, loop, conditional, try_stmt, other };

std::string_view stmt_kind_name(StmtKind kind) noexcept;

struct Statement;

// One body of a compound statement (then-branch, loop body, catch block...).
struct Clause {
  AstNode header;
  std::vector<Statement> body;
};

struct Statement {
  StmtKind kind = StmtKind::other;
  Span span;
  AstNode head;
  std::vector<Clause> clauses;
  // Set for `return`, `raise`, `throw`: the statement ends control flow.
  bool terminates = false;
  // Nested def/class statements are opaque units for segmentation.
  bool nested_definition = false;

  [[nodiscard]] bool has_children() const noexcept {
    for (const auto& c : clauses) {
      if (!c.body.empty()) return true;
    }
    return false;
  }
};

struct Parameter {
  std::string name;
  std::string declared_type;  // empty for dynamic languages
};

struct FieldInfo {
  std::string name;
  std::string declared_type;
  bool is_static = false;
  Visibility visibility = Visibility::package_access;
};

struct ClassInfo {
  std::string name;
  std::vector<FieldInfo> fields;
  std::vector<std::vector<Parameter>> constructors;
  std::vector<std::string> static_methods;
  std::vector<std::string> instance_methods;
};

struct FunctionInfo {
  std::string name;
  std::string qualified_name;
  std::string class_name;
  std::vector<Parameter> params;
  std::string return_type;  // empty for dynamic languages
  bool is_static = true;
  Span span;
  Span body_span;
  std::vector<Statement> body;
};

// Top-level statements kept as context for synthesized functions.
struct ModuleItem {
  enum class Kind { import, definition, constant, other } kind = Kind::other;
  std::vector<std::string> names;
  Span span;
};

struct ParsedFile {
  std::string path;
  LanguageId language;
  std::string text;
  std::vector<FunctionInfo> functions;
  std::vector<ClassInfo> classes;
  std::vector<ModuleItem> module_items;
  std::vector<AstNode> literals;  // every literal token, for constant mining

  [[nodiscard]] std::string_view slice(Span s) const {
    return std::string_view(text).substr(s.begin, s.end - s.begin);
  }
  [[nodiscard]] const ClassInfo* find_class(std::string_view name) const;
};

// Parses a whole compilation unit. Throws Error(ErrorCode::parse) with the
// offending position on invalid syntax.
ParsedFile parse_source(std::string text, LanguageId language, std::string path = {});

ParsedFile parse_python(std::string text, std::string path = {});
ParsedFile parse_java(std::string text, std::string path = {});

// Pre-order walk over an expression tree.
template <typename Fn>
void walk(const AstNode& node, Fn&& fn) {
  fn(node);
  for (const auto& c : node.children) walk(c, fn);
}

// 1-based line/column of a byte offset, used in diagnostics.
std::pair<int, int> line_col(std::string_view text, std::uint32_t offset);

}  // namespace simclone::lang
