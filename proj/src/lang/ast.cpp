#include "lang/ast.hpp"

namespace simclone::lang {

std::string_view node_kind_name(NodeKind kind) noexcept {
  switch (kind) {
    case NodeKind::name: return "name";
    case NodeKind::int_lit: return "int_lit";
    case NodeKind::real_lit: return "real_lit";
    case NodeKind::str_lit: return "str_lit";
    case NodeKind::char_lit: return "char_lit";
    case NodeKind::bool_lit: return "bool_lit";
    case NodeKind::null_lit: return "null_lit";
    case NodeKind::binary: return "binary";
    case NodeKind::unary: return "unary";
    case NodeKind::compare: return "compare";
    case NodeKind::logical: return "logical";
    case NodeKind::ternary: return "ternary";
    case NodeKind::call: return "call";
    case NodeKind::attribute: return "attribute";
    case NodeKind::index: return "index";
    case NodeKind::slice: return "slice";
    case NodeKind::tuple: return "tuple";
    case NodeKind::list: return "list";
    case NodeKind::dict: return "dict";
    case NodeKind::set: return "set";
    case NodeKind::comprehension: return "comprehension";
    case NodeKind::comp_for: return "comp_for";
    case NodeKind::lambda: return "lambda";
    case NodeKind::keyword_arg: return "keyword_arg";
    case NodeKind::starred: return "starred";
    case NodeKind::assign: return "assign";
    case NodeKind::incdec: return "incdec";
    case NodeKind::declaration: return "declaration";
    case NodeKind::declarator: return "declarator";
    case NodeKind::new_object: return "new_object";
    case NodeKind::new_array: return "new_array";
    case NodeKind::array_init: return "array_init";
    case NodeKind::cast: return "cast";
    case NodeKind::instance_of: return "instance_of";
    case NodeKind::method_ref: return "method_ref";
    case NodeKind::this_ref: return "this_ref";
    case NodeKind::type_ref: return "type_ref";
    case NodeKind::expr_stmt: return "expr_stmt";
    case NodeKind::return_stmt: return "return_stmt";
    case NodeKind::break_stmt: return "break_stmt";
    case NodeKind::continue_stmt: return "continue_stmt";
    case NodeKind::pass_stmt: return "pass_stmt";
    case NodeKind::raise_stmt: return "raise_stmt";
    case NodeKind::import_stmt: return "import_stmt";
    case NodeKind::global_stmt: return "global_stmt";
    case NodeKind::del_stmt: return "del_stmt";
    case NodeKind::assert_stmt: return "assert_stmt";
    case NodeKind::print_stmt: return "print_stmt";
    case NodeKind::yield_expr: return "yield_expr";
    case NodeKind::condition: return "condition";
    case NodeKind::for_in: return "for_in";
    case NodeKind::for_classic: return "for_classic";
    case NodeKind::except_clause: return "except_clause";
    case NodeKind::with_items: return "with_items";
    case NodeKind::with_item: return "with_item";
    case NodeKind::case_label: return "case_label";
    case NodeKind::empty: return "empty";
    case NodeKind::block: return "block";
    case NodeKind::other: return "other";
  }
  return "other";
}

std::string_view stmt_kind_name(StmtKind kind) noexcept {
  switch (kind) {
    case StmtKind::declaration: return "declaration";
    case StmtKind::assignment: return "assignment";
    case StmtKind::block: return "block";
    case StmtKind::loop: return "loop";
    case StmtKind::conditional: return "conditional";
    case StmtKind::try_stmt: return "try";
    case StmtKind::other: return "other";
  }
  return "other";
}

const ClassInfo* ParsedFile::find_class(std::string_view name) const {
  for (const auto& c : classes) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

ParsedFile parse_source(std::string text, LanguageId language, std::string path) {
  if (language.name == Lang::java) return parse_java(std::move(text), std::move(path));
  return parse_python(std::move(text), std::move(path));
}

}  // namespace simclone::lang
