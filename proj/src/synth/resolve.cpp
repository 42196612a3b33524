#include "synth/resolve.hpp"

#include <set>

namespace simclone::synth {

using lang::AstNode;
using lang::NodeKind;
using lang::Statement;

namespace {

const std::set<std::string, std::less<>> kPythonBuiltins = {
    "abs", "all", "any", "ascii", "bin", "bool", "bytearray", "bytes", "callable", "chr", "classmethod",
    "cmp", "complex", "delattr", "dict", "dir", "divmod", "enumerate", "eval", "filter", "float", "format",
    "frozenset", "getattr", "globals", "hasattr", "hash", "hex", "id", "input", "int", "isinstance",
    "issubclass", "iter", "len", "list", "locals", "long", "map", "max", "min", "next", "object", "oct",
    "open", "ord", "pow", "print", "range", "raw_input", "reduce", "repr", "reversed", "round", "set",
    "setattr", "slice", "sorted", "staticmethod", "str", "sum", "super", "tuple", "type", "unichr",
    "unicode", "vars", "xrange", "zip", "file", "basestring", "None", "True", "False", "Exception",
    "ValueError", "TypeError", "KeyError", "IndexError", "ZeroDivisionError", "StopIteration",
    "RuntimeError", "AssertionError", "ArithmeticError", "OverflowError", "NotImplementedError",
    "AttributeError", "IOError", "OSError", "EOFError", "NotImplemented", "__name__", "__file__",
    "exit", "quit"};

std::set<std::string> module_names(const lang::ParsedFile& file) {
  std::set<std::string> out;
  for (const auto& m : file.module_items) {
    if (m.kind == lang::ModuleItem::Kind::other) continue;
    out.insert(m.names.begin(), m.names.end());
  }
  return out;
}

// Enclosing classes innermost first, from a qualified method name "A.B.m".
std::vector<std::pair<std::string, const lang::ClassInfo*>> class_chain(const lang::ParsedFile& file,
                                                                        const lang::FunctionInfo& fn) {
  std::vector<std::pair<std::string, const lang::ClassInfo*>> out;
  std::string q = fn.qualified_name;
  auto dot = q.rfind('.');
  if (dot == std::string::npos) return out;
  q = q.substr(0, dot);
  while (!q.empty()) {
    dot = q.rfind('.');
    const std::string simple = dot == std::string::npos ? q : q.substr(dot + 1);
    if (const auto* c = file.find_class(simple)) out.emplace_back(q, c);
    if (dot == std::string::npos) break;
    q = q.substr(0, dot);
  }
  return out;
}

void collect_decls(const AstNode& n, std::map<std::string, std::string>& out) {
  if (n.kind == NodeKind::declaration) {
    for (const auto& d : n.children) out.emplace(d.text, n.text);
  }
  if (n.kind == NodeKind::except_clause && !n.text.empty() && !n.children.empty()) {
    const std::string& t = n.children.front().text;
    out.emplace(n.text, t.find('|') == std::string::npos ? t : "Exception");
  }
  if (n.kind == NodeKind::lambda && !n.children.empty()) {
    for (const auto& p : n.children.front().children) out.emplace(p.text, "");
  }
  for (const auto& c : n.children) collect_decls(c, out);
}

void collect_decls(const std::vector<Statement>& stmts, std::map<std::string, std::string>& out) {
  for (const auto& s : stmts) {
    collect_decls(s.head, out);
    for (const auto& c : s.clauses) {
      collect_decls(c.header, out);
      collect_decls(c.body, out);
    }
  }
}

}  // namespace

JavaScope::JavaScope(const lang::ParsedFile& file, const lang::FunctionInfo& fn) {
  for (const auto& p : fn.params) locals_.emplace(p.name, p.declared_type);
  collect_decls(fn.body, locals_);
  for (const auto& [qualified, cls] : class_chain(file, fn)) {
    for (const auto& f : cls->fields) {
      if (fields_.count(f.name)) continue;
      fields_.emplace(f.name, FieldRef{qualified, &f});
    }
    for (const auto& m : cls->static_methods) static_methods_.emplace(m, qualified);
    for (const auto& m : cls->instance_methods) {
      if (!static_methods_.count(m)) instance_methods_.insert(m);
    }
  }
}

std::optional<std::string> JavaScope::declared_type(const std::string& name) const {
  if (auto it = locals_.find(name); it != locals_.end()) {
    if (it->second.empty()) return std::nullopt;
    return it->second;
  }
  if (auto it = fields_.find(name); it != fields_.end() && !it->second.field->is_static) {
    return it->second.field->declared_type;
  }
  return std::nullopt;
}

NameRole JavaScope::role(const std::string& name) const {
  if (locals_.count(name)) return NameRole::variable;
  if (auto it = fields_.find(name); it != fields_.end()) {
    if (!it->second.field->is_static) return NameRole::variable;
    if (it->second.field->visibility == Visibility::private_access) return NameRole::unresolved;
    return NameRole::static_member;
  }
  return NameRole::context;
}

NameRole JavaScope::callee_role(const std::string& name) const {
  if (static_methods_.count(name)) return NameRole::static_member;
  if (instance_methods_.count(name)) return NameRole::unresolved;
  return NameRole::context;
}

std::string JavaScope::qualify(const std::string& name) const {
  if (auto it = fields_.find(name); it != fields_.end()) return it->second.owner + "." + name;
  if (auto it = static_methods_.find(name); it != static_methods_.end()) return it->second + "." + name;
  return name;
}

NameResolver python_resolver(const lang::ParsedFile& file) {
  auto names = std::make_shared<std::set<std::string>>(module_names(file));
  NameResolver r;
  r.role = [names](const std::string& n) {
    if (names->count(n) || kPythonBuiltins.count(n)) return NameRole::context;
    return NameRole::variable;
  };
  r.callee_role = [names](const std::string& n) {
    if (names->count(n) || kPythonBuiltins.count(n)) return NameRole::context;
    return NameRole::unresolved;
  };
  r.qualify = [](const std::string& n) { return n; };
  return r;
}

NameResolver java_resolver(std::shared_ptr<const JavaScope> scope) {
  NameResolver r;
  r.role = [scope](const std::string& n) { return scope->role(n); };
  r.callee_role = [scope](const std::string& n) { return scope->callee_role(n); };
  r.qualify = [scope](const std::string& n) { return scope->qualify(n); };
  return r;
}

}  // namespace simclone::synth
