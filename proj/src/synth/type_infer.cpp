#include "synth/type_infer.hpp"

#include <set>

namespace simclone::synth {

using lang::AstNode;
using lang::NodeKind;
using lang::Statement;

namespace {

const std::set<std::string, std::less<>> kStringMethods = {
    "split", "strip", "lstrip", "rstrip", "lower", "upper", "replace", "startswith", "endswith", "find",
    "rfind", "isdigit", "isalpha", "isspace", "isupper", "islower", "format", "encode", "decode",
    "splitlines", "zfill", "title", "capitalize", "swapcase", "ljust", "rjust", "center"};
const std::set<std::string, std::less<>> kListMethods = {"append", "extend", "insert", "pop", "sort", "reverse"};

TypeDescriptor py_int() { return TypeDescriptor::integer(64); }
TypeDescriptor py_real() { return TypeDescriptor::real(64); }

// "x", "x[]", ... for names and index chains rooted at a name.
std::optional<std::string> slot_of(const AstNode& e) {
  if (e.kind == NodeKind::name) return e.text;
  if (e.kind == NodeKind::index && e.children.size() == 2 && e.children[1].kind != NodeKind::slice) {
    if (auto base = slot_of(e.children[0])) return *base + "[]";
  }
  return std::nullopt;
}

const std::string* callee_name(const AstNode& call) {
  const auto& c = call.children.front();
  return c.kind == NodeKind::name ? &c.text : nullptr;
}

std::optional<TypeDescriptor> join(const std::optional<TypeDescriptor>& a, const std::optional<TypeDescriptor>& b) {
  if (!a) return b;
  if (!b) return a;
  if (*a == *b) return a;
  const bool an = a->kind() == Kind::integer || a->kind() == Kind::real;
  const bool bn = b->kind() == Kind::integer || b->kind() == Kind::real;
  if (an && bn) return py_real();
  return TypeDescriptor::generic();
}

bool numeric(const std::optional<TypeDescriptor>& t) {
  return t && (t->kind() == Kind::integer || t->kind() == Kind::real || t->kind() == Kind::boolean);
}

}  // namespace

PythonTypes::PythonTypes(std::span<const Statement> stmts) {
  std::vector<std::pair<std::string, const AstNode*>> defs;
  std::vector<std::pair<const AstNode*, const AstNode*>> iterations;
  for (const auto& s : stmts) collect_definitions(s, defs, iterations);
  for (int pass = 0; pass < 3; ++pass) {
    std::map<std::string, std::optional<TypeDescriptor>> next;
    std::set<std::string> conflicted;
    auto merge = [&](const std::string& name, const std::optional<TypeDescriptor>& t) {
      if (!t) return;
      auto it = next.find(name);
      if (it == next.end()) {
        next[name] = t;
      } else if (it->second) {
        auto j = join(it->second, t);
        if (j->kind() == Kind::generic) conflicted.insert(name);
        it->second = j;
      }
    };
    for (const auto& [name, value] : defs) merge(name, type_of(*value));
    for (const auto& [target, iterable] : iterations) {
      auto it = type_of(*iterable);
      std::optional<TypeDescriptor> elem;
      if (it && it->kind() == Kind::array) elem = it->element();
      if (it && it->kind() == Kind::string) elem = TypeDescriptor::string();
      if (target->kind == NodeKind::name) merge(target->text, elem);
    }
    for (const auto& c : conflicted) next[c] = TypeDescriptor::generic();
    locals_ = std::move(next);
  }
  for (const auto& s : stmts) evidence_stmt(s);
}

void PythonTypes::collect_definitions(const Statement& s, std::vector<std::pair<std::string, const AstNode*>>& defs,
                                      std::vector<std::pair<const AstNode*, const AstNode*>>& iterations) const {
  const auto& h = s.head;
  if (h.kind == NodeKind::assign && h.text == "=") {
    for (std::size_t i = 0; i + 1 < h.children.size(); ++i) {
      if (h.children[i].kind == NodeKind::name) defs.emplace_back(h.children[i].text, &h.children.back());
    }
  } else if (h.kind == NodeKind::assign && h.children.front().kind == NodeKind::name) {
    defs.emplace_back(h.children.front().text, &h.children.back());
  }
  for (const auto& c : s.clauses) {
    if (c.header.kind == NodeKind::for_in) iterations.emplace_back(&c.header.children[0], &c.header.children[1]);
    for (const auto& b : c.body) collect_definitions(b, defs, iterations);
  }
}

std::optional<TypeDescriptor> PythonTypes::type_of(const AstNode& e) const {
  switch (e.kind) {
    case NodeKind::int_lit: return py_int();
    case NodeKind::real_lit: return py_real();
    case NodeKind::str_lit: return TypeDescriptor::string();
    case NodeKind::bool_lit: return TypeDescriptor::boolean();
    case NodeKind::compare: return TypeDescriptor::boolean();
    case NodeKind::name: {
      auto it = locals_.find(e.text);
      if (it != locals_.end()) return it->second;
      return std::nullopt;
    }
    case NodeKind::unary: {
      if (e.text == "not") return TypeDescriptor::boolean();
      if (e.text == "~") return py_int();
      return type_of(e.children.front());
    }
    case NodeKind::binary: {
      auto l = type_of(e.children[0]);
      auto r = type_of(e.children[1]);
      const std::string& op = e.text;
      if (op == "&" || op == "|" || op == "^" || op == "<<" || op == ">>") return py_int();
      if (op == "%" && l && l->kind() == Kind::string) return TypeDescriptor::string();
      if (op == "+" && l && r && l->kind() == r->kind() && (l->kind() == Kind::string || l->kind() == Kind::array)) return l;
      if (op == "*") {
        if (l && (l->kind() == Kind::array || l->kind() == Kind::string)) return l;
        if (r && (r->kind() == Kind::array || r->kind() == Kind::string)) return r;
      }
      if (numeric(l) && numeric(r)) {
        if (op == "/") return py_real();
        const bool both_int = l->kind() != Kind::real && r->kind() != Kind::real;
        return both_int ? py_int() : py_real();
      }
      return std::nullopt;
    }
    case NodeKind::list: {
      std::optional<TypeDescriptor> elem;
      for (const auto& c : e.children) elem = join(elem, type_of(c));
      return TypeDescriptor::array(elem.value_or(TypeDescriptor::generic()));
    }
    case NodeKind::comprehension:
      if (e.text == "list") return TypeDescriptor::array(type_of(e.children.front()).value_or(TypeDescriptor::generic()));
      return std::nullopt;
    case NodeKind::ternary: return join(type_of(e.children[0]), type_of(e.children[2]));
    case NodeKind::index: {
      auto base = type_of(e.children[0]);
      if (!base) return std::nullopt;
      if (base->kind() == Kind::string) return base;
      if (base->kind() == Kind::array) {
        if (e.children[1].kind == NodeKind::slice) return base;
        return base->element();
      }
      return std::nullopt;
    }
    case NodeKind::call: {
      const std::string* name = callee_name(e);
      const std::size_t argc = e.children.size() - 1;
      if (name) {
        const std::string& n = *name;
        if (n == "len" || n == "int" || n == "long" || n == "ord" || n == "round") return py_int();
        if (n == "float") return py_real();
        if (n == "str" || n == "chr" || n == "repr") return TypeDescriptor::string();
        if (n == "bool") return TypeDescriptor::boolean();
        if (n == "range" || n == "xrange") return TypeDescriptor::array(py_int());
        if (n == "abs" && argc == 1) return type_of(e.children[1]);
        if ((n == "sorted" || n == "list" || n == "reversed") && argc >= 1) {
          auto t = type_of(e.children[1]);
          if (t && t->kind() == Kind::array) return t;
          if (t && t->kind() == Kind::string) return TypeDescriptor::array(TypeDescriptor::string());
          return TypeDescriptor::array(TypeDescriptor::generic());
        }
        if ((n == "min" || n == "max" || n == "sum") && argc == 1) {
          auto t = type_of(e.children[1]);
          if (t && t->kind() == Kind::array) return t->element().kind() == Kind::generic ? py_int() : t->element();
          return py_int();
        }
        if ((n == "min" || n == "max") && argc > 1) {
          std::optional<TypeDescriptor> out;
          for (std::size_t i = 1; i < e.children.size(); ++i) out = join(out, type_of(e.children[i]));
          return out;
        }
        return std::nullopt;
      }
      const auto& callee = e.children.front();
      if (callee.kind == NodeKind::attribute) {
        const std::string& m = callee.text;
        if (m == "split" || m == "splitlines") return TypeDescriptor::array(TypeDescriptor::string());
        if (m == "count" || m == "find" || m == "rfind" || m == "index") return py_int();
        if (m == "join" || (kStringMethods.count(m) && m != "startswith" && m != "endswith" && m.rfind("is", 0) != 0)) {
          return TypeDescriptor::string();
        }
        if (m == "startswith" || m == "endswith" || m.rfind("is", 0) == 0) return TypeDescriptor::boolean();
      }
      return std::nullopt;
    }
    default:
      return std::nullopt;
  }
}

void PythonTypes::add(const std::string& slot, unsigned ev) { evidence_[slot] |= ev; }

void PythonTypes::add_from_type(const std::string& slot, const std::optional<TypeDescriptor>& t) {
  if (!t) return;
  switch (t->kind()) {
    case Kind::integer: add(slot, ev_int); break;
    case Kind::real: add(slot, ev_real); break;
    case Kind::string: add(slot, ev_str); break;
    case Kind::boolean: add(slot, ev_bool); break;
    case Kind::array:
      add(slot, ev_arr);
      add_from_type(slot + "[]", t->element());
      break;
    default: break;
  }
}

void PythonTypes::evidence_stmt(const Statement& s) {
  evidence_expr(s.head);
  for (const auto& c : s.clauses) {
    if (c.header.kind == NodeKind::for_in) {
      if (auto slot = slot_of(c.header.children[1])) add(*slot, ev_arr);
    }
    evidence_expr(c.header);
    for (const auto& b : c.body) evidence_stmt(b);
  }
}

void PythonTypes::evidence_expr(const AstNode& e) {
  switch (e.kind) {
    case NodeKind::compare:
    case NodeKind::binary: {
      const std::string& op = e.text;
      if (e.children.size() != 2) break;
      const auto& l = e.children[0];
      const auto& r = e.children[1];
      const auto ls = slot_of(l);
      const auto rs = slot_of(r);
      if (op == "in" || op == "not in") {
        if (rs) add(*rs, ev_arr);
        break;
      }
      if (op == "is" || op == "is not") break;
      const bool int_op = op == "//" || op == "&" || op == "|" || op == "^" || op == "<<" || op == ">>";
      if (op == "%") {
        const auto lt = type_of(l);
        if (lt && lt->kind() == Kind::string) break;  // formatting
        if (ls) add(*ls, ev_int);
        break;
      }
      if (int_op) {
        if (ls) add(*ls, ev_int);
        if (rs) add(*rs, ev_int);
        break;
      }
      if (e.kind == NodeKind::binary && op == "*") {
        // repetition: the non-sequence side is an int
        const auto lt = type_of(l);
        const auto rt = type_of(r);
        if (lt && (lt->kind() == Kind::string || lt->kind() == Kind::array)) {
          if (rs) add(*rs, ev_int);
          break;
        }
        if (rt && (rt->kind() == Kind::string || rt->kind() == Kind::array)) {
          if (ls) add(*ls, ev_int);
          break;
        }
      }
      if (ls) add_from_type(*ls, type_of(r));
      if (rs) add_from_type(*rs, type_of(l));
      break;
    }
    case NodeKind::unary:
      if (e.text == "~") {
        if (auto s = slot_of(e.children.front())) add(*s, ev_int);
      }
      break;
    case NodeKind::index: {
      if (auto base = slot_of(e.children[0])) add(*base, ev_arr);
      const auto& sub = e.children[1];
      if (auto s = slot_of(sub)) add(*s, ev_int);
      if (sub.kind == NodeKind::slice) {
        for (const auto& b : sub.children) {
          if (auto s = slot_of(b)) add(*s, ev_int);
        }
      }
      break;
    }
    case NodeKind::call: {
      const auto& callee = e.children.front();
      const std::size_t argc = e.children.size() - 1;
      if (const std::string* name = callee_name(e)) {
        const std::string& n = *name;
        if (n == "range" || n == "xrange" || n == "chr") {
          for (std::size_t i = 1; i < e.children.size(); ++i) {
            if (auto s = slot_of(e.children[i])) add(*s, ev_int);
          }
        } else if (argc >= 1) {
          const auto first = slot_of(e.children[1]);
          if (first) {
            if (n == "len" || n == "sorted" || n == "reversed" || n == "enumerate" || n == "list") add(*first, ev_arr);
            if ((n == "sum" || n == "min" || n == "max") && argc == 1) {
              add(*first, ev_arr);
              add(*first + "[]", ev_int);
            }
            if (n == "open" || n == "file") add(*first, ev_file);
            if (n == "ord") add(*first, ev_str);
          }
        }
      } else if (callee.kind == NodeKind::attribute) {
        if (auto s = slot_of(callee.children.front())) {
          if (kStringMethods.count(callee.text)) add(*s, ev_str);
          if (kListMethods.count(callee.text)) add(*s, ev_arr);
          if (callee.text == "append" && argc == 1) add_from_type(*s + "[]", type_of(e.children[1]));
        }
      }
      break;
    }
    case NodeKind::comp_for:
      if (auto s = slot_of(e.children[1])) add(*s, ev_arr);
      break;
    case NodeKind::assign:
      if (e.text != "=" && e.children.size() == 2) {
        if (auto s = slot_of(e.children[0])) {
          const auto vt = type_of(e.children[1]);
          if (e.text == "+=" || e.text == "-=" || e.text == "*=") {
            add_from_type(*s, vt);
          } else if (e.text == "//=" || e.text == "%=" || e.text == "&=" || e.text == "|=" || e.text == "^=" ||
                     e.text == "<<=" || e.text == ">>=") {
            add(*s, ev_int);
          }
        }
      }
      break;
    default:
      break;
  }
  for (const auto& c : e.children) evidence_expr(c);
}

std::optional<TypeDescriptor> PythonTypes::build(const std::string& slot, int depth) const {
  if (depth > 4) return std::nullopt;
  unsigned ev = 0;
  if (auto it = evidence_.find(slot); it != evidence_.end()) ev = it->second;
  if (ev & ev_str) ev &= ~static_cast<unsigned>(ev_arr);
  if ((ev & ev_int) && (ev & ev_real)) ev &= ~static_cast<unsigned>(ev_int);
  if ((ev & ev_bool) && (ev & (ev_int | ev_real))) ev &= ~static_cast<unsigned>(ev_bool);
  switch (ev) {
    case 0: return std::nullopt;
    case ev_int: return py_int();
    case ev_real: return py_real();
    case ev_str: return TypeDescriptor::string();
    case ev_bool: return TypeDescriptor::boolean();
    case ev_file: return TypeDescriptor::file();
    case ev_arr: return TypeDescriptor::array(build(slot + "[]", depth + 1).value_or(TypeDescriptor::generic()));
    default: return TypeDescriptor::generic();
  }
}

TypeDescriptor PythonTypes::of(const std::string& name) const {
  auto it = locals_.find(name);
  if (it != locals_.end() && it->second) {
    const auto& t = *it->second;
    // an untyped element type can still be refined from usage
    if (t.kind() == Kind::array && t.element().kind() == Kind::generic) {
      if (auto e = build(name + "[]", 1)) return TypeDescriptor::array(*e);
    }
    return t;
  }
  return build(name, 0).value_or(TypeDescriptor::generic());
}

TypeDescriptor PythonTypes::expression(const AstNode& expr) const {
  if (expr.kind == NodeKind::name) return of(expr.text);
  return type_of(expr).value_or(TypeDescriptor::generic());
}

}  // namespace simclone::synth
