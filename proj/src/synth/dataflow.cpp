#include "synth/dataflow.hpp"

#include <algorithm>
#include <map>

namespace simclone::synth {

using lang::AstNode;
using lang::NodeKind;
using lang::Statement;
using lang::StmtKind;

bool is_literal(const AstNode& node) {
  switch (node.kind) {
    case NodeKind::int_lit:
    case NodeKind::real_lit:
    case NodeKind::str_lit:
    case NodeKind::char_lit:
    case NodeKind::bool_lit:
    case NodeKind::null_lit:
      return true;
    default:
      return false;
  }
}

const VarInfo* Dataflow::find(const std::string& name) const {
  for (const auto& v : vars) {
    if (v.name == name) return &v;
  }
  return nullptr;
}

namespace {

const std::set<std::string, std::less<>> kMutators = {
    "append", "extend", "insert", "pop", "remove", "sort", "reverse", "update", "add", "clear",
    "setdefault", "discard", "popitem", "addAll", "put", "set", "push", "offer", "poll", "removeAll",
    "fill", "addFirst", "addLast", "removeFirst", "removeLast", "putAll"};

void collect_target_names(const AstNode& n, std::vector<std::string>& out) {
  switch (n.kind) {
    case NodeKind::name:
      out.push_back(n.text);
      break;
    case NodeKind::tuple:
    case NodeKind::list:
    case NodeKind::starred:
      for (const auto& c : n.children) collect_target_names(c, out);
      break;
    default:
      break;
  }
}

const AstNode* root_of(const AstNode& n) {
  const AstNode* cur = &n;
  while ((cur->kind == NodeKind::index || cur->kind == NodeKind::attribute || cur->kind == NodeKind::slice) &&
         !cur->children.empty()) {
    cur = &cur->children.front();
  }
  return cur;
}

class Analyzer {
 public:
  Analyzer(Lang lang, const NameResolver& resolver) : lang_(lang), resolver_(resolver) {}

  Dataflow run(std::span<const Statement> stmts) {
    prepass(stmts);
    for (std::size_t k = 0; k < stmts.size(); ++k) {
      const bool last = k + 1 == stmts.size();
      const auto& s = stmts[k];
      if (last && s.head.kind == NodeKind::return_stmt) {
        ends_with_return_ = true;
      }
    }
    for (std::size_t k = 0; k < stmts.size(); ++k) statement(stmts[k], k + 1 == stmts.size());
    df_.definite_at_end = definite_;
    return std::move(df_);
  }

 private:
  Lang lang_;
  const NameResolver& resolver_;
  Dataflow df_;
  std::map<std::string, std::size_t> index_;
  std::set<std::string> definite_;
  std::vector<std::set<std::string>> shadows_;
  std::set<std::string> local_names_;   // bound anywhere in the snippet
  std::set<std::string> local_context_; // imported or declared global inside the snippet
  int control_depth_ = 0;
  int scope_depth_ = 0;
  int loop_depth_ = 0;
  int switch_depth_ = 0;
  bool ends_with_return_ = false;

  bool java() const { return lang_ == Lang::java; }

  void error(const std::string& msg) {
    if (std::find(df_.errors.begin(), df_.errors.end(), msg) == df_.errors.end()) df_.errors.push_back(msg);
  }

  VarInfo& var(const std::string& name) {
    auto it = index_.find(name);
    if (it != index_.end()) return df_.vars[it->second];
    index_[name] = df_.vars.size();
    VarInfo v;
    v.name = name;
    df_.vars.push_back(std::move(v));
    return df_.vars.back();
  }

  bool shadowed(const std::string& name) const {
    for (const auto& s : shadows_) {
      if (s.count(name)) return true;
    }
    return local_context_.count(name) > 0;
  }

  NameRole role(const std::string& name) const {
    if (local_names_.count(name)) return NameRole::variable;
    return resolver_.role ? resolver_.role(name) : NameRole::variable;
  }

  // ---- prepass: names bound inside the snippet are locals --------------------
  void prepass(std::span<const Statement> stmts) {
    for (const auto& s : stmts) prepass_stmt(s);
  }

  void prepass_stmt(const Statement& s) {
    if (s.nested_definition && !java()) local_names_.insert(s.head.text);
    prepass_expr(s.head);
    for (const auto& c : s.clauses) {
      prepass_expr(c.header);
      if (c.header.kind == NodeKind::except_clause && !c.header.text.empty()) local_names_.insert(c.header.text);
      for (const auto& b : c.body) prepass_stmt(b);
    }
  }

  void prepass_expr(const AstNode& n) {
    if (n.kind == NodeKind::declarator) local_names_.insert(n.text);
    if (!java()) {
      if (n.kind == NodeKind::assign) {
        std::vector<std::string> names;
        for (std::size_t i = 0; i + 1 < n.children.size(); ++i) collect_target_names(n.children[i], names);
        local_names_.insert(names.begin(), names.end());
      } else if (n.kind == NodeKind::for_in || n.kind == NodeKind::with_item) {
        std::vector<std::string> names;
        if (n.kind == NodeKind::for_in) collect_target_names(n.children.front(), names);
        if (n.kind == NodeKind::with_item && n.children.size() > 1) collect_target_names(n.children[1], names);
        local_names_.insert(names.begin(), names.end());
      }
    }
    if (n.kind == NodeKind::lambda || n.kind == NodeKind::comprehension) return;
    for (const auto& c : n.children) prepass_expr(c);
  }

  // ---- variable events -------------------------------------------------------
  void use(const AstNode& n) {
    const std::string& name = n.text;
    if (shadowed(name)) return;
    if (!java() && (name == "self" || name == "cls") && !local_names_.count(name)) {
      error("uses the enclosing instance '" + name + "'");
      return;
    }
    switch (role(name)) {
      case NameRole::context:
        return;
      case NameRole::static_member:
        df_.rewrites.push_back({n.span, resolver_.qualify(name)});
        return;
      case NameRole::unresolved:
        error("references unresolvable name '" + name + "'");
        return;
      case NameRole::variable:
        break;
    }
    auto& v = var(name);
    if (!definite_.count(name) && !v.upward_exposed) {
      v.upward_exposed = true;
      df_.arg_order.push_back(name);
    }
  }

  void mark_modified(const std::string& name) {
    if (shadowed(name) || role(name) != NameRole::variable) return;
    auto& v = var(name);
    if (!v.modified) df_.def_order.push_back(name);
    v.modified = true;
    v.last_def_constant = false;
  }

  void define(const AstNode& n, bool constant, bool header = false) {
    const std::string& name = n.text;
    if (shadowed(name)) return;
    const NameRole r = role(name);
    if (r == NameRole::static_member) {
      df_.rewrites.push_back({n.span, resolver_.qualify(name)});
      return;
    }
    if (r != NameRole::variable) return;
    auto& v = var(name);
    if (!v.modified) df_.def_order.push_back(name);
    v.modified = true;
    v.last_def_constant = constant && control_depth_ == 0;
    v.header_bound = v.header_bound || header;
    definite_.insert(name);
  }

  void declare(const std::string& name, const std::string& type, bool header = false) {
    auto& v = var(name);
    if (scope_depth_ == 0 && !header) {
      v.declared_top = true;
    } else {
      v.declared_nested = true;
    }
    if (!v.declared_type) v.declared_type = type;
    v.header_bound = v.header_bound || header;
  }

  // ---- expressions -----------------------------------------------------------
  void expr(const AstNode& n) {
    switch (n.kind) {
      case NodeKind::name:
        if (java() && n.text == "super") {
          error("uses 'super'");
        } else {
          use(n);
        }
        return;
      case NodeKind::assign:
        assign(n);
        return;
      case NodeKind::incdec:
        modify_target(n.children.front());
        return;
      case NodeKind::declaration:
        declaration(n, false);
        return;
      case NodeKind::call:
        call(n);
        return;
      case NodeKind::this_ref:
        error("uses 'this'");
        return;
      case NodeKind::yield_expr:
        error("contains yield");
        return;
      case NodeKind::lambda: {
        std::set<std::string> params;
        for (const auto& p : n.children.front().children) params.insert(p.text);
        shadows_.push_back(std::move(params));
        for (std::size_t i = 1; i < n.children.size(); ++i) expr(n.children[i]);
        shadows_.pop_back();
        return;
      }
      case NodeKind::comprehension:
        comprehension(n);
        return;
      case NodeKind::type_ref:
        return;
      default:
        break;
    }
    for (const auto& c : n.children) expr(c);
  }

  void call(const AstNode& n) {
    const AstNode& callee = n.children.front();
    if (callee.kind == NodeKind::name) {
      callee_use(callee);
    } else if (callee.kind == NodeKind::attribute) {
      const AstNode& obj = callee.children.front();
      expr(obj);
      const AstNode* root = root_of(obj);
      if (kMutators.count(callee.text) && root->kind == NodeKind::name) mark_modified(root->text);
    } else if (callee.kind == NodeKind::this_ref) {
      error("uses 'this'");
    } else {
      expr(callee);
    }
    for (std::size_t i = 1; i < n.children.size(); ++i) expr(n.children[i]);
  }

  void callee_use(const AstNode& callee) {
    const std::string& name = callee.text;
    if (shadowed(name)) return;
    if (local_names_.count(name)) {
      use(callee);
      return;
    }
    if (java() && name == "super") {
      error("uses 'super'");
      return;
    }
    const NameRole r = resolver_.callee_role ? resolver_.callee_role(name) : NameRole::context;
    switch (r) {
      case NameRole::static_member:
        df_.rewrites.push_back({callee.span, resolver_.qualify(name)});
        return;
      case NameRole::unresolved:
        error("calls unresolvable '" + name + "'");
        return;
      case NameRole::variable:
        use(callee);
        return;
      case NameRole::context:
        return;
    }
  }

  void comprehension(const AstNode& n) {
    shadows_.emplace_back();
    std::vector<const AstNode*> elements;
    for (const auto& c : n.children) {
      if (c.kind != NodeKind::comp_for) {
        elements.push_back(&c);
        continue;
      }
      expr(c.children[1]);
      std::vector<std::string> names;
      collect_target_names(c.children[0], names);
      shadows_.back().insert(names.begin(), names.end());
      for (std::size_t i = 2; i < c.children.size(); ++i) expr(c.children[i]);
    }
    for (const auto* e : elements) expr(*e);
    shadows_.pop_back();
  }

  void assign(const AstNode& n) {
    const AstNode& value = n.children.back();
    if (n.text == "=") {
      expr(value);
      const bool constant = is_literal(value) && n.children.size() == 2;
      for (std::size_t i = 0; i + 1 < n.children.size(); ++i) bind(n.children[i], constant);
      return;
    }
    const AstNode& target = n.children.front();
    if (target.kind == NodeKind::name) {
      use(target);
      expr(value);
      define(target, false);
    } else {
      expr(value);
      modify_target(target);
    }
  }

  void bind(const AstNode& t, bool constant, bool header = false) {
    switch (t.kind) {
      case NodeKind::name:
        define(t, constant, header);
        return;
      case NodeKind::tuple:
      case NodeKind::list:
        for (const auto& c : t.children) bind(c, false, header);
        return;
      case NodeKind::starred:
        bind(t.children.front(), false, header);
        return;
      case NodeKind::declaration:
        declaration(t, header);
        return;
      default:
        modify_target(t);
    }
  }

  void modify_target(const AstNode& t) {
    if (t.kind == NodeKind::name) {
      use(t);
      define(t, false);
      return;
    }
    for (const auto& c : t.children) expr(c);
    const AstNode* root = root_of(t);
    if (root->kind == NodeKind::name) mark_modified(root->text);
  }

  void declaration(const AstNode& decl, bool header) {
    for (const auto& d : decl.children) {
      if (!d.children.empty()) expr(d.children.front());
      declare(d.text, decl.text, header);
      if (!d.children.empty()) {
        define(d, is_literal(d.children.front()), header);
      } else if (header) {
        // for-each variables are assigned by the loop
        define(d, false, true);
      }
    }
  }

  // ---- statements --------------------------------------------------------------
  void body(const std::vector<Statement>& stmts) {
    for (const auto& s : stmts) statement(s, false);
  }

  std::set<std::string> branch(const std::vector<Statement>& stmts, const std::set<std::string>& start) {
    definite_ = start;
    ++control_depth_;
    ++scope_depth_;
    body(stmts);
    --scope_depth_;
    --control_depth_;
    return definite_;
  }

  static std::set<std::string> intersect(const std::set<std::string>& a, const std::set<std::string>& b) {
    std::set<std::string> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.begin()));
    return out;
  }

  void statement(const Statement& s, bool last_top) {
    const AstNode& head = s.head;
    if (s.nested_definition) {
      if (!java()) define(head, false, true);
      return;
    }
    switch (head.kind) {
      case NodeKind::return_stmt:
        for (const auto& c : head.children) expr(c);
        if (last_top && control_depth_ == 0 && scope_depth_ == 0) {
          if (head.children.empty()) {
            df_.trailing_bare_return = true;
          } else {
            df_.trailing_return = &head.children.front();
          }
        } else if (!ends_with_return_) {
          error("returns from inside the snippet");
        }
        return;
      case NodeKind::break_stmt:
        if (loop_depth_ == 0 && switch_depth_ == 0) error("break outside a loop");
        return;
      case NodeKind::continue_stmt:
        if (loop_depth_ == 0) error("continue outside a loop");
        return;
      case NodeKind::yield_expr:
        error("contains yield");
        return;
      case NodeKind::import_stmt:
        for (const auto& c : head.children) local_context_.insert(c.text);
        return;
      case NodeKind::global_stmt:
        for (const auto& c : head.children) local_context_.insert(c.text);
        return;
      case NodeKind::declaration:
        declaration(head, false);
        return;
      default:
        break;
    }
    if (s.clauses.empty()) {
      expr(head);
      return;
    }
    switch (s.kind) {
      case StmtKind::conditional:
        conditional(s);
        return;
      case StmtKind::loop:
        loop(s);
        return;
      case StmtKind::try_stmt:
        try_statement(s);
        return;
      default:
        block(s);
        return;
    }
  }

  void conditional(const Statement& s) {
    const bool is_switch = s.head.kind == NodeKind::condition;
    if (is_switch) {
      for (const auto& c : s.head.children) expr(c);
      ++switch_depth_;
    }
    const auto start = definite_;
    bool complete = false;
    std::optional<std::set<std::string>> merged;
    for (const auto& c : s.clauses) {
      definite_ = start;
      for (const auto& h : c.header.children) expr(h);
      if (c.header.text == "else" || c.header.text == "default") complete = true;
      auto out = branch(c.body, start);
      merged = merged ? intersect(*merged, out) : out;
    }
    if (is_switch) --switch_depth_;
    definite_ = (complete && merged) ? *merged : start;
  }

  void loop(const Statement& s) {
    const auto start = definite_;
    const Clause_& main = s.clauses.front();
    const AstNode& header = main.header;
    ++loop_depth_;
    ++control_depth_;
    ++scope_depth_;
    std::set<std::string> after = start;
    if (header.kind == NodeKind::for_in) {
      expr(header.children[1]);
      bind(header.children[0], false, true);
      body(main.body);
    } else if (header.kind == NodeKind::for_classic) {
      for (const auto& i : header.children[0].children) {
        if (i.kind == NodeKind::declaration) {
          declaration(i, true);
        } else if (i.kind == NodeKind::assign) {
          assign(i);
          for (std::size_t k = 0; k + 1 < i.children.size(); ++k) {
            if (i.children[k].kind == NodeKind::name) var(i.children[k].text).header_bound = true;
          }
        } else {
          expr(i);
        }
      }
      after = definite_;
      expr(header.children[1]);
      body(main.body);
      expr(header.children[2]);
    } else if (header.text == "do") {
      body(main.body);
      expr(header.children.front());
      after = definite_;
    } else {
      for (const auto& c : header.children) expr(c);
      body(main.body);
    }
    --scope_depth_;
    --control_depth_;
    --loop_depth_;
    for (std::size_t k = 1; k < s.clauses.size(); ++k) branch(s.clauses[k].body, start);
    definite_ = after;
    if (header.kind == NodeKind::for_classic) {
      // variables declared in the for header go out of scope
      for (const auto& i : header.children[0].children) {
        if (i.kind == NodeKind::declaration) {
          for (const auto& d : i.children) definite_.erase(d.text);
        }
      }
    }
  }

  using Clause_ = lang::Clause;

  void try_statement(const Statement& s) {
    const auto start = definite_;
    const auto& first = s.clauses.front();
    ++scope_depth_;
    ++control_depth_;
    for (const auto& r : first.header.children) {
      if (r.kind == NodeKind::declaration) {
        declaration(r, false);
      } else {
        expr(r);
      }
    }
    body(first.body);
    --control_depth_;
    --scope_depth_;
    std::set<std::string> normal = definite_;
    std::optional<std::set<std::string>> merged;
    bool has_handler = false;
    const Clause_* finally_clause = nullptr;
    for (std::size_t k = 1; k < s.clauses.size(); ++k) {
      const auto& c = s.clauses[k];
      if (c.header.kind == NodeKind::except_clause) {
        has_handler = true;
        definite_ = start;
        for (const auto& h : c.header.children) {
          if (h.kind != NodeKind::type_ref) expr(h);
        }
        ++control_depth_;
        ++scope_depth_;
        if (!c.header.text.empty()) {
          auto& v = var(c.header.text);
          v.header_bound = true;
          if (java()) v.declared_nested = true;
          v.modified = true;
          definite_.insert(c.header.text);
        }
        body(c.body);
        --scope_depth_;
        --control_depth_;
        merged = merged ? intersect(*merged, definite_) : definite_;
      } else if (c.header.text == "else") {
        normal = branch(c.body, normal);
      } else if (c.header.text == "finally") {
        finally_clause = &c;
      }
    }
    definite_ = has_handler && merged ? intersect(normal, *merged) : normal;
    if (finally_clause) {
      ++scope_depth_;
      body(finally_clause->body);
      --scope_depth_;
    }
  }

  void block(const Statement& s) {
    for (const auto& c : s.clauses) {
      for (const auto& h : c.header.children) {
        if (h.kind == NodeKind::with_item) {
          expr(h.children.front());
          if (h.children.size() > 1) bind(h.children[1], false, true);
        } else {
          expr(h);
        }
      }
      if (java()) ++scope_depth_;
      body(c.body);
      if (java()) --scope_depth_;
    }
  }
};

}  // namespace

Dataflow analyze(std::span<const Statement> stmts, Lang language, const NameResolver& resolver) {
  Analyzer a(language, resolver);
  return a.run(stmts);
}

}  // namespace simclone::synth
