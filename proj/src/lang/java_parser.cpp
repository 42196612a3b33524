// Recursive-descent front end for Java (roughly Java 8 plus var/arrow-case).
#include <algorithm>
#include <functional>
#include <set>

#include "lang/ast.hpp"
#include "lang/lexer.hpp"
#include "model/error.hpp"

namespace simclone::lang {

namespace {

const std::set<std::string, std::less<>> kPrimitives = {"boolean", "byte", "short", "int", "long",
                                                        "char", "float", "double", "void"};

const std::set<std::string, std::less<>> kModifiers = {
    "public", "protected", "private", "static", "final", "abstract", "native", "synchronized",
    "transient", "volatile", "strictfp", "default", "sealed", "non-sealed"};

const std::set<std::string, std::less<>> kReserved = {
    "abstract", "assert", "boolean", "break", "byte", "case", "catch", "char", "class", "const",
    "continue", "default", "do", "double", "else", "enum", "extends", "final", "finally", "float",
    "for", "goto", "if", "implements", "import", "instanceof", "int", "interface", "long", "native",
    "new", "package", "private", "protected", "public", "return", "short", "static", "strictfp",
    "super", "switch", "synchronized", "this", "throw", "throws", "transient", "try", "void",
    "volatile", "while", "true", "false", "null"};

AstNode make(NodeKind kind, std::string text, Span span, std::vector<AstNode> children = {}) {
  return AstNode{kind, std::move(text), span, std::move(children)};
}

Span join(Span a, Span b) { return {std::min(a.begin, b.begin), std::max(a.end, b.end)}; }

struct Modifiers {
  bool is_static = false;
  Visibility visibility = Visibility::package_access;
  bool any = false;
};

class JavaParser {
 public:
  JavaParser(std::string_view text, std::string_view path, ParsedFile& out) : text_(text), path_(path), out_(out) {
    toks_ = lex_java(text);
  }

  void parse_unit() {
    if (at_kw("package")) {
      const Span s = cur().span;
      while (!at_op(";") && !at(TokType::end)) ++pos_;
      expect_op(";");
      out_.module_items.push_back({ModuleItem::Kind::other, {}, join(s, prev_span())});
    }
    while (at_kw("import")) {
      const Span s = cur().span;
      ++pos_;
      accept_kw("static");
      std::string last;
      while (!at_op(";") && !at(TokType::end)) {
        if (at(TokType::name) || at_op("*")) last = cur().text;
        ++pos_;
      }
      expect_op(";");
      out_.module_items.push_back({ModuleItem::Kind::import, {last}, join(s, prev_span())});
    }
    while (!at(TokType::end)) {
      if (accept_op(";")) continue;
      const Span s = cur().span;
      Modifiers mods = parse_modifiers();
      if (!at_type_keyword()) fail("expected a type declaration");
      std::string name = parse_type_declaration(mods, "");
      out_.module_items.push_back({ModuleItem::Kind::definition, {name}, join(s, prev_span())});
    }
  }

 private:
  std::string_view text_;
  std::string_view path_;
  ParsedFile& out_;
  std::vector<Token> toks_;
  std::size_t pos_ = 0;

  // ---- token helpers ---------------------------------------------------------
  const Token& cur() const { return toks_[pos_]; }
  const Token& peek(std::size_t k = 1) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  bool at(TokType t) const { return cur().type == t; }
  bool at_op(std::string_view s) const { return cur().is_op(s); }
  bool at_kw(std::string_view s) const { return cur().is_name(s); }
  Span prev_span() const { return pos_ > 0 ? toks_[pos_ - 1].span : cur().span; }

  [[noreturn]] void fail(const std::string& msg) const {
    throw_parse_error(path_, text_, cur().span.begin, msg + " near '" + cur().text + "'");
  }
  bool accept_op(std::string_view s) {
    if (!at_op(s)) return false;
    ++pos_;
    return true;
  }
  bool accept_kw(std::string_view s) {
    if (!at_kw(s)) return false;
    ++pos_;
    return true;
  }
  void expect_op(std::string_view s) {
    if (!accept_op(s)) fail("expected '" + std::string(s) + "'");
  }
  void expect_kw(std::string_view s) {
    if (!accept_kw(s)) fail("expected '" + std::string(s) + "'");
  }
  bool at_ident() const { return at(TokType::name) && !kReserved.count(cur().text); }
  std::string expect_ident() {
    if (!at_ident()) fail("expected identifier");
    return toks_[pos_++].text;
  }
  bool at_type_keyword() const {
    return at_kw("class") || at_kw("interface") || at_kw("enum") || (at_kw("record") && peek().type == TokType::name) ||
           (at_op("@") && peek().is_name("interface"));
  }

  // Skips a balanced region starting at an opening token.
  void skip_balanced(std::string_view open, std::string_view close) {
    int depth = 0;
    do {
      if (at(TokType::end)) fail("unbalanced '" + std::string(open) + "'");
      if (at_op(open)) ++depth;
      if (at_op(close)) --depth;
      ++pos_;
    } while (depth > 0);
  }

  void skip_annotation() {
    expect_op("@");
    expect_ident();
    while (accept_op(".")) expect_ident();
    if (at_op("(")) skip_balanced("(", ")");
  }

  Modifiers parse_modifiers() {
    Modifiers m;
    while (true) {
      if (at_op("@") && !peek().is_name("interface")) {
        skip_annotation();
        m.any = true;
        continue;
      }
      if (at(TokType::name) && kModifiers.count(cur().text)) {
        // `default` inside switch is never reached here.
        const auto& t = cur().text;
        if (t == "static") m.is_static = true;
        if (t == "public") m.visibility = Visibility::public_access;
        if (t == "protected") m.visibility = Visibility::protected_access;
        if (t == "private") m.visibility = Visibility::private_access;
        m.any = true;
        ++pos_;
        continue;
      }
      break;
    }
    return m;
  }

  void skip_type_params() {
    if (!at_op("<")) return;
    int depth = 0;
    do {
      if (at(TokType::end)) fail("unbalanced type parameters");
      if (at_op("<")) ++depth;
      if (at_op(">")) --depth;
      if (at_op(">>=") || at_op(">=")) fail("malformed type parameters");
      ++pos_;
    } while (depth > 0);
  }

  // Type parsing --------------------------------------------------------------
  std::optional<std::string> try_type_args() {
    if (!at_op("<")) return std::string{};
    const std::size_t save = pos_;
    std::string out = "<";
    ++pos_;
    if (accept_op(">")) return std::string("<>");
    while (true) {
      while (at_op("@")) skip_annotation();
      if (accept_op("?")) {
        out += "?";
        if (at_kw("extends") || at_kw("super")) {
          out += " " + toks_[pos_++].text + " ";
          auto t = try_type();
          if (!t) return pos_ = save, std::nullopt;
          out += *t;
        }
      } else {
        auto t = try_type();
        if (!t) return pos_ = save, std::nullopt;
        out += *t;
      }
      if (accept_op(",")) {
        out += ",";
        continue;
      }
      if (accept_op(">")) {
        out += ">";
        return out;
      }
      pos_ = save;
      return std::nullopt;
    }
  }

  std::optional<std::string> try_type() {
    const std::size_t save = pos_;
    while (at_op("@")) skip_annotation();
    if (!at(TokType::name)) return std::nullopt;
    std::string out;
    if (kPrimitives.count(cur().text)) {
      out = toks_[pos_++].text;
    } else {
      if (kReserved.count(cur().text)) return pos_ = save, std::nullopt;
      out = toks_[pos_++].text;
      auto args = try_type_args();
      if (!args) return pos_ = save, std::nullopt;
      out += *args;
      while (at_op(".") && peek().type == TokType::name && !kReserved.count(peek().text)) {
        pos_ += 1;
        out += "." + toks_[pos_++].text;
        auto more = try_type_args();
        if (!more) return pos_ = save, std::nullopt;
        out += *more;
      }
    }
    while (at_op("[") && peek().is_op("]")) {
      pos_ += 2;
      out += "[]";
    }
    if (at_op("...")) {
      // varargs are arrays
      ++pos_;
      out += "[]";
    }
    return out;
  }

  std::string parse_type() {
    auto t = try_type();
    if (!t) fail("expected a type");
    return *t;
  }

  // Declarations ----------------------------------------------------------------
  std::string parse_type_declaration(const Modifiers& mods, const std::string& outer) {
    const std::string kind = at_op("@") ? (pos_ += 2, std::string("interface")) : toks_[pos_++].text;
    std::string name = expect_ident();
    const std::string qualified = outer.empty() ? name : outer + "." + name;
    skip_type_params();
    ClassInfo info;
    info.name = name;
    if (kind == "record" && at_op("(")) {
      ++pos_;
      std::vector<Parameter> comps;
      while (!at_op(")")) {
        while (at_op("@")) skip_annotation();
        std::string type = parse_type();
        std::string pname = expect_ident();
        comps.push_back({pname, type});
        info.fields.push_back({pname, type, false, Visibility::private_access});
        if (!accept_op(",")) break;
      }
      expect_op(")");
      info.constructors.push_back(std::move(comps));
    }
    while (!at_op("{")) {
      if (at(TokType::end)) fail("expected class body");
      ++pos_;
    }
    (void)mods;
    parse_class_body(info, qualified, kind == "enum", kind == "interface");
    out_.classes.push_back(std::move(info));
    return name;
  }

  void parse_class_body(ClassInfo& info, const std::string& qualified, bool is_enum, bool is_interface) {
    expect_op("{");
    if (is_enum) {
      while (at_ident()) {
        const std::string constant = expect_ident();
        info.fields.push_back({constant, info.name, true, Visibility::public_access});
        if (at_op("(")) skip_balanced("(", ")");
        if (at_op("{")) skip_balanced("{", "}");
        if (!accept_op(",")) break;
        while (at_op("@")) skip_annotation();
      }
      if (!accept_op(";") && !at_op("}")) fail("expected ';' after enum constants");
    }
    while (!accept_op("}")) {
      if (at(TokType::end)) fail("unterminated class body");
      parse_member(info, qualified, is_interface);
    }
  }

  void parse_member(ClassInfo& info, const std::string& qualified, bool is_interface) {
    if (accept_op(";")) return;
    const Span start = cur().span;
    if (at_op("{") || (at_kw("static") && peek().is_op("{"))) {
      accept_kw("static");
      std::vector<Statement> ignored;
      parse_block_statements(ignored);
      return;
    }
    Modifiers mods = parse_modifiers();
    if (at_type_keyword()) {
      parse_type_declaration(mods, qualified);
      return;
    }
    skip_type_params();
    // constructor
    if (at(TokType::name) && cur().text == info.name && peek().is_op("(")) {
      ++pos_;
      info.constructors.push_back(parse_params());
      skip_throws();
      std::vector<Statement> ignored;
      parse_block_statements(ignored);
      return;
    }
    if (at(TokType::name) && cur().text == info.name && peek().is_op("{")) {
      // compact record constructor
      ++pos_;
      std::vector<Statement> ignored;
      parse_block_statements(ignored);
      return;
    }
    std::string type = parse_type();
    const Span name_span = cur().span;
    std::string name = expect_ident();
    if (at_op("(")) {
      FunctionInfo fn;
      fn.name = name;
      fn.class_name = info.name;
      fn.qualified_name = qualified + "." + name;
      fn.return_type = type;
      fn.is_static = mods.is_static;
      fn.params = parse_params();
      while (at_op("[") && peek().is_op("]")) {
        pos_ += 2;
        fn.return_type += "[]";
      }
      skip_throws();
      (mods.is_static ? info.static_methods : info.instance_methods).push_back(name);
      if (at_kw("default")) {
        // annotation element default
        while (!at_op(";")) ++pos_;
      }
      if (accept_op(";")) return;
      const Span body_open = cur().span;
      fn.body = parse_block_statements_raw();
      fn.span = join(start, prev_span());
      fn.body_span = {body_open.end, prev_span().begin};
      out_.functions.push_back(std::move(fn));
      (void)name_span;
      return;
    }
    // field declarators
    const bool is_static = mods.is_static || is_interface;
    while (true) {
      std::string ftype = type;
      while (at_op("[") && peek().is_op("]")) {
        pos_ += 2;
        ftype += "[]";
      }
      info.fields.push_back({name, ftype, is_static, is_interface ? Visibility::public_access : mods.visibility});
      if (accept_op("=")) parse_var_initializer();
      if (!accept_op(",")) break;
      name = expect_ident();
    }
    expect_op(";");
  }

  std::vector<Parameter> parse_params() {
    expect_op("(");
    std::vector<Parameter> params;
    while (!at_op(")")) {
      parse_modifiers();
      std::string type = parse_type();
      if (at_kw("this")) {
        // receiver parameter
        ++pos_;
      } else {
        std::string name = expect_ident();
        while (at_op("[") && peek().is_op("]")) {
          pos_ += 2;
          type += "[]";
        }
        params.push_back({name, type});
      }
      if (!accept_op(",")) break;
    }
    expect_op(")");
    return params;
  }

  void skip_throws() {
    if (!accept_kw("throws")) return;
    do {
      parse_type();
    } while (accept_op(","));
  }

  // Statements -------------------------------------------------------------------
  std::vector<Statement> parse_block_statements_raw() {
    std::vector<Statement> body;
    parse_block_statements(body);
    return body;
  }

  void parse_block_statements(std::vector<Statement>& out) {
    expect_op("{");
    while (!accept_op("}")) {
      if (at(TokType::end)) fail("unterminated block");
      parse_statement(out);
    }
  }

  Statement simple(StmtKind kind, AstNode head, bool terminates = false) {
    Statement s;
    s.kind = kind;
    s.span = head.span;
    s.head = std::move(head);
    s.terminates = terminates;
    return s;
  }

  // Body of a control statement: a block contributes its statements,
  // a single statement contributes itself.
  std::vector<Statement> parse_body() {
    std::vector<Statement> body;
    if (at_op("{")) {
      parse_block_statements(body);
    } else {
      parse_statement(body);
    }
    return body;
  }

  void close_span(Statement& s) {
    s.span = join(s.span, prev_span());
  }

  void parse_statement(std::vector<Statement>& out) {
    const Span start = cur().span;
    if (accept_op(";")) return;
    if (at_op("{")) {
      Statement s;
      s.kind = StmtKind::block;
      s.span = start;
      s.head = make(NodeKind::block, "{", start);
      Clause c;
      c.header = make(NodeKind::block, "", start);
      parse_block_statements(c.body);
      s.clauses.push_back(std::move(c));
      close_span(s);
      out.push_back(std::move(s));
      return;
    }
    if (at_ident() && peek().is_op(":") ) {
      // labeled statement
      pos_ += 2;
      parse_statement(out);
      return;
    }
    if (at_kw("if")) return out.push_back(parse_if());
    if (at_kw("while")) {
      ++pos_;
      Statement s;
      s.kind = StmtKind::loop;
      s.span = start;
      s.head = make(NodeKind::other, "while", start);
      Clause c;
      AstNode cond = parse_paren_expr();
      c.header = make(NodeKind::condition, "while", cond.span, {std::move(cond)});
      c.body = parse_body();
      s.clauses.push_back(std::move(c));
      close_span(s);
      return out.push_back(std::move(s));
    }
    if (at_kw("do")) {
      ++pos_;
      Statement s;
      s.kind = StmtKind::loop;
      s.span = start;
      s.head = make(NodeKind::other, "do", start);
      Clause c;
      c.body = parse_body();
      expect_kw("while");
      AstNode cond = parse_paren_expr();
      c.header = make(NodeKind::condition, "do", cond.span, {std::move(cond)});
      expect_op(";");
      s.clauses.push_back(std::move(c));
      close_span(s);
      return out.push_back(std::move(s));
    }
    if (at_kw("for")) return out.push_back(parse_for());
    if (at_kw("switch")) return out.push_back(parse_switch());
    if (at_kw("try")) return out.push_back(parse_try());
    if (at_kw("synchronized") && peek().is_op("(")) {
      ++pos_;
      Statement s;
      s.kind = StmtKind::block;
      s.span = start;
      s.head = make(NodeKind::other, "synchronized", start);
      Clause c;
      AstNode lock = parse_paren_expr();
      c.header = make(NodeKind::block, "synchronized", lock.span, {std::move(lock)});
      parse_block_statements(c.body);
      s.clauses.push_back(std::move(c));
      close_span(s);
      return out.push_back(std::move(s));
    }
    if (accept_kw("return")) {
      AstNode n = make(NodeKind::return_stmt, "return", start);
      if (!at_op(";")) n.children.push_back(parse_expr());
      expect_op(";");
      n.span = join(start, prev_span());
      return out.push_back(simple(StmtKind::other, std::move(n), true));
    }
    if (accept_kw("throw")) {
      AstNode n = make(NodeKind::raise_stmt, "throw", start, {parse_expr()});
      expect_op(";");
      n.span = join(start, prev_span());
      return out.push_back(simple(StmtKind::other, std::move(n), true));
    }
    if (at_kw("break") || at_kw("continue")) {
      const bool is_break = cur().text == "break";
      ++pos_;
      if (at_ident()) ++pos_;
      expect_op(";");
      AstNode n = make(is_break ? NodeKind::break_stmt : NodeKind::continue_stmt, is_break ? "break" : "continue",
                       join(start, prev_span()));
      return out.push_back(simple(StmtKind::other, std::move(n)));
    }
    if (at_kw("yield") && !peek().is_op("=") && !peek().is_op("(") && !peek().is_op(".")) {
      ++pos_;
      AstNode n = make(NodeKind::yield_expr, "yield", start, {parse_expr()});
      expect_op(";");
      n.span = join(start, prev_span());
      return out.push_back(simple(StmtKind::other, std::move(n), true));
    }
    if (accept_kw("assert")) {
      AstNode n = make(NodeKind::assert_stmt, "assert", start, {parse_expr()});
      if (accept_op(":")) n.children.push_back(parse_expr());
      expect_op(";");
      n.span = join(start, prev_span());
      return out.push_back(simple(StmtKind::other, std::move(n)));
    }
    // local class
    {
      const std::size_t save = pos_;
      Modifiers mods = parse_modifiers();
      if (at_type_keyword()) {
        std::string name = parse_type_declaration(mods, "");
        Statement s = simple(StmtKind::other, make(NodeKind::other, name, join(start, prev_span())));
        s.nested_definition = true;
        return out.push_back(std::move(s));
      }
      if (mods.any) {
        AstNode decl = parse_local_declaration();
        expect_op(";");
        decl.span = join(start, prev_span());
        return out.push_back(simple(StmtKind::declaration, std::move(decl)));
      }
      pos_ = save;
    }
    if (looks_like_declaration()) {
      AstNode decl = parse_local_declaration();
      expect_op(";");
      decl.span = join(start, prev_span());
      return out.push_back(simple(StmtKind::declaration, std::move(decl)));
    }
    AstNode e = parse_expr();
    expect_op(";");
    const Span sp = join(start, prev_span());
    if (e.kind == NodeKind::assign || e.kind == NodeKind::incdec) {
      e.span = join(e.span, sp);
      return out.push_back(simple(StmtKind::assignment, std::move(e)));
    }
    out.push_back(simple(StmtKind::other, make(NodeKind::expr_stmt, "", sp, {std::move(e)})));
  }

  bool looks_like_declaration() {
    const std::size_t save = pos_;
    bool result = false;
    if (at(TokType::name) && (!kReserved.count(cur().text) || kPrimitives.count(cur().text))) {
      if (try_type() && at_ident()) {
        const auto& next = peek();
        result = next.is_op("=") || next.is_op(";") || next.is_op(",") || next.is_op("[") || next.is_op(":");
      }
    }
    pos_ = save;
    return result;
  }

  AstNode parse_local_declaration() {
    const Span start = cur().span;
    std::string type = parse_type();
    AstNode decl = make(NodeKind::declaration, type, start);
    while (true) {
      const Span ns = cur().span;
      std::string name = expect_ident();
      while (at_op("[") && peek().is_op("]")) {
        pos_ += 2;
        if (decl.children.empty()) decl.text += "[]";
      }
      AstNode d = make(NodeKind::declarator, name, ns);
      if (accept_op("=")) d.children.push_back(parse_var_initializer());
      d.span = join(ns, prev_span());
      decl.children.push_back(std::move(d));
      if (!at_op(",")) break;
      ++pos_;
    }
    decl.span = join(start, prev_span());
    return decl;
  }

  AstNode parse_var_initializer() {
    if (at_op("{")) return parse_array_init();
    return parse_expr();
  }

  AstNode parse_array_init() {
    const Span s = cur().span;
    expect_op("{");
    AstNode init = make(NodeKind::array_init, "", s);
    while (!at_op("}")) {
      init.children.push_back(parse_var_initializer());
      if (!accept_op(",")) break;
    }
    expect_op("}");
    init.span = join(s, prev_span());
    return init;
  }

  AstNode parse_paren_expr() {
    expect_op("(");
    AstNode e = parse_expr();
    expect_op(")");
    return e;
  }

  Statement parse_if() {
    const Span start = cur().span;
    Statement s;
    s.kind = StmtKind::conditional;
    s.span = start;
    s.head = make(NodeKind::other, "if", start);
    expect_kw("if");
    std::string label = "if";
    while (true) {
      Clause c;
      AstNode cond = parse_paren_expr();
      c.header = make(NodeKind::condition, label, cond.span, {std::move(cond)});
      c.body = parse_body();
      s.clauses.push_back(std::move(c));
      if (!at_kw("else")) break;
      const Span es = cur().span;
      ++pos_;
      if (accept_kw("if")) {
        label = "elif";
        continue;
      }
      Clause e;
      e.header = make(NodeKind::empty, "else", es);
      e.body = parse_body();
      s.clauses.push_back(std::move(e));
      break;
    }
    close_span(s);
    return s;
  }

  Statement parse_for() {
    const Span start = cur().span;
    Statement s;
    s.kind = StmtKind::loop;
    s.span = start;
    s.head = make(NodeKind::other, "for", start);
    expect_kw("for");
    expect_op("(");
    Clause c;
    // enhanced for
    {
      const std::size_t save = pos_;
      parse_modifiers();
      auto type = try_type();
      if (type && at_ident() && peek().is_op(":")) {
        const Span ts = cur().span;
        std::string name = expect_ident();
        expect_op(":");
        AstNode target = make(NodeKind::declaration, *type, ts, {make(NodeKind::declarator, name, ts)});
        AstNode iter = parse_expr();
        expect_op(")");
        c.header = make(NodeKind::for_in, "for", join(ts, iter.span), {std::move(target), std::move(iter)});
        c.body = parse_body();
        s.clauses.push_back(std::move(c));
        close_span(s);
        return s;
      }
      pos_ = save;
    }
    const Span hs = cur().span;
    AstNode init = make(NodeKind::block, "init", hs);
    if (!at_op(";")) {
      const std::size_t save = pos_;
      Modifiers mods = parse_modifiers();
      if (mods.any || looks_like_declaration()) {
        init.children.push_back(parse_local_declaration());
      } else {
        pos_ = save;
        do {
          init.children.push_back(parse_expr());
        } while (accept_op(","));
      }
    }
    expect_op(";");
    AstNode cond = at_op(";") ? make(NodeKind::empty, "", cur().span) : parse_expr();
    expect_op(";");
    AstNode update = make(NodeKind::block, "update", cur().span);
    if (!at_op(")")) {
      do {
        update.children.push_back(parse_expr());
      } while (accept_op(","));
    }
    expect_op(")");
    c.header = make(NodeKind::for_classic, "for", join(hs, prev_span()),
                    {std::move(init), std::move(cond), std::move(update)});
    c.body = parse_body();
    s.clauses.push_back(std::move(c));
    close_span(s);
    return s;
  }

  Statement parse_switch() {
    const Span start = cur().span;
    Statement s;
    s.kind = StmtKind::conditional;
    s.span = start;
    expect_kw("switch");
    AstNode subject = parse_paren_expr();
    s.head = make(NodeKind::condition, "switch", start, {std::move(subject)});
    expect_op("{");
    while (!accept_op("}")) {
      if (at(TokType::end)) fail("unterminated switch");
      Clause c;
      const Span ls = cur().span;
      c.header = make(NodeKind::case_label, "", ls);
      bool arrow = false;
      // one or more labels
      while (at_kw("case") || at_kw("default")) {
        if (accept_kw("default")) {
          c.header.text = "default";
        } else {
          ++pos_;
          do {
            c.header.children.push_back(parse_ternary());
          } while (accept_op(","));
        }
        if (accept_op("->")) {
          arrow = true;
          break;
        }
        expect_op(":");
      }
      c.header.span = join(ls, prev_span());
      if (arrow) {
        if (at_op("{")) {
          parse_block_statements(c.body);
        } else if (at_kw("throw")) {
          parse_statement(c.body);
        } else {
          const Span es = cur().span;
          AstNode e = parse_expr();
          expect_op(";");
          c.body.push_back(simple(e.kind == NodeKind::assign || e.kind == NodeKind::incdec ? StmtKind::assignment
                                                                                           : StmtKind::other,
                                  e.kind == NodeKind::assign || e.kind == NodeKind::incdec
                                      ? std::move(e)
                                      : make(NodeKind::expr_stmt, "", join(es, prev_span()), {std::move(e)})));
        }
      } else {
        while (!at_kw("case") && !at_kw("default") && !at_op("}")) {
          if (at(TokType::end)) fail("unterminated switch");
          parse_statement(c.body);
        }
      }
      s.clauses.push_back(std::move(c));
    }
    close_span(s);
    return s;
  }

  Statement parse_try() {
    const Span start = cur().span;
    Statement s;
    s.kind = StmtKind::try_stmt;
    s.span = start;
    s.head = make(NodeKind::other, "try", start);
    expect_kw("try");
    Clause body;
    body.header = make(NodeKind::with_items, "try", start);
    if (accept_op("(")) {
      while (!at_op(")")) {
        const std::size_t save = pos_;
        Modifiers mods = parse_modifiers();
        if (mods.any || looks_like_declaration()) {
          body.header.children.push_back(parse_local_declaration());
        } else {
          pos_ = save;
          body.header.children.push_back(parse_expr());
        }
        if (!accept_op(";")) break;
      }
      expect_op(")");
    }
    parse_block_statements(body.body);
    s.clauses.push_back(std::move(body));
    while (at_kw("catch")) {
      const Span cs = cur().span;
      ++pos_;
      expect_op("(");
      parse_modifiers();
      Clause c;
      c.header = make(NodeKind::except_clause, "", cs);
      AstNode types = make(NodeKind::type_ref, parse_type(), cs);
      while (accept_op("|")) types.text += "|" + parse_type();
      c.header.text = expect_ident();
      c.header.children.push_back(std::move(types));
      expect_op(")");
      c.header.span = join(cs, prev_span());
      parse_block_statements(c.body);
      s.clauses.push_back(std::move(c));
    }
    if (at_kw("finally")) {
      const Span fs = cur().span;
      ++pos_;
      Clause c;
      c.header = make(NodeKind::empty, "finally", fs);
      parse_block_statements(c.body);
      s.clauses.push_back(std::move(c));
    }
    close_span(s);
    return s;
  }

  // Expressions ------------------------------------------------------------------
  AstNode record_literal(AstNode n) {
    out_.literals.push_back(n);
    return n;
  }

  // Counts adjacent '>' tokens starting at pos_ (for shift operators).
  std::size_t adjacent_gt() const {
    std::size_t n = 0;
    while (n < 3 && peek(n).is_op(">") && (n == 0 || peek(n).span.begin == peek(n - 1).span.end)) ++n;
    return n;
  }

  static bool is_assign_op(std::string_view op) {
    return op == "=" || op == "+=" || op == "-=" || op == "*=" || op == "/=" || op == "%=" || op == "&=" ||
           op == "|=" || op == "^=" || op == "<<=" || op == ">>=" || op == ">>>=";
  }

  AstNode parse_expr() {
    if (at_lambda()) return parse_lambda();
    AstNode left = parse_ternary();
    if (at(TokType::op) && is_assign_op(cur().text)) {
      std::string op = toks_[pos_++].text;
      AstNode value = at_op("{") ? parse_array_init() : parse_expr();
      Span sp = join(left.span, value.span);
      return make(NodeKind::assign, op, sp, {std::move(left), std::move(value)});
    }
    return left;
  }

  bool at_lambda() const {
    if (at_ident() && peek().is_op("->")) return true;
    if (!at_op("(")) return false;
    int depth = 0;
    std::size_t k = 0;
    while (true) {
      const auto& t = peek(k);
      if (t.type == TokType::end) return false;
      if (t.is_op("(")) ++depth;
      if (t.is_op(")") && --depth == 0) return peek(k + 1).is_op("->");
      ++k;
    }
  }

  AstNode parse_lambda() {
    const Span s = cur().span;
    AstNode params = make(NodeKind::tuple, "params", s);
    if (at_ident()) {
      params.children.push_back(make(NodeKind::name, toks_[pos_].text, cur().span));
      ++pos_;
    } else {
      expect_op("(");
      while (!at_op(")")) {
        parse_modifiers();
        const std::size_t save = pos_;
        if (at_ident() && (peek().is_op(",") || peek().is_op(")"))) {
          params.children.push_back(make(NodeKind::name, toks_[pos_].text, cur().span));
          ++pos_;
        } else {
          pos_ = save;
          parse_type();
          params.children.push_back(make(NodeKind::name, toks_[pos_].text, cur().span));
          expect_ident();
        }
        if (!accept_op(",")) break;
      }
      expect_op(")");
    }
    expect_op("->");
    if (at_op("{")) {
      const Span bs = cur().span;
      std::vector<Statement> ignored;
      parse_block_statements(ignored);
      return make(NodeKind::lambda, "lambda", join(s, prev_span()), {std::move(params), make(NodeKind::block, "", join(bs, prev_span()))});
    }
    AstNode body = parse_expr();
    return make(NodeKind::lambda, "lambda", join(s, body.span), {std::move(params), std::move(body)});
  }

  AstNode parse_ternary() {
    AstNode cond = parse_binary(0);
    if (!at_op("?")) return cond;
    ++pos_;
    AstNode then = at_lambda() ? parse_lambda() : parse_ternary();
    expect_op(":");
    AstNode alt = at_lambda() ? parse_lambda() : parse_ternary();
    Span sp = join(cond.span, alt.span);
    return make(NodeKind::ternary, "", sp, {std::move(then), std::move(cond), std::move(alt)});
  }

  // Returns the binary operator at the cursor for a precedence level, and its token count.
  std::optional<std::pair<std::string, std::size_t>> binary_op_at(int level) const {
    if (cur().type == TokType::name) {
      if (level == 7 && cur().text == "instanceof") return std::pair<std::string, std::size_t>{"instanceof", 1};
      return std::nullopt;
    }
    if (cur().type != TokType::op) return std::nullopt;
    const std::string& t = cur().text;
    switch (level) {
      case 0: if (t == "||") return std::pair<std::string, std::size_t>{t, 1}; break;
      case 1: if (t == "&&") return std::pair<std::string, std::size_t>{t, 1}; break;
      case 2: if (t == "|") return std::pair<std::string, std::size_t>{t, 1}; break;
      case 3: if (t == "^") return std::pair<std::string, std::size_t>{t, 1}; break;
      case 4: if (t == "&") return std::pair<std::string, std::size_t>{t, 1}; break;
      case 5: if (t == "==" || t == "!=") return std::pair<std::string, std::size_t>{t, 1}; break;
      case 7:
        if (t == "<" || t == "<=" || t == ">=") return std::pair<std::string, std::size_t>{t, 1};
        if (t == ">" && adjacent_gt() == 1) return std::pair<std::string, std::size_t>{t, 1};
        break;
      case 8: {
        if (t == "<<") return std::pair<std::string, std::size_t>{t, 1};
        const auto n = t == ">" ? adjacent_gt() : 0;
        if (n >= 2) return std::pair<std::string, std::size_t>{std::string(n, '>'), n};
        break;
      }
      case 9: if (t == "+" || t == "-") return std::pair<std::string, std::size_t>{t, 1}; break;
      case 10: if (t == "*" || t == "/" || t == "%") return std::pair<std::string, std::size_t>{t, 1}; break;
      default: break;
    }
    return std::nullopt;
  }

  AstNode parse_binary(int level) {
    if (level > 10) return parse_unary();
    if (level == 6) return parse_binary(7);
    AstNode left = parse_binary(level + 1);
    while (auto op = binary_op_at(level)) {
      pos_ += op->second;
      if (op->first == "instanceof") {
        accept_kw("final");
        std::string type = parse_type();
        if (at_ident()) ++pos_;  // pattern binding
        Span sp = join(left.span, prev_span());
        left = make(NodeKind::instance_of, type, sp, {std::move(left)});
        continue;
      }
      AstNode right = parse_binary(level + 1);
      Span sp = join(left.span, right.span);
      const NodeKind kind = level <= 1 ? NodeKind::logical : (level == 5 || level == 7) ? NodeKind::compare : NodeKind::binary;
      left = make(kind, op->first, sp, {std::move(left), std::move(right)});
    }
    return left;
  }

  bool cast_follows() const {
    // cursor is just past ')'
    const Token& t = cur();
    switch (t.type) {
      case TokType::int_number:
      case TokType::real_number:
      case TokType::string:
      case TokType::character:
        return true;
      case TokType::name:
        return t.text != "instanceof";
      case TokType::op:
        return t.text == "(" || t.text == "!" || t.text == "~";
      default:
        return false;
    }
  }

  std::optional<AstNode> try_cast() {
    const std::size_t save = pos_;
    const Span s = cur().span;
    ++pos_;  // '('
    const bool primitive = at(TokType::name) && kPrimitives.count(cur().text);
    auto type = try_type();
    while (type && accept_op("&")) {
      auto more = try_type();
      if (!more) type.reset();
    }
    if (!type || !accept_op(")")) {
      pos_ = save;
      return std::nullopt;
    }
    const bool ok = primitive ? !(at_op(")") || at_op(";") || at_op(",") || at(TokType::end)) : cast_follows();
    if (!ok) {
      pos_ = save;
      return std::nullopt;
    }
    AstNode operand = at_lambda() ? parse_lambda() : parse_unary();
    return make(NodeKind::cast, *type, join(s, operand.span), {std::move(operand)});
  }

  AstNode parse_unary() {
    const Span s = cur().span;
    if (at_op("++") || at_op("--")) {
      std::string op = toks_[pos_++].text;
      AstNode target = parse_unary();
      return make(NodeKind::incdec, op, join(s, target.span), {std::move(target)});
    }
    if (at_op("-") || at_op("+") || at_op("!") || at_op("~")) {
      std::string op = toks_[pos_++].text;
      AstNode inner = parse_unary();
      if (op == "-" && (inner.kind == NodeKind::int_lit || inner.kind == NodeKind::real_lit) &&
          !inner.text.starts_with("-")) {
        if (!out_.literals.empty() && out_.literals.back().span == inner.span) out_.literals.pop_back();
        inner.text = "-" + inner.text;
        inner.span = join(s, inner.span);
        return record_literal(std::move(inner));
      }
      return make(NodeKind::unary, op, join(s, inner.span), {std::move(inner)});
    }
    if (at_op("(")) {
      if (auto cast = try_cast()) return std::move(*cast);
    }
    AstNode node = parse_postfix(parse_primary());
    while (at_op("++") || at_op("--")) {
      std::string op = toks_[pos_++].text;
      Span sp = join(node.span, prev_span());
      node = make(NodeKind::incdec, op, sp, {std::move(node)});
    }
    return node;
  }

  std::vector<AstNode> parse_args() {
    expect_op("(");
    std::vector<AstNode> args;
    while (!at_op(")")) {
      args.push_back(parse_expr());
      if (!accept_op(",")) break;
    }
    expect_op(")");
    return args;
  }

  AstNode parse_postfix(AstNode node) {
    while (true) {
      if (at_op(".")) {
        ++pos_;
        if (at_op("<")) {
          if (!try_type_args()) fail("malformed type arguments");
        }
        const Span ms = cur().span;
        if (at_kw("new")) {
          // inner class creation
          AstNode inner = parse_primary();
          Span sp = join(node.span, inner.span);
          node = make(NodeKind::attribute, "new", sp, {std::move(node), std::move(inner)});
          continue;
        }
        if (!at(TokType::name)) fail("expected member name");
        std::string member = toks_[pos_++].text;
        AstNode attr = make(NodeKind::attribute, member, join(node.span, ms), {std::move(node)});
        if (at_op("(")) {
          auto args = parse_args();
          AstNode call = make(NodeKind::call, "", join(attr.span, prev_span()), {std::move(attr)});
          for (auto& a : args) call.children.push_back(std::move(a));
          node = std::move(call);
        } else {
          node = std::move(attr);
        }
      } else if (at_op("[")) {
        ++pos_;
        AstNode sub = parse_expr();
        expect_op("]");
        Span sp = join(node.span, prev_span());
        node = make(NodeKind::index, "", sp, {std::move(node), std::move(sub)});
      } else if (at_op("::")) {
        ++pos_;
        std::string member = at_kw("new") ? (++pos_, std::string("new")) : expect_ident();
        Span sp = join(node.span, prev_span());
        node = make(NodeKind::method_ref, member, sp, {std::move(node)});
      } else {
        break;
      }
    }
    return node;
  }

  AstNode parse_new() {
    const Span s = cur().span;
    expect_kw("new");
    while (at_op("@")) skip_annotation();
    if (at_op("<")) {
      if (!try_type_args()) fail("malformed type arguments");
    }
    // element / class type without array dims
    std::string type;
    if (at(TokType::name) && kPrimitives.count(cur().text)) {
      type = toks_[pos_++].text;
    } else {
      type = expect_ident();
      auto args = try_type_args();
      if (!args) fail("malformed type arguments");
      type += *args;
      while (accept_op(".")) {
        type += "." + expect_ident();
        auto more = try_type_args();
        if (!more) fail("malformed type arguments");
        type += *more;
      }
    }
    if (at_op("[")) {
      AstNode arr = make(NodeKind::new_array, type, s);
      while (at_op("[")) {
        ++pos_;
        if (accept_op("]")) {
          arr.text += "[]";
          continue;
        }
        arr.children.push_back(parse_expr());
        expect_op("]");
        arr.text += "[]";
      }
      if (at_op("{")) arr.children.push_back(parse_array_init());
      arr.span = join(s, prev_span());
      return arr;
    }
    AstNode obj = make(NodeKind::new_object, type, s, parse_args());
    if (at_op("{")) {
      // anonymous class body
      ClassInfo anon;
      anon.name = type;
      parse_class_body(anon, type, false, false);
    }
    obj.span = join(s, prev_span());
    return obj;
  }

  AstNode parse_primary() {
    const Token& t = cur();
    const Span s = t.span;
    switch (t.type) {
      case TokType::int_number:
        ++pos_;
        return record_literal(make(NodeKind::int_lit, t.text, s));
      case TokType::real_number:
        ++pos_;
        return record_literal(make(NodeKind::real_lit, t.text, s));
      case TokType::string: {
        ++pos_;
        if (t.text.starts_with("\"\"\"")) {
          std::string body = t.text.substr(3, t.text.size() - 6);
          if (!body.empty() && body.front() == '\n') body.erase(0, 1);
          return record_literal(make(NodeKind::str_lit, body, s));
        }
        return record_literal(make(NodeKind::str_lit, decode_string_literal(t.text), s));
      }
      case TokType::character:
        ++pos_;
        return record_literal(make(NodeKind::char_lit, decode_string_literal(t.text), s));
      case TokType::name:
        break;
      case TokType::op:
        if (at_op("(")) {
          ++pos_;
          AstNode e = parse_expr();
          expect_op(")");
          e.span = join(s, prev_span());
          return e;
        }
        fail("unexpected token");
      default:
        fail("unexpected token");
    }
    if (t.text == "true" || t.text == "false") {
      ++pos_;
      return record_literal(make(NodeKind::bool_lit, t.text, s));
    }
    if (t.text == "null") {
      ++pos_;
      return make(NodeKind::null_lit, "null", s);
    }
    if (t.text == "this") {
      ++pos_;
      if (at_op("(")) {
        auto args = parse_args();
        AstNode call = make(NodeKind::call, "", join(s, prev_span()), {make(NodeKind::this_ref, "this", s)});
        for (auto& a : args) call.children.push_back(std::move(a));
        return call;
      }
      return make(NodeKind::this_ref, "this", s);
    }
    if (t.text == "new") return parse_new();
    if (t.text == "switch") {
      Statement sw = parse_switch();
      return make(NodeKind::other, "switch", sw.span);
    }
    if (kPrimitives.count(t.text)) {
      // int.class, int[].class, int[]::new
      std::string type = toks_[pos_++].text;
      while (at_op("[") && peek().is_op("]")) {
        pos_ += 2;
        type += "[]";
      }
      return make(NodeKind::type_ref, type, join(s, prev_span()));
    }
    if (t.text != "super" && kReserved.count(t.text)) fail("unexpected keyword");
    ++pos_;
    // array type class literal / method ref: Foo[].class
    if (at_op("[") && peek().is_op("]")) {
      std::string type = t.text;
      while (at_op("[") && peek().is_op("]")) {
        pos_ += 2;
        type += "[]";
      }
      return make(NodeKind::type_ref, type, join(s, prev_span()));
    }
    if (at_op("(")) {
      auto args = parse_args();
      AstNode call = make(NodeKind::call, "", join(s, prev_span()), {make(NodeKind::name, t.text, s)});
      for (auto& a : args) call.children.push_back(std::move(a));
      return call;
    }
    return make(NodeKind::name, t.text, s);
  }
};

}  // namespace

ParsedFile parse_java(std::string text, std::string path) {
  ParsedFile file;
  file.path = std::move(path);
  file.language = LanguageId::java();
  file.text = std::move(text);
  try {
    JavaParser parser(file.text, file.path, file);
    parser.parse_unit();
  } catch (const Error& e) {
    const std::string msg = e.what();
    const std::string prefix = "<source>";
    if (!file.path.empty() && msg.starts_with(prefix)) throw Error(ErrorCode::parse, file.path + msg.substr(prefix.size()));
    throw;
  }
  return file;
}

}  // namespace simclone::lang
