// Recursive-descent front end for Python (2 and 3 surface syntax).
#include <algorithm>
#include <set>

#include "lang/ast.hpp"
#include "lang/lexer.hpp"
#include "model/error.hpp"

namespace simclone::lang {

namespace {

const std::set<std::string, std::less<>> kKeywords = {
    "and", "as", "assert", "async", "await", "break", "class", "continue", "def", "del", "elif", "else",
    "except", "exec", "finally", "for", "from", "global", "if", "import", "in", "is", "lambda", "nonlocal",
    "not", "or", "pass", "raise", "return", "try", "while", "with", "yield"};

AstNode make(NodeKind kind, std::string text, Span span, std::vector<AstNode> children = {}) {
  return AstNode{kind, std::move(text), span, std::move(children)};
}

Span join(Span a, Span b) { return {std::min(a.begin, b.begin), std::max(a.end, b.end)}; }

class PythonParser {
 public:
  PythonParser(std::string_view text, std::string_view path, ParsedFile& out)
      : text_(text), path_(path), out_(out) {
    try {
      toks_ = lex_python(text);
    } catch (const Error& e) {
      throw Error(ErrorCode::parse, std::string(path.empty() ? "<source>" : path) +
                                        std::string(e.what()).substr(std::string("<source>").size()));
    }
  }

  void parse_module() {
    while (!at(TokType::end)) {
      if (at(TokType::newline)) {
        ++pos_;
        continue;
      }
      if (at(TokType::indent)) fail("unexpected indent");
      const std::size_t start = pos_;
      std::vector<Statement> stmts;
      parse_statement(stmts, "", "");
      classify_module_item(start, stmts);
    }
  }

 private:
  std::string_view text_;
  std::string_view path_;
  ParsedFile& out_;
  std::vector<Token> toks_;
  std::size_t pos_ = 0;

  // ---- token helpers -------------------------------------------------------
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
    if (at_op(s)) {
      ++pos_;
      return true;
    }
    return false;
  }
  bool accept_kw(std::string_view s) {
    if (at_kw(s)) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect_op(std::string_view s) {
    if (!accept_op(s)) fail("expected '" + std::string(s) + "'");
  }
  void expect_kw(std::string_view s) {
    if (!accept_kw(s)) fail("expected '" + std::string(s) + "'");
  }
  std::string expect_name() {
    if (!at(TokType::name) || kKeywords.count(cur().text)) fail("expected identifier");
    return toks_[pos_++].text;
  }
  bool at_name_token() const {
    return at(TokType::name) && !kKeywords.count(cur().text);
  }

  // ---- module-level bookkeeping ---------------------------------------------
  void classify_module_item(std::size_t start_tok, const std::vector<Statement>& stmts) {
    for (const auto& s : stmts) {
      ModuleItem item;
      item.span = s.span;
      const auto& head = s.head;
      if (head.kind == NodeKind::import_stmt) {
        item.kind = ModuleItem::Kind::import;
        for (const auto& c : head.children) item.names.push_back(c.text);
      } else if (s.nested_definition) {
        item.kind = ModuleItem::Kind::definition;
        item.names.push_back(head.text);
      } else if (head.kind == NodeKind::assign && head.text == "=") {
        bool has_call = false;
        walk(head.children.back(), [&](const AstNode& n) { has_call = has_call || n.kind == NodeKind::call; });
        bool simple_targets = true;
        for (std::size_t i = 0; i + 1 < head.children.size(); ++i) {
          if (head.children[i].kind == NodeKind::name) {
            item.names.push_back(head.children[i].text);
          } else {
            simple_targets = false;
          }
        }
        item.kind = (!has_call && simple_targets) ? ModuleItem::Kind::constant : ModuleItem::Kind::other;
      }
      out_.module_items.push_back(std::move(item));
    }
    (void)start_tok;
  }

  // ---- statements ------------------------------------------------------------
  void parse_block(std::vector<Statement>& body, const std::string& scope, const std::string& cls) {
    expect_op(":");
    if (at(TokType::newline)) {
      ++pos_;
      while (at(TokType::newline)) ++pos_;
      if (!at(TokType::indent)) fail("expected an indented block");
      ++pos_;
      while (!at(TokType::dedent) && !at(TokType::end)) {
        if (at(TokType::newline)) {
          ++pos_;
          continue;
        }
        parse_statement(body, scope, cls);
      }
      if (at(TokType::dedent)) ++pos_;
    } else {
      parse_simple_line(body);
    }
  }

  void parse_statement(std::vector<Statement>& out, const std::string& scope, const std::string& cls) {
    while (at_op("@")) {
      // decorators
      while (!at(TokType::newline) && !at(TokType::end)) ++pos_;
      if (at(TokType::newline)) ++pos_;
    }
    if (at_kw("async") && (peek().is_name("def") || peek().is_name("for") || peek().is_name("with"))) ++pos_;
    if (at_kw("def")) return out.push_back(parse_def(scope, cls));
    if (at_kw("class")) return out.push_back(parse_class(scope));
    if (at_kw("if")) return out.push_back(parse_if(scope, cls));
    if (at_kw("while")) return out.push_back(parse_while(scope, cls));
    if (at_kw("for")) return out.push_back(parse_for(scope, cls));
    if (at_kw("try")) return out.push_back(parse_try(scope, cls));
    if (at_kw("with")) return out.push_back(parse_with(scope, cls));
    parse_simple_line(out);
  }

  void parse_simple_line(std::vector<Statement>& out) {
    while (true) {
      out.push_back(parse_small_statement());
      if (accept_op(";")) {
        if (at(TokType::newline) || at(TokType::end)) break;
        continue;
      }
      break;
    }
    if (at(TokType::newline)) {
      ++pos_;
    } else if (!at(TokType::end) && !at(TokType::dedent)) {
      fail("expected end of statement");
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

  Statement parse_small_statement() {
    const Span start = cur().span;
    if (accept_kw("pass")) return simple(StmtKind::other, make(NodeKind::pass_stmt, "pass", start));
    if (accept_kw("break")) return simple(StmtKind::other, make(NodeKind::break_stmt, "break", start));
    if (accept_kw("continue")) return simple(StmtKind::other, make(NodeKind::continue_stmt, "continue", start));
    if (accept_kw("return")) {
      AstNode n = make(NodeKind::return_stmt, "return", start);
      if (!at_statement_end()) n.children.push_back(parse_testlist_star());
      n.span = join(start, prev_span());
      return simple(StmtKind::other, std::move(n), true);
    }
    if (accept_kw("raise")) {
      AstNode n = make(NodeKind::raise_stmt, "raise", start);
      if (!at_statement_end()) {
        n.children.push_back(parse_test());
        while (accept_op(",") || accept_kw("from")) n.children.push_back(parse_test());
      }
      n.span = join(start, prev_span());
      return simple(StmtKind::other, std::move(n), true);
    }
    if (at_kw("global") || at_kw("nonlocal")) {
      ++pos_;
      AstNode n = make(NodeKind::global_stmt, "global", start);
      do {
        const Span s = cur().span;
        n.children.push_back(make(NodeKind::name, expect_name(), s));
      } while (accept_op(","));
      n.span = join(start, prev_span());
      return simple(StmtKind::declaration, std::move(n));
    }
    if (accept_kw("del")) {
      AstNode n = make(NodeKind::del_stmt, "del", start);
      n.children.push_back(parse_exprlist());
      n.span = join(start, prev_span());
      return simple(StmtKind::other, std::move(n));
    }
    if (accept_kw("assert")) {
      AstNode n = make(NodeKind::assert_stmt, "assert", start);
      n.children.push_back(parse_test());
      if (accept_op(",")) n.children.push_back(parse_test());
      n.span = join(start, prev_span());
      return simple(StmtKind::other, std::move(n));
    }
    if (at_kw("import") || at_kw("from")) return parse_import();
    if (at_kw("exec") && !peek().is_op("(") && !peek().is_op("=")) {
      ++pos_;
      AstNode n = make(NodeKind::other, "exec", start);
      n.children.push_back(parse_test());
      while (accept_kw("in") || accept_op(",")) n.children.push_back(parse_test());
      n.span = join(start, prev_span());
      return simple(StmtKind::other, std::move(n));
    }
    if (at_kw("print") && !peek().is_op("(") && !peek().is_op("=") && !peek().is_op(".") &&
        !peek().is_op("[") && !peek().is_op(",")) {
      // Python 2 print statement
      ++pos_;
      AstNode n = make(NodeKind::print_stmt, "print", start);
      if (accept_op(">>")) {
        n.children.push_back(parse_test());
        if (!accept_op(",")) {
          n.span = join(start, prev_span());
          return simple(StmtKind::other, std::move(n));
        }
      }
      while (!at_statement_end()) {
        n.children.push_back(parse_test());
        if (!accept_op(",")) break;
      }
      n.span = join(start, prev_span());
      return simple(StmtKind::other, std::move(n));
    }
    return parse_expr_statement();
  }

  bool at_statement_end() const {
    return at(TokType::newline) || at(TokType::end) || at_op(";") || at(TokType::dedent);
  }

  Statement parse_import() {
    const Span start = cur().span;
    AstNode n = make(NodeKind::import_stmt, "import", start);
    auto dotted = [&]() {
      std::string name;
      while (at_op(".") || at_op("...")) name += toks_[pos_++].text;
      if (at(TokType::name) && !at_kw("import")) {
        name += expect_name();
        while (accept_op(".")) name += "." + expect_name();
      }
      return name;
    };
    if (accept_kw("import")) {
      do {
        const Span s = cur().span;
        std::string name = dotted();
        std::string bound = name.substr(0, name.find('.'));
        if (accept_kw("as")) bound = expect_name();
        n.children.push_back(make(NodeKind::name, bound, join(s, prev_span())));
      } while (accept_op(","));
    } else {
      expect_kw("from");
      dotted();
      expect_kw("import");
      const bool paren = accept_op("(");
      if (accept_op("*")) {
        n.children.push_back(make(NodeKind::name, "*", prev_span()));
      } else {
        do {
          if (paren && at_op(")")) break;
          const Span s = cur().span;
          std::string bound = expect_name();
          if (accept_kw("as")) bound = expect_name();
          n.children.push_back(make(NodeKind::name, bound, join(s, prev_span())));
        } while (accept_op(","));
      }
      if (paren) expect_op(")");
    }
    n.span = join(start, prev_span());
    return simple(StmtKind::other, std::move(n));
  }

  Statement parse_expr_statement() {
    const Span start = cur().span;
    AstNode first = parse_testlist_star();
    static const std::set<std::string, std::less<>> aug = {"+=", "-=", "*=", "/=", "//=", "%=", "**=",
                                                           ">>=", "<<=", "&=", "|=", "^=", "@="};
    if (at(TokType::op) && aug.count(cur().text)) {
      std::string op = toks_[pos_++].text;
      AstNode value = at_kw("yield") ? parse_yield() : parse_testlist();
      AstNode n = make(NodeKind::assign, op, join(start, prev_span()), {std::move(first), std::move(value)});
      return simple(StmtKind::assignment, std::move(n));
    }
    if (at_op(":")) {
      // annotated assignment / declaration
      ++pos_;
      AstNode annotation = parse_test();
      if (accept_op("=")) {
        AstNode value = at_kw("yield") ? parse_yield() : parse_testlist_star();
        AstNode n = make(NodeKind::assign, "=", join(start, prev_span()), {std::move(first), std::move(value)});
        return simple(StmtKind::assignment, std::move(n));
      }
      AstNode n = make(NodeKind::declaration, std::string(text_.substr(annotation.span.begin, annotation.span.end - annotation.span.begin)),
                       join(start, prev_span()));
      n.children.push_back(make(NodeKind::declarator, first.text, first.span));
      return simple(StmtKind::declaration, std::move(n));
    }
    if (at_op("=")) {
      std::vector<AstNode> parts{std::move(first)};
      while (accept_op("=")) parts.push_back(at_kw("yield") ? parse_yield() : parse_testlist_star());
      AstNode n = make(NodeKind::assign, "=", join(start, prev_span()), std::move(parts));
      return simple(StmtKind::assignment, std::move(n));
    }
    AstNode n = make(NodeKind::expr_stmt, "", join(start, prev_span()), {std::move(first)});
    return simple(StmtKind::other, std::move(n));
  }

  Statement compound(StmtKind kind, Span start) {
    Statement s;
    s.kind = kind;
    s.span = start;
    return s;
  }

  void close_span(Statement& s) {
    Span end = s.head.span;
    for (const auto& c : s.clauses) {
      end = join(end, c.header.span);
      for (const auto& b : c.body) end = join(end, b.span);
    }
    s.span = join(s.span, end);
  }

  Statement parse_def(const std::string& scope, const std::string& cls) {
    const Span start = cur().span;
    expect_kw("def");
    const Span name_span = cur().span;
    std::string name = expect_name();
    FunctionInfo fn;
    fn.name = name;
    fn.class_name = cls;
    fn.qualified_name = scope.empty() ? name : scope + "." + name;
    fn.is_static = cls.empty();
    expect_op("(");
    while (!at_op(")")) {
      if (accept_op("*") || accept_op("**")) {
        if (at_op(",") || at_op(")")) {
          accept_op(",");
          continue;
        }
      }
      if (accept_op("/")) {
        accept_op(",");
        continue;
      }
      if (accept_op("(")) {
        // Python 2 tuple parameters
        int depth = 1;
        while (depth > 0 && !at(TokType::end)) {
          if (at_op("(")) ++depth;
          if (at_op(")")) --depth;
          ++pos_;
        }
        fn.params.push_back({"_tuple", ""});
      } else {
        fn.params.push_back({expect_name(), ""});
      }
      if (accept_op(":")) parse_test();
      if (accept_op("=")) parse_test();
      if (!accept_op(",")) break;
    }
    expect_op(")");
    if (accept_op("->")) parse_test();
    Statement s = compound(StmtKind::other, start);
    s.nested_definition = true;
    s.head = make(NodeKind::other, name, join(start, name_span));
    std::vector<Statement> body;
    const auto body_begin = peek().span.begin;
    parse_block(body, fn.qualified_name, "");
    fn.span = join(start, prev_span());
    if (!body.empty()) fn.body_span = {body.front().span.begin, body.back().span.end};
    (void)body_begin;
    fn.body = std::move(body);
    s.span = fn.span;
    out_.functions.push_back(std::move(fn));
    return s;
  }

  Statement parse_class(const std::string& scope) {
    const Span start = cur().span;
    expect_kw("class");
    std::string name = expect_name();
    if (accept_op("(")) {
      while (!at_op(")") && !at(TokType::end)) {
        parse_test();
        if (accept_op("=")) parse_test();
        if (!accept_op(",")) break;
      }
      expect_op(")");
    }
    ClassInfo info;
    info.name = name;
    const std::string qualified = scope.empty() ? name : scope + "." + name;
    const std::size_t fn_before = out_.functions.size();
    Statement s = compound(StmtKind::other, start);
    s.nested_definition = true;
    s.head = make(NodeKind::other, name, start);
    std::vector<Statement> body;
    parse_block(body, qualified, name);
    for (std::size_t i = fn_before; i < out_.functions.size(); ++i) {
      auto& f = out_.functions[i];
      if (f.class_name == name) {
        const bool is_static_method = f.params.empty() || (f.params.front().name != "self" && f.params.front().name != "cls");
        (is_static_method ? info.static_methods : info.instance_methods).push_back(f.name);
      }
    }
    out_.classes.push_back(std::move(info));
    s.span = join(start, prev_span());
    return s;
  }

  Statement parse_if(const std::string& scope, const std::string& cls) {
    const Span start = cur().span;
    Statement s = compound(StmtKind::conditional, start);
    s.head = make(NodeKind::other, "if", start);
    expect_kw("if");
    Clause first;
    first.header = make(NodeKind::condition, "if", cur().span, {parse_namedexpr_test()});
    first.header.span = first.header.children.front().span;
    parse_block(first.body, scope, cls);
    s.clauses.push_back(std::move(first));
    while (at_kw("elif")) {
      const Span es = cur().span;
      ++pos_;
      Clause c;
      c.header = make(NodeKind::condition, "elif", es, {parse_namedexpr_test()});
      c.header.span = join(es, c.header.children.front().span);
      parse_block(c.body, scope, cls);
      s.clauses.push_back(std::move(c));
    }
    if (at_kw("else")) {
      const Span es = cur().span;
      ++pos_;
      Clause c;
      c.header = make(NodeKind::empty, "else", es);
      parse_block(c.body, scope, cls);
      s.clauses.push_back(std::move(c));
    }
    close_span(s);
    return s;
  }

  void parse_else(Statement& s, const std::string& scope, const std::string& cls) {
    if (at_kw("else")) {
      const Span es = cur().span;
      ++pos_;
      Clause c;
      c.header = make(NodeKind::empty, "else", es);
      parse_block(c.body, scope, cls);
      s.clauses.push_back(std::move(c));
    }
  }

  Statement parse_while(const std::string& scope, const std::string& cls) {
    const Span start = cur().span;
    Statement s = compound(StmtKind::loop, start);
    s.head = make(NodeKind::other, "while", start);
    expect_kw("while");
    Clause c;
    AstNode cond = parse_namedexpr_test();
    c.header = make(NodeKind::condition, "while", cond.span, {std::move(cond)});
    parse_block(c.body, scope, cls);
    s.clauses.push_back(std::move(c));
    parse_else(s, scope, cls);
    close_span(s);
    return s;
  }

  Statement parse_for(const std::string& scope, const std::string& cls) {
    const Span start = cur().span;
    Statement s = compound(StmtKind::loop, start);
    s.head = make(NodeKind::other, "for", start);
    expect_kw("for");
    AstNode target = parse_exprlist();
    expect_kw("in");
    AstNode iter = parse_testlist();
    Clause c;
    c.header = make(NodeKind::for_in, "for", join(target.span, iter.span), {std::move(target), std::move(iter)});
    parse_block(c.body, scope, cls);
    s.clauses.push_back(std::move(c));
    parse_else(s, scope, cls);
    close_span(s);
    return s;
  }

  Statement parse_try(const std::string& scope, const std::string& cls) {
    const Span start = cur().span;
    Statement s = compound(StmtKind::try_stmt, start);
    s.head = make(NodeKind::other, "try", start);
    expect_kw("try");
    Clause body;
    body.header = make(NodeKind::empty, "try", start);
    parse_block(body.body, scope, cls);
    s.clauses.push_back(std::move(body));
    while (at_kw("except")) {
      const Span es = cur().span;
      ++pos_;
      Clause c;
      c.header = make(NodeKind::except_clause, "", es);
      if (!at_op(":")) {
        c.header.children.push_back(parse_test());
        if (accept_kw("as") || accept_op(",")) c.header.text = expect_name();
      }
      c.header.span = join(es, prev_span());
      parse_block(c.body, scope, cls);
      s.clauses.push_back(std::move(c));
    }
    parse_else(s, scope, cls);
    if (at_kw("finally")) {
      const Span fs = cur().span;
      ++pos_;
      Clause c;
      c.header = make(NodeKind::empty, "finally", fs);
      parse_block(c.body, scope, cls);
      s.clauses.push_back(std::move(c));
    }
    close_span(s);
    return s;
  }

  Statement parse_with(const std::string& scope, const std::string& cls) {
    const Span start = cur().span;
    Statement s = compound(StmtKind::block, start);
    s.head = make(NodeKind::other, "with", start);
    expect_kw("with");
    Clause c;
    c.header = make(NodeKind::with_items, "with", cur().span);
    do {
      AstNode item = make(NodeKind::with_item, "", cur().span, {parse_test()});
      if (accept_kw("as")) item.children.push_back(parse_expr());
      item.span = join(item.span, prev_span());
      c.header.children.push_back(std::move(item));
    } while (accept_op(","));
    c.header.span = join(c.header.span, prev_span());
    parse_block(c.body, scope, cls);
    s.clauses.push_back(std::move(c));
    close_span(s);
    return s;
  }

  // ---- expressions -----------------------------------------------------------
  AstNode record_literal(AstNode n) {
    out_.literals.push_back(n);
    return n;
  }

  AstNode parse_yield() {
    const Span start = cur().span;
    expect_kw("yield");
    AstNode n = make(NodeKind::yield_expr, "yield", start);
    accept_kw("from");
    if (!at_statement_end() && !at_op(")")) n.children.push_back(parse_testlist());
    n.span = join(start, prev_span());
    return n;
  }

  // testlist with optional trailing comma => tuple
  AstNode parse_testlist() { return parse_list_of([&] { return parse_test(); }); }
  AstNode parse_testlist_star() { return parse_list_of([&] { return parse_test_or_star(); }); }
  AstNode parse_exprlist() { return parse_list_of([&] { return at_op("*") ? parse_star() : parse_expr(); }); }

  template <typename F>
  AstNode parse_list_of(F item) {
    AstNode first = item();
    if (!at_op(",")) return first;
    AstNode tup = make(NodeKind::tuple, "", first.span, {std::move(first)});
    while (accept_op(",")) {
      if (at_statement_end() || at_op("=") || at_op(")") || at_op(":") || at_kw("in") ||
          (at(TokType::op) && cur().text.size() >= 2 && cur().text.back() == '=' && cur().text != "==" &&
           cur().text != "<=" && cur().text != ">=" && cur().text != "!=")) {
        break;
      }
      tup.children.push_back(item());
    }
    tup.span = join(tup.span, prev_span());
    return tup;
  }

  AstNode parse_star() {
    const Span start = cur().span;
    expect_op("*");
    AstNode inner = parse_expr();
    return make(NodeKind::starred, "*", join(start, inner.span), {std::move(inner)});
  }

  AstNode parse_test_or_star() { return at_op("*") ? parse_star() : parse_test(); }

  AstNode parse_namedexpr_test() {
    if (at_name_token() && peek().is_op(":=")) {
      const Span s = cur().span;
      AstNode target = make(NodeKind::name, expect_name(), s);
      expect_op(":=");
      AstNode value = parse_test();
      return make(NodeKind::assign, "=", join(s, value.span), {std::move(target), std::move(value)});
    }
    return parse_test();
  }

  AstNode parse_test() {
    if (at_kw("lambda")) return parse_lambda(false);
    AstNode cond = parse_or_test();
    if (at_kw("if")) {
      ++pos_;
      AstNode test = parse_or_test();
      expect_kw("else");
      AstNode alt = parse_test();
      Span sp = join(cond.span, alt.span);
      return make(NodeKind::ternary, "", sp, {std::move(cond), std::move(test), std::move(alt)});
    }
    return cond;
  }

  AstNode parse_test_nocond() {
    if (at_kw("lambda")) return parse_lambda(true);
    return parse_or_test();
  }

  AstNode parse_lambda(bool nocond) {
    const Span start = cur().span;
    expect_kw("lambda");
    AstNode params = make(NodeKind::tuple, "params", start);
    while (!at_op(":")) {
      if (accept_op("*") || accept_op("**")) {
        if (at_op(",") || at_op(":")) {
          accept_op(",");
          continue;
        }
      }
      const Span s = cur().span;
      params.children.push_back(make(NodeKind::name, expect_name(), s));
      if (accept_op("=")) parse_test();
      if (!accept_op(",")) break;
    }
    expect_op(":");
    AstNode body = nocond ? parse_test_nocond() : parse_test();
    return make(NodeKind::lambda, "lambda", join(start, body.span), {std::move(params), std::move(body)});
  }

  AstNode parse_or_test() {
    AstNode left = parse_and_test();
    while (at_kw("or")) {
      ++pos_;
      AstNode right = parse_and_test();
      Span sp = join(left.span, right.span);
      left = make(NodeKind::logical, "or", sp, {std::move(left), std::move(right)});
    }
    return left;
  }

  AstNode parse_and_test() {
    AstNode left = parse_not_test();
    while (at_kw("and")) {
      ++pos_;
      AstNode right = parse_not_test();
      Span sp = join(left.span, right.span);
      left = make(NodeKind::logical, "and", sp, {std::move(left), std::move(right)});
    }
    return left;
  }

  AstNode parse_not_test() {
    if (at_kw("not")) {
      const Span s = cur().span;
      ++pos_;
      AstNode inner = parse_not_test();
      return make(NodeKind::unary, "not", join(s, inner.span), {std::move(inner)});
    }
    return parse_comparison();
  }

  std::optional<std::string> comp_op() {
    static const std::set<std::string, std::less<>> ops = {"<", ">", "==", ">=", "<=", "!=", "<>"};
    if (at(TokType::op) && ops.count(cur().text)) return toks_[pos_++].text;
    if (at_kw("in")) {
      ++pos_;
      return "in";
    }
    if (at_kw("not") && peek().is_name("in")) {
      pos_ += 2;
      return "not in";
    }
    if (at_kw("is")) {
      ++pos_;
      if (accept_kw("not")) return "is not";
      return "is";
    }
    return std::nullopt;
  }

  AstNode parse_comparison() {
    AstNode left = parse_expr();
    while (auto op = comp_op()) {
      AstNode right = parse_expr();
      Span sp = join(left.span, right.span);
      left = make(NodeKind::compare, *op, sp, {std::move(left), std::move(right)});
    }
    return left;
  }

  AstNode binary_level(int level) {
    static const std::vector<std::vector<std::string_view>> levels = {
        {"|"}, {"^"}, {"&"}, {"<<", ">>"}, {"+", "-"}, {"*", "/", "%", "//", "@"}};
    if (level >= static_cast<int>(levels.size())) return parse_factor();
    AstNode left = binary_level(level + 1);
    while (at(TokType::op)) {
      const auto& ops = levels[level];
      if (std::find(ops.begin(), ops.end(), cur().text) == ops.end()) break;
      std::string op = toks_[pos_++].text;
      AstNode right = binary_level(level + 1);
      Span sp = join(left.span, right.span);
      left = make(NodeKind::binary, op, sp, {std::move(left), std::move(right)});
    }
    return left;
  }

  AstNode parse_expr() { return binary_level(0); }

  AstNode parse_factor() {
    if (at_op("-") || at_op("+") || at_op("~")) {
      const Span s = cur().span;
      std::string op = toks_[pos_++].text;
      AstNode inner = parse_factor();
      if (op == "-" && (inner.kind == NodeKind::int_lit || inner.kind == NodeKind::real_lit) &&
          !inner.text.starts_with("-")) {
        // fold negative numeric literals
        if (!out_.literals.empty() && out_.literals.back().span == inner.span) out_.literals.pop_back();
        inner.text = "-" + inner.text;
        inner.span = join(s, inner.span);
        return record_literal(std::move(inner));
      }
      return make(NodeKind::unary, op, join(s, inner.span), {std::move(inner)});
    }
    return parse_power();
  }

  AstNode parse_power() {
    if (at_kw("await")) ++pos_;
    AstNode base = parse_atom_expr();
    if (at_op("**")) {
      ++pos_;
      AstNode exp = parse_factor();
      Span sp = join(base.span, exp.span);
      return make(NodeKind::binary, "**", sp, {std::move(base), std::move(exp)});
    }
    return base;
  }

  AstNode parse_atom_expr() {
    AstNode node = parse_atom();
    while (true) {
      if (at_op("(")) {
        ++pos_;
        AstNode call = make(NodeKind::call, "", node.span, {std::move(node)});
        while (!at_op(")")) {
          call.children.push_back(parse_argument());
          if (!accept_op(",")) break;
        }
        expect_op(")");
        call.span = join(call.span, prev_span());
        node = std::move(call);
      } else if (at_op("[")) {
        ++pos_;
        AstNode sub = parse_subscript_list();
        expect_op("]");
        Span sp = join(node.span, prev_span());
        node = make(NodeKind::index, "", sp, {std::move(node), std::move(sub)});
      } else if (at_op(".")) {
        ++pos_;
        const Span ms = cur().span;
        if (!at(TokType::name)) fail("expected attribute name");
        std::string member = toks_[pos_++].text;
        Span sp = join(node.span, ms);
        node = make(NodeKind::attribute, member, sp, {std::move(node)});
      } else {
        break;
      }
    }
    return node;
  }

  AstNode parse_argument() {
    const Span s = cur().span;
    if (accept_op("*") || accept_op("**")) {
      AstNode inner = parse_test();
      return make(NodeKind::starred, "*", join(s, inner.span), {std::move(inner)});
    }
    if (at_name_token() && peek().is_op("=")) {
      std::string kw = expect_name();
      expect_op("=");
      AstNode value = parse_test();
      return make(NodeKind::keyword_arg, kw, join(s, value.span), {std::move(value)});
    }
    AstNode value = parse_namedexpr_test();
    if (at_kw("for") || at_kw("async")) return parse_comprehension(std::move(value), "genexp");
    return value;
  }

  AstNode parse_subscript_list() {
    AstNode first = parse_subscript();
    if (!at_op(",")) return first;
    AstNode tup = make(NodeKind::tuple, "", first.span, {std::move(first)});
    while (accept_op(",")) {
      if (at_op("]")) break;
      tup.children.push_back(parse_subscript());
    }
    tup.span = join(tup.span, prev_span());
    return tup;
  }

  AstNode parse_subscript() {
    const Span s = cur().span;
    std::optional<AstNode> lower;
    if (!at_op(":")) {
      lower = parse_test();
      if (!at_op(":")) return std::move(*lower);
    }
    AstNode sl = make(NodeKind::slice, "", s);
    sl.children.push_back(lower ? std::move(*lower) : make(NodeKind::empty, "", s));
    expect_op(":");
    if (!at_op("]") && !at_op(",") && !at_op(":")) {
      sl.children.push_back(parse_test());
    } else {
      sl.children.push_back(make(NodeKind::empty, "", prev_span()));
    }
    if (accept_op(":")) {
      if (!at_op("]") && !at_op(",")) sl.children.push_back(parse_test());
    }
    sl.span = join(s, prev_span());
    return sl;
  }

  AstNode parse_comprehension(AstNode element, std::string kind, std::optional<AstNode> value = std::nullopt) {
    AstNode comp = make(NodeKind::comprehension, std::move(kind), element.span, {std::move(element)});
    if (value) comp.children.push_back(std::move(*value));
    while (at_kw("for") || at_kw("async")) {
      accept_kw("async");
      const Span fs = cur().span;
      expect_kw("for");
      AstNode target = parse_exprlist();
      expect_kw("in");
      AstNode iter = parse_or_test();
      AstNode cf = make(NodeKind::comp_for, "", fs, {std::move(target), std::move(iter)});
      while (at_kw("if")) {
        ++pos_;
        cf.children.push_back(parse_test_nocond());
      }
      cf.span = join(fs, prev_span());
      comp.children.push_back(std::move(cf));
    }
    comp.span = join(comp.span, prev_span());
    return comp;
  }

  AstNode parse_atom() {
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
        std::string value;
        Span sp = s;
        bool fstring = false;
        while (at(TokType::string)) {
          const auto& tok = cur();
          fstring = fstring || tok.text.front() == 'f' || tok.text.front() == 'F';
          value += decode_string_literal(tok.text);
          sp = join(sp, tok.span);
          ++pos_;
        }
        AstNode n = make(NodeKind::str_lit, value, sp);
        if (fstring) return n;
        return record_literal(std::move(n));
      }
      case TokType::name: {
        if (t.text == "True" || t.text == "False") {
          ++pos_;
          return record_literal(make(NodeKind::bool_lit, t.text, s));
        }
        if (t.text == "None") {
          ++pos_;
          return make(NodeKind::null_lit, "None", s);
        }
        if (t.text == "yield") return parse_yield();
        if (t.text == "lambda") return parse_lambda(false);
        if (kKeywords.count(t.text) && t.text != "print" && t.text != "exec") fail("unexpected keyword");
        ++pos_;
        return make(NodeKind::name, t.text, s);
      }
      case TokType::op:
        break;
      default:
        fail("unexpected token");
    }
    if (accept_op("...")) return make(NodeKind::other, "...", s);
    if (accept_op("`")) {
      AstNode inner = parse_testlist();
      expect_op("`");
      return make(NodeKind::call, "repr", join(s, prev_span()), {make(NodeKind::name, "repr", s), std::move(inner)});
    }
    if (accept_op("(")) {
      if (accept_op(")")) return make(NodeKind::tuple, "", join(s, prev_span()));
      if (at_kw("yield")) {
        AstNode y = parse_yield();
        expect_op(")");
        return y;
      }
      AstNode first = parse_namedexpr_or_star();
      if (at_kw("for") || at_kw("async")) {
        AstNode comp = parse_comprehension(std::move(first), "genexp");
        expect_op(")");
        comp.span = join(s, prev_span());
        return comp;
      }
      if (at_op(",")) {
        AstNode tup = make(NodeKind::tuple, "", s, {std::move(first)});
        while (accept_op(",")) {
          if (at_op(")")) break;
          tup.children.push_back(parse_namedexpr_or_star());
        }
        expect_op(")");
        tup.span = join(s, prev_span());
        return tup;
      }
      expect_op(")");
      first.span = join(s, prev_span());
      return first;
    }
    if (accept_op("[")) {
      AstNode list = make(NodeKind::list, "", s);
      if (accept_op("]")) {
        list.span = join(s, prev_span());
        return list;
      }
      AstNode first = parse_namedexpr_or_star();
      if (at_kw("for") || at_kw("async")) {
        AstNode comp = parse_comprehension(std::move(first), "list");
        expect_op("]");
        comp.span = join(s, prev_span());
        return comp;
      }
      list.children.push_back(std::move(first));
      while (accept_op(",")) {
        if (at_op("]")) break;
        list.children.push_back(parse_namedexpr_or_star());
      }
      expect_op("]");
      list.span = join(s, prev_span());
      return list;
    }
    if (accept_op("{")) {
      if (accept_op("}")) return make(NodeKind::dict, "", join(s, prev_span()));
      if (accept_op("**")) {
        AstNode d = make(NodeKind::dict, "", s, {parse_expr()});
        parse_dict_rest(d);
        d.span = join(s, prev_span());
        return d;
      }
      AstNode first = parse_test_or_star();
      if (accept_op(":")) {
        AstNode value = parse_test();
        if (at_kw("for") || at_kw("async")) {
          AstNode comp = parse_comprehension(std::move(first), "dict", std::move(value));
          expect_op("}");
          comp.span = join(s, prev_span());
          return comp;
        }
        AstNode d = make(NodeKind::dict, "", s, {std::move(first), std::move(value)});
        parse_dict_rest(d);
        d.span = join(s, prev_span());
        return d;
      }
      if (at_kw("for") || at_kw("async")) {
        AstNode comp = parse_comprehension(std::move(first), "set");
        expect_op("}");
        comp.span = join(s, prev_span());
        return comp;
      }
      AstNode set = make(NodeKind::set, "", s, {std::move(first)});
      while (accept_op(",")) {
        if (at_op("}")) break;
        set.children.push_back(parse_test_or_star());
      }
      expect_op("}");
      set.span = join(s, prev_span());
      return set;
    }
    fail("unexpected token");
  }

  AstNode parse_namedexpr_or_star() { return at_op("*") ? parse_star() : parse_namedexpr_test(); }

  void parse_dict_rest(AstNode& d) {
    while (accept_op(",")) {
      if (at_op("}")) break;
      if (accept_op("**")) {
        d.children.push_back(parse_expr());
        continue;
      }
      d.children.push_back(parse_test());
      expect_op(":");
      d.children.push_back(parse_test());
    }
    expect_op("}");
  }
};

}  // namespace

ParsedFile parse_python(std::string text, std::string path) {
  ParsedFile file;
  file.path = std::move(path);
  file.language = LanguageId::python();
  file.text = std::move(text);
  PythonParser parser(file.text, file.path, file);
  parser.parse_module();
  return file;
}

}  // namespace simclone::lang
