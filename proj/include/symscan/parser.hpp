#pragma once

#include <cctype>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "symscan/ast.hpp"
#include "symscan/span.hpp"

namespace symscan {

namespace detail {

enum class Tok {
  Ident,
  Number,
  LBrace,
  RBrace,
  LParen,
  RParen,
  LBracket,
  RBracket,
  Comma,
  Semi,
  Assign,
  Tilde,
  Plus,
  End,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  SourceSpan span;
};

inline const char* tok_name(Tok t) {
  switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::Number: return "number";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBracket: return "'['";
    case Tok::RBracket: return "']'";
    case Tok::Comma: return "','";
    case Tok::Semi: return "';'";
    case Tok::Assign: return "'='";
    case Tok::Tilde: return "'~'";
    case Tok::Plus: return "'+'";
    case Tok::End: return "end of input";
  }
  return "?";
}

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) { advance(); }

  const Token& peek() const { return current_; }
  Token take() {
    Token t = current_;
    advance();
    return t;
  }

 private:
  void advance() {
    skip_ws();
    current_.span = {line_, col_, 1};
    if (pos_ >= text_.size()) {
      current_.kind = Tok::End;
      current_.text.clear();
      return;
    }
    char c = text_[pos_];
    auto punct = [&](Tok k) {
      current_.kind = k;
      current_.text = std::string(1, c);
      bump();
    };
    switch (c) {
      case '{': punct(Tok::LBrace); return;
      case '}': punct(Tok::RBrace); return;
      case '(': punct(Tok::LParen); return;
      case ')': punct(Tok::RParen); return;
      case '[': punct(Tok::LBracket); return;
      case ']': punct(Tok::RBracket); return;
      case ',': punct(Tok::Comma); return;
      case ';': punct(Tok::Semi); return;
      case '=': punct(Tok::Assign); return;
      case '~': punct(Tok::Tilde); return;
      case '+': punct(Tok::Plus); return;
      default: break;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string word;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
              text_[pos_] == '_')) {
        word += text_[pos_];
        bump();
      }
      current_.kind = Tok::Ident;
      current_.text = std::move(word);
      current_.span.length = int(current_.text.size());
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '-' && pos_ + 1 < text_.size() &&
         std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])))) {
      std::string num;
      if (c == '-') {
        num += '-';
        bump();
      }
      auto digits = [&] {
        while (pos_ < text_.size() &&
               std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
          num += text_[pos_];
          bump();
        }
      };
      digits();
      if (pos_ < text_.size() && text_[pos_] == '.') {
        num += '.';
        bump();
        digits();
      } else if (pos_ < text_.size() && text_[pos_] == '/') {
        num += '/';
        bump();
        digits();
      }
      current_.kind = Tok::Number;
      current_.text = std::move(num);
      current_.span.length = int(current_.text.size());
      return;
    }
    throw AnalysisError(ErrorCode::SyntaxError, current_.span,
                        std::string("unexpected character '") + c + "'");
  }

  void skip_ws() {
    for (;;) {
      while (pos_ < text_.size() &&
             std::isspace(static_cast<unsigned char>(text_[pos_])))
        bump();
      if (pos_ + 1 < text_.size() && text_[pos_] == '/' &&
          text_[pos_ + 1] == '/') {
        while (pos_ < text_.size() && text_[pos_] != '\n') bump();
        continue;
      }
      break;
    }
  }

  void bump() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  std::string_view text_;
  size_t pos_ = 0;
  int line_ = 1, col_ = 1;
  Token current_;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : lex_(text) {}

  ParsedModel parse_model() {
    expect_keyword("model");
    ParsedModel m;
    m.name = expect(Tok::Ident).text;
    expect(Tok::LBrace);
    while (!at(Tok::RBrace)) m.statements.push_back(parse_stmt());
    expect(Tok::RBrace);
    if (!at(Tok::End))
      fail("expected end of input after the model block");
    return m;
  }

 private:
  Stmt parse_stmt() {
    const Token& t = lex_.peek();
    if (t.kind != Tok::Ident)
      fail("expected a statement (declaration, observe, factor, or if)");
    const std::string& w = t.text;
    if (w == "range") return parse_range_decl();
    if (w == "real" || w == "bool" || w == "discrete") return parse_var_decl();
    if (w == "observe") return parse_observe();
    if (w == "if") return parse_if();
    return parse_factor();
  }

  Stmt parse_range_decl() {
    SourceSpan span = lex_.peek().span;
    lex_.take();
    RangeDeclStmt r;
    r.span = span;
    r.name = expect(Tok::Ident).text;
    declare(r.name, span);
    expect(Tok::Assign);
    Token n = expect(Tok::Number);
    auto q = rat_parse(n.text);
    if (!q || q->get_den() != 1 || *q < 1)
      throw AnalysisError(ErrorCode::SyntaxError, n.span,
                          "range size must be a positive integer");
    r.size = long(q->get_num().get_si());
    expect(Tok::Semi);
    return r;
  }

  Stmt parse_var_decl() {
    SourceSpan span = lex_.peek().span;
    VarDeclStmt v;
    v.span = span;
    std::string type = lex_.take().text;
    if (type == "real") {
      v.kind = ValueKind::Real;
      if (at(Tok::Plus)) {
        lex_.take();
        v.kind = ValueKind::NonNegReal;
      }
    } else if (type == "bool") {
      v.kind = ValueKind::Boolean;
    } else {
      v.kind = ValueKind::Discrete;
      expect(Tok::LParen);
      v.discrete_range = expect(Tok::Ident).text;
      expect(Tok::RParen);
    }
    v.name = expect(Tok::Ident).text;
    declare(v.name, span);
    if (at(Tok::LBracket)) {
      lex_.take();
      v.dims.push_back(expect(Tok::Ident).text);
      while (at(Tok::Comma)) {
        lex_.take();
        v.dims.push_back(expect(Tok::Ident).text);
      }
      expect(Tok::RBracket);
    }
    expect(Tok::Semi);
    return v;
  }

  Stmt parse_observe() {
    SourceSpan span = lex_.peek().span;
    lex_.take();
    ObserveStmt o;
    o.span = span;
    o.target = parse_lval();
    if (at(Tok::Assign)) {
      lex_.take();
      o.value = parse_literal();
    }
    expect(Tok::Semi);
    return o;
  }

  Stmt parse_if() {
    SourceSpan span = lex_.peek().span;
    lex_.take();
    IfStmtNode node;
    node.span = span;
    expect(Tok::LParen);
    node.condition = parse_lval();
    expect(Tok::RParen);
    expect(Tok::LBrace);
    while (!at(Tok::RBrace)) node.then_block.push_back(parse_stmt());
    expect(Tok::RBrace);
    if (at(Tok::Ident) && lex_.peek().text == "else") {
      lex_.take();
      expect(Tok::LBrace);
      while (!at(Tok::RBrace)) node.else_block.push_back(parse_stmt());
      expect(Tok::RBrace);
    }
    return node;
  }

  Stmt parse_factor() {
    FactorStmtNode f;
    f.span = lex_.peek().span;
    f.output = parse_lval();
    if (at(Tok::Assign)) {
      lex_.take();
    } else if (at(Tok::Tilde)) {
      lex_.take();
      f.is_distribution = true;
    } else {
      fail("expected '=' or '~' in a factor statement");
    }
    f.kind_name = expect(Tok::Ident).text;
    expect(Tok::LParen);
    if (!at(Tok::RParen)) {
      f.args.push_back(parse_arg());
      while (true) {
        if (at(Tok::Comma)) {
          lex_.take();
          f.args.push_back(parse_arg());
          continue;
        }
        if (at(Tok::RParen)) break;
        fail("expected ',' or ')' in the argument list, found " +
             describe(lex_.peek()));
      }
    }
    expect(Tok::RParen);
    if (f.is_distribution && at(Tok::Ident)) {
      const std::string& w = lex_.peek().text;
      if (w == "likelihood") {
        f.modifier = PriorMod::Likelihood;
        lex_.take();
      } else if (w == "prior") {
        f.modifier = PriorMod::Prior;
        lex_.take();
      }
    }
    expect(Tok::Semi);
    return f;
  }

  Arg parse_arg() {
    if (at(Tok::Number) || (at(Tok::Ident) && (lex_.peek().text == "true" ||
                                               lex_.peek().text == "false"))) {
      Arg a;
      a.is_literal = true;
      a.literal = parse_literal();
      return a;
    }
    Arg a;
    a.lval = parse_lval();
    return a;
  }

  Literal parse_literal() {
    if (at(Tok::Ident)) {
      Token t = lex_.take();
      if (t.text == "true") return Literal::boolean(true);
      if (t.text == "false") return Literal::boolean(false);
      throw AnalysisError(ErrorCode::SyntaxError, t.span,
                          "expected a literal, found '" + t.text + "'");
    }
    Token t = expect(Tok::Number);
    auto q = rat_parse(t.text);
    if (!q)
      throw AnalysisError(ErrorCode::SyntaxError, t.span,
                          "malformed numeric literal '" + t.text + "'");
    return Literal::rational(*q);
  }

  LVal parse_lval() {
    LVal lv;
    Token t = expect(Tok::Ident);
    lv.name = t.text;
    lv.span = t.span;
    if (at(Tok::LBracket)) {
      lex_.take();
      lv.indices.push_back(parse_index());
      while (at(Tok::Comma)) {
        lex_.take();
        lv.indices.push_back(parse_index());
      }
      expect(Tok::RBracket);
    }
    return lv;
  }

  AstIndex parse_index() {
    if (at(Tok::Number)) {
      Token t = lex_.take();
      auto q = rat_parse(t.text);
      if (!q || q->get_den() != 1)
        throw AnalysisError(ErrorCode::BadIndex, t.span,
                            "index literals must be integers");
      AstIndex ix;
      ix.is_literal = true;
      ix.literal = long(q->get_num().get_si());
      return ix;
    }
    AstIndex ix;
    ix.name = expect(Tok::Ident).text;
    return ix;
  }

  void declare(const std::string& name, SourceSpan span) {
    if (!declared_.insert(name).second)
      throw AnalysisError(ErrorCode::DuplicateDeclaration, span,
                          "'" + name + "' is already declared");
  }

  bool at(Tok k) const { return lex_.peek().kind == k; }

  Token expect(Tok k) {
    if (!at(k))
      fail(std::string("expected ") + tok_name(k) + ", found " +
           describe(lex_.peek()));
    return lex_.take();
  }

  void expect_keyword(const std::string& w) {
    if (!at(Tok::Ident) || lex_.peek().text != w)
      fail("expected keyword '" + w + "', found " + describe(lex_.peek()));
    lex_.take();
  }

  static std::string describe(const Token& t) {
    if (t.kind == Tok::Ident || t.kind == Tok::Number)
      return "'" + t.text + "'";
    return tok_name(t.kind);
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw AnalysisError(ErrorCode::SyntaxError, lex_.peek().span, msg);
  }

  Lexer lex_;
  std::set<std::string> declared_;
};

}  // namespace detail

// Parses a model source; total over inputs: the result is either a complete
// statement list or an AnalysisError with the first offending span.
inline ParsedModel parse(std::string_view text) {
  detail::Parser p(text);
  return p.parse_model();
}

}  // namespace symscan
