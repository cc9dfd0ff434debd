#include "funcspace/dsl.hpp"

#include <cctype>
#include <optional>
#include <vector>

namespace funcspace {
inline namespace dsl {

namespace {

enum class Tok {
  Ident, Int, LParen, RParen, LBrace, RBrace, LBracket, RBracket,
  Comma, Equals, Caret, Star, Slash, Plus, PlusPlus, Minus, End,
};

struct Token {
  Tok kind;
  std::string text;
  std::size_t line = 1;
  std::size_t column = 1;
};

/// Internal signal unwound to a Result at the public entry points.
struct Signal {
  std::size_t line;
  std::size_t column;
  std::string expected;
  std::string found;
};

std::vector<Token> lex(const std::string& text) {
  std::vector<Token> out;
  std::size_t line = 1, col = 1;
  std::size_t i = 0;
  auto push = [&](Tok k, std::string t, std::size_t l, std::size_t c) {
    out.push_back(Token{k, std::move(t), l, c});
  };
  while (i < text.size()) {
    char ch = text[i];
    if (ch == '\n') { ++line; col = 1; ++i; continue; }
    if (std::isspace(static_cast<unsigned char>(ch))) { ++col; ++i; continue; }
    std::size_t l = line, c = col;
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      std::string num;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
        num += text[i]; ++i; ++col;
      }
      push(Tok::Int, num, l, c);
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      std::string id;
      while (i < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_')) {
        id += text[i]; ++i; ++col;
      }
      push(Tok::Ident, id, l, c);
      continue;
    }
    ++i; ++col;
    switch (ch) {
      case '(': push(Tok::LParen, "(", l, c); break;
      case ')': push(Tok::RParen, ")", l, c); break;
      case '{': push(Tok::LBrace, "{", l, c); break;
      case '}': push(Tok::RBrace, "}", l, c); break;
      case '[': push(Tok::LBracket, "[", l, c); break;
      case ']': push(Tok::RBracket, "]", l, c); break;
      case ',': push(Tok::Comma, ",", l, c); break;
      case '=': push(Tok::Equals, "=", l, c); break;
      case '^': push(Tok::Caret, "^", l, c); break;
      case '*': push(Tok::Star, "*", l, c); break;
      case '/': push(Tok::Slash, "/", l, c); break;
      case '-': push(Tok::Minus, "-", l, c); break;
      case '+':
        if (i < text.size() && text[i] == '+') { ++i; ++col; push(Tok::PlusPlus, "++", l, c); }
        else push(Tok::Plus, "+", l, c);
        break;
      default:
        throw Signal{l, c, "a token", std::string("'") + ch + "'"};
    }
  }
  out.push_back(Token{Tok::End, "end of input", line, col});
  return out;
}

class Parser {
 public:
  explicit Parser(const std::string& text) : toks_(lex(text)) {}

  FuncPtr function() {
    FuncPtr f = expr();
    expect(Tok::End, "end of input");
    return f;
  }

  IntervalFamily family() {
    IntervalFamily fam = set_literal();
    expect(Tok::End, "end of input");
    return fam;
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;

  const Token& peek(std::size_t ahead = 0) const {
    std::size_t i = pos_ + ahead;
    return i < toks_.size() ? toks_[i] : toks_.back();
  }
  const Token& advance() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  bool at(Tok k) const { return peek().kind == k; }
  bool eat(Tok k) {
    if (!at(k)) return false;
    advance();
    return true;
  }
  [[noreturn]] void fail(const std::string& expected) const {
    const Token& t = peek();
    throw Signal{t.line, t.column, expected,
                 t.kind == Tok::End ? "end of input" : "'" + t.text + "'"};
  }
  const Token& expect(Tok k, const std::string& what) {
    if (!at(k)) fail(what);
    return advance();
  }
  bool at_ident(const char* name) const {
    return at(Tok::Ident) && peek().text == name;
  }

  BigInt integer_token() {
    const Token& t = expect(Tok::Int, "an integer");
    return BigInt(t.text);
  }

  /// rational := ["-"] INT ["/" INT], never consuming a "/" that starts "/n".
  Rational rational() {
    bool neg = eat(Tok::Minus);
    if (!at(Tok::Int)) fail("rational");
    BigInt n = integer_token();
    BigInt d(1);
    if (at(Tok::Slash) && peek(1).kind == Tok::Int) {
      advance();
      d = integer_token();
      if (d == 0) fail("nonzero denominator");
    }
    Rational r(n, d);
    return neg ? Rational(-r) : r;
  }

  unsigned long index_token() {
    const Token& t = expect(Tok::Int, "an index");
    return BigInt(t.text).convert_to<unsigned long>();
  }

  /// seqterm := rational | rational "/n" ["^" rational]
  ///          | [rational "*"] "n" ["^" rational]
  SeqTerm seqterm() {
    if (at_ident("n")) {
      advance();
      Rational k(1);
      if (eat(Tok::Caret)) k = rational();
      return SeqTerm{Rational(1), Rational(-k)};
    }
    Rational c = rational();
    if (at(Tok::Star) && peek(1).kind == Tok::Ident && peek(1).text == "n") {
      advance(); advance();
      Rational k(1);
      if (eat(Tok::Caret)) k = rational();
      return SeqTerm{c, Rational(-k)};
    }
    if (at(Tok::Slash) && peek(1).kind == Tok::Ident && peek(1).text == "n") {
      advance(); advance();
      Rational k(1);
      if (eat(Tok::Caret)) k = rational();
      return SeqTerm{c, k};
    }
    return SeqTerm{c, Rational(0)};
  }

  /// indexmap := ["-"] term (("+"|"-") term)*  with term = [rational]["n"["^" (1|2)]]
  IndexMap index_map() {
    IndexMap m{Rational(0), Rational(0), Rational(0)};
    bool first = true;
    while (true) {
      Rational sign(1);
      if (first) {
        if (eat(Tok::Minus)) sign = -1;
      } else if (eat(Tok::Minus)) {
        sign = -1;
      } else if (eat(Tok::Plus)) {
        sign = 1;
      } else {
        break;
      }
      Rational coef(1);
      bool have_coef = false;
      if (at(Tok::Int)) {
        Rational c = rational();
        coef = c;
        have_coef = true;
      }
      if (at_ident("n")) {
        advance();
        Rational power(1);
        if (eat(Tok::Caret)) {
          power = rational();
          if (power != 1 && power != 2) fail("exponent 1 or 2");
        }
        if (power == 2) m.quad += Rational(sign * coef);
        else m.lin += Rational(sign * coef);
      } else if (have_coef) {
        m.cst += Rational(sign * coef);
      } else {
        fail("rational or n");
      }
      first = false;
    }
    if (first) fail("rational or n");
    return m;
  }

  TailDescriptor tail_call() {
    if (!at_ident("tail")) fail("'tail'");
    advance();
    expect(Tok::LParen, "'('");
    std::optional<IndexMap> left;
    std::optional<SeqTerm> width;
    unsigned long from = 1;
    bool mirrored = false;
    while (true) {
      if (at_ident("mirrored")) {
        advance();
        mirrored = true;
      } else if (at(Tok::Ident) && peek(1).kind == Tok::Equals) {
        std::string key = advance().text;
        advance();  // '='
        if (key == "left") left = index_map();
        else if (key == "width") width = seqterm();
        else if (key == "from") from = index_token();
        else fail("'left', 'width', 'from', or 'mirrored'");
      } else {
        fail("'left', 'width', 'from', or 'mirrored'");
      }
      if (!eat(Tok::Comma)) break;
    }
    expect(Tok::RParen, "')'");
    if (!left) fail("'left=' argument");
    if (!width) fail("'width=' argument");
    return TailDescriptor{from, *left, *width, mirrored};
  }

  /// One piece of a set literal: a bounded interval or a ray.
  void set_piece(std::vector<Interval>& head, std::optional<Ray>& neg,
                 std::optional<Ray>& pos) {
    bool closed_left;
    if (eat(Tok::LBracket)) closed_left = true;
    else if (eat(Tok::LParen)) closed_left = false;
    else fail("'[' or '('");

    bool left_inf = false;
    Rational left;
    if (at(Tok::Minus) && peek(1).kind == Tok::Ident && peek(1).text == "inf") {
      advance(); advance();
      left_inf = true;
    } else {
      left = rational();
    }
    expect(Tok::Comma, "','");
    if (at_ident("inf")) {
      advance();
      expect(Tok::RParen, "')'");
      if (left_inf) fail("a bounded endpoint");
      if (pos) fail("a single positive ray");
      pos = Ray{left, closed_left};
      return;
    }
    Rational right = rational();
    bool closed_right;
    if (eat(Tok::RBracket)) closed_right = true;
    else if (eat(Tok::RParen)) closed_right = false;
    else fail("']' or ')'");
    if (left_inf) {
      if (closed_left) fail("'(' before -inf");
      if (neg) fail("a single negative ray");
      neg = Ray{right, closed_right};
      return;
    }
    head.push_back(Interval{left, right, closed_left, closed_right});
  }

  IntervalFamily set_literal() {
    expect(Tok::LBrace, "'{'");
    std::vector<Interval> head;
    std::optional<Ray> neg, pos;
    while (!at(Tok::RBrace)) set_piece(head, neg, pos);
    advance();  // '}'
    std::optional<TailDescriptor> tail;
    if (eat(Tok::PlusPlus)) tail = tail_call();
    IntervalFamily fam =
        tail ? IntervalFamily::with_tail(std::move(head), *tail)
             : IntervalFamily::of(std::move(head));
    if (neg) fam.set_neg_ray(*neg);
    if (pos) fam.set_pos_ray(*pos);
    return fam;
  }

  FuncPtr step_series_call() {
    expect(Tok::LParen, "'('");
    std::optional<SeqTerm> coef, width;
    std::optional<IndexMap> left;
    unsigned long from = 1;
    bool mirrored = false;
    while (true) {
      if (at_ident("mirrored")) {
        advance();
        mirrored = true;
      } else if (at(Tok::Ident) && peek(1).kind == Tok::Equals) {
        std::string key = advance().text;
        advance();  // '='
        if (key == "coef") coef = seqterm();
        else if (key == "left") left = index_map();
        else if (key == "width") width = seqterm();
        else if (key == "from") from = index_token();
        else fail("'coef', 'left', 'width', 'from', or 'mirrored'");
      } else {
        fail("'coef', 'left', 'width', 'from', or 'mirrored'");
      }
      if (!eat(Tok::Comma)) break;
    }
    expect(Tok::RParen, "')'");
    if (!coef) fail("'coef=' argument");
    if (!left) fail("'left=' argument");
    if (!width) fail("'width=' argument");
    return make_step_series(*coef, TailDescriptor{from, *left, *width, mirrored});
  }

  FuncPtr expr() {
    if (!at(Tok::Ident)) fail("a function name");
    const Token at_tok = peek();
    std::string name = advance().text;
    if (name == "reciprocal") return make_reciprocal();
    if (name == "sqrt_periodic") return make_sqrt_periodic();
    if (name == "f1") return make_affine(Rational(1), Rational(0));
    if (name == "f2")
      return make_step_series(SeqTerm{Rational(1), Rational(-1)},
                              TailDescriptor{1, IndexMap{Rational(0), Rational(1), Rational(0)},
                                             SeqTerm{Rational(1), Rational(2)}, false});
    if (name == "f3") return make_reciprocal();
    if (name == "affine") {
      expect(Tok::LParen, "'('");
      Rational a = rational();
      expect(Tok::Comma, "','");
      Rational b = rational();
      expect(Tok::RParen, "')'");
      return make_affine(a, b);
    }
    if (name == "pow_abs") {
      expect(Tok::LParen, "'('");
      Rational e = rational();
      expect(Tok::RParen, "')'");
      return make_power_abs(e);
    }
    if (name == "pow_ext") {
      expect(Tok::LParen, "'('");
      Rational e = rational();
      bool with_sign = false;
      if (eat(Tok::Comma)) {
        if (at_ident("signed")) { advance(); with_sign = true; }
        else if (at_ident("abs")) advance();
        else fail("'signed' or 'abs'");
      }
      expect(Tok::RParen, "')'");
      return make_power_ext(e, with_sign);
    }
    if (name == "deriv") {
      expect(Tok::LParen, "'('");
      FuncPtr inner = expr();
      expect(Tok::RParen, "')'");
      auto d = derivative(inner);
      if (!d)
        throw Signal{at_tok.line, at_tok.column,
                     "a differentiable catalog function (" + d.error() + ")",
                     to_text(inner)};
      return *d;
    }
    if (name == "step_series") return step_series_call();
    if (name == "scale") {
      expect(Tok::LParen, "'('");
      Rational r = rational();
      expect(Tok::Comma, "','");
      FuncPtr inner = expr();
      expect(Tok::RParen, "')'");
      return make_scale(r, std::move(inner));
    }
    if (name == "sum") {
      expect(Tok::LParen, "'('");
      FuncPtr l = expr();
      expect(Tok::Comma, "','");
      FuncPtr r = expr();
      expect(Tok::RParen, "')'");
      return make_sum(std::move(l), std::move(r));
    }
    throw Signal{at_tok.line, at_tok.column, "a function name", "'" + name + "'"};
  }
};

std::string render(const Signal& s) {
  return "parse error at line " + std::to_string(s.line) + ", column " +
         std::to_string(s.column) + ": expected " + s.expected + ", found " + s.found;
}

bool blank(const std::string& text) {
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) return false;
  return true;
}

}  // namespace

Result<FuncPtr> parse_function(const std::string& text) {
  using R = Result<FuncPtr>;
  if (blank(text)) return R::fail("parse error: empty input");
  try {
    return R::ok(Parser(text).function());
  } catch (const Signal& s) {
    return R::fail(render(s));
  } catch (const DomainError& e) {
    return R::fail(std::string("invalid function: ") + e.what());
  }
}

Result<IntervalFamily> parse_family(const std::string& text) {
  using R = Result<IntervalFamily>;
  if (blank(text)) return R::fail("parse error: empty input");
  try {
    return R::ok(Parser(text).family());
  } catch (const Signal& s) {
    return R::fail(render(s));
  } catch (const DomainError& e) {
    return R::fail(std::string("invalid family: ") + e.what());
  }
}

}  // namespace dsl
}  // namespace funcspace
