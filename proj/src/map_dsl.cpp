#include "endcert/map_dsl.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

namespace endcert {
namespace dsl {

namespace {

enum class Tok {
  End,
  Number,
  Ident,   // x, min, max, abs, if, otherwise
  Arrow,   // ->
  Semi,
  Comma,
  LParen,
  RParen,
  LBracket,
  RBracket,
  LBrace,
  RBrace,
  Plus,
  Minus,
  Star,
  Slash,
  Eq,      // ==
  Ne,      // !=
  Le,
  Ge,
  Lt,
  Gt,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  double value = 0;
  int line = 1;
  int column = 1;
};

struct LexFail {
  ParseError err;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    skip_ws();
    Token t;
    t.line = line_;
    t.column = col_;
    if (pos_ >= src_.size()) {
      t.kind = Tok::End;
      t.text = "<end of input>";
      return t;
    }
    const char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || (c == '.' && pos_ + 1 < src_.size() &&
                                                        std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
      return lex_number(t);
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
        advance();
      t.kind = Tok::Ident;
      t.text = std::string(src_.substr(start, pos_ - start));
      return t;
    }
    switch (c) {
      case '-':
        if (pos_ + 1 < src_.size() && src_[pos_ + 1] == '>') {
          advance();
          advance();
          t.kind = Tok::Arrow;
          t.text = "->";
          return t;
        }
        advance();
        t.kind = Tok::Minus;
        t.text = "-";
        return t;
      case ';':
        advance();
        t.kind = Tok::Semi;
        t.text = ";";
        return t;
      case ',':
        advance();
        t.kind = Tok::Comma;
        t.text = ",";
        return t;
      case '(':
        advance();
        t.kind = Tok::LParen;
        t.text = "(";
        return t;
      case ')':
        advance();
        t.kind = Tok::RParen;
        t.text = ")";
        return t;
      case '[':
        advance();
        t.kind = Tok::LBracket;
        t.text = "[";
        return t;
      case ']':
        advance();
        t.kind = Tok::RBracket;
        t.text = "]";
        return t;
      case '{':
        advance();
        t.kind = Tok::LBrace;
        t.text = "{";
        return t;
      case '}':
        advance();
        t.kind = Tok::RBrace;
        t.text = "}";
        return t;
      case '+':
        advance();
        t.kind = Tok::Plus;
        t.text = "+";
        return t;
      case '*':
        advance();
        t.kind = Tok::Star;
        t.text = "*";
        return t;
      case '/':
        advance();
        t.kind = Tok::Slash;
        t.text = "/";
        return t;
      case '=':
        if (pos_ + 1 < src_.size() && src_[pos_ + 1] == '=') {
          advance();
          advance();
          t.kind = Tok::Eq;
          t.text = "==";
          return t;
        }
        break;
      case '!':
        if (pos_ + 1 < src_.size() && src_[pos_ + 1] == '=') {
          advance();
          advance();
          t.kind = Tok::Ne;
          t.text = "!=";
          return t;
        }
        break;
      case '<':
        advance();
        if (pos_ < src_.size() && src_[pos_] == '=') {
          advance();
          t.kind = Tok::Le;
          t.text = "<=";
        } else {
          t.kind = Tok::Lt;
          t.text = "<";
        }
        return t;
      case '>':
        advance();
        if (pos_ < src_.size() && src_[pos_] == '=') {
          advance();
          t.kind = Tok::Ge;
          t.text = ">=";
        } else {
          t.kind = Tok::Gt;
          t.text = ">";
        }
        return t;
      default:
        break;
    }
    ParseError e;
    e.line = t.line;
    e.column = t.column;
    e.token = std::string(1, c);
    e.message = "unexpected character";
    throw LexFail{e};
  }

 private:
  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) advance();
  }

  Token lex_number(Token t) {
    const char* begin = src_.data() + pos_;
    const char* end = src_.data() + src_.size();
    double v = 0;
    const auto res = std::from_chars(begin, end, v);
    if (res.ec != std::errc()) {
      ParseError e;
      e.line = t.line;
      e.column = t.column;
      e.token = std::string(1, *begin);
      e.message = "malformed number";
      throw LexFail{e};
    }
    t.kind = Tok::Number;
    t.value = v;
    t.text = std::string(begin, res.ptr);
    for (const char* p = begin; p != res.ptr; ++p) advance();
    return t;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

ExprPtr make(Expr::Op op, ExprPtr a = nullptr, ExprPtr b = nullptr, double v = 0) {
  auto e = std::make_shared<Expr>();
  e->op = op;
  e->value = v;
  e->a = std::move(a);
  e->b = std::move(b);
  return e;
}

class Parser {
 public:
  explicit Parser(std::string_view src) : lex_(src) { shift(); }

  MapDef parse_map() {
    MapDef def;
    def.clauses.push_back(parse_clause());
    while (cur_.kind == Tok::Semi) {
      shift();
      if (def.clauses.back().guard.cmp == Guard::Cmp::Always)
        fail("\"otherwise\" must be the last clause");
      def.clauses.push_back(parse_clause());
    }
    expect(Tok::End, "expected \";\" or end of map definition");
    return def;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) {
    ParseError e;
    e.line = cur_.line;
    e.column = cur_.column;
    e.token = cur_.text;
    e.message = msg;
    throw LexFail{e};
  }

  void shift() { cur_ = lex_.next(); }

  void expect(Tok k, const std::string& msg) {
    if (cur_.kind != k) fail(msg);
  }

  bool is_ident(const char* s) const { return cur_.kind == Tok::Ident && cur_.text == s; }

  Clause parse_clause() {
    Clause c;
    if (is_ident("otherwise")) {
      shift();
      expect(Tok::Arrow, "expected \"->\" after \"otherwise\"");
      shift();
    } else if (is_ident("if")) {
      shift();
      c.guard = parse_pred();
      expect(Tok::Arrow, "expected \"->\" after guard");
      shift();
    } else {
      fail("expected \"if\" or \"otherwise\"");
    }
    if (cur_.kind == Tok::LBracket) {
      shift();
      c.lo = parse_expr();
      expect(Tok::Comma, "expected \",\" between interval bounds");
      shift();
      c.hi = parse_expr();
      expect(Tok::RBracket, "expected \"]\" to close the interval");
      shift();
      return c;
    }
    if (cur_.kind == Tok::LBrace) {
      shift();
      c.is_finite = true;
      c.elements.push_back(parse_expr());
      while (cur_.kind == Tok::Comma) {
        shift();
        c.elements.push_back(parse_expr());
      }
      expect(Tok::RBrace, "expected \"}\" to close the set");
      shift();
      return c;
    }
    fail("expected a set expression \"[lo, hi]\" or \"{p1, p2, ...}\"");
  }

  Guard parse_pred() {
    Guard g;
    g.lhs = parse_expr();
    switch (cur_.kind) {
      case Tok::Eq:
        g.cmp = Guard::Cmp::Eq;
        break;
      case Tok::Ne:
        g.cmp = Guard::Cmp::Ne;
        break;
      case Tok::Lt:
        g.cmp = Guard::Cmp::Lt;
        break;
      case Tok::Le:
        g.cmp = Guard::Cmp::Le;
        break;
      case Tok::Gt:
        g.cmp = Guard::Cmp::Gt;
        break;
      case Tok::Ge:
        g.cmp = Guard::Cmp::Ge;
        break;
      default:
        fail("expected a comparison operator in the guard");
    }
    shift();
    g.rhs = parse_expr();
    return g;
  }

  ExprPtr parse_expr() {
    ExprPtr e = parse_term();
    while (cur_.kind == Tok::Plus || cur_.kind == Tok::Minus) {
      const auto op = cur_.kind == Tok::Plus ? Expr::Op::Add : Expr::Op::Sub;
      shift();
      e = make(op, e, parse_term());
    }
    return e;
  }

  ExprPtr parse_term() {
    ExprPtr e = parse_unary();
    while (cur_.kind == Tok::Star || cur_.kind == Tok::Slash) {
      const auto op = cur_.kind == Tok::Star ? Expr::Op::Mul : Expr::Op::Div;
      shift();
      e = make(op, e, parse_unary());
    }
    return e;
  }

  ExprPtr parse_unary() {
    if (cur_.kind == Tok::Minus) {
      shift();
      return make(Expr::Op::Neg, parse_unary());
    }
    return parse_primary();
  }

  ExprPtr parse_primary() {
    if (cur_.kind == Tok::Number) {
      const double v = cur_.value;
      shift();
      return make(Expr::Op::Num, nullptr, nullptr, v);
    }
    if (cur_.kind == Tok::LParen) {
      shift();
      ExprPtr e = parse_expr();
      expect(Tok::RParen, "expected \")\"");
      shift();
      return e;
    }
    if (cur_.kind == Tok::Ident) {
      if (cur_.text == "x") {
        shift();
        return make(Expr::Op::Var);
      }
      if (cur_.text == "min" || cur_.text == "max") {
        const auto op = cur_.text == "min" ? Expr::Op::Min : Expr::Op::Max;
        shift();
        expect(Tok::LParen, "expected \"(\" after function name");
        shift();
        ExprPtr a = parse_expr();
        expect(Tok::Comma, "expected \",\" between function arguments");
        shift();
        ExprPtr b = parse_expr();
        expect(Tok::RParen, "expected \")\"");
        shift();
        return make(op, a, b);
      }
      if (cur_.text == "abs") {
        shift();
        expect(Tok::LParen, "expected \"(\" after function name");
        shift();
        ExprPtr a = parse_expr();
        expect(Tok::RParen, "expected \")\"");
        shift();
        return make(Expr::Op::Abs, a);
      }
      fail("unknown identifier; expected x, min, max or abs");
    }
    fail("expected a number, x, \"(\" or a function call");
  }

  Lexer lex_;
  Token cur_;
};

}  // namespace

ParseResult parse(std::string_view text) {
  try {
    Parser p(text);
    return p.parse_map();
  } catch (const LexFail& f) {
    return f.err;
  }
}

MapEvalError::MapEvalError(double x, const std::string& msg)
    : std::runtime_error(msg), x_(x) {}

namespace {

std::string fmt(double v) {
  char buf[32];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, p);
}

double eval_expr(const Expr& e, double x) {
  switch (e.op) {
    case Expr::Op::Num:
      return e.value;
    case Expr::Op::Var:
      return x;
    case Expr::Op::Add:
      return eval_expr(*e.a, x) + eval_expr(*e.b, x);
    case Expr::Op::Sub:
      return eval_expr(*e.a, x) - eval_expr(*e.b, x);
    case Expr::Op::Mul:
      return eval_expr(*e.a, x) * eval_expr(*e.b, x);
    case Expr::Op::Div: {
      const double num = eval_expr(*e.a, x);
      const double den = eval_expr(*e.b, x);
      if (den == 0.0) throw MapEvalError(x, "division by zero at x = " + fmt(x));
      return num / den;
    }
    case Expr::Op::Neg:
      return -eval_expr(*e.a, x);
    case Expr::Op::Min:
      return std::min(eval_expr(*e.a, x), eval_expr(*e.b, x));
    case Expr::Op::Max:
      return std::max(eval_expr(*e.a, x), eval_expr(*e.b, x));
    case Expr::Op::Abs:
      return std::abs(eval_expr(*e.a, x));
  }
  throw std::logic_error("unreachable");
}

bool guard_matches(const Guard& g, double x) {
  if (g.cmp == Guard::Cmp::Always) return true;
  const double l = eval_expr(*g.lhs, x);
  const double r = eval_expr(*g.rhs, x);
  switch (g.cmp) {
    case Guard::Cmp::Eq:
      return l == r;
    case Guard::Cmp::Ne:
      return l != r;
    case Guard::Cmp::Lt:
      return l < r;
    case Guard::Cmp::Le:
      return l <= r;
    case Guard::Cmp::Gt:
      return l > r;
    case Guard::Cmp::Ge:
      return l >= r;
    case Guard::Cmp::Always:
      break;
  }
  return true;
}

}  // namespace

BoundedSet eval_map(const MapDef& def, double x) {
  for (const auto& clause : def.clauses) {
    if (!guard_matches(clause.guard, x)) continue;
    if (clause.is_finite) {
      std::vector<double> vals;
      vals.reserve(clause.elements.size());
      for (const auto& e : clause.elements) {
        const double v = eval_expr(*e, x);
        if (!std::isfinite(v)) throw MapEvalError(x, "map produced a non-finite point at x = " + fmt(x));
        vals.push_back(v);
      }
      if (vals.size() == 1) return BoundedSet::interval(vals[0], vals[0]);  // canonical singleton
      std::vector<Point> pts;
      pts.reserve(vals.size());
      for (double v : vals) pts.push_back(Point(v));
      return BoundedSet::points(std::move(pts));
    }
    const double lo = eval_expr(*clause.lo, x);
    const double hi = eval_expr(*clause.hi, x);
    if (!std::isfinite(lo) || !std::isfinite(hi))
      throw MapEvalError(x, "map produced a non-finite bound at x = " + fmt(x));
    if (lo > hi)
      throw MapEvalError(x, "map produced an empty interval [" + fmt(lo) + ", " + fmt(hi) + "] at x = " + fmt(x));
    return BoundedSet::interval(lo, hi);
  }
  throw MapEvalError(x, "no clause matches x = " + fmt(x));
}

namespace {

int precedence(Expr::Op op) {
  switch (op) {
    case Expr::Op::Add:
    case Expr::Op::Sub:
      return 1;
    case Expr::Op::Mul:
    case Expr::Op::Div:
      return 2;
    case Expr::Op::Neg:
      return 3;
    default:
      return 4;
  }
}

void print_expr(std::ostringstream& os, const Expr& e, int parent_prec, bool right_operand) {
  const int prec = precedence(e.op);
  const bool parens = prec < parent_prec || (prec == parent_prec && right_operand && prec <= 2);
  if (parens) os << '(';
  switch (e.op) {
    case Expr::Op::Num:
      os << fmt(e.value);
      break;
    case Expr::Op::Var:
      os << 'x';
      break;
    case Expr::Op::Add:
      print_expr(os, *e.a, prec, false);
      os << " + ";
      print_expr(os, *e.b, prec, true);
      break;
    case Expr::Op::Sub:
      print_expr(os, *e.a, prec, false);
      os << " - ";
      print_expr(os, *e.b, prec, true);
      break;
    case Expr::Op::Mul:
      print_expr(os, *e.a, prec, false);
      os << " * ";
      print_expr(os, *e.b, prec, true);
      break;
    case Expr::Op::Div:
      print_expr(os, *e.a, prec, false);
      os << " / ";
      print_expr(os, *e.b, prec, true);
      break;
    case Expr::Op::Neg:
      os << '-';
      print_expr(os, *e.a, prec, true);
      break;
    case Expr::Op::Min:
    case Expr::Op::Max:
      os << (e.op == Expr::Op::Min ? "min(" : "max(");
      print_expr(os, *e.a, 0, false);
      os << ", ";
      print_expr(os, *e.b, 0, false);
      os << ')';
      break;
    case Expr::Op::Abs:
      os << "abs(";
      print_expr(os, *e.a, 0, false);
      os << ')';
      break;
  }
  if (parens) os << ')';
}

const char* cmp_text(Guard::Cmp c) {
  switch (c) {
    case Guard::Cmp::Eq:
      return "==";
    case Guard::Cmp::Ne:
      return "!=";
    case Guard::Cmp::Lt:
      return "<";
    case Guard::Cmp::Le:
      return "<=";
    case Guard::Cmp::Gt:
      return ">";
    case Guard::Cmp::Ge:
      return ">=";
    case Guard::Cmp::Always:
      return "";
  }
  return "";
}

}  // namespace

std::string print(const MapDef& def) {
  std::ostringstream os;
  bool first = true;
  for (const auto& c : def.clauses) {
    if (!first) os << "; ";
    first = false;
    if (c.guard.cmp == Guard::Cmp::Always) {
      os << "otherwise -> ";
    } else {
      os << "if ";
      print_expr(os, *c.guard.lhs, 0, false);
      os << ' ' << cmp_text(c.guard.cmp) << ' ';
      print_expr(os, *c.guard.rhs, 0, false);
      os << " -> ";
    }
    if (c.is_finite) {
      os << '{';
      bool first_el = true;
      for (const auto& e : c.elements) {
        if (!first_el) os << ", ";
        first_el = false;
        print_expr(os, *e, 0, false);
      }
      os << '}';
    } else {
      os << '[';
      print_expr(os, *c.lo, 0, false);
      os << ", ";
      print_expr(os, *c.hi, 0, false);
      os << ']';
    }
  }
  return os.str();
}

std::optional<double> first_uncovered(const MapDef& def, double lo, double hi, int n_samples) {
  if (n_samples < 2) throw std::invalid_argument("coverage probe needs n_samples >= 2");
  for (int i = 0; i < n_samples; ++i) {
    const double x = lo + (hi - lo) * static_cast<double>(i) / (n_samples - 1);
    bool matched = false;
    for (const auto& c : def.clauses) {
      if (guard_matches(c.guard, x)) {
        matched = true;
        break;
      }
    }
    if (!matched) return x;
  }
  return std::nullopt;
}

MultiMap to_multimap(MapDef def) {
  return [def = std::move(def)](const Point& p) { return eval_map(def, p.scalar()); };
}

}  // namespace dsl
}  // namespace endcert
