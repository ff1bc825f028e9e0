#include "autpert/dsl.hpp"

#include <boost/math/constants/constants.hpp>

#include <charconv>
#include <cmath>
#include <functional>
#include <set>
#include <sstream>
#include <unordered_map>

namespace autpert::dsl {

namespace {

std::string at(Pos p, const std::string& msg) { return std::to_string(p.line) + ":" + std::to_string(p.col) + ": " + msg; }

}  // namespace

ParseError::ParseError(Pos p, const std::string& msg) : Error(at(p, msg)), pos(p) {}

bool operator==(const Expr& a, const Expr& b) {
  if (a.kind != b.kind || a.args.size() != b.args.size()) return false;
  switch (a.kind) {
    case Expr::Kind::Number:
      return a.number == b.number && a.imaginary == b.imaginary;
    case Expr::Kind::Ident:
    case Expr::Kind::String:
      return a.text == b.text;
    case Expr::Kind::Call:
      if (a.text != b.text) return false;
      break;
    case Expr::Kind::Binary:
      if (a.op != b.op) return false;
      break;
    default:
      break;
  }
  for (std::size_t k = 0; k < a.args.size(); ++k)
    if (!(a.args[k] == b.args[k])) return false;
  return true;
}

bool operator==(const Stmt& a, const Stmt& b) { return a.kind == b.kind && a.name == b.name && a.expr == b.expr; }

// ---------------------------------------------------------------------------
// Lexer.

namespace {

enum class Tok { Ident, Number, Imag, String, Punct, End };

struct Token {
  Tok kind;
  Pos pos;
  std::string text;
  double number = 0.0;
};

class Lexer {
 public:
  explicit Lexer(std::string_view s) : s_(s) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_space();
      Token t{Tok::End, pos_, {}, 0.0};
      if (i_ >= s_.size()) {
        out.push_back(t);
        return out;
      }
      const unsigned char c = static_cast<unsigned char>(s_[i_]);
      if (std::isalpha(c) || c == '_') {
        std::size_t j = i_;
        while (j < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[j])) || s_[j] == '_')) ++j;
        t.kind = Tok::Ident;
        t.text = std::string(s_.substr(i_, j - i_));
        advance(j - i_);
      } else if (std::isdigit(c) || (c == '.' && i_ + 1 < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_ + 1])))) {
        lex_number(t);
      } else if (c == '"') {
        lex_string(t);
      } else if (s_.substr(i_, 3) == "\xE2\x88\x92") {  // U+2212 minus sign
        t.kind = Tok::Punct;
        t.text = "-";
        advance(3);
      } else if (std::string_view("()[],=+-*/").find(static_cast<char>(c)) != std::string_view::npos) {
        t.kind = Tok::Punct;
        t.text = std::string(1, static_cast<char>(c));
        advance(1);
      } else {
        throw ParseError(pos_, "unexpected character '" + std::string(1, static_cast<char>(c)) + "'");
      }
      out.push_back(std::move(t));
    }
  }

 private:
  void advance(std::size_t n) {
    for (std::size_t k = 0; k < n && i_ < s_.size(); ++k, ++i_) {
      const unsigned char c = static_cast<unsigned char>(s_[i_]);
      if (c == '\n') {
        ++pos_.line;
        pos_.col = 1;
      } else if ((c & 0xC0) != 0x80) {
        ++pos_.col;
      }
    }
  }

  void skip_space() {
    while (i_ < s_.size()) {
      const char c = s_[i_];
      if (c == '#') {
        while (i_ < s_.size() && s_[i_] != '\n') advance(1);
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance(1);
      } else {
        break;
      }
    }
  }

  void lex_number(Token& t) {
    std::size_t j = i_;
    auto digits = [&] {
      while (j < s_.size() && std::isdigit(static_cast<unsigned char>(s_[j]))) ++j;
    };
    digits();
    if (j < s_.size() && s_[j] == '.') {
      ++j;
      digits();
    }
    if (j < s_.size() && (s_[j] == 'e' || s_[j] == 'E')) {
      std::size_t k = j + 1;
      if (k < s_.size() && (s_[k] == '+' || s_[k] == '-')) ++k;
      if (k < s_.size() && std::isdigit(static_cast<unsigned char>(s_[k]))) {
        j = k;
        digits();
      }
    }
    double v = 0.0;
    const auto res = std::from_chars(s_.data() + i_, s_.data() + j, v);
    if (res.ec != std::errc() || res.ptr != s_.data() + j) throw ParseError(pos_, "malformed number");
    t.kind = Tok::Number;
    t.number = v;
    // An "i" directly after the digits makes an imaginary literal, unless it
    // starts a longer identifier.
    if (j < s_.size() && s_[j] == 'i' &&
        !(j + 1 < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[j + 1])) || s_[j + 1] == '_'))) {
      t.kind = Tok::Imag;
      ++j;
    } else if (j < s_.size() && (std::isalpha(static_cast<unsigned char>(s_[j])) || s_[j] == '_')) {
      throw ParseError(pos_, "malformed number");
    }
    advance(j - i_);
  }

  void lex_string(Token& t) {
    const Pos start = pos_;
    advance(1);
    std::string text;
    while (true) {
      if (i_ >= s_.size() || s_[i_] == '\n') throw ParseError(start, "unterminated string");
      const char c = s_[i_];
      if (c == '"') {
        advance(1);
        break;
      }
      if (c == '\\') {
        if (i_ + 1 >= s_.size()) throw ParseError(start, "unterminated string");
        const char e = s_[i_ + 1];
        if (e == 'n')
          text += '\n';
        else if (e == '"' || e == '\\')
          text += e;
        else
          throw ParseError(pos_, "unknown escape");
        advance(2);
        continue;
      }
      text += c;
      advance(1);
    }
    t.kind = Tok::String;
    t.text = std::move(text);
  }

  std::string_view s_;
  std::size_t i_ = 0;
  Pos pos_;
};

// ---------------------------------------------------------------------------
// Parser.

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : t_(std::move(toks)) {}

  Program program() {
    Program p;
    while (peek().kind != Tok::End) p.stmts.push_back(statement());
    return p;
  }

 private:
  const Token& peek() const { return t_[i_]; }
  Token next() { return t_[i_++]; }
  bool is_punct(const char* s) const { return peek().kind == Tok::Punct && peek().text == s; }
  void expect(const char* s) {
    if (!is_punct(s)) throw ParseError(peek().pos, "expected '" + std::string(s) + "'" + found());
    ++i_;
  }
  std::string found() const {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::End:
        return ", found end of input";
      case Tok::String:
        return ", found string";
      case Tok::Number:
      case Tok::Imag:
        return ", found number";
      default:
        return ", found '" + t.text + "'";
    }
  }

  Stmt statement() {
    Stmt s;
    s.pos = peek().pos;
    if (peek().kind == Tok::Ident && peek().text == "let") {
      next();
      if (peek().kind != Tok::Ident) throw ParseError(peek().pos, "expected a name after 'let'" + found());
      s.kind = Stmt::Kind::Let;
      s.name = next().text;
      if (s.name == "let") throw ParseError(s.pos, "'let' is reserved");
      expect("=");
      s.expr = expr();
      return s;
    }
    s.kind = Stmt::Kind::Command;
    s.expr = expr();
    if (s.expr.kind != Expr::Kind::Call || !is_command(s.expr.text))
      throw ParseError(s.pos, "expected 'let' or a command");
    return s;
  }

  Expr binary(Expr l, char op, Expr r, Pos p) {
    Expr e;
    e.kind = Expr::Kind::Binary;
    e.pos = p;
    e.op = op;
    e.args.push_back(std::move(l));
    e.args.push_back(std::move(r));
    return e;
  }

  Expr expr() {
    Expr l = term();
    while (is_punct("+") || is_punct("-")) {
      const Token op = next();
      l = binary(std::move(l), op.text[0], term(), op.pos);
    }
    return l;
  }

  Expr term() {
    Expr l = unary();
    while (is_punct("*") || is_punct("/")) {
      const Token op = next();
      l = binary(std::move(l), op.text[0], unary(), op.pos);
    }
    return l;
  }

  Expr unary() {
    if (is_punct("-")) {
      Expr e;
      e.kind = Expr::Kind::Neg;
      e.pos = next().pos;
      e.args.push_back(unary());
      return e;
    }
    return primary();
  }

  std::vector<Expr> items(const char* close) {
    std::vector<Expr> out;
    if (is_punct(close)) {
      next();
      return out;
    }
    while (true) {
      out.push_back(expr());
      if (is_punct(",")) {
        next();
        continue;
      }
      expect(close);
      return out;
    }
  }

  Expr primary() {
    const Token t = next();
    Expr e;
    e.pos = t.pos;
    switch (t.kind) {
      case Tok::Number:
      case Tok::Imag:
        e.kind = Expr::Kind::Number;
        e.number = t.number;
        e.imaginary = t.kind == Tok::Imag;
        return e;
      case Tok::String:
        e.kind = Expr::Kind::String;
        e.text = t.text;
        return e;
      case Tok::Ident:
        e.text = t.text;
        if (is_punct("(")) {
          next();
          e.kind = Expr::Kind::Call;
          e.args = items(")");
        } else {
          e.kind = Expr::Kind::Ident;
        }
        return e;
      case Tok::Punct:
        if (t.text == "(") {
          std::vector<Expr> xs = items(")");
          if (xs.empty()) throw ParseError(t.pos, "empty parentheses");
          if (xs.size() == 1) return std::move(xs[0]);
          e.kind = Expr::Kind::Tuple;
          e.args = std::move(xs);
          return e;
        }
        if (t.text == "[") {
          e.kind = Expr::Kind::List;
          e.args = items("]");
          return e;
        }
        break;
      case Tok::End:
        throw ParseError(t.pos, "unexpected end of input");
    }
    throw ParseError(t.pos, "unexpected '" + t.text + "'");
  }

  std::vector<Token> t_;
  std::size_t i_ = 0;
};

}  // namespace

Program parse(std::string_view text) { return Parser(Lexer(text).run()).program(); }

// ---------------------------------------------------------------------------
// Printer.

namespace {

int precedence(const Expr& e) {
  if (e.kind != Expr::Kind::Binary) return 3;
  return (e.op == '+' || e.op == '-') ? 1 : 2;
}

void print_to(std::ostream& os, const Expr& e);

void print_items(std::ostream& os, const std::vector<Expr>& xs) {
  for (std::size_t k = 0; k < xs.size(); ++k) {
    if (k) os << ", ";
    print_to(os, xs[k]);
  }
}

void print_to(std::ostream& os, const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Number:
      os << format_double(e.number) << (e.imaginary ? "i" : "");
      break;
    case Expr::Kind::Ident:
      os << e.text;
      break;
    case Expr::Kind::String:
      os << '"';
      for (char c : e.text) {
        if (c == '"' || c == '\\')
          os << '\\' << c;
        else if (c == '\n')
          os << "\\n";
        else
          os << c;
      }
      os << '"';
      break;
    case Expr::Kind::Call:
      os << e.text << '(';
      print_items(os, e.args);
      os << ')';
      break;
    case Expr::Kind::List:
      os << '[';
      print_items(os, e.args);
      os << ']';
      break;
    case Expr::Kind::Tuple:
      os << '(';
      print_items(os, e.args);
      os << ')';
      break;
    case Expr::Kind::Neg: {
      const bool paren = e.args[0].kind == Expr::Kind::Binary;
      os << '-' << (paren ? "(" : "");
      print_to(os, e.args[0]);
      os << (paren ? ")" : "");
      break;
    }
    case Expr::Kind::Binary: {
      const int p = precedence(e);
      const bool lp = precedence(e.args[0]) < p;
      const bool rp = precedence(e.args[1]) <= p;
      if (lp) os << '(';
      print_to(os, e.args[0]);
      if (lp) os << ')';
      os << ' ' << e.op << ' ';
      if (rp) os << '(';
      print_to(os, e.args[1]);
      if (rp) os << ')';
      break;
    }
  }
}

}  // namespace

std::string print(const Expr& e) {
  std::ostringstream os;
  print_to(os, e);
  return os.str();
}

std::string print(const Stmt& s) {
  if (s.kind == Stmt::Kind::Let) return "let " + s.name + " = " + print(s.expr);
  return print(s.expr);
}

std::string print(const Program& p) {
  std::string out;
  for (const auto& s : p.stmts) out += print(s) + "\n";
  return out;
}

// ---------------------------------------------------------------------------
// Values.

std::string type_name(const Value& v) {
  static const char* names[] = {"number", "point", "region", "map", "marker", "family", "string", "list"};
  return names[v.v.index()];
}

namespace {

[[noreturn]] void type_error(Pos pos, const std::string& want, const Value& got) {
  throw ParseError(pos, "expected " + want + ", got " + type_name(got));
}

}  // namespace

Complex as_complex(const Value& v, Pos pos) {
  if (const auto* c = std::get_if<Complex>(&v.v)) return *c;
  type_error(pos, "number", v);
}

double as_real(const Value& v, Pos pos) {
  const Complex c = as_complex(v, pos);
  if (c.imag() != 0.0) throw ParseError(pos, "expected a real number");
  return c.real();
}

int as_int(const Value& v, Pos pos) {
  const double x = as_real(v, pos);
  if (x != std::floor(x) || std::abs(x) > 1e9) throw ParseError(pos, "expected an integer");
  return static_cast<int>(x);
}

PointN as_point(const Value& v, Pos pos) {
  if (const auto* c = std::get_if<Complex>(&v.v)) return make_point({*c});
  if (const auto* p = std::get_if<PointN>(&v.v)) return *p;
  type_error(pos, "point", v);
}

const Region& as_region(const Value& v, Pos pos) {
  if (const auto* r = std::get_if<Region>(&v.v)) return *r;
  type_error(pos, "region", v);
}

ConformalMap as_map(const Value& v, Pos pos) {
  if (const auto* m = std::get_if<ConformalMap>(&v.v)) return *m;
  type_error(pos, "map", v);
}

const Family& as_family(const Value& v, Pos pos) {
  if (const auto* f = std::get_if<Family>(&v.v)) return *f;
  type_error(pos, "family", v);
}

const std::string& as_string(const Value& v, Pos pos) {
  if (const auto* s = std::get_if<std::string>(&v.v)) return *s;
  type_error(pos, "string", v);
}

namespace {

Marker as_marker(const Value& v, Pos pos) {
  if (const auto* m = std::get_if<Marker>(&v.v)) return *m;
  type_error(pos, "marker", v);
}

struct Args {
  const Expr& call;
  std::vector<Value> vals;

  std::size_t size() const { return vals.size(); }
  Pos pos(std::size_t k) const { return k < call.args.size() ? call.args[k].pos : call.pos; }
  void arity(std::size_t lo, std::size_t hi) const {
    if (vals.size() < lo || vals.size() > hi) {
      const std::string want = lo == hi ? std::to_string(lo) : std::to_string(lo) + " to " + std::to_string(hi);
      throw ParseError(call.pos, call.text + " takes " + want + " arguments, got " + std::to_string(vals.size()));
    }
  }
  void at_least(std::size_t lo) const {
    if (vals.size() < lo)
      throw ParseError(call.pos, call.text + " takes at least " + std::to_string(lo) + " arguments");
  }
  double real(std::size_t k) const { return as_real(vals[k], pos(k)); }
  int integer(std::size_t k) const { return as_int(vals[k], pos(k)); }
  Complex complex(std::size_t k) const { return as_complex(vals[k], pos(k)); }
  PointN point(std::size_t k) const { return as_point(vals[k], pos(k)); }
  Region region(std::size_t k) const { return as_region(vals[k], pos(k)); }
  ConformalMap map(std::size_t k) const { return as_map(vals[k], pos(k)); }

  /// Arguments from k on, with a single list argument spread out.
  std::vector<std::pair<Value, Pos>> rest(std::size_t k) const {
    std::vector<std::pair<Value, Pos>> out;
    if (vals.size() == k + 1)
      if (const auto* l = std::get_if<List>(&vals[k].v)) {
        const Expr& e = call.args[k];
        for (std::size_t m = 0; m < l->size(); ++m)
          out.emplace_back((*l)[m], e.kind == Expr::Kind::List && m < e.args.size() ? e.args[m].pos : e.pos);
        return out;
      }
    for (std::size_t m = k; m < vals.size(); ++m) out.emplace_back(vals[m], pos(m));
    return out;
  }
  std::vector<Region> regions(std::size_t k) const {
    std::vector<Region> out;
    for (const auto& [v, p] : rest(k)) out.push_back(as_region(v, p));
    return out;
  }
  std::vector<ConformalMap> maps(std::size_t k) const {
    std::vector<ConformalMap> out;
    for (const auto& [v, p] : rest(k)) out.push_back(as_map(v, p));
    return out;
  }
};

using Builtin = std::function<Value(const Args&)>;

Value val(Region r) { return Value{std::move(r)}; }
Value val(ConformalMap m) { return Value{std::move(m)}; }
Value val(Marker m) { return Value{m}; }

std::optional<Precision> precision_name(const std::string& s) {
  if (s == "double") return Precision::Double;
  if (s == "extended") return Precision::Extended;
  if (s == "quad") return Precision::Quad;
  return std::nullopt;
}

const std::unordered_map<std::string, Builtin>& builtins() {
  static const std::unordered_map<std::string, Builtin> table = {
      // Regions.
      {"disc",
       [](const Args& a) {
         a.arity(2, 2);
         return val(Region::disc(a.complex(0), a.real(1)));
       }},
      {"ball",
       [](const Args& a) {
         a.arity(2, 2);
         return val(Region::ball(a.point(0), a.real(1)));
       }},
      {"halfplane",
       [](const Args& a) {
         a.arity(2, 2);
         return val(Region::half_plane(a.complex(0), a.real(1)));
       }},
      {"union",
       [](const Args& a) {
         a.at_least(1);
         return val(Region::union_of(a.regions(0)));
       }},
      {"inter",
       [](const Args& a) {
         a.at_least(1);
         return val(Region::intersection(a.regions(0)));
       }},
      {"diff",
       [](const Args& a) {
         a.arity(2, 2);
         return val(Region::difference(a.region(0), a.region(1)));
       }},
      {"compl",
       [](const Args& a) {
         a.arity(1, 1);
         return val(Region::complement(a.region(0)));
       }},
      {"mapped",
       [](const Args& a) {
         a.arity(2, 2);
         return val(Region::mapped(a.map(0), a.region(1)));
       }},
      {"puncture",
       [](const Args& a) {
         a.at_least(2);
         std::vector<PointN> pts;
         for (const auto& [v, p] : a.rest(1)) pts.push_back(as_point(v, p));
         return val(Region::punctured(a.region(0), std::move(pts)));
       }},
      {"product",
       [](const Args& a) {
         a.at_least(1);
         return val(Region::product(a.regions(0)));
       }},
      {"fibered",
       [](const Args& a) {
         a.at_least(2);
         std::vector<Marker> ms;
         if (a.size() > 2)
           for (const auto& [v, p] : a.rest(2)) ms.push_back(as_marker(v, p));
         return val(Region::fibered(a.region(0), a.region(1), std::move(ms)));
       }},
      // Maps.
      {"mobius",
       [](const Args& a) {
         a.arity(1, 1);
         return val(ConformalMap::disc_mobius(a.real(0)));
       }},
      {"discauto",
       [](const Args& a) {
         a.arity(2, 2);
         return val(ConformalMap::disc_automorphism(a.real(0), a.complex(1)));
       }},
      {"rot",
       [](const Args& a) {
         a.arity(1, 2);
         return val(ConformalMap::rotation(a.real(0), a.size() > 1 ? a.integer(1) : 0));
       }},
      {"ballshift",
       [](const Args& a) {
         a.arity(2, 2);
         return val(ConformalMap::ball_shift(a.real(0), a.integer(1)));
       }},
      {"perm",
       [](const Args& a) {
         a.at_least(1);
         std::vector<int> sigma;
         for (const auto& [v, p] : a.rest(0)) sigma.push_back(as_int(v, p));
         return val(ConformalMap::permutation(std::move(sigma)));
       }},
      {"gt",
       [](const Args& a) {
         a.arity(1, 1);
         return val(ConformalMap::gt(a.real(0)));
       }},
      {"gj",
       [](const Args& a) {
         a.arity(2, 2);
         return val(ConformalMap::gj(a.integer(0), a.real(1)));
       }},
      {"unitary",
       [](const Args& a) {
         a.at_least(2);
         const int n = a.integer(0);
         if (n < 1 || n > kMaxComplexDim) throw ParseError(a.pos(0), "unitary size must be 1 to 3");
         a.arity(1 + n * n, 1 + n * n);
         ComplexMatrix u(n, n);
         for (int r = 0; r < n; ++r)
           for (int c = 0; c < n; ++c) u(r, c) = a.complex(1 + r * n + c);
         return val(ConformalMap::unitary(u));
       }},
      {"similarity",
       [](const Args& a) {
         a.arity(2, 2);
         return val(ConformalMap::similarity(a.real(0), a.point(1)));
       }},
      {"prodmap",
       [](const Args& a) {
         a.at_least(1);
         return val(ConformalMap::product(a.maps(0)));
       }},
      {"compose",
       [](const Args& a) {
         a.at_least(1);
         return val(ConformalMap::compose(a.maps(0)));
       }},
      {"inv",
       [](const Args& a) {
         a.arity(1, 1);
         return val(ConformalMap::inverse_of(a.map(0)));
       }},
      {"power",
       [](const Args& a) {
         a.arity(2, 2);
         const int k = a.integer(1);
         if (k < 0) throw ParseError(a.pos(1), "power must be non-negative");
         return val(power(a.map(0), k));
       }},
      // Markers.
      {"const",
       [](const Args& a) {
         a.arity(1, 1);
         return val(Marker{markers::Const{a.complex(0)}});
       }},
      {"pj",
       [](const Args& a) {
         a.arity(1, 1);
         const int j = a.integer(0);
         if (j < 1) throw ParseError(a.pos(0), "pj index must be >= 1");
         return val(Marker{markers::Pj{j}});
       }},
  };
  return table;
}

const std::set<std::string>& command_names() {
  static const std::set<std::string> names = {
      "verify_invariance", "hausdorff", "zj_perturb", "finite_group_perturb", "puncture_rigidify", "example", "render",
      "check_order",       "convergence", "check_group_law", "check_commuting", "torus_rank"};
  return names;
}

Value constant(const Expr& e) {
  if (e.text == "pi") return Value{Complex(boost::math::constants::pi<double>(), 0.0)};
  if (e.text == "phi") return val(ConformalMap::cayley_phi());
  if (e.text == "striptodisc") return val(ConformalMap::strip_to_disc());
  if (e.text == "id") return val(ConformalMap::identity());
  if (e.text == "diag") return val(Marker{markers::Diagonal{}});
  throw ParseError(e.pos, "unbound name '" + e.text + "'");
}

Complex number_arg(const Expr& e, const Env& env) { return as_complex(evaluate(e, env), e.pos); }

}  // namespace

bool is_command(const std::string& name) { return command_names().count(name) > 0; }

Value evaluate(const Expr& e, const Env& env) {
  switch (e.kind) {
    case Expr::Kind::Number:
      return Value{e.imaginary ? Complex(0.0, e.number) : Complex(e.number, 0.0)};
    case Expr::Kind::String:
      return Value{e.text};
    case Expr::Kind::Ident: {
      const auto it = env.find(e.text);
      if (it != env.end()) return it->second;
      return constant(e);
    }
    case Expr::Kind::Neg:
      return Value{-number_arg(e.args[0], env)};
    case Expr::Kind::Binary: {
      const Complex l = number_arg(e.args[0], env);
      const Complex r = number_arg(e.args[1], env);
      switch (e.op) {
        case '+':
          return Value{l + r};
        case '-':
          return Value{l - r};
        case '*':
          return Value{l * r};
        default:
          if (r == Complex(0.0, 0.0)) throw ParseError(e.pos, "division by zero");
          return Value{l / r};
      }
    }
    case Expr::Kind::List: {
      List xs;
      for (const auto& a : e.args) xs.push_back(evaluate(a, env));
      return Value{std::move(xs)};
    }
    case Expr::Kind::Tuple: {
      if (e.args.size() > static_cast<std::size_t>(kMaxComplexDim))
        throw ParseError(e.pos, "points have at most " + std::to_string(kMaxComplexDim) + " coordinates");
      PointN p(static_cast<int>(e.args.size()));
      for (std::size_t k = 0; k < e.args.size(); ++k) p[static_cast<int>(k)] = number_arg(e.args[k], env);
      return Value{p};
    }
    case Expr::Kind::Call: {
      if (is_command(e.text)) throw ParseError(e.pos, "'" + e.text + "' is a command, not an expression");
      Args a{e, {}};
      for (const auto& x : e.args) a.vals.push_back(evaluate(x, env));
      const auto bound = env.find(e.text);
      if (bound != env.end()) {
        const Family& f = as_family(bound->second, e.pos);
        a.arity(1, 1);
        return val(f.f(a.real(0)));
      }
      if (const auto p = precision_name(e.text)) {
        a.arity(1, 1);
        if (const auto* r = std::get_if<Region>(&a.vals[0].v)) return val(Region::with_precision(*p, *r));
        if (const auto* m = std::get_if<ConformalMap>(&a.vals[0].v)) return val(ConformalMap::with_precision(*p, *m));
        type_error(a.pos(0), "region or map", a.vals[0]);
      }
      const auto& table = builtins();
      const auto it = table.find(e.text);
      if (it == table.end()) throw ParseError(e.pos, "unknown function '" + e.text + "'");
      return it->second(a);
    }
  }
  throw ParseError(e.pos, "bad expression");
}

}  // namespace autpert::dsl
