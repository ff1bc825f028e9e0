#pragma once

// Scene language: lexer, parser, printer and evaluation of expressions.

#include "autpert/core.hpp"
#include "autpert/maps.hpp"
#include "autpert/region.hpp"

#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace autpert::dsl {

struct Pos {
  int line = 1;
  int col = 1;
};

/// Lexical, syntax, binding and type errors.  The CLI maps them to exit 2.
struct ParseError : Error {
  ParseError(Pos p, const std::string& msg);
  Pos pos;
};

struct Expr {
  enum class Kind { Number, Ident, String, Call, List, Tuple, Neg, Binary };
  Kind kind = Kind::Number;
  Pos pos;
  /// Number: value; `imaginary` marks a literal with an `i` suffix.
  double number = 0.0;
  bool imaginary = false;
  /// Ident, String and Call name.
  std::string text;
  /// Binary operator: one of + - * /.
  char op = 0;
  std::vector<Expr> args;
};

/// Structural equality, positions ignored.
bool operator==(const Expr& a, const Expr& b);

struct Stmt {
  enum class Kind { Let, Command };
  Kind kind = Kind::Command;
  Pos pos;
  std::string name;  // Let only
  Expr expr;         // bound expression, or the command call
};

bool operator==(const Stmt& a, const Stmt& b);

struct Program {
  std::vector<Stmt> stmts;
};

inline bool operator==(const Program& a, const Program& b) { return a.stmts == b.stmts; }

Program parse(std::string_view text);

std::string print(const Expr& e);
std::string print(const Stmt& s);
/// One statement per line.
std::string print(const Program& p);

// ---------------------------------------------------------------------------
// Values.

struct Family {
  std::string name;
  MapFamily f;
};

struct Value;
using List = std::vector<Value>;

struct Value {
  std::variant<Complex, PointN, Region, ConformalMap, Marker, Family, std::string, List> v;
};

std::string type_name(const Value& v);

/// Name -> value environment.
using Env = std::map<std::string, Value>;

/// Evaluates an expression.  Unknown names or wrong argument types raise
/// ParseError at the offending position; catalog validation errors
/// (DomainError, DimensionError) propagate unchanged.
Value evaluate(const Expr& e, const Env& env);

/// Helpers used by the runner to unpack command arguments.
double as_real(const Value& v, Pos pos);
int as_int(const Value& v, Pos pos);
Complex as_complex(const Value& v, Pos pos);
PointN as_point(const Value& v, Pos pos);
const Region& as_region(const Value& v, Pos pos);
ConformalMap as_map(const Value& v, Pos pos);
const Family& as_family(const Value& v, Pos pos);
const std::string& as_string(const Value& v, Pos pos);

/// Names understood as commands.
bool is_command(const std::string& name);

}  // namespace autpert::dsl
