#pragma once

// Expression language for the separable Hamiltonian H(x, p) = K(p) + V(x).
//
// Grammar (precedence high to low):
//   primary := number | constant | variable | function '(' expr ')' | '(' expr ')'
//   power   := primary [ '^' unary ]          right-associative
//   unary   := '-' unary | power
//   term    := unary { ('*' | '/') unary }
//   expr    := term { ('+' | '-') term }
// so -x^2 is -(x^2) and x^-1 is x^(-1). Constants are pi and e.

#include <array>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include "wigner_forge/error.hpp"

namespace wigner_forge {

/// Syntax error with the byte offset of the offending token.
class ParseError : public ConfigError {
 public:
  ParseError(const std::string& what, std::size_t offset) : ConfigError(what), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// Singular evaluation; carries the sample at which it happened.
class EvalError : public NumericalError {
 public:
  EvalError(const std::string& what, double sample) : NumericalError(what), sample_(sample) {}
  double sample() const noexcept { return sample_; }

 private:
  double sample_;
};

enum class Function { sin, cos, tan, exp, log, sqrt, tanh, cosh, sinh, abs };

inline constexpr std::array<std::pair<std::string_view, Function>, 10> function_table{{
    {"sin", Function::sin},
    {"cos", Function::cos},
    {"tan", Function::tan},
    {"exp", Function::exp},
    {"log", Function::log},
    {"sqrt", Function::sqrt},
    {"tanh", Function::tanh},
    {"cosh", Function::cosh},
    {"sinh", Function::sinh},
    {"abs", Function::abs},
}};

inline std::string_view function_name(Function f) {
  for (const auto& [name, fn] : function_table)
    if (fn == f) return name;
  return "?";
}

inline std::optional<Function> lookup_function(std::string_view name) {
  for (const auto& [n, fn] : function_table)
    if (n == name) return fn;
  return std::nullopt;
}

/// Immutable expression tree node. Children are held by value.
struct Expr {
  enum class Kind { number, constant, variable, negate, add, sub, mul, div, pow, call };

  Kind kind = Kind::number;
  double value = 0.0;       // number literal or constant value
  std::string name;         // constant or variable name
  Function function = Function::sin;
  std::vector<Expr> args;   // operands: 1 for negate/call, 2 for binary

  static Expr number(double v) {
    Expr e;
    e.value = v;
    return e;
  }
  static Expr constant(std::string n, double v) {
    Expr e;
    e.kind = Kind::constant;
    e.name = std::move(n);
    e.value = v;
    return e;
  }
  static Expr variable(std::string n) {
    Expr e;
    e.kind = Kind::variable;
    e.name = std::move(n);
    return e;
  }
  static Expr unary(Kind k, Expr a) {
    Expr e;
    e.kind = k;
    e.args.push_back(std::move(a));
    return e;
  }
  static Expr binary(Kind k, Expr a, Expr b) {
    Expr e;
    e.kind = k;
    e.args.push_back(std::move(a));
    e.args.push_back(std::move(b));
    return e;
  }
  static Expr call(Function f, Expr a) {
    Expr e = unary(Kind::call, std::move(a));
    e.function = f;
    return e;
  }

  friend bool operator==(const Expr&, const Expr&) = default;
};

namespace detail {

inline std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

class Parser {
 public:
  Parser(std::string_view text, std::string_view variable) : text_(text), variable_(variable) {}

  Expr parse() {
    skip_space();
    if (pos_ == text_.size()) throw ParseError("empty expression", 0);
    Expr e = expr();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'", pos_);
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg, std::size_t at) const {
    throw ParseError(msg + " at offset " + std::to_string(at), at);
  }

  void skip_space() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' ||
                                   text_[pos_] == '\n' || text_[pos_] == '\r'))
      ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c, const char* after) {
    if (!accept(c)) {
      const std::string found =
          pos_ < text_.size() ? "'" + std::string(1, text_[pos_]) + "'" : std::string("end of input");
      fail(std::string("expected '") + c + "' " + after + ", found " + found, pos_);
    }
  }

  Expr expr() {
    Expr lhs = term();
    for (;;) {
      if (accept('+'))
        lhs = Expr::binary(Expr::Kind::add, std::move(lhs), term());
      else if (accept('-'))
        lhs = Expr::binary(Expr::Kind::sub, std::move(lhs), term());
      else
        return lhs;
    }
  }

  Expr term() {
    Expr lhs = unary();
    for (;;) {
      if (accept('*'))
        lhs = Expr::binary(Expr::Kind::mul, std::move(lhs), unary());
      else if (accept('/'))
        lhs = Expr::binary(Expr::Kind::div, std::move(lhs), unary());
      else
        return lhs;
    }
  }

  Expr unary() {
    if (accept('-')) return Expr::unary(Expr::Kind::negate, unary());
    return power();
  }

  Expr power() {
    Expr base = primary();
    if (accept('^')) return Expr::binary(Expr::Kind::pow, std::move(base), unary());
    return base;
  }

  static bool is_ident_start(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
  }
  static bool is_ident_char(char c) { return is_ident_start(c) || (c >= '0' && c <= '9'); }
  static bool is_digit(char c) { return c >= '0' && c <= '9'; }

  Expr primary() {
    skip_space();
    if (pos_ == text_.size()) fail("expected operand, found end of input", pos_);
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = expr();
      expect(')', "to close parenthesis");
      return e;
    }
    if (is_digit(c) || c == '.') return number();
    if (is_ident_start(c)) return identifier();
    fail("expected operand, found '" + std::string(1, c) + "'", pos_);
  }

  Expr number() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && is_digit(text_[pos_])) ++pos_;
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      while (pos_ < text_.size() && is_digit(text_[pos_])) ++pos_;
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t q = pos_ + 1;
      if (q < text_.size() && (text_[q] == '+' || text_[q] == '-')) ++q;
      if (q < text_.size() && is_digit(text_[q])) {
        pos_ = q;
        while (pos_ < text_.size() && is_digit(text_[pos_])) ++pos_;
      }
    }
    const std::string_view lit = text_.substr(start, pos_ - start);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(lit.data(), lit.data() + lit.size(), v);
    if (ec == std::errc::result_out_of_range) fail("number out of range", start);
    if (ec != std::errc{} || ptr != lit.data() + lit.size())
      fail("malformed number '" + std::string(lit) + "'", start);
    return Expr::number(v);
  }

  Expr identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && is_ident_char(text_[pos_])) ++pos_;
    const std::string name(text_.substr(start, pos_ - start));

    if (auto fn = lookup_function(name)) {
      expect('(', ("after function " + name).c_str());
      Expr arg = expr();
      expect(')', ("to close call to " + name).c_str());
      return Expr::call(*fn, std::move(arg));
    }
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == '(') fail("unknown function " + name, start);
    if (name == "pi") return Expr::constant(name, std::numbers::pi);
    if (name == "e") return Expr::constant(name, std::numbers::e);
    if (name == variable_) return Expr::variable(name);
    if (name == "x" || name == "p")
      fail("variable " + name + " not allowed in an expression over " + std::string(variable_),
           start);
    fail("unknown identifier " + name, start);
  }

  std::string_view text_;
  std::string_view variable_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses `text` as an expression in the single free variable `variable`.
inline Expr parse(std::string_view text, std::string_view variable) {
  return detail::Parser(text, variable).parse();
}

/// Fully parenthesized rendering; parse(print(e)) == e.
inline std::string print(const Expr& e) {
  using K = Expr::Kind;
  switch (e.kind) {
    case K::number:
      return detail::format_double(e.value);
    case K::constant:
    case K::variable:
      return e.name;
    case K::negate:
      return "(-" + print(e.args[0]) + ")";
    case K::call:
      return std::string(function_name(e.function)) + "(" + print(e.args[0]) + ")";
    default:
      break;
  }
  char op = '+';
  switch (e.kind) {
    case K::sub: op = '-'; break;
    case K::mul: op = '*'; break;
    case K::div: op = '/'; break;
    case K::pow: op = '^'; break;
    default: break;
  }
  return "(" + print(e.args[0]) + op + print(e.args[1]) + ")";
}

namespace detail {

inline double eval_node(const Expr& e, double v, double sample) {
  using K = Expr::Kind;
  auto singular = [sample](const std::string& what) -> EvalError {
    return EvalError(what + " at " + format_double(sample), sample);
  };
  switch (e.kind) {
    case K::number:
    case K::constant:
      return e.value;
    case K::variable:
      return v;
    case K::negate:
      return -eval_node(e.args[0], v, sample);
    case K::add:
      return eval_node(e.args[0], v, sample) + eval_node(e.args[1], v, sample);
    case K::sub:
      return eval_node(e.args[0], v, sample) - eval_node(e.args[1], v, sample);
    case K::mul:
      return eval_node(e.args[0], v, sample) * eval_node(e.args[1], v, sample);
    case K::div: {
      const double num = eval_node(e.args[0], v, sample);
      const double den = eval_node(e.args[1], v, sample);
      if (den == 0.0) throw singular("division by zero");
      return num / den;
    }
    case K::pow: {
      const double r = std::pow(eval_node(e.args[0], v, sample), eval_node(e.args[1], v, sample));
      if (std::isnan(r)) throw singular("undefined power");
      return r;
    }
    case K::call: {
      const double a = eval_node(e.args[0], v, sample);
      switch (e.function) {
        case Function::sin: return std::sin(a);
        case Function::cos: return std::cos(a);
        case Function::tan: return std::tan(a);
        case Function::exp: return std::exp(a);
        case Function::log:
          if (!(a > 0.0)) throw singular("log of non-positive argument");
          return std::log(a);
        case Function::sqrt:
          if (a < 0.0) throw singular("sqrt of negative argument");
          return std::sqrt(a);
        case Function::tanh: return std::tanh(a);
        case Function::cosh: return std::cosh(a);
        case Function::sinh: return std::sinh(a);
        case Function::abs: return std::abs(a);
      }
    }
  }
  return 0.0;
}

}  // namespace detail

/// Evaluates at one sample; throws EvalError on a singular or non-finite result.
inline double evaluate(const Expr& e, double sample) {
  const double r = detail::eval_node(e, sample, sample);
  if (!std::isfinite(r))
    throw EvalError("non-finite value at " + detail::format_double(sample), sample);
  return r;
}

/// Element-wise evaluate.
inline std::vector<double> eval_grid(const Expr& e, std::span<const double> samples) {
  std::vector<double> out(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!std::isfinite(samples[i]))
      throw EvalError("non-finite sample", samples[i]);
    out[i] = evaluate(e, samples[i]);
  }
  return out;
}

/// H(x, p) = K(p) + V(x) with the source strings kept for provenance.
struct HamiltonianSpec {
  std::string v_source;
  std::string k_source;
  Expr v;
  Expr k;

  double V(double x) const { return evaluate(v, x); }
  double K(double p) const { return evaluate(k, p); }
};

inline HamiltonianSpec make_hamiltonian(std::string_view v_text, std::string_view k_text) {
  HamiltonianSpec h;
  h.v_source = std::string(v_text);
  h.k_source = std::string(k_text);
  try {
    h.v = parse(v_text, "x");
  } catch (const ParseError& e) {
    throw ParseError(std::string("V: ") + e.what(), e.offset());
  }
  try {
    h.k = parse(k_text, "p");
  } catch (const ParseError& e) {
    throw ParseError(std::string("K: ") + e.what(), e.offset());
  }
  return h;
}

/// p^2/2
inline constexpr std::string_view standard_kinetic = "p^2/2";
/// x^2/2, the unit-frequency harmonic oscillator.
inline constexpr std::string_view harmonic_potential = "x^2/2";
/// The quartic double well -0.05 x^2 + 0.03 x^4.
inline constexpr std::string_view mexican_hat_potential = "-0.05*x^2 + 0.03*x^4";

}  // namespace wigner_forge
