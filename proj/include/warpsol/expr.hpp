#pragma once

// Scalar expression language.
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?            -- right associative
//   primary := number | name | func '(' expr ')' | '(' expr ')'
//   number  := digits ['.' digits] [('e'|'E') ['+'|'-'] digits]
//   func    := sin | cos | tan | sinh | cosh | tanh | exp | log | sqrt | abs
//   name    := declared variable | 'pi' | 'e'
//
// Whitespace is ignored. Juxtaposition ("2t", "2 t", "(t)(t)") is a syntax error.

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <map>
#include <memory>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "warpsol/errors.hpp"
#include "warpsol/jet.hpp"

namespace warpsol {

enum class Func { Sin, Cos, Tan, Sinh, Cosh, Tanh, Exp, Log, Sqrt, Abs };

namespace detail {

inline constexpr std::array<std::pair<std::string_view, Func>, 10> kFunctions{{
    {"sin", Func::Sin},
    {"cos", Func::Cos},
    {"tan", Func::Tan},
    {"sinh", Func::Sinh},
    {"cosh", Func::Cosh},
    {"tanh", Func::Tanh},
    {"exp", Func::Exp},
    {"log", Func::Log},
    {"sqrt", Func::Sqrt},
    {"abs", Func::Abs},
}};

inline std::optional<Func> lookup_function(std::string_view name) {
  for (const auto& [n, f] : kFunctions)
    if (n == name) return f;
  return std::nullopt;
}

inline std::string_view function_name(Func f) {
  for (const auto& [n, g] : kFunctions)
    if (g == f) return n;
  return "?";
}

inline std::string format_number(double v) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), end);
}

struct Node {
  enum class Kind { Number, Constant, Variable, Negate, Add, Sub, Mul, Div, Pow, Call };
  Kind kind;
  double number = 0.0;      // Number / Constant value
  std::string name;         // Constant or Variable name
  std::size_t slot = 0;     // Variable index into the declared variable list
  Func func = Func::Sin;    // Call
  std::shared_ptr<const Node> lhs, rhs;
  bool depends_on_variables = false;
};

using NodePtr = std::shared_ptr<const Node>;

inline std::string print(const Node& n) {
  using K = Node::Kind;
  switch (n.kind) {
    case K::Number: return format_number(n.number);
    case K::Constant:
    case K::Variable: return n.name;
    case K::Negate: return "(-" + print(*n.lhs) + ")";
    case K::Call: return std::string(function_name(n.func)) + "(" + print(*n.lhs) + ")";
    default: break;
  }
  const char* op = n.kind == K::Add ? "+" : n.kind == K::Sub ? "-" : n.kind == K::Mul ? "*" : n.kind == K::Div ? "/" : "^";
  return "(" + print(*n.lhs) + op + print(*n.rhs) + ")";
}

class Parser {
 public:
  Parser(std::string_view text, const std::vector<std::string>& variables) : text_(text), vars_(variables) {}

  NodePtr parse() {
    skip();
    if (pos_ >= text_.size()) throw SyntaxError("empty expression", pos_);
    NodePtr root = expression(0);
    skip();
    if (pos_ < text_.size()) unexpected();
    return root;
  }

 private:
  // binding powers
  static constexpr int kAdd = 10, kMul = 20, kUnary = 30, kPow = 40;

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  [[noreturn]] void unexpected() {
    const char c = text_[pos_];
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '(' || c == '.' || c == '_')
      throw SyntaxError("implicit multiplication is not supported", pos_);
    throw SyntaxError(std::string("unexpected '") + c + "'", pos_);
  }

  static int infix_power(char c) {
    switch (c) {
      case '+':
      case '-': return kAdd;
      case '*':
      case '/': return kMul;
      case '^': return kPow;
      default: return -1;
    }
  }

  NodePtr expression(int min_power) {
    NodePtr lhs = prefix();
    for (;;) {
      skip();
      if (pos_ >= text_.size() || text_[pos_] == ')') break;
      const char op = text_[pos_];
      const int power = infix_power(op);
      if (power < 0) unexpected();
      if (power <= min_power) break;
      ++pos_;
      // ^ is right associative: its right operand may contain another ^.
      NodePtr rhs = op == '^' ? expression(kUnary - 1) : expression(power);
      lhs = binary(op, std::move(lhs), std::move(rhs));
    }
    return lhs;
  }

  NodePtr binary(char op, NodePtr lhs, NodePtr rhs) {
    auto n = std::make_shared<Node>();
    using K = Node::Kind;
    n->kind = op == '+' ? K::Add : op == '-' ? K::Sub : op == '*' ? K::Mul : op == '/' ? K::Div : K::Pow;
    n->depends_on_variables = lhs->depends_on_variables || rhs->depends_on_variables;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return n;
  }

  NodePtr prefix() {
    skip();
    if (pos_ >= text_.size()) throw SyntaxError("unexpected end of expression", pos_);
    const char c = text_[pos_];
    if (c == '-') {
      ++pos_;
      NodePtr operand = expression(kUnary);
      auto n = std::make_shared<Node>();
      n->kind = Node::Kind::Negate;
      n->depends_on_variables = operand->depends_on_variables;
      n->lhs = std::move(operand);
      return n;
    }
    if (c == '(') {
      ++pos_;
      NodePtr inner = expression(0);
      skip();
      if (pos_ >= text_.size() || text_[pos_] != ')') throw SyntaxError("expected ')'", pos_);
      ++pos_;
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    throw SyntaxError(std::string("unexpected '") + c + "'", pos_);
  }

  NodePtr number() {
    const std::size_t start = pos_;
    std::size_t end = pos_;
    while (end < text_.size() && std::isdigit(static_cast<unsigned char>(text_[end]))) ++end;
    if (end < text_.size() && text_[end] == '.') {
      ++end;
      while (end < text_.size() && std::isdigit(static_cast<unsigned char>(text_[end]))) ++end;
    }
    if (end < text_.size() && (text_[end] == 'e' || text_[end] == 'E')) {
      std::size_t k = end + 1;
      if (k < text_.size() && (text_[k] == '+' || text_[k] == '-')) ++k;
      if (k < text_.size() && std::isdigit(static_cast<unsigned char>(text_[k]))) {
        while (k < text_.size() && std::isdigit(static_cast<unsigned char>(text_[k]))) ++k;
        end = k;
      }
    }
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + end, value);
    if (ec != std::errc() || ptr != text_.data() + end) throw SyntaxError("malformed number", start);
    pos_ = end;
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Number;
    n->number = value;
    return n;
  }

  NodePtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) ++pos_;
    const std::string name(text_.substr(start, pos_ - start));
    skip();
    const bool call = pos_ < text_.size() && text_[pos_] == '(';
    if (call) {
      auto f = lookup_function(name);
      if (!f && (name == "pi" || name == "e" || std::find(vars_.begin(), vars_.end(), name) != vars_.end()))
        throw SyntaxError("implicit multiplication is not supported", pos_);
      if (!f) throw UnknownIdentifier(name, start);
      ++pos_;
      NodePtr arg = expression(0);
      skip();
      if (pos_ >= text_.size() || text_[pos_] != ')') throw SyntaxError("expected ')'", pos_);
      ++pos_;
      auto n = std::make_shared<Node>();
      n->kind = Node::Kind::Call;
      n->func = *f;
      n->depends_on_variables = arg->depends_on_variables;
      n->lhs = std::move(arg);
      return n;
    }
    if (lookup_function(name)) throw SyntaxError("function '" + name + "' requires '('", pos_);
    auto n = std::make_shared<Node>();
    if (name == "pi" || name == "e") {
      n->kind = Node::Kind::Constant;
      n->name = name;
      n->number = name == "pi" ? std::numbers::pi : std::numbers::e;
      return n;
    }
    auto it = std::find(vars_.begin(), vars_.end(), name);
    if (it == vars_.end()) throw UnknownIdentifier(name, start);
    n->kind = Node::Kind::Variable;
    n->name = name;
    n->slot = static_cast<std::size_t>(it - vars_.begin());
    n->depends_on_variables = true;
    return n;
  }

  std::string_view text_;
  const std::vector<std::string>& vars_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Immutable parsed expression over a declared, ordered variable list.
class Expression {
 public:
  Expression() = default;

  static Expression parse(std::string_view text, std::vector<std::string> variables) {
    for (const auto& v : variables)
      if (v == "pi" || v == "e" || detail::lookup_function(v))
        throw SyntaxError("reserved name '" + v + "' cannot be a variable", 0);
    Expression e;
    e.root_ = detail::Parser(text, variables).parse();
    e.variables_ = std::move(variables);
    e.text_ = std::string(text);
    return e;
  }

  const std::vector<std::string>& variables() const noexcept { return variables_; }
  const std::string& source() const noexcept { return text_; }
  bool empty() const noexcept { return !root_; }

  /// Fully parenthesized text that parses back to an equivalent expression.
  std::string str() const { return root_ ? detail::print(*root_) : std::string(); }

  /// Plain evaluation; `values` follow variables() order.
  double evaluate(std::span<const double> values) const { return jet(values, {}).value(); }

  /// Order-2 jet with respect to the variables listed (by index) in `active`.
  Jet2 jet(std::span<const double> values, std::span<const std::size_t> active) const {
    return eval(*root_, values, active);
  }

  /// Structural check used to recognise f(t) = e^t.
  bool is_exp_of_variable() const {
    using K = detail::Node::Kind;
    if (!root_) return false;
    if (root_->kind == K::Call && root_->func == Func::Exp && root_->lhs->kind == K::Variable) return true;
    return root_->kind == K::Pow && root_->lhs->kind == K::Constant && root_->lhs->name == "e" &&
           root_->rhs->kind == K::Variable;
  }

 private:
  static Jet2 eval(const detail::Node& n, std::span<const double> values, std::span<const std::size_t> active) {
    using K = detail::Node::Kind;
    const std::size_t dim = active.size();
    switch (n.kind) {
      case K::Number:
      case K::Constant: return Jet2::constant(n.number, dim);
      case K::Variable: {
        Jet2 j(dim, values[n.slot]);
        for (std::size_t i = 0; i < dim; ++i)
          if (active[i] == n.slot) j.set_first(i, 1.0);
        return j;
      }
      case K::Negate: return -eval(*n.lhs, values, active);
      case K::Add: return eval(*n.lhs, values, active) + eval(*n.rhs, values, active);
      case K::Sub: return eval(*n.lhs, values, active) - eval(*n.rhs, values, active);
      case K::Mul: return eval(*n.lhs, values, active) * eval(*n.rhs, values, active);
      case K::Div: {
        Jet2 den = eval(*n.rhs, values, active);
        if (den.value() == 0.0) throw DomainError("division by zero", detail::print(n));
        return eval(*n.lhs, values, active) / den;
      }
      case K::Pow: return power(n, values, active);
      case K::Call: return call(n, eval(*n.lhs, values, active));
    }
    return Jet2(dim);
  }

  static Jet2 power(const detail::Node& n, std::span<const double> values, std::span<const std::size_t> active) {
    Jet2 base = eval(*n.lhs, values, active);
    Jet2 exponent = eval(*n.rhs, values, active);
    const double k = exponent.value();
    if (!n.rhs->depends_on_variables && std::isfinite(k) && k == std::trunc(k) && std::abs(k) <= 1024.0) {
      if (k < 0 && base.value() == 0.0) throw DomainError("zero raised to a negative power", detail::print(n));
      return pow_int(base, static_cast<long long>(k));
    }
    if (!(base.value() > 0.0)) throw DomainError("non-integer power of a non-positive base", detail::print(n));
    return exp(exponent * log(base));
  }

  static Jet2 call(const detail::Node& n, const Jet2& a) {
    const double v = a.value();
    const bool has_derivatives = a.dim() > 0;
    switch (n.func) {
      case Func::Sin: return sin(a);
      case Func::Cos: return cos(a);
      case Func::Tan: return tan(a);
      case Func::Sinh: return sinh(a);
      case Func::Cosh: return cosh(a);
      case Func::Tanh: return tanh(a);
      case Func::Exp: return exp(a);
      case Func::Log:
        if (!(v > 0.0)) throw DomainError("log of a non-positive value", detail::print(n));
        return log(a);
      case Func::Sqrt:
        if (v < 0.0 || (v == 0.0 && has_derivatives)) throw DomainError("sqrt outside its differentiable domain", detail::print(n));
        return sqrt(a);
      case Func::Abs:
        if (v == 0.0 && has_derivatives) throw DomainError("abs is not differentiable at 0", detail::print(n));
        return abs(a);
    }
    return a;
  }

  std::shared_ptr<const detail::Node> root_;
  std::vector<std::string> variables_;
  std::string text_;
};

inline Expression parse(std::string_view text, std::vector<std::string> variables) {
  return Expression::parse(text, std::move(variables));
}

/// Evaluate with named bindings; `active` lists the variables to differentiate in order.
inline Jet2 eval_jet2(const Expression& expr, const std::map<std::string, double>& bindings,
                      const std::vector<std::string>& active) {
  const auto& vars = expr.variables();
  std::vector<double> values(vars.size(), 0.0);
  for (std::size_t i = 0; i < vars.size(); ++i) {
    auto it = bindings.find(vars[i]);
    if (it == bindings.end()) throw DomainError("unbound variable '" + vars[i] + "'");
    values[i] = it->second;
  }
  std::vector<std::size_t> slots;
  slots.reserve(active.size());
  for (const auto& a : active) {
    auto it = std::find(vars.begin(), vars.end(), a);
    if (it == vars.end()) throw DomainError("active variable '" + a + "' is not declared");
    slots.push_back(static_cast<std::size_t>(it - vars.begin()));
  }
  return expr.jet(values, slots);
}

}  // namespace warpsol
