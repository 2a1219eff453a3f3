#pragma once

#include <charconv>
#include <cmath>
#include <cstddef>
#include <memory>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace fuzzyds::expr {

class ParseError : public std::runtime_error {
public:
  ParseError(const std::string &msg, std::size_t position)
      : std::runtime_error(msg + " (at position " + std::to_string(position) +
                           ")"),
        position_(position) {}
  std::size_t position() const { return position_; }

private:
  std::size_t position_;
};

class EvalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

enum class NodeKind { number, identifier, negate, add, sub, mul, div, pow, call };
enum class FuncKind { sin, cos, exp, sqrt, abs };

struct Node;
using NodeRef = std::shared_ptr<const Node>;

struct Node {
  NodeKind kind;
  double value = 0.0;   // number nodes and pow exponents
  std::string name;     // identifier nodes
  FuncKind func = FuncKind::sin;
  NodeRef lhs, rhs;
};

class Expr {
public:
  Expr() = default;
  explicit Expr(NodeRef root) : root_(std::move(root)) {}
  const Node &root() const {
    if (!root_)
      throw std::logic_error("Expr: empty");
    return *root_;
  }
  bool empty() const { return !root_; }

private:
  NodeRef root_;
};

// name -> value map; pi is predefined unless overridden.
class Bindings {
public:
  Bindings() = default;
  Bindings(std::initializer_list<std::pair<std::string, double>> init) {
    for (auto &kv : init)
      set(kv.first, kv.second);
  }
  void set(const std::string &name, double value) {
    for (auto &kv : vars_)
      if (kv.first == name) {
        kv.second = value;
        return;
      }
    vars_.emplace_back(name, value);
  }
  std::optional<double> get(std::string_view name) const {
    for (const auto &kv : vars_)
      if (kv.first == name)
        return kv.second;
    if (name == "pi")
      return std::numbers::pi;
    return std::nullopt;
  }

private:
  std::vector<std::pair<std::string, double>> vars_;
};

namespace detail {

struct Parser {
  std::string_view src;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < src.size() && (src[pos] == ' ' || src[pos] == '\t' ||
                                src[pos] == '\n' || src[pos] == '\r'))
      ++pos;
  }
  char peek() {
    skip_ws();
    return pos < src.size() ? src[pos] : '\0';
  }
  bool consume(char c) {
    if (peek() == c) {
      ++pos;
      return true;
    }
    return false;
  }

  static bool is_ident_start(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
  }
  static bool is_ident_char(char c) {
    return is_ident_start(c) || (c >= '0' && c <= '9');
  }
  static bool is_digit(char c) { return c >= '0' && c <= '9'; }

  NodeRef make_number(double v) {
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::number;
    n->value = v;
    return n;
  }

  double parse_number_literal() {
    skip_ws();
    const std::size_t start = pos;
    std::size_t i = pos;
    while (i < src.size() && is_digit(src[i]))
      ++i;
    if (i < src.size() && src[i] == '.') {
      ++i;
      while (i < src.size() && is_digit(src[i]))
        ++i;
    }
    if (i == start || (i == start + 1 && src[start] == '.'))
      throw ParseError("expected a number", start);
    if (i < src.size() && (src[i] == 'e' || src[i] == 'E')) {
      std::size_t j = i + 1;
      if (j < src.size() && (src[j] == '+' || src[j] == '-'))
        ++j;
      if (j < src.size() && is_digit(src[j])) {
        while (j < src.size() && is_digit(src[j]))
          ++j;
        i = j;
      }
    }
    double value = 0.0;
    const auto res = std::from_chars(src.data() + start, src.data() + i, value);
    if (res.ec != std::errc{})
      throw ParseError("malformed number literal", start);
    pos = i;
    return value;
  }

  std::string parse_identifier() {
    skip_ws();
    const std::size_t start = pos;
    if (pos >= src.size() || !is_ident_start(src[pos]))
      throw ParseError("expected an identifier", pos);
    while (pos < src.size() && is_ident_char(src[pos]))
      ++pos;
    return std::string(src.substr(start, pos - start));
  }

  NodeRef parse_expr() {
    NodeRef lhs = parse_term();
    for (;;) {
      if (consume('+'))
        lhs = binary(NodeKind::add, lhs, parse_term());
      else if (consume('-'))
        lhs = binary(NodeKind::sub, lhs, parse_term());
      else
        return lhs;
    }
  }

  NodeRef parse_term() {
    NodeRef lhs = parse_factor();
    for (;;) {
      if (consume('*'))
        lhs = binary(NodeKind::mul, lhs, parse_factor());
      else if (consume('/'))
        lhs = binary(NodeKind::div, lhs, parse_factor());
      else
        return lhs;
    }
  }

  // unary minus binds looser than ^ : -x^2 is -(x^2)
  NodeRef parse_factor() {
    if (consume('-')) {
      auto n = std::make_shared<Node>();
      n->kind = NodeKind::negate;
      n->lhs = parse_factor();
      return n;
    }
    return parse_power();
  }

  NodeRef parse_power() {
    NodeRef base = parse_primary();
    if (consume('^')) {
      const std::size_t at = pos;
      double expo;
      if (consume('-'))
        expo = -parse_number_literal();
      else if (is_digit(peek()) || peek() == '.')
        expo = parse_number_literal();
      else
        throw ParseError("exponent must be a numeric literal", at);
      auto n = std::make_shared<Node>();
      n->kind = NodeKind::pow;
      n->lhs = base;
      n->rhs = make_number(expo);
      return n;
    }
    return base;
  }

  NodeRef parse_primary() {
    skip_ws();
    if (pos >= src.size())
      throw ParseError("unexpected end of expression", pos);
    const char c = src[pos];
    if (is_digit(c) || c == '.')
      return make_number(parse_number_literal());
    if (c == '(') {
      ++pos;
      NodeRef inner = parse_expr();
      if (!consume(')'))
        throw ParseError("expected ')'", pos);
      return inner;
    }
    if (is_ident_start(c)) {
      const std::size_t start = pos;
      std::string name = parse_identifier();
      if (peek() == '(') {
        FuncKind fk;
        if (name == "sin")
          fk = FuncKind::sin;
        else if (name == "cos")
          fk = FuncKind::cos;
        else if (name == "exp")
          fk = FuncKind::exp;
        else if (name == "sqrt")
          fk = FuncKind::sqrt;
        else if (name == "abs")
          fk = FuncKind::abs;
        else
          throw ParseError("unknown function '" + name + "'", start);
        ++pos; // '('
        NodeRef arg = parse_expr();
        if (!consume(')'))
          throw ParseError("expected ')' after function argument", pos);
        auto n = std::make_shared<Node>();
        n->kind = NodeKind::call;
        n->func = fk;
        n->lhs = arg;
        return n;
      }
      auto n = std::make_shared<Node>();
      n->kind = NodeKind::identifier;
      n->name = std::move(name);
      return n;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", pos);
  }

  static NodeRef binary(NodeKind k, NodeRef l, NodeRef r) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->lhs = std::move(l);
    n->rhs = std::move(r);
    return n;
  }
};

inline const char *func_name(FuncKind f) {
  switch (f) {
  case FuncKind::sin:
    return "sin";
  case FuncKind::cos:
    return "cos";
  case FuncKind::exp:
    return "exp";
  case FuncKind::sqrt:
    return "sqrt";
  case FuncKind::abs:
    return "abs";
  }
  return "?";
}

inline int precedence(const Node &n) {
  switch (n.kind) {
  case NodeKind::add:
  case NodeKind::sub:
    return 1;
  case NodeKind::mul:
  case NodeKind::div:
    return 2;
  case NodeKind::negate:
    return 3;
  case NodeKind::pow:
    return 4;
  default:
    return 5;
  }
}

inline std::string format_number(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline void print_node(const Node &n, std::string &out) {
  const auto child = [&](const Node &c, bool parens) {
    if (parens) {
      out += '(';
      print_node(c, out);
      out += ')';
    } else {
      print_node(c, out);
    }
  };
  switch (n.kind) {
  case NodeKind::number:
    out += format_number(n.value);
    break;
  case NodeKind::identifier:
    out += n.name;
    break;
  case NodeKind::negate:
    out += '-';
    child(*n.lhs, precedence(*n.lhs) < 3);
    break;
  case NodeKind::add:
  case NodeKind::sub:
  case NodeKind::mul:
  case NodeKind::div: {
    const int p = precedence(n);
    child(*n.lhs, precedence(*n.lhs) < p);
    out += (n.kind == NodeKind::add   ? '+'
            : n.kind == NodeKind::sub ? '-'
            : n.kind == NodeKind::mul ? '*'
                                      : '/');
    child(*n.rhs, precedence(*n.rhs) <= p);
    break;
  }
  case NodeKind::pow:
    child(*n.lhs, precedence(*n.lhs) < 5);
    out += '^';
    out += format_number(n.rhs->value);
    break;
  case NodeKind::call:
    out += func_name(n.func);
    out += '(';
    print_node(*n.lhs, out);
    out += ')';
    break;
  }
}

inline double eval_node(const Node &n, const Bindings &b);

inline std::string describe(const Node &n) {
  std::string s;
  print_node(n, s);
  return s;
}

inline double eval_node(const Node &n, const Bindings &b) {
  switch (n.kind) {
  case NodeKind::number:
    return n.value;
  case NodeKind::identifier: {
    const auto v = b.get(n.name);
    if (!v)
      throw EvalError("unbound identifier '" + n.name + "'");
    return *v;
  }
  case NodeKind::negate:
    return -eval_node(*n.lhs, b);
  case NodeKind::add:
    return eval_node(*n.lhs, b) + eval_node(*n.rhs, b);
  case NodeKind::sub:
    return eval_node(*n.lhs, b) - eval_node(*n.rhs, b);
  case NodeKind::mul:
    return eval_node(*n.lhs, b) * eval_node(*n.rhs, b);
  case NodeKind::div: {
    const double num = eval_node(*n.lhs, b);
    const double den = eval_node(*n.rhs, b);
    if (den == 0.0)
      throw EvalError("division by zero in '" + describe(n) + "'");
    return num / den;
  }
  case NodeKind::pow: {
    const double base = eval_node(*n.lhs, b);
    const double r = std::pow(base, n.rhs->value);
    if (std::isnan(r) && !std::isnan(base))
      throw EvalError("domain error in '" + describe(n) + "'");
    return r;
  }
  case NodeKind::call: {
    const double x = eval_node(*n.lhs, b);
    switch (n.func) {
    case FuncKind::sin:
      return std::sin(x);
    case FuncKind::cos:
      return std::cos(x);
    case FuncKind::exp:
      return std::exp(x);
    case FuncKind::sqrt:
      if (x < 0.0)
        throw EvalError("sqrt of a negative value in '" + describe(n) + "'");
      return std::sqrt(x);
    case FuncKind::abs:
      return std::fabs(x);
    }
    return 0.0;
  }
  }
  return 0.0;
}

inline bool equal_nodes(const Node &a, const Node &b) {
  if (a.kind != b.kind)
    return false;
  switch (a.kind) {
  case NodeKind::number:
    return a.value == b.value;
  case NodeKind::identifier:
    return a.name == b.name;
  case NodeKind::negate:
    return equal_nodes(*a.lhs, *b.lhs);
  case NodeKind::call:
    return a.func == b.func && equal_nodes(*a.lhs, *b.lhs);
  case NodeKind::pow:
    return a.rhs->value == b.rhs->value && equal_nodes(*a.lhs, *b.lhs);
  default:
    return equal_nodes(*a.lhs, *b.lhs) && equal_nodes(*a.rhs, *b.rhs);
  }
}

struct TrigInfo {
  bool known = false;
  int degree = 0;
  bool constant = false; // free of tau and of periodic variables
};

inline bool is_angle_name(const std::string &s) {
  return s == "theta" || s == "chi" || s == "phi";
}

inline TrigInfo trig_info(const Node &n) {
  switch (n.kind) {
  case NodeKind::number:
    return {true, 0, true};
  case NodeKind::identifier:
    if (is_angle_name(n.name))
      return {}; // a bare angle is not a trig polynomial
    if (n.name == "tau")
      return {true, 0, false};
    return {true, 0, true};
  case NodeKind::negate:
    return trig_info(*n.lhs);
  case NodeKind::add:
  case NodeKind::sub: {
    const TrigInfo a = trig_info(*n.lhs), b = trig_info(*n.rhs);
    if (!a.known || !b.known)
      return {};
    return {true, std::max(a.degree, b.degree), a.constant && b.constant};
  }
  case NodeKind::mul: {
    const TrigInfo a = trig_info(*n.lhs), b = trig_info(*n.rhs);
    if (!a.known || !b.known)
      return {};
    return {true, a.degree + b.degree, a.constant && b.constant};
  }
  case NodeKind::div: {
    const TrigInfo a = trig_info(*n.lhs), b = trig_info(*n.rhs);
    if (!a.known || !b.known || !b.constant)
      return {};
    return {true, a.degree, a.constant};
  }
  case NodeKind::pow: {
    const TrigInfo a = trig_info(*n.lhs);
    if (!a.known)
      return {};
    if (a.constant)
      return {true, 0, true};
    const double e = n.rhs->value;
    if (e >= 0.0 && e == std::floor(e))
      return {true, a.degree * int(e), false};
    return {};
  }
  case NodeKind::call: {
    const TrigInfo a = trig_info(*n.lhs);
    if (a.known && a.constant)
      return {true, 0, true};
    if ((n.func == FuncKind::sin || n.func == FuncKind::cos) &&
        n.lhs->kind == NodeKind::identifier && is_angle_name(n.lhs->name))
      return {true, 1, false};
    return {};
  }
  }
  return {};
}

inline void collect_identifiers(const Node &n, std::vector<std::string> &out) {
  switch (n.kind) {
  case NodeKind::identifier: {
    for (const auto &s : out)
      if (s == n.name)
        return;
    out.push_back(n.name);
    break;
  }
  case NodeKind::number:
    break;
  case NodeKind::negate:
  case NodeKind::call:
    collect_identifiers(*n.lhs, out);
    break;
  case NodeKind::pow:
    collect_identifiers(*n.lhs, out);
    break;
  default:
    collect_identifiers(*n.lhs, out);
    collect_identifiers(*n.rhs, out);
  }
}

} // namespace detail

inline Expr parse(std::string_view src) {
  detail::Parser p{src};
  NodeRef root = p.parse_expr();
  p.skip_ws();
  if (p.pos != src.size())
    throw ParseError("trailing input after expression", p.pos);
  return Expr(std::move(root));
}

inline double eval(const Expr &e, const Bindings &b) {
  return detail::eval_node(e.root(), b);
}

inline std::string to_string(const Expr &e) {
  std::string s;
  detail::print_node(e.root(), s);
  return s;
}

inline bool structurally_equal(const Expr &a, const Expr &b) {
  return detail::equal_nodes(a.root(), b.root());
}

// Total degree of e as a trigonometric polynomial in the periodic chart
// variables, when e is a polynomial in tau and in sin/cos of bare angles;
// nullopt otherwise.
inline std::optional<int> trig_degree(const Expr &e) {
  const detail::TrigInfo t = detail::trig_info(e.root());
  if (!t.known)
    return std::nullopt;
  return t.degree;
}

inline std::vector<std::string> identifiers(const Expr &e) {
  std::vector<std::string> out;
  detail::collect_identifiers(e.root(), out);
  return out;
}

} // namespace fuzzyds::expr
