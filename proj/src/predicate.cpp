#include "invplan/predicate.hpp"

#include "invplan/error.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <iomanip>
#include <limits>
#include <optional>
#include <sstream>
#include <variant>

namespace invplan {

double Field::value(const AgentParams& p) const {
  double best = -std::numeric_limits<double>::infinity();
  switch (kind_) {
    case Kind::K: return p.k;
    case Kind::Alpha: return p.alpha;
    case Kind::Type: return static_cast<double>(static_cast<int>(p.type));
    case Kind::Total:
      for (int r : restaurants_) best = std::max(best, p.utilities.immediate[r] + p.utilities.delayed[r]);
      return best;
    case Kind::Immediate:
      for (int r : restaurants_) best = std::max(best, p.utilities.immediate[r]);
      return best;
    case Kind::Delayed:
      for (int r : restaurants_) best = std::max(best, p.utilities.delayed[r]);
      return best;
    case Kind::OpenProb:
      for (int r : restaurants_) best = std::max(best, p.prior.prob_open(r));
      return best;
  }
  return best;
}

std::string Field::label(double value) const {
  if (kind_ == Kind::Type) return std::string(to_string(static_cast<AgentType>(static_cast<int>(value))));
  std::ostringstream out;
  out << std::setprecision(12) << value;
  return out.str();
}

struct Predicate::Node {
  enum class Op { And, Or, Not, Const, Less, LessEq, Greater, GreaterEq, Equal, NotEqual };
  using Operand = std::variant<double, Field>;

  Op op = Op::Const;
  bool constant = false;
  std::shared_ptr<const Node> lhs, rhs;
  std::optional<Operand> a, b;

  static double eval(const Operand& o, const AgentParams& p) {
    if (const double* d = std::get_if<double>(&o)) return *d;
    return std::get<Field>(o).value(p);
  }

  bool eval(const AgentParams& p) const {
    switch (op) {
      case Op::Const: return constant;
      case Op::And: return lhs->eval(p) && rhs->eval(p);
      case Op::Or: return lhs->eval(p) || rhs->eval(p);
      case Op::Not: return !lhs->eval(p);
      default: break;
    }
    const double x = eval(*a, p);
    const double y = eval(*b, p);
    switch (op) {
      case Op::Less: return x < y;
      case Op::LessEq: return x <= y;
      case Op::Greater: return x > y;
      case Op::GreaterEq: return x >= y;
      case Op::Equal: return x == y;
      case Op::NotEqual: return x != y;
      default: return false;
    }
  }
};

bool Predicate::operator()(const AgentParams& p) const { return root_ && root_->eval(p); }

namespace {

struct Token {
  enum class Kind { Ident, Number, Symbol, End } kind;
  std::string text;
  double number = 0.0;
  std::size_t pos = 0;
};

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_' || s[i] == '-')) ++i;
      out.push_back({Token::Kind::Ident, std::string(s.substr(start, i - start)), 0.0, start});
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.' ||
        (c == '-' && i + 1 < s.size() && (std::isdigit(static_cast<unsigned char>(s[i + 1])) || s[i + 1] == '.'))) {
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(s.data() + i, s.data() + s.size(), v);
      if (ec != std::errc()) throw ParseError("malformed number at offset " + std::to_string(i));
      i = static_cast<std::size_t>(ptr - s.data());
      out.push_back({Token::Kind::Number, std::string(s.substr(start, i - start)), v, start});
      continue;
    }
    static constexpr std::string_view kTwo[] = {"<=", ">=", "==", "!=", "&&", "||"};
    bool matched = false;
    for (std::string_view sym : kTwo) {
      if (s.substr(i, 2) == sym) {
        out.push_back({Token::Kind::Symbol, std::string(sym), 0.0, start});
        i += 2;
        matched = true;
        break;
      }
    }
    if (matched) continue;
    if (std::string_view("<>!(),").find(c) != std::string_view::npos) {
      out.push_back({Token::Kind::Symbol, std::string(1, c), 0.0, start});
      ++i;
      continue;
    }
    throw ParseError("unexpected character '" + std::string(1, c) + "' at offset " + std::to_string(i));
  }
  out.push_back({Token::Kind::End, "", 0.0, s.size()});
  return out;
}

using Node = Predicate::Node;
using NodePtr = std::shared_ptr<const Node>;

class Parser {
 public:
  Parser(std::string_view text, const NameTable& names) : tokens_(tokenize(text)), names_(names) {}

  NodePtr parse_expression() {
    NodePtr n = parse_or();
    expect_end();
    return n;
  }

  Field parse_single_field() {
    auto f = try_field();
    if (!f) fail("expected a field");
    expect_end();
    return *f;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  bool accept(std::string_view sym) {
    if (peek().kind == Token::Kind::Symbol && peek().text == sym) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(std::string_view sym) {
    if (!accept(sym)) fail("expected '" + std::string(sym) + "'");
  }
  void expect_end() {
    if (peek().kind != Token::Kind::End) fail("unexpected trailing input");
  }
  [[noreturn]] void fail(const std::string& what) const {
    const Token& t = peek();
    throw ParseError(what + " at offset " + std::to_string(t.pos) + (t.text.empty() ? "" : " near '" + t.text + "'"));
  }

  static NodePtr binary(Node::Op op, NodePtr l, NodePtr r) {
    auto n = std::make_shared<Node>();
    n->op = op;
    n->lhs = std::move(l);
    n->rhs = std::move(r);
    return n;
  }

  NodePtr parse_or() {
    NodePtr l = parse_and();
    while (accept("||")) l = binary(Node::Op::Or, l, parse_and());
    return l;
  }

  NodePtr parse_and() {
    NodePtr l = parse_unary();
    while (accept("&&")) l = binary(Node::Op::And, l, parse_unary());
    return l;
  }

  NodePtr parse_unary() {
    if (accept("!")) return binary(Node::Op::Not, parse_unary(), nullptr);
    if (accept("(")) {
      NodePtr inner = parse_or();
      expect(")");
      return inner;
    }
    if (peek().kind == Token::Kind::Ident && (peek().text == "true" || peek().text == "false")) {
      auto n = std::make_shared<Node>();
      n->op = Node::Op::Const;
      n->constant = peek().text == "true";
      ++pos_;
      return n;
    }
    if (peek().kind == Token::Kind::Ident && peek().text == "prefers") {
      ++pos_;
      expect("(");
      const std::string x = name();
      expect(",");
      const std::string y = name();
      expect(")");
      auto n = std::make_shared<Node>();
      n->op = Node::Op::Greater;
      n->a = Field(Field::Kind::Total, resolve(x), "U(" + x + ")");
      n->b = Field(Field::Kind::Total, resolve(y), "U(" + y + ")");
      return n;
    }
    return parse_comparison();
  }

  NodePtr parse_comparison() {
    auto lhs = operand();
    static const std::pair<std::string_view, Node::Op> kOps[] = {
        {"<=", Node::Op::LessEq}, {">=", Node::Op::GreaterEq}, {"==", Node::Op::Equal},
        {"!=", Node::Op::NotEqual}, {"<", Node::Op::Less},     {">", Node::Op::Greater}};
    std::optional<Node::Op> op;
    for (const auto& [sym, o] : kOps) {
      if (accept(sym)) {
        op = o;
        break;
      }
    }
    if (!op) fail("expected a comparison operator");
    auto rhs = operand();
    const bool lt = is_type(lhs.first), rt = is_type(rhs.first);
    if (lt != rt || ((lt || rt) && *op != Node::Op::Equal && *op != Node::Op::NotEqual)) {
      throw ParseError("'type' may only be compared with == or != against an agent type name");
    }
    auto n = std::make_shared<Node>();
    n->op = *op;
    n->a = std::move(lhs.second);
    n->b = std::move(rhs.second);
    return n;
  }

  // Second member: the operand; first: whether it is type-valued.
  std::pair<int, Node::Operand> operand() {
    const Token& t = peek();
    if (t.kind == Token::Kind::Number) {
      ++pos_;
      return {0, t.number};
    }
    if (t.kind == Token::Kind::Ident) {
      if (auto type = parse_agent_type(t.text)) {
        ++pos_;
        return {1, static_cast<double>(static_cast<int>(*type))};
      }
      if (auto f = try_field()) return {f->kind() == Field::Kind::Type ? 1 : 0, *f};
    }
    fail("expected a number, field or agent type");
  }

  static bool is_type(int flag) { return flag == 1; }

  std::optional<Field> try_field() {
    const Token& t = peek();
    if (t.kind != Token::Kind::Ident) return std::nullopt;
    const std::string word = t.text;
    if (word == "k") {
      ++pos_;
      return Field(Field::Kind::K, {}, "k");
    }
    if (word == "alpha") {
      ++pos_;
      return Field(Field::Kind::Alpha, {}, "alpha");
    }
    if (word == "type") {
      ++pos_;
      return Field(Field::Kind::Type, {}, "type");
    }
    std::optional<Field::Kind> kind;
    if (word == "U") kind = Field::Kind::Total;
    if (word == "Uimm") kind = Field::Kind::Immediate;
    if (word == "Udel") kind = Field::Kind::Delayed;
    if (word == "popen") kind = Field::Kind::OpenProb;
    if (!kind) throw UnknownDimensionError("unknown field '" + word + "'");
    ++pos_;
    expect("(");
    const std::string x = name();
    expect(")");
    return Field(*kind, resolve(x), word + "(" + x + ")");
  }

  std::string name() {
    if (peek().kind != Token::Kind::Ident) fail("expected a name");
    return tokens_[pos_++].text;
  }

  std::vector<int> resolve(const std::string& n) const {
    auto it = names_.find(n);
    if (it == names_.end()) throw UnknownDimensionError("unknown restaurant, chain or dimension '" + n + "'");
    return it->second;
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  const NameTable& names_;
};

}  // namespace

Field parse_field(std::string_view text, const NameTable& names) {
  Parser p(text, names);
  return p.parse_single_field();
}

Predicate parse_predicate(std::string_view text, const NameTable& names) {
  Parser p(text, names);
  return Predicate(p.parse_expression(), std::string(text));
}

}  // namespace invplan
