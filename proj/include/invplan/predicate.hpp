#pragma once

#include "invplan/agent.hpp"

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace invplan {

// Names a predicate may refer to: restaurant ids, utility dimension names and
// chain names, each resolving to a set of restaurant indices.
using NameTable = std::map<std::string, std::vector<int>, std::less<>>;

// A numeric quantity of a hypothesis:
//   U(X) Uimm(X) Udel(X)  total / immediate / delayed utility; max over X's restaurants
//   popen(X)              agent prior probability that X is open; max over X's restaurants
//   k  alpha  type        type evaluates to 0 NonDiscounting, 1 Naive, 2 Sophisticated
class Field {
 public:
  enum class Kind { Total, Immediate, Delayed, OpenProb, K, Alpha, Type };

  Field(Kind kind, std::vector<int> restaurants, std::string text)
      : kind_(kind), restaurants_(std::move(restaurants)), text_(std::move(text)) {}

  double value(const AgentParams& p) const;
  Kind kind() const { return kind_; }
  const std::string& text() const { return text_; }
  // Display label for a value of this field.
  std::string label(double value) const;

 private:
  Kind kind_;
  std::vector<int> restaurants_;
  std::string text_;
};

// Parses a single field such as "U(Veg)" or "alpha". Throws ParseError for
// malformed text and UnknownDimensionError for names missing from `names`.
Field parse_field(std::string_view text, const NameTable& names);

// Boolean expression over fields:
//   expr  := or ; or := and ('||' and)* ; and := unary ('&&' unary)*
//   unary := '!' unary | '(' expr ')' | 'true' | 'false' | 'prefers(' X ',' Y ')' | cmp
//   cmp   := operand ('<' | '<=' | '>' | '>=' | '==' | '!=') operand
//   operand := number | field | Naive | Sophisticated | NonDiscounting
// prefers(X, Y) is U(X) > U(Y).
class Predicate {
 public:
  struct Node;

  Predicate() = default;
  Predicate(std::shared_ptr<const Node> root, std::string text) : root_(std::move(root)), text_(std::move(text)) {}

  bool operator()(const AgentParams& p) const;
  const std::string& text() const { return text_; }

 private:
  std::shared_ptr<const Node> root_;
  std::string text_;
};

Predicate parse_predicate(std::string_view text, const NameTable& names);

struct PropertyPredicate {
  std::string name;
  Predicate test;
};

}  // namespace invplan
