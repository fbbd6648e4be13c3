#include "stlflow/formula.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace stlflow {

void validate_predicate_table(const std::vector<PredicateDef>& table,
                              int state_dim) {
  std::set<std::string> seen;
  for (const auto& def : table) {
    if (def.name.empty()) {
      throw SemanticError("predicate with empty name");
    }
    if (!seen.insert(def.name).second) {
      throw SemanticError("duplicate predicate name: " + def.name);
    }
    if (static_cast<int>(def.a.size()) != state_dim) {
      throw SemanticError("predicate " + def.name + " has " +
                          std::to_string(def.a.size()) +
                          " coefficients, expected " +
                          std::to_string(state_dim));
    }
  }
}

// ---------------------------------------------------------------------------
// AST construction

Formula Formula::atom(std::string name) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::Atom;
  node->atom = std::move(name);
  return Formula(std::move(node));
}

Formula Formula::negation(Formula f) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::Not;
  node->children.push_back(std::move(f));
  return Formula(std::move(node));
}

namespace {

// Associative flattening: same-kind children are spliced in place.
std::vector<Formula> flatten_children(Formula::Kind kind,
                                      std::vector<Formula> children) {
  if (children.empty()) {
    throw SemanticError("conjunction/disjunction must have children");
  }
  std::vector<Formula> flat;
  flat.reserve(children.size());
  for (auto& child : children) {
    if (child.kind() == kind) {
      for (const auto& grandchild : child.children()) {
        flat.push_back(grandchild);
      }
    } else {
      flat.push_back(std::move(child));
    }
  }
  return flat;
}

}  // namespace

Formula Formula::conjunction(std::vector<Formula> children) {
  auto flat = flatten_children(Kind::And, std::move(children));
  if (flat.size() == 1) return flat.front();
  auto node = std::make_shared<Node>();
  node->kind = Kind::And;
  node->children = std::move(flat);
  return Formula(std::move(node));
}

Formula Formula::disjunction(std::vector<Formula> children) {
  auto flat = flatten_children(Kind::Or, std::move(children));
  if (flat.size() == 1) return flat.front();
  auto node = std::make_shared<Node>();
  node->kind = Kind::Or;
  node->children = std::move(flat);
  return Formula(std::move(node));
}

Formula Formula::eventually(TimeInterval window, Formula f) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::Eventually;
  node->window = window;
  node->children.push_back(std::move(f));
  return Formula(std::move(node));
}

Formula Formula::always(TimeInterval window, Formula f) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::Always;
  node->window = window;
  node->children.push_back(std::move(f));
  return Formula(std::move(node));
}

Formula Formula::until(TimeInterval window, Formula lhs, Formula rhs) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::Until;
  node->window = window;
  node->children.push_back(std::move(lhs));
  node->children.push_back(std::move(rhs));
  return Formula(std::move(node));
}

bool Formula::operator==(const Formula& other) const {
  if (node_ == other.node_) return true;
  if (kind() != other.kind()) return false;
  switch (kind()) {
    case Kind::Atom:
      return atom_name() == other.atom_name();
    case Kind::Eventually:
    case Kind::Always:
    case Kind::Until:
      if (!(window() == other.window())) return false;
      break;
    default:
      break;
  }
  const auto& a = children();
  const auto& b = other.children();
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i) {
    if (!(a[i] == b[i])) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Parser

namespace {

class Parser {
 public:
  Parser(const std::string& text, const std::set<std::string>& table)
      : text_(text), table_(table) {}

  Formula parse() {
    Formula f = parse_formula();
    skip_ws();
    if (pos_ != text_.size()) {
      fail("trailing input after formula");
    }
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, pos_);
  }

  void skip_ws() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  void expect(char c) {
    if (peek() != c) {
      fail(std::string("expected '") + c + "'");
    }
    ++pos_;
  }

  int parse_int() {
    skip_ws();
    size_t start = pos_;
    while (pos_ < text_.size() &&
           std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
    if (pos_ == start) {
      fail("expected integer");
    }
    return std::stoi(text_.substr(start, pos_ - start));
  }

  TimeInterval parse_window() {
    expect('[');
    int lo = parse_int();
    skip_ws();
    expect(',');
    int hi = parse_int();
    skip_ws();
    expect(']');
    if (hi < lo) {
      fail("malformed interval: lower bound exceeds upper bound");
    }
    return TimeInterval(lo, hi);
  }

  std::string parse_identifier() {
    size_t start = pos_;
    auto is_ident = [](char c) {
      return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    };
    if (pos_ >= text_.size() || (!std::isalpha(static_cast<unsigned char>(text_[pos_])) && text_[pos_] != '_')) {
      fail("expected formula");
    }
    while (pos_ < text_.size() && is_ident(text_[pos_])) {
      ++pos_;
    }
    return text_.substr(start, pos_ - start);
  }

  Formula parse_formula() {
    skip_ws();
    char c = peek();
    if (c == '!') {
      ++pos_;
      return Formula::negation(parse_formula());
    }
    if ((c == 'F' || c == 'G') && pos_ + 1 < text_.size() &&
        text_[pos_ + 1] == '[') {
      ++pos_;
      TimeInterval window = parse_window();
      Formula body = parse_formula();
      return c == 'F' ? Formula::eventually(window, std::move(body))
                      : Formula::always(window, std::move(body));
    }
    if (c == '(') {
      return parse_group();
    }
    size_t atom_pos = pos_;
    std::string name = parse_identifier();
    if (!table_.contains(name)) {
      throw ParseError("unknown predicate name: " + name, atom_pos);
    }
    return Formula::atom(std::move(name));
  }

  Formula parse_group() {
    expect('(');
    Formula first = parse_formula();
    skip_ws();
    if (peek() == ')') {
      ++pos_;
      return first;  // transparent grouping
    }
    if (peek() == 'U' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '[') {
      ++pos_;
      TimeInterval window = parse_window();
      Formula rhs = parse_formula();
      skip_ws();
      if (peek() == 'U') {
        fail("until is binary; nest additional untils in parentheses");
      }
      expect(')');
      return Formula::until(window, std::move(first), std::move(rhs));
    }
    char op = peek();
    if (op != '&' && op != '|') {
      fail("expected '&', '|', 'U[', or ')'");
    }
    std::vector<Formula> children;
    children.push_back(std::move(first));
    while (true) {
      skip_ws();
      char c = peek();
      if (c == ')') {
        ++pos_;
        break;
      }
      if (c != op) {
        if (c == '&' || c == '|' || c == 'U') {
          fail("mixed operators in one group; parenthesize to disambiguate");
        }
        fail(std::string("expected '") + op + "' or ')'");
      }
      ++pos_;
      children.push_back(parse_formula());
    }
    return op == '&' ? Formula::conjunction(std::move(children))
                     : Formula::disjunction(std::move(children));
  }

  const std::string& text_;
  const std::set<std::string>& table_;
  size_t pos_ = 0;
};

}  // namespace

Formula parse_stl(const std::string& text,
                  const std::set<std::string>& predicate_table) {
  return Parser(text, predicate_table).parse();
}

// ---------------------------------------------------------------------------
// Printer

namespace {

void print_window(std::string& out, const TimeInterval& w) {
  out += '[';
  out += std::to_string(w.lo);
  out += ',';
  out += std::to_string(w.hi);
  out += ']';
}

void print_formula(std::string& out, const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Atom:
      out += f.atom_name();
      return;
    case Formula::Kind::Not:
      out += '!';
      print_formula(out, f.children().front());
      return;
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      const char* op = f.kind() == Formula::Kind::And ? " & " : " | ";
      out += '(';
      for (size_t i = 0; i < f.children().size(); ++i) {
        if (i > 0) out += op;
        print_formula(out, f.children()[i]);
      }
      out += ')';
      return;
    }
    case Formula::Kind::Eventually:
    case Formula::Kind::Always:
      out += f.kind() == Formula::Kind::Eventually ? 'F' : 'G';
      print_window(out, f.window());
      print_formula(out, f.children().front());
      return;
    case Formula::Kind::Until:
      out += '(';
      print_formula(out, f.children()[0]);
      out += " U";
      print_window(out, f.window());
      out += ' ';
      print_formula(out, f.children()[1]);
      out += ')';
      return;
  }
}

}  // namespace

std::string to_string(const Formula& f) {
  std::string out;
  print_formula(out, f);
  return out;
}

// ---------------------------------------------------------------------------
// Negation normal form

namespace {

Formula nnf_rec(const Formula& f, bool negated) {
  switch (f.kind()) {
    case Formula::Kind::Atom:
      return negated ? Formula::negation(f) : f;
    case Formula::Kind::Not:
      return nnf_rec(f.children().front(), !negated);
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      std::vector<Formula> children;
      children.reserve(f.children().size());
      for (const auto& child : f.children()) {
        children.push_back(nnf_rec(child, negated));
      }
      bool make_and = (f.kind() == Formula::Kind::And) != negated;
      return make_and ? Formula::conjunction(std::move(children))
                      : Formula::disjunction(std::move(children));
    }
    case Formula::Kind::Eventually: {
      Formula body = nnf_rec(f.children().front(), negated);
      return negated ? Formula::always(f.window(), std::move(body))
                     : Formula::eventually(f.window(), std::move(body));
    }
    case Formula::Kind::Always: {
      Formula body = nnf_rec(f.children().front(), negated);
      return negated ? Formula::eventually(f.window(), std::move(body))
                     : Formula::always(f.window(), std::move(body));
    }
    case Formula::Kind::Until: {
      if (negated) {
        throw SemanticError(
            "cannot negate until subformula " + to_string(f) +
            ": the validity semantics define no dual for until");
      }
      return Formula::until(f.window(), nnf_rec(f.children()[0], false),
                            nnf_rec(f.children()[1], false));
    }
  }
  throw SemanticError("unreachable formula kind");
}

}  // namespace

Formula to_nnf(const Formula& f) { return nnf_rec(f, false); }

// ---------------------------------------------------------------------------
// Grounding

namespace {

class Grounder {
 public:
  Grounder(int horizon) : horizon_(horizon) {}

  GroundedFormula run(const Formula& f, int t0) {
    GroundedFormula g;
    g.root = build(g, f, t0);
    return g;
  }

 private:
  int add_literal(GroundedFormula& g, std::string pred, int time,
                  bool positive) {
    GroundedFormula::Node node;
    node.kind = GroundedFormula::Kind::Literal;
    node.literal = TimedLiteral{std::move(pred), time, positive};
    g.nodes.push_back(std::move(node));
    return static_cast<int>(g.nodes.size()) - 1;
  }

  // Flattens same-kind children and collapses single-child nodes.
  int add_internal(GroundedFormula& g, GroundedFormula::Kind kind,
                   std::vector<int> children) {
    if (children.size() == 1) {
      return children.front();
    }
    std::vector<int> flat;
    flat.reserve(children.size());
    for (int id : children) {
      if (g.at(id).kind == kind) {
        for (int grandchild : g.at(id).children) {
          flat.push_back(grandchild);
        }
      } else {
        flat.push_back(id);
      }
    }
    GroundedFormula::Node node;
    node.kind = kind;
    node.children = std::move(flat);
    g.nodes.push_back(std::move(node));
    return static_cast<int>(g.nodes.size()) - 1;
  }

  void check_reach(const Formula& f, int reach) const {
    if (reach > horizon_) {
      throw SemanticError("operator " + to_string(f) +
                          " reaches timestep " + std::to_string(reach) +
                          " past horizon " + std::to_string(horizon_) +
                          "; need horizon >= " + std::to_string(reach));
    }
  }

  int build(GroundedFormula& g, const Formula& f, int t0) {
    switch (f.kind()) {
      case Formula::Kind::Atom:
        check_reach(f, t0);
        return add_literal(g, f.atom_name(), t0, true);
      case Formula::Kind::Not: {
        const Formula& inner = f.children().front();
        if (inner.kind() != Formula::Kind::Atom) {
          throw SemanticError("grounding requires NNF input; found negation " +
                              to_string(f));
        }
        check_reach(f, t0);
        return add_literal(g, inner.atom_name(), t0, false);
      }
      case Formula::Kind::And:
      case Formula::Kind::Or: {
        std::vector<int> ids;
        ids.reserve(f.children().size());
        for (const auto& child : f.children()) {
          ids.push_back(build(g, child, t0));
        }
        auto kind = f.kind() == Formula::Kind::And ? GroundedFormula::Kind::And
                                                   : GroundedFormula::Kind::Or;
        return add_internal(g, kind, std::move(ids));
      }
      case Formula::Kind::Eventually:
      case Formula::Kind::Always: {
        check_reach(f, t0 + f.window().hi);
        std::vector<int> ids;
        ids.reserve(static_cast<size_t>(f.window().hi - f.window().lo + 1));
        for (int t = t0 + f.window().lo; t <= t0 + f.window().hi; ++t) {
          ids.push_back(build(g, f.children().front(), t));
        }
        auto kind = f.kind() == Formula::Kind::Eventually
                        ? GroundedFormula::Kind::Or
                        : GroundedFormula::Kind::And;
        return add_internal(g, kind, std::move(ids));
      }
      case Formula::Kind::Until: {
        check_reach(f, t0 + f.window().hi);
        // Witness time t' for the right operand; the left operand holds on
        // every step in [t0+lo, t'].
        std::vector<int> witnesses;
        for (int tw = t0 + f.window().lo; tw <= t0 + f.window().hi; ++tw) {
          std::vector<int> parts;
          parts.push_back(build(g, f.children()[1], tw));
          for (int t = t0 + f.window().lo; t <= tw; ++t) {
            parts.push_back(build(g, f.children()[0], t));
          }
          witnesses.push_back(
              add_internal(g, GroundedFormula::Kind::And, std::move(parts)));
        }
        return add_internal(g, GroundedFormula::Kind::Or,
                            std::move(witnesses));
      }
    }
    throw SemanticError("unreachable formula kind");
  }

  int horizon_;
};

}  // namespace

GroundedFormula ground(const Formula& f, int t0, int horizon) {
  if (t0 < 0 || horizon < t0) {
    throw SemanticError("grounding needs 0 <= t0 <= horizon");
  }
  return Grounder(horizon).run(f, t0);
}

int GroundedFormula::literal_count() const {
  int count = 0;
  for (const auto& node : nodes) {
    if (node.kind == Kind::Literal) ++count;
  }
  return count;
}

std::vector<std::pair<std::string, int>>
GroundedFormula::unique_timed_predicates() const {
  std::set<std::pair<std::string, int>> unique;
  for (const auto& node : nodes) {
    if (node.kind == Kind::Literal) {
      unique.emplace(node.literal.predicate, node.literal.time);
    }
  }
  return {unique.begin(), unique.end()};
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

bool eval_rec(const GroundedFormula& g, int id,
              const std::function<bool(const std::string&, int)>& truth) {
  const auto& node = g.at(id);
  switch (node.kind) {
    case GroundedFormula::Kind::Literal: {
      bool value = truth(node.literal.predicate, node.literal.time);
      return node.literal.positive ? value : !value;
    }
    case GroundedFormula::Kind::And:
      for (int child : node.children) {
        if (!eval_rec(g, child, truth)) return false;
      }
      return true;
    case GroundedFormula::Kind::Or:
      for (int child : node.children) {
        if (eval_rec(g, child, truth)) return true;
      }
      return false;
  }
  throw SemanticError("unreachable grounded node kind");
}

}  // namespace

bool evaluate(const GroundedFormula& g,
              const std::function<bool(const std::string&, int)>& truth) {
  if (g.root < 0) {
    throw SemanticError("grounded formula has no root");
  }
  return eval_rec(g, g.root, truth);
}

bool evaluate(const GroundedFormula& g, const SignalMap& signal) {
  return evaluate(g, [&signal](const std::string& pred, int time) {
    auto it = signal.find({pred, time});
    if (it == signal.end()) {
      throw SemanticError("signal missing entry for " + pred + "@" +
                          std::to_string(time));
    }
    return it->second;
  });
}

}  // namespace stlflow
