#include "stlflow/logictree.hpp"

#include <algorithm>
#include <map>

#include <nlohmann/json.hpp>

namespace stlflow {

int LogicTree::leaf_count() const {
  return static_cast<int>(
      std::count_if(nodes.begin(), nodes.end(),
                    [](const Node& n) { return n.is_leaf; }));
}

int LogicTree::internal_count() const {
  return node_count() - leaf_count();
}

int LogicTree::pi_index_of(const std::string& predicate, int time) const {
  auto it = std::lower_bound(pi.begin(), pi.end(),
                             std::make_pair(predicate, time));
  if (it == pi.end() || it->first != predicate || it->second != time) {
    throw EncodeError("timed predicate not in tree: " + predicate + "@" +
                      std::to_string(time));
  }
  return static_cast<int>(it - pi.begin());
}

namespace {

int copy_node(const GroundedFormula& g, int gid, LogicTree& t) {
  const auto& src = g.at(gid);
  LogicTree::Node node;
  if (src.kind == GroundedFormula::Kind::Literal) {
    node.is_leaf = true;
    node.literal = src.literal;
    node.pi_index = t.pi_index_of(src.literal.predicate, src.literal.time);
  } else {
    node.combo = src.kind == GroundedFormula::Kind::And
                     ? LogicTree::Combo::And
                     : LogicTree::Combo::Or;
    node.children.reserve(src.children.size());
    for (int child : src.children) {
      node.children.push_back(copy_node(g, child, t));
    }
  }
  t.nodes.push_back(std::move(node));
  return static_cast<int>(t.nodes.size()) - 1;
}

}  // namespace

LogicTree build_logic_tree(const GroundedFormula& g) {
  if (g.root < 0) {
    throw EncodeError("cannot build a logic tree from an empty grounding");
  }
  LogicTree t;
  t.pi = g.unique_timed_predicates();
  int top = copy_node(g, g.root, t);
  if (t.at(top).is_leaf) {
    // Bare literal: wrap in a single-child AND so the root is internal.
    LogicTree::Node wrapper;
    wrapper.combo = LogicTree::Combo::And;
    wrapper.children.push_back(top);
    t.nodes.push_back(std::move(wrapper));
    top = static_cast<int>(t.nodes.size()) - 1;
  }
  t.root = top;
  return t;
}

std::string lt_var_name(int id) { return "lt" + std::to_string(id); }

namespace {

// The value of a child as an affine term: coefficient * var + offset.
struct ChildTerm {
  std::string var;
  double coef = 1.0;
  double offset = 0.0;
};

ChildTerm child_term(const LogicTree& t, int id) {
  const auto& node = t.at(id);
  if (!node.is_leaf) {
    return {lt_var_name(id), 1.0, 0.0};
  }
  const std::string z = z_var_name(node.literal.predicate, node.literal.time);
  if (node.literal.positive) {
    return {z, 1.0, 0.0};
  }
  return {z, -1.0, 1.0};  // 1 - z
}

}  // namespace

ConstraintFragment encode_tree(const LogicTree& t,
                               const TreeEncodeOptions& options) {
  ConstraintFragment frag;
  for (const auto& [pred, time] : t.pi) {
    frag.declare(z_var_name(pred, time), 0.0, 1.0, VarKind::Binary);
  }
  for (int id = 0; id < t.node_count(); ++id) {
    if (!t.at(id).is_leaf) {
      frag.declare(lt_var_name(id), 0.0, 1.0, VarKind::Continuous);
    }
  }
  for (int id = 0; id < t.node_count(); ++id) {
    const auto& node = t.at(id);
    if (node.is_leaf) continue;
    const std::string zphi = lt_var_name(id);
    const int arity = static_cast<int>(node.children.size());
    if (node.combo == LogicTree::Combo::And) {
      // z <= z_i for each child.
      for (int child : node.children) {
        ChildTerm term = child_term(t, child);
        frag.add({{zphi, 1.0}, {term.var, -term.coef}}, Rel::Le, term.offset,
                 "and_upper");
      }
      // z >= 1 - p + sum z_i.
      std::vector<std::pair<std::string, double>> terms{{zphi, 1.0}};
      double rhs = 1.0 - arity;
      for (int child : node.children) {
        ChildTerm term = child_term(t, child);
        terms.emplace_back(term.var, -term.coef);
        rhs += term.offset;
      }
      frag.add(std::move(terms), Rel::Ge, rhs, "and_lower");
    } else {
      // z >= z_i for each child.
      for (int child : node.children) {
        ChildTerm term = child_term(t, child);
        frag.add({{zphi, 1.0}, {term.var, -term.coef}}, Rel::Ge, term.offset,
                 "or_lower");
      }
      // z <= sum z_i.
      std::vector<std::pair<std::string, double>> terms{{zphi, 1.0}};
      double rhs = 0.0;
      for (int child : node.children) {
        ChildTerm term = child_term(t, child);
        terms.emplace_back(term.var, -term.coef);
        rhs += term.offset;
      }
      frag.add(std::move(terms), Rel::Le, rhs, "or_upper");
    }
  }
  if (options.pin_root) {
    frag.add({{lt_var_name(t.root), 1.0}}, Rel::Eq, 1.0, "root");
  }
  return frag;
}

nlohmann::json tree_to_json(const LogicTree& t) {
  nlohmann::json nodes = nlohmann::json::array();
  for (int id = 0; id < t.node_count(); ++id) {
    const auto& node = t.at(id);
    nlohmann::json j;
    j["id"] = id;
    if (node.is_leaf) {
      j["type"] = "leaf";
      j["literal"] = {{"predicate", node.literal.predicate},
                      {"time", node.literal.time},
                      {"positive", node.literal.positive}};
    } else {
      j["type"] = "internal";
      j["combo"] = node.combo == LogicTree::Combo::And ? "and" : "or";
      j["children"] = node.children;
    }
    nodes.push_back(std::move(j));
  }
  return nlohmann::json{{"root", t.root}, {"nodes", std::move(nodes)}};
}

}  // namespace stlflow
