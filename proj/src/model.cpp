#include "stlflow/model.hpp"

#include <cmath>
#include <cstdio>

#include <nlohmann/json.hpp>

namespace stlflow {

int MblpModel::add_variable(const VarDef& def) {
  auto it = index_.find(def.name);
  if (it != index_.end()) {
    const Var& existing = vars_[static_cast<size_t>(it->second)];
    if (existing.lb != def.lb || existing.ub != def.ub ||
        existing.kind != def.kind) {
      throw EncodeError("variable name collision with differing definition: " +
                        def.name);
    }
    return it->second;
  }
  if (!(def.lb <= def.ub) || !std::isfinite(def.lb) || !std::isfinite(def.ub)) {
    throw EncodeError("variable " + def.name + " needs finite lb <= ub");
  }
  const int id = static_cast<int>(vars_.size());
  vars_.push_back(Var{def.name, def.lb, def.ub, def.kind});
  objective_.push_back(0.0);
  index_.emplace(def.name, id);
  return id;
}

void MblpModel::add_row(const LinearConstraint& c) {
  Row row;
  row.terms.reserve(c.terms.size());
  for (const auto& [name, coef] : c.terms) {
    row.terms.emplace_back(var_index(name), coef);
  }
  row.rel = c.rel;
  row.rhs = c.rhs;
  row.family = c.family;
  rows_.push_back(std::move(row));
}

void MblpModel::set_objective_term(const std::string& name, double coef) {
  objective_[static_cast<size_t>(var_index(name))] = coef;
}

int MblpModel::var_index(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) {
    throw EncodeError("constraint references undeclared variable: " + name);
  }
  return it->second;
}

bool MblpModel::has_var(const std::string& name) const {
  return index_.contains(name);
}

double MblpModel::objective_value(const std::vector<double>& x) const {
  double value = 0.0;
  for (size_t j = 0; j < objective_.size(); ++j) {
    value += objective_[j] * x[j];
  }
  return value;
}

ConstraintFragment couple_predicates(
    const std::vector<std::pair<std::string, int>>& pi,
    const std::map<std::string, AtomBinding>& bindings,
    const std::map<int, const TimeExpandedGraph*>& graphs) {
  ConstraintFragment frag;
  for (const auto& [atom, time] : pi) {
    auto bit = bindings.find(atom);
    if (bit == bindings.end()) {
      throw EncodeError("no binding for atom: " + atom);
    }
    const AtomBinding& binding = bit->second;
    auto git = graphs.find(binding.robot_id);
    if (git == graphs.end()) {
      throw EncodeError("no dynamics graph for robot " +
                        std::to_string(binding.robot_id));
    }
    const TimeExpandedGraph& g = *git->second;
    if (time < 0 || time >= g.horizon) {
      throw EncodeError("atom " + atom + " bound at timestep " +
                        std::to_string(time) + " outside horizon " +
                        std::to_string(g.horizon));
    }
    const int vertex = g.base_vertex(g.site_index(binding.site), time);
    std::vector<std::pair<std::string, double>> terms;
    terms.emplace_back(z_var_name(atom, time), 1.0);
    for (int e : g.in_edges(vertex)) {
      terms.emplace_back(r_var_name(g, e), -1.0);
    }
    frag.add(std::move(terms), Rel::Eq, 0.0, "couple");
  }
  return frag;
}

MblpModel assemble(const ConstraintFragment& spec_fragment,
                   const std::vector<ConstraintFragment>& dyn_fragments,
                   const ConstraintFragment& coupling,
                   const std::vector<std::pair<std::string, double>>& objective) {
  MblpModel m;
  for (const auto& def : spec_fragment.vars) m.add_variable(def);
  for (const auto& frag : dyn_fragments) {
    for (const auto& def : frag.vars) m.add_variable(def);
  }
  for (const auto& def : coupling.vars) m.add_variable(def);
  for (const auto& row : spec_fragment.constraints) m.add_row(row);
  for (const auto& frag : dyn_fragments) {
    for (const auto& row : frag.constraints) m.add_row(row);
  }
  for (const auto& row : coupling.constraints) m.add_row(row);
  for (const auto& [name, coef] : objective) {
    m.set_objective_term(name, coef);
  }
  return m;
}

namespace {

std::string format_coef(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", value);
  return buf;
}

void append_terms(std::string& out,
                  const std::vector<std::pair<int, double>>& terms,
                  const std::vector<MblpModel::Var>& vars) {
  bool first = true;
  for (const auto& [idx, coef] : terms) {
    if (coef == 0.0) continue;
    if (coef < 0.0) {
      out += first ? "- " : " - ";
    } else {
      out += first ? "" : " + ";
    }
    const double mag = std::fabs(coef);
    if (mag != 1.0) {
      out += format_coef(mag);
      out += ' ';
    }
    out += vars[static_cast<size_t>(idx)].name;
    first = false;
  }
  if (first) out += "0";
}

}  // namespace

std::string export_lp(const MblpModel& m) {
  std::string out;
  out += "Minimize\n obj: ";
  {
    std::vector<std::pair<int, double>> terms;
    for (int j = 0; j < m.num_vars(); ++j) {
      if (m.objective()[static_cast<size_t>(j)] != 0.0) {
        terms.emplace_back(j, m.objective()[static_cast<size_t>(j)]);
      }
    }
    append_terms(out, terms, m.vars());
  }
  out += "\nSubject To\n";
  for (int i = 0; i < m.num_rows(); ++i) {
    const auto& row = m.rows()[static_cast<size_t>(i)];
    out += " c" + std::to_string(i) + ": ";
    append_terms(out, row.terms, m.vars());
    switch (row.rel) {
      case Rel::Le: out += " <= "; break;
      case Rel::Eq: out += " = "; break;
      case Rel::Ge: out += " >= "; break;
    }
    out += format_coef(row.rhs);
    out += '\n';
  }
  out += "Bounds\n";
  for (const auto& var : m.vars()) {
    if (var.kind == VarKind::Binary && var.lb == 0.0 && var.ub == 1.0) {
      continue;  // implied by the Binaries section
    }
    out += " " + format_coef(var.lb) + " <= " + var.name +
           " <= " + format_coef(var.ub) + "\n";
  }
  bool any_binary = false;
  for (const auto& var : m.vars()) {
    if (var.kind == VarKind::Binary) {
      if (!any_binary) {
        out += "Binaries\n";
        any_binary = true;
      }
      out += " " + var.name + "\n";
    }
  }
  out += "End\n";
  return out;
}

ModelStats model_stats(const MblpModel& m) {
  ModelStats s;
  s.n_constraints = m.num_rows();
  for (const auto& var : m.vars()) {
    if (var.kind == VarKind::Binary) {
      ++s.n_binary;
      if (var.name.rfind("y", 0) != 0) ++s.n_binary_z;
    } else {
      ++s.n_continuous;
    }
  }
  return s;
}

nlohmann::json stats_to_json(const ModelStats& s) {
  return nlohmann::json{{"n_binary", s.n_binary},
                        {"n_continuous", s.n_continuous},
                        {"n_constraints", s.n_constraints},
                        {"n_binary_z", s.n_binary_z}};
}

}  // namespace stlflow
