#include "multmodel/clause.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "multmodel/errors.hpp"

namespace multmodel {

Clause Clause::bottom() {
  Clause c;
  c.bottom_ = true;
  return c;
}

Clause Clause::canonicalize(
    const DomainTable& doms,
    std::span<const std::pair<VarId, std::vector<Value>>> raw) {
  std::map<VarId, std::set<Value>> sets;
  for (const auto& [var, values] : raw) {
    const int card = doms.card(var);
    std::set<Value> vals;
    for (Value v : values) {
      if (v < 0 || v >= card) {
        throw InvalidValue("value " + std::to_string(v) +
                           " out of domain for variable " +
                           std::to_string(var));
      }
      vals.insert(v);
    }
    auto [it, inserted] = sets.emplace(var, std::move(vals));
    if (!inserted) {
      // repeated variable: conjunction means intersection
      std::set<Value> both;
      std::set_intersection(it->second.begin(), it->second.end(), vals.begin(),
                            vals.end(), std::inserter(both, both.begin()));
      it->second = std::move(both);
    }
  }
  Clause c;
  for (auto& [var, vals] : sets) {
    if (vals.empty()) return bottom();
    if (static_cast<int>(vals.size()) == doms.card(var)) continue;
    c.constraints_.push_back(
        VarConstraint{var, std::vector<Value>(vals.begin(), vals.end())});
  }
  return c;
}

Clause Clause::of(
    const DomainTable& doms,
    std::initializer_list<std::pair<VarId, std::vector<Value>>> raw) {
  std::vector<std::pair<VarId, std::vector<Value>>> v(raw);
  return canonicalize(doms, v);
}

Clause Clause::assignment(const DomainTable& doms,
                          std::initializer_list<std::pair<VarId, Value>> a) {
  return map_instance(doms, Instance::over(doms, a));
}

const std::vector<Value>* Clause::allowed(VarId v) const {
  auto it = std::lower_bound(constraints_.begin(), constraints_.end(), v,
                             [](const VarConstraint& c, VarId var) {
                               return c.var < var;
                             });
  if (it == constraints_.end() || it->var != v) return nullptr;
  return &it->values;
}

std::vector<VarId> Clause::constrained_vars() const {
  std::vector<VarId> vars;
  vars.reserve(constraints_.size());
  for (const auto& c : constraints_) vars.push_back(c.var);
  return vars;
}

std::string Clause::str() const {
  if (bottom_) return "false";
  if (constraints_.empty()) return "true";
  std::ostringstream os;
  for (std::size_t i = 0; i < constraints_.size(); ++i) {
    if (i > 0) os << ' ';
    os << constraints_[i].var << ":{";
    for (std::size_t j = 0; j < constraints_[i].values.size(); ++j) {
      if (j > 0) os << '|';
      os << constraints_[i].values[j];
    }
    os << '}';
  }
  return os.str();
}

int compare(const Clause& a, const Clause& b) {
  if (a.is_bottom() || b.is_bottom()) {
    return static_cast<int>(a.is_bottom()) - static_cast<int>(b.is_bottom());
  }
  const auto ca = a.constraints();
  const auto cb = b.constraints();
  if (ca.size() != cb.size()) return ca.size() < cb.size() ? -1 : 1;
  for (std::size_t i = 0; i < ca.size(); ++i) {
    if (ca[i].var != cb[i].var) return ca[i].var < cb[i].var ? -1 : 1;
  }
  for (std::size_t i = 0; i < ca.size(); ++i) {
    if (ca[i].values != cb[i].values) {
      return ca[i].values < cb[i].values ? -1 : 1;
    }
  }
  return 0;
}

Clause conjoin(const Clause& a, const Clause& b) {
  if (a.is_bottom() || b.is_bottom()) return Clause::bottom();
  Clause out;
  auto ia = a.constraints_.begin();
  auto ib = b.constraints_.begin();
  while (ia != a.constraints_.end() || ib != b.constraints_.end()) {
    if (ib == b.constraints_.end() ||
        (ia != a.constraints_.end() && ia->var < ib->var)) {
      out.constraints_.push_back(*ia++);
    } else if (ia == a.constraints_.end() || ib->var < ia->var) {
      out.constraints_.push_back(*ib++);
    } else {
      VarConstraint merged{ia->var, {}};
      std::set_intersection(ia->values.begin(), ia->values.end(),
                            ib->values.begin(), ib->values.end(),
                            std::back_inserter(merged.values));
      if (merged.values.empty()) return Clause::bottom();
      out.constraints_.push_back(std::move(merged));
      ++ia;
      ++ib;
    }
  }
  return out;
}

Clause project(const Clause& s, VarId v) {
  if (s.is_bottom()) {
    throw BottomProjection("cannot project the unsatisfiable clause");
  }
  Clause out = s;
  auto it = std::find_if(out.constraints_.begin(), out.constraints_.end(),
                         [v](const VarConstraint& c) { return c.var == v; });
  if (it != out.constraints_.end()) out.constraints_.erase(it);
  return out;
}

bool leq(const Clause& c, const Clause& cp) {
  if (cp.is_bottom()) return true;
  if (c.is_bottom()) return false;
  for (const auto& constraint : c.constraints()) {
    const auto* values = cp.allowed(constraint.var);
    if (values == nullptr) return false;
    if (!std::includes(constraint.values.begin(), constraint.values.end(),
                       values->begin(), values->end())) {
      return false;
    }
  }
  return true;
}

Clause map_instance(const DomainTable& doms, const Instance& z) {
  std::vector<std::pair<VarId, std::vector<Value>>> raw;
  raw.reserve(z.size());
  for (const auto& [var, val] : z.items()) {
    raw.emplace_back(var, std::vector<Value>{val});
  }
  return Clause::canonicalize(doms, raw);
}

bool relevance(const Clause& s, VarId v) {
  // Canonical constraints are proper nonempty subsets, so any stored
  // constraint on V admits both a satisfying and a violating value.
  return !s.is_bottom() && s.constrains(v);
}

bool satisfies(const Instance& d, const Clause& s) {
  if (s.is_bottom()) return false;
  for (const auto& constraint : s.constraints()) {
    auto val = d.value(constraint.var);
    if (!val) {
      throw ScopeError("instance does not assign variable " +
                       std::to_string(constraint.var));
    }
    if (!std::binary_search(constraint.values.begin(), constraint.values.end(),
                            *val)) {
      return false;
    }
  }
  return true;
}

}  // namespace multmodel
