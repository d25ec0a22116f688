#include "multmodel/model.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "multmodel/errors.hpp"

namespace multmodel {

const char* to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::general: return "general";
    case ModelKind::table: return "table";
    case ModelKind::positive: return "positive";
    case ModelKind::decision_graph: return "decision-graph";
    case ModelKind::noisy_or: return "noisy-or";
    case ModelKind::log_linear: return "log-linear";
  }
  return "?";
}

MultiplicativeModel::MultiplicativeModel(const DomainTable& doms,
                                         std::vector<VarId> scope,
                                         std::vector<Element> elements,
                                         ModelKind kind)
    : scope_(std::move(scope)), elements_(std::move(elements)), kind_(kind) {
  std::sort(scope_.begin(), scope_.end());
  scope_.erase(std::unique(scope_.begin(), scope_.end()), scope_.end());
  for (VarId v : scope_) {
    if (!doms.contains(v)) {
      throw FormatError("scope variable " + std::to_string(v) +
                        " not in the domain table");
    }
  }
  std::vector<const Clause*> seen;
  seen.reserve(elements_.size());
  for (const auto& element : elements_) {
    if (element.clause.is_bottom()) {
      throw FormatError("model element with unsatisfiable clause");
    }
    for (const auto& constraint : element.clause.constraints()) {
      if (!std::binary_search(scope_.begin(), scope_.end(), constraint.var)) {
        throw FormatError("element constrains variable " +
                          std::to_string(constraint.var) +
                          " outside the model scope");
      }
    }
    seen.push_back(&element.clause);
  }
  std::sort(seen.begin(), seen.end(),
            [](const Clause* a, const Clause* b) { return *a < *b; });
  for (std::size_t i = 1; i < seen.size(); ++i) {
    if (*seen[i - 1] == *seen[i]) {
      throw FormatError("duplicate element clause: " + seen[i]->str());
    }
  }
}

MultiplicativeModel MultiplicativeModel::unchecked(
    std::vector<VarId> sorted_scope, std::vector<Element> elements,
    ModelKind kind) {
  MultiplicativeModel m;
  m.scope_ = std::move(sorted_scope);
  m.elements_ = std::move(elements);
  m.kind_ = kind;
  return m;
}

double MultiplicativeModel::evaluate(const Instance& d) const {
  if (!d.covers(scope_)) {
    throw ScopeError("instance does not assign the full model scope");
  }
  double product = 1.0;
  for (const auto& element : elements_) {
    if (satisfies(d, element.clause)) product *= element.gamma;
  }
  return product;
}

MultiplicativeModel MultiplicativeModel::prune_units(double tol) const {
  if (tol < 0) throw InvalidValue("pruning tolerance must be >= 0");
  MultiplicativeModel out;
  out.scope_ = scope_;
  out.kind_ = kind_;
  for (const auto& element : elements_) {
    if (std::abs(element.gamma - 1.0) > tol) out.elements_.push_back(element);
  }
  return out;
}

MultiplicativeModel MultiplicativeModel::condition(const Instance& e) const {
  for (const auto& [var, _] : e.items()) {
    if (!std::binary_search(scope_.begin(), scope_.end(), var)) {
      throw ScopeError("evidence variable " + std::to_string(var) +
                       " outside the model scope");
    }
  }
  // Kept clauses can coincide once their evidence literals are stripped;
  // coinciding clauses merge by parameter product.
  std::map<Clause, double> merged;
  for (const auto& element : elements_) {
    Clause stripped = element.clause;
    bool consistent = true;
    for (const auto& [var, val] : e.items()) {
      const auto* values = stripped.allowed(var);
      if (values == nullptr) continue;
      if (!std::binary_search(values->begin(), values->end(), val)) {
        consistent = false;
        break;
      }
      stripped = project(stripped, var);
    }
    if (!consistent) continue;
    auto [it, inserted] = merged.emplace(std::move(stripped), element.gamma);
    if (!inserted) it->second *= element.gamma;
  }
  MultiplicativeModel out;
  for (VarId v : scope_) {
    if (!e.assigns(v)) out.scope_.push_back(v);
  }
  out.kind_ = kind_;
  out.elements_.reserve(merged.size());
  for (auto& [clause, gamma] : merged) {
    out.elements_.push_back(Element{clause, gamma});
  }
  return out;
}

namespace {

// Number of full scope instances satisfying the clause; nullopt on overflow.
std::optional<std::uint64_t> count_satisfying(const DomainTable& doms,
                                              std::span<const VarId> scope,
                                              const Clause& clause) {
  std::uint64_t total = 1;
  for (VarId v : scope) {
    const auto* values = clause.allowed(v);
    const auto c = static_cast<std::uint64_t>(
        values ? static_cast<int>(values->size()) : doms.card(v));
    if (c != 0 && total > UINT64_MAX / c) return std::nullopt;
    total *= c;
  }
  return total;
}

}  // namespace

bool validate_partition(const DomainTable& doms, const MultiplicativeModel& m,
                        std::uint64_t enumeration_cap) {
  const auto joint = doms.try_joint_size(m.scope());
  if (joint && *joint <= enumeration_cap) {
    for (std::uint64_t i = 0; i < *joint; ++i) {
      const Instance d = instance_at(doms, m.scope(), i);
      std::size_t hits = 0;
      for (const auto& element : m.elements()) {
        if (satisfies(d, element.clause) && ++hits > 1) break;
      }
      if (hits != 1) return false;
    }
    return true;
  }
  // Fallback: pairwise disjointness plus a counting cover check.
  const std::size_t n = m.elements().size();
  if (!joint || n > 65536) {
    throw ValidationSkipped("partition check infeasible at this size");
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!conjoin(m.elements()[i].clause, m.elements()[j].clause)
               .is_bottom()) {
        return false;
      }
    }
  }
  std::uint64_t covered = 0;
  for (const auto& element : m.elements()) {
    const auto c = count_satisfying(doms, m.scope(), element.clause);
    if (!c || covered > UINT64_MAX - *c) {
      throw ValidationSkipped("cover count overflows");
    }
    covered += *c;
  }
  return covered == *joint;
}

ModelStats stats(const DomainTable& doms, const MultiplicativeModel& m) {
  ModelStats out;
  out.element_count = m.elements().size();
  out.scope_size = m.scope().size();
  std::uint64_t ops = 0;
  bool exact = true;
  for (const auto& element : m.elements()) {
    out.max_arity = std::max(out.max_arity, element.clause.arity());
    if (!exact) continue;
    const auto c = count_satisfying(doms, m.scope(), element.clause);
    if (!c || ops > UINT64_MAX - *c) {
      exact = false;
      continue;
    }
    ops += *c;
  }
  if (exact) {
    out.naive_op_count = ops;
  } else {
    const auto joint = doms.try_joint_size(m.scope());
    const std::uint64_t count = out.element_count;
    out.naive_op_count = (joint && (*joint == 0 || count <= UINT64_MAX / *joint))
                             ? count * *joint
                             : UINT64_MAX;
    out.naive_op_count_is_bound = true;
  }
  return out;
}

}  // namespace multmodel
