#include "multmodel/types.hpp"

#include <algorithm>
#include <sstream>

#include "multmodel/errors.hpp"

namespace multmodel {

DomainTable::DomainTable(std::vector<int> cards) : cards_(std::move(cards)) {
  for (std::size_t i = 0; i < cards_.size(); ++i) {
    if (cards_[i] < 1) {
      throw InvalidValue("cardinality of variable " + std::to_string(i) +
                         " must be >= 1");
    }
  }
}

int DomainTable::card(VarId v) const {
  if (!contains(v)) {
    throw InvalidValue("unknown variable " + std::to_string(v));
  }
  return cards_[static_cast<std::size_t>(v)];
}

std::optional<std::uint64_t> DomainTable::try_joint_size(
    std::span<const VarId> scope) const {
  std::uint64_t total = 1;
  for (VarId v : scope) {
    const auto c = static_cast<std::uint64_t>(card(v));
    if (c != 0 && total > UINT64_MAX / c) return std::nullopt;
    total *= c;
  }
  return total;
}

std::uint64_t DomainTable::joint_size(std::span<const VarId> scope) const {
  auto s = try_joint_size(scope);
  if (!s) throw TooLarge("joint domain size overflows");
  return *s;
}

Instance Instance::over(const DomainTable& doms,
                        std::initializer_list<std::pair<VarId, Value>> items) {
  return from_pairs(doms, std::vector<std::pair<VarId, Value>>(items));
}

Instance Instance::from_pairs(const DomainTable& doms,
                              std::vector<std::pair<VarId, Value>> items) {
  std::sort(items.begin(), items.end());
  for (std::size_t i = 0; i < items.size(); ++i) {
    auto [var, val] = items[i];
    if (i > 0 && items[i - 1].first == var) {
      throw InvalidValue("variable " + std::to_string(var) +
                         " assigned twice");
    }
    if (val < 0 || val >= doms.card(var)) {
      throw InvalidValue("value " + std::to_string(val) +
                         " out of domain for variable " + std::to_string(var));
    }
  }
  Instance inst;
  inst.items_ = std::move(items);
  return inst;
}

std::optional<Value> Instance::value(VarId v) const {
  auto it = std::lower_bound(items_.begin(), items_.end(),
                             std::pair<VarId, Value>{v, 0},
                             [](const auto& a, const auto& b) {
                               return a.first < b.first;
                             });
  if (it == items_.end() || it->first != v) return std::nullopt;
  return it->second;
}

std::vector<VarId> Instance::scope() const {
  std::vector<VarId> vars;
  vars.reserve(items_.size());
  for (const auto& [var, _] : items_) vars.push_back(var);
  return vars;
}

bool Instance::covers(std::span<const VarId> vars) const {
  for (VarId v : vars) {
    if (!assigns(v)) return false;
  }
  return true;
}

Instance Instance::restricted_to(std::span<const VarId> vars) const {
  Instance out;
  for (const auto& item : items_) {
    if (std::find(vars.begin(), vars.end(), item.first) != vars.end()) {
      out.items_.push_back(item);
    }
  }
  return out;
}

Instance Instance::merged_with(const Instance& other) const {
  Instance out;
  out.items_.reserve(items_.size() + other.items_.size());
  auto a = items_.begin();
  auto b = other.items_.begin();
  while (a != items_.end() || b != other.items_.end()) {
    if (b == other.items_.end() ||
        (a != items_.end() && a->first < b->first)) {
      out.items_.push_back(*a++);
    } else if (a == items_.end() || b->first < a->first) {
      out.items_.push_back(*b++);
    } else {
      if (a->second != b->second) {
        throw InvalidValue("conflicting values for variable " +
                           std::to_string(a->first));
      }
      out.items_.push_back(*a);
      ++a;
      ++b;
    }
  }
  return out;
}

std::string Instance::str() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < items_.size(); ++i) {
    if (i > 0) os << ' ';
    os << items_[i].first << '=' << items_[i].second;
  }
  return os.str();
}

std::uint64_t joint_index(const DomainTable& doms, std::span<const VarId> scope,
                          const Instance& inst) {
  std::uint64_t index = 0;
  for (VarId v : scope) {
    auto val = inst.value(v);
    if (!val) {
      throw ScopeError("instance does not assign variable " +
                       std::to_string(v));
    }
    index = index * static_cast<std::uint64_t>(doms.card(v)) +
            static_cast<std::uint64_t>(*val);
  }
  return index;
}

Instance instance_at(const DomainTable& doms, std::span<const VarId> scope,
                     std::uint64_t index) {
  std::vector<std::pair<VarId, Value>> items(scope.size());
  for (std::size_t i = scope.size(); i-- > 0;) {
    const auto c = static_cast<std::uint64_t>(doms.card(scope[i]));
    items[i] = {scope[i], static_cast<Value>(index % c)};
    index /= c;
  }
  return Instance::from_pairs(doms, std::move(items));
}

}  // namespace multmodel
