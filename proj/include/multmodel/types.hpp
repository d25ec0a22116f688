#pragma once

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace multmodel {

using VarId = int;
using Value = int;

/// Per-variable domain cardinalities. Variable i takes values 0..card(i)-1.
class DomainTable {
 public:
  DomainTable() = default;
  explicit DomainTable(std::vector<int> cards);

  std::size_t num_vars() const { return cards_.size(); }
  bool contains(VarId v) const {
    return v >= 0 && static_cast<std::size_t>(v) < cards_.size();
  }
  int card(VarId v) const;  // throws InvalidValue on unknown variable
  const std::vector<int>& cards() const { return cards_; }

  /// Product of cardinalities over `scope`; throws TooLarge on overflow.
  std::uint64_t joint_size(std::span<const VarId> scope) const;
  /// Same, but returns nullopt instead of throwing.
  std::optional<std::uint64_t> try_joint_size(std::span<const VarId> scope) const;

  bool operator==(const DomainTable&) const = default;

 private:
  std::vector<int> cards_;
};

/// A partial assignment of values to variables, kept sorted by variable id.
class Instance {
 public:
  Instance() = default;

  /// Builds and validates an assignment against a domain table.
  static Instance over(const DomainTable& doms,
                       std::initializer_list<std::pair<VarId, Value>> items);
  static Instance from_pairs(const DomainTable& doms,
                             std::vector<std::pair<VarId, Value>> items);

  bool empty() const { return items_.empty(); }
  std::size_t size() const { return items_.size(); }
  std::span<const std::pair<VarId, Value>> items() const { return items_; }

  bool assigns(VarId v) const { return value(v).has_value(); }
  std::optional<Value> value(VarId v) const;
  std::vector<VarId> scope() const;
  bool covers(std::span<const VarId> vars) const;

  Instance restricted_to(std::span<const VarId> vars) const;
  /// Union of two assignments; overlapping variables must agree.
  Instance merged_with(const Instance& other) const;

  std::string str() const;

  bool operator==(const Instance&) const = default;

 private:
  std::vector<std::pair<VarId, Value>> items_;
};

/// Row-major joint index over `scope` (in the given order, last variable
/// fastest). The instance must assign every scope variable.
std::uint64_t joint_index(const DomainTable& doms, std::span<const VarId> scope,
                          const Instance& inst);

/// Inverse of joint_index.
Instance instance_at(const DomainTable& doms, std::span<const VarId> scope,
                     std::uint64_t index);

}  // namespace multmodel
