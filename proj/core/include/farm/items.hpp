#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace farm {

using ItemId = std::uint32_t;

enum class DengueClass { High, Low };

std::string_view to_string(DengueClass c);
DengueClass parse_dengue_class(std::string_view text);

/// Feature name reserved for the next-month dengue class items.
inline constexpr std::string_view kClassFeature = "dengue_next";

struct Item {
  ItemId id = 0;
  std::string feature;
  std::string label;

  /// `feature=label`, the on-disk spelling of an item.
  [[nodiscard]] std::string token() const { return feature + "=" + label; }
};

/// Dense bijection between (feature, label) pairs and item ids, assigned in
/// insertion order.
class ItemDictionary {
 public:
  ItemId add(std::string feature, std::string label);

  [[nodiscard]] std::optional<ItemId> find(std::string_view feature, std::string_view label) const;
  [[nodiscard]] std::optional<ItemId> find_token(std::string_view token) const;
  /// Throws farm::Error for an unknown token.
  [[nodiscard]] ItemId id_of(std::string_view token) const;

  [[nodiscard]] const Item& at(ItemId id) const { return items_.at(id); }
  [[nodiscard]] const std::string& token(ItemId id) const { return tokens_.at(id); }
  [[nodiscard]] std::size_t size() const { return items_.size(); }

  /// Id of the class item for `c`; throws if the class items were never added.
  [[nodiscard]] ItemId class_item(DengueClass c) const;
  [[nodiscard]] std::optional<DengueClass> class_of(ItemId id) const;

 private:
  std::vector<Item> items_;
  std::vector<std::string> tokens_;
  std::map<std::string, ItemId, std::less<>> by_token_;
};

}  // namespace farm
