#include "farm/items.hpp"

#include "farm/error.hpp"

namespace farm {

std::string_view to_string(DengueClass c) { return c == DengueClass::High ? "High" : "Low"; }

DengueClass parse_dengue_class(std::string_view text) {
  if (text == "High") return DengueClass::High;
  if (text == "Low") return DengueClass::Low;
  throw Error("unknown dengue class '" + std::string(text) + "' (expected High or Low)");
}

ItemId ItemDictionary::add(std::string feature, std::string label) {
  Item item{static_cast<ItemId>(items_.size()), std::move(feature), std::move(label)};
  if (item.feature.empty() || item.label.empty()) throw Error("item feature and label must be non-empty");
  auto token = item.token();
  if (by_token_.contains(token)) throw Error("duplicate item " + token);
  by_token_.emplace(token, item.id);
  tokens_.push_back(std::move(token));
  items_.push_back(std::move(item));
  return items_.back().id;
}

std::optional<ItemId> ItemDictionary::find(std::string_view feature, std::string_view label) const {
  std::string token(feature);
  token += '=';
  token += label;
  return find_token(token);
}

std::optional<ItemId> ItemDictionary::find_token(std::string_view token) const {
  auto it = by_token_.find(token);
  if (it == by_token_.end()) return std::nullopt;
  return it->second;
}

ItemId ItemDictionary::id_of(std::string_view token) const {
  if (auto id = find_token(token)) return *id;
  throw Error("unknown item token '" + std::string(token) + "'");
}

ItemId ItemDictionary::class_item(DengueClass c) const {
  if (auto id = find(kClassFeature, to_string(c))) return *id;
  throw Error("dictionary has no class item for " + std::string(to_string(c)));
}

std::optional<DengueClass> ItemDictionary::class_of(ItemId id) const {
  const Item& item = at(id);
  if (item.feature != kClassFeature) return std::nullopt;
  return parse_dengue_class(item.label);
}

}  // namespace farm
