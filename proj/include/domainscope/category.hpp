#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "domainscope/errors.hpp"
#include "domainscope/text.hpp"

namespace domainscope {

enum class Category {
  Corporate,
  Delegation,
  Related,
  BrandProduct,
  Division,
  Service,
  Foundation,
  Other,
};

inline constexpr std::array<Category, 8> kAllCategories = {
    Category::Corporate, Category::Delegation,   Category::Related,
    Category::BrandProduct, Category::Division,  Category::Service,
    Category::Foundation,   Category::Other,
};

inline constexpr std::string_view to_string(Category c) {
  switch (c) {
    case Category::Corporate:    return "CORPORATE";
    case Category::Delegation:   return "DELEGATION";
    case Category::Related:      return "RELATED";
    case Category::BrandProduct: return "BRAND_PRODUCT";
    case Category::Division:     return "DIVISION";
    case Category::Service:      return "SERVICE";
    case Category::Foundation:   return "FOUNDATION";
    case Category::Other:        return "OTHER";
  }
  return "OTHER";
}

/// Three-letter column codes used by the census tables.
inline constexpr std::string_view short_code(Category c) {
  switch (c) {
    case Category::Corporate:    return "COR";
    case Category::Delegation:   return "DEL";
    case Category::Related:      return "REL";
    case Category::BrandProduct: return "BRA";
    case Category::Division:     return "DIV";
    case Category::Service:      return "SER";
    case Category::Foundation:   return "FOU";
    case Category::Other:        return "OTH";
  }
  return "OTH";
}

inline std::optional<Category> parse_category(std::string_view s) {
  std::string u = ascii_lower(trim(s));
  for (Category c : kAllCategories)
    if (u == ascii_lower(to_string(c))) return c;
  if (u == "brand&product" || u == "brand_and_product" || u == "brand")
    return Category::BrandProduct;
  return std::nullopt;
}

inline Category parse_category_or_throw(std::string_view s) {
  auto c = parse_category(s);
  if (!c) throw RegistryError("unknown category '" + std::string(s) + "'");
  return *c;
}

}  // namespace domainscope
