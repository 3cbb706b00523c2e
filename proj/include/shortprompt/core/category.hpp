#pragma once

#include <array>
#include <optional>
#include <string_view>

namespace shortprompt {

enum class Category {
    demographic_bias,
    cultural_bias,
    biological_bias,
    realism,
    co_occurrence,
    number_spatial,
};

inline constexpr std::array<Category, 6> kAllCategories = {
    Category::demographic_bias, Category::cultural_bias, Category::biological_bias,
    Category::realism,          Category::co_occurrence, Category::number_spatial,
};

inline constexpr std::size_t kCategoryCount = kAllCategories.size();

std::string_view to_string(Category category) noexcept;
std::optional<Category> parse_category(std::string_view name) noexcept;

/// Parses a category name, throwing Errc::unknown_category on failure.
Category category_from_string(std::string_view name);

}  // namespace shortprompt
