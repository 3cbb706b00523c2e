#include "shortprompt/core/category.hpp"

#include "shortprompt/core/errors.hpp"

#include <string>

namespace shortprompt {

std::string_view to_string(Category category) noexcept
{
    switch (category) {
    case Category::demographic_bias: return "demographic-bias";
    case Category::cultural_bias: return "cultural-bias";
    case Category::biological_bias: return "biological-bias";
    case Category::realism: return "realism";
    case Category::co_occurrence: return "co-occurrence";
    case Category::number_spatial: return "number-spatial";
    }
    return "unknown";
}

std::optional<Category> parse_category(std::string_view name) noexcept
{
    for (Category c : kAllCategories) {
        if (to_string(c) == name) {
            return c;
        }
    }
    return std::nullopt;
}

Category category_from_string(std::string_view name)
{
    if (auto c = parse_category(name)) {
        return *c;
    }
    throw Error(Errc::unknown_category, std::string(name));
}

}  // namespace shortprompt
