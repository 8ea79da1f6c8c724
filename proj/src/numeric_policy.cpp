#include "landauer_lab/numeric_policy.hpp"

#include "landauer_lab/errors.hpp"

#include <string>

namespace landauer_lab {

NumericPolicy NumericPolicy::from_profile(std::string_view name)
{
    if (name == "default")
        return standard();
    if (name == "strict")
        return strict();
    throw ConfigError("unknown tolerance profile '" + std::string(name) +
                      "' (expected strict|default)");
}

} // namespace landauer_lab
