#pragma once

#include "wlab/model.hpp"

#include <string>
#include <vector>

namespace wlab {

/// Names of the shipped scenarios, in listing order.
const std::vector<std::string>& gallery_names();

/// Throws ValidationError for unknown names.
Scenario gallery_scenario(const std::string& name);

/// One-line description for `wlab gallery`.
std::string gallery_description(const std::string& name);

}  // namespace wlab
