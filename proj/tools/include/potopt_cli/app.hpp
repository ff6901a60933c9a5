#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace potopt::cli {

/// Names of the built-in recipes.
std::vector<std::string> recipe_names();

/// INI text of a built-in recipe; throws Error(ConfigError) for unknown names.
std::string recipe_text(const std::string& name);

/// Entry point shared by the executable and the tests.
int run_app(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace potopt::cli
