#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace hk::runner {

using nlohmann::json;

// Parses the file, mapping JSON syntax errors to ConfigError with the
// parser's line/column diagnostic.
json load_config(const std::string& path);

// Applies one `key.path=value` assignment on top of the parsed config.
// The value is parsed as JSON when possible, otherwise taken as a string.
void apply_override(json& config, const std::string& assignment);

// Executes the configured command, writing reports under the output
// directory. Returns the process exit code:
//   0 success, 1 malformed config, 2 validation/parameter-domain failure,
//   3 falsified inequality, 4 solver abort.
int execute(json config, int jobs);

// Convenience wrapper: load + overrides + command override + execute, with
// every failure mapped to its exit code and a diagnostic on stderr.
int run(const std::string& config_path, const std::string& command,
        const std::vector<std::string>& overrides, int jobs);

}  // namespace hk::runner
