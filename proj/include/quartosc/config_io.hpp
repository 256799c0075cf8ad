#pragma once

#include <string>

#include "quartosc/model.hpp"

namespace quartosc {

// A configuration parsed from a JSON file and passed through validate().
// raw_text keeps the exact bytes read so callers can fold them into run
// digests without re-reading the file.
struct LoadedConfig {
    ValidatedConfig config;
    std::string raw_text;
    std::string path;
};

// Reads and validates a JSON configuration. Unknown keys anywhere in the
// document are rejected, so typos fail loudly instead of silently falling
// back to defaults. Throws ConfigError(BadConfigFile) for unreadable files,
// malformed JSON, or schema violations; validation failures propagate with
// their own error codes.
LoadedConfig load_config_file(const std::string& path);

}  // namespace quartosc
