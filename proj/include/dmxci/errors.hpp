#pragma once

#include <stdexcept>
#include <string>

namespace dmxci {

// Bad user input: config files, CLI arguments, violated operation preconditions.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Runtime numeric failure: non-finite fields, diverged equalizer, stalled integrals.
struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace dmxci
