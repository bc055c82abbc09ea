#pragma once

#include <stdexcept>
#include <string>

namespace cel {

// Bad caller input: malformed files, dimension mismatches, unknown ids.
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
};

// Operation invalid in the current state (e.g. empty ensemble).
class StateError : public std::runtime_error {
public:
    explicit StateError(const std::string& msg) : std::runtime_error(msg) {}
};

// Training data contains only one class; callers decide the fallback.
class SingleClassError : public InputError {
public:
    explicit SingleClassError(const std::string& msg) : InputError(msg) {}
};

} // namespace cel
