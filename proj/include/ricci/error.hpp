#pragma once

#include <stdexcept>
#include <string>

namespace ricci {

/// Error raised by any module of the library. The message is prefixed with
/// the originating module so the CLI can surface it unchanged.
class Error : public std::runtime_error {
public:
    Error(std::string module, const std::string& what)
        : std::runtime_error(module + ": " + what), module_(std::move(module)) {}

    const std::string& module() const noexcept { return module_; }

private:
    std::string module_;
};

namespace detail {

[[noreturn]] inline void fail(const char* module, const std::string& what) {
    throw Error(module, what);
}

inline void require(bool cond, const char* module, const std::string& what) {
    if (!cond) fail(module, what);
}

}  // namespace detail
}  // namespace ricci
