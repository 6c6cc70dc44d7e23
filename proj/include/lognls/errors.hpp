#pragma once
#include <stdexcept>
#include <string>

namespace lognls {

// Exit-code contract: 0 success, 1 property failure, 2 config error,
// 3 numerical abort. config_error -> 2, numerical_error -> 3.
struct config_error : std::runtime_error {
    explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

struct numerical_error : std::runtime_error {
    explicit numerical_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace lognls
