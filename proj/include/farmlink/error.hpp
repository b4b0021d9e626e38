#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace farmlink {

/// Error categories; mirrored one-to-one by the C API status codes.
enum class ErrorCode {
    invalid_argument = 1,
    parse = 2,
    io = 3,
    dimension_mismatch = 4,
    protocol = 5,
    runtime = 6,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, std::string message)
        : std::runtime_error(std::move(message)), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

inline void require(bool ok, ErrorCode code, const std::string& message) {
    if (!ok) throw Error(code, message);
}

} // namespace farmlink
