#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pbv {

/// Error carrying a short machine-parsable code plus a human message.
/// The CLI prints these as "error[<code>] <message>" and exits nonzero.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}

    const std::string& code() const { return code_; }

private:
    std::string code_;
};

[[noreturn]] inline void fail(const std::string& code, const std::string& message) {
    throw Error(code, message);
}

std::vector<std::string> split(std::string_view line, char sep);
std::string trim(std::string_view s);

// Strict numeric parsers: the whole token must be consumed.
double parse_double(const std::string& token, const std::string& context);
long parse_long(const std::string& token, const std::string& context);

// Writes to <path>.tmp then renames, so a failed run never leaves a
// partial output behind.
void atomic_write_file(const std::string& path, const std::string& contents);

std::string read_text_file(const std::string& path);

} // namespace pbv
