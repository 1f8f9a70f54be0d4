#include "dialect/error.hpp"

#include <iostream>
#include <mutex>
#include <sstream>
#include <utility>

namespace dialect {

namespace {

std::string located(const std::string& path, std::size_t line, const std::string& what) {
    std::ostringstream os;
    os << path << ':' << line << ": " << what;
    return os.str();
}

std::mutex& handler_mutex() {
    static std::mutex m;
    return m;
}

WarningHandler& handler() {
    static WarningHandler h = [](std::string_view msg) { std::cerr << "warning: " << msg << '\n'; };
    return h;
}

}  // namespace

ParseError::ParseError(std::string path, std::size_t line, const std::string& what)
    : Error(located(path, line, what)), path_(std::move(path)), line_(line) {}

WarningHandler set_warning_handler(WarningHandler h) {
    std::lock_guard lock(handler_mutex());
    return std::exchange(handler(), std::move(h));
}

void warn(std::string_view message) {
    std::lock_guard lock(handler_mutex());
    if (handler()) handler()(message);
}

}  // namespace dialect
