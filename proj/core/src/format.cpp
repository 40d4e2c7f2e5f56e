#include "aos/format.hpp"

#include <array>
#include <charconv>
#include <stdexcept>
#include <string>

namespace aos {

std::string format_double(double value) {
    std::array<char, 64> buffer{};
    auto [end, ec] = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
    if (ec != std::errc{}) {
        throw std::runtime_error("format_double: conversion failed");
    }
    return std::string(buffer.data(), end);
}

double parse_double(std::string_view token) {
    if (!token.empty() && token.front() == '+') {
        token.remove_prefix(1);
    }
    double value = 0.0;
    auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || end != token.data() + token.size() || token.empty()) {
        throw std::invalid_argument("not a number: '" + std::string(token) + "'");
    }
    return value;
}

}  // namespace aos
