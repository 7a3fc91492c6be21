#include "rod/format.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <stdexcept>
#include <system_error>

namespace rod {

std::string format_number(double value) {
  if (value == 0.0) return std::signbit(value) ? "-0" : "0";
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  const double mag = std::abs(value);
  const auto style =
      (mag >= 1e-3 && mag < 1e4) ? std::chars_format::fixed : std::chars_format::scientific;
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value, style);
  if (res.ec != std::errc{}) {
    throw std::runtime_error("format_number: conversion failed");
  }
  return std::string(buf.data(), res.ptr);
}

std::string_view trim(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(" \t\r\n");
  return text.substr(first, last - first + 1);
}

double parse_number(std::string_view text) {
  const std::string_view t = trim(text);
  if (t.empty()) {
    throw std::invalid_argument("empty numeric field");
  }
  const char* begin = t.data();
  if (*begin == '+') ++begin;
  double value = 0.0;
  const auto res = std::from_chars(begin, t.data() + t.size(), value);
  if (res.ec != std::errc{} || res.ptr != t.data() + t.size()) {
    throw std::invalid_argument("not a number: '" + std::string(t) + "'");
  }
  return value;
}

}  // namespace rod
