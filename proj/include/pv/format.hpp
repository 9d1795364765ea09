#pragma once

#include <charconv>
#include <stdexcept>
#include <string>
#include <system_error>

namespace pv {

// Shortest decimal representation that round-trips the exact double.
// Used everywhere a number is written to CSV so output bytes are a pure
// function of the values.
inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  if (res.ec != std::errc{})
    throw std::runtime_error("format_double: conversion failed");
  return std::string(buf, res.ptr);
}

}  // namespace pv
