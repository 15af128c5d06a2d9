// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 psq contributors

#pragma once

#include <stdexcept>
#include <string>

namespace psq {

/// Malformed input file; message carries path and 1-based line number.
class ParseError : public std::runtime_error {
public:
    ParseError(std::string path, std::size_t line, const std::string& what)
        : std::runtime_error(path + ":" + std::to_string(line) + ": " + what),
          path_(std::move(path)),
          line_(line) {}

    const std::string& path() const noexcept { return path_; }
    std::size_t line() const noexcept { return line_; }

private:
    std::string path_;
    std::size_t line_;
};

/// Byte sequence is not valid UTF-8.
class DecodeError : public std::runtime_error {
public:
    explicit DecodeError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace psq
