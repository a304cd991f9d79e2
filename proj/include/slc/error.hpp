// Copyright 2026 slcsim authors
// License: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace slc {

// Invalid arguments, mismatched sizes, malformed inputs.
class input_error : public std::runtime_error {
public:
    explicit input_error(const std::string& what) : std::runtime_error(what) {}
};

// File / format problems. A kind of input error so callers may catch either.
class parse_error : public input_error {
public:
    explicit parse_error(const std::string& what) : input_error(what) {}
};

// Configured caps exceeded (class sizes, expert counts).
class resource_error : public std::runtime_error {
public:
    explicit resource_error(const std::string& what) : std::runtime_error(what) {}
};

// Online-protocol violations: non-realizable input fed to a realizable-mode
// learner, best-response callbacks returning nodes outside the response set.
class protocol_error : public std::runtime_error {
public:
    explicit protocol_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace slc
