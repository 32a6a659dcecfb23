// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 bioie contributors

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bioie {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A caller violated an operation's documented precondition.
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// Structured text could not be parsed. `offset` is the byte position where
/// the parser gave up (0 when unknown).
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t offset)
        : Error(what + " (at offset " + std::to_string(offset) + ")"), offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

/// A provider response that is neither "N/A" nor a parseable document.
/// The raw text is kept for audit.
class QuarantineError : public Error {
public:
    QuarantineError(const std::string& what, std::string raw)
        : Error(what), raw_(std::move(raw)) {}

    const std::string& raw() const noexcept { return raw_; }

private:
    std::string raw_;
};

/// Remote call failed after the retry budget was spent.
class TransportError : public Error {
public:
    TransportError(const std::string& what, int last_status)
        : Error(what), last_status_(last_status) {}

    /// HTTP status of the last attempt, or 0 for connection-level failures.
    int last_status() const noexcept { return last_status_; }

private:
    int last_status_;
};

class IoError : public Error {
public:
    using Error::Error;
};

/// A pipeline stage could not produce a usable output.
class StageError : public Error {
public:
    using Error::Error;
};

}  // namespace bioie
