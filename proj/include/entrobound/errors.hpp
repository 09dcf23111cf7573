// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace entrobound {

/// A measure spec (or other textual input) that does not conform to the
/// grammar. Carries the byte offset and the offending token.
class parse_error : public std::runtime_error {
public:
    parse_error(const std::string& message, std::size_t offset, std::string token)
        : std::runtime_error(message), offset_(offset), token_(std::move(token)) {}

    explicit parse_error(const std::string& message) : parse_error(message, 0, "") {}

    std::size_t offset() const noexcept { return offset_; }
    const std::string& token() const noexcept { return token_; }

private:
    std::size_t offset_ = 0;
    std::string token_;
};

/// A syntactically valid spec that yields a measure with no positive mass.
class degenerate_measure_error : public parse_error {
public:
    using parse_error::parse_error;
};

/// Precondition or domain violation (Dirac mass at 0 where excluded,
/// nonpositive variance proxy, asymmetric input to a symmetric-only
/// operation, and so on).
class domain_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid suite configuration; the message names the offending field.
class config_error : public std::runtime_error {
public:
    config_error(const std::string& field, const std::string& message)
        : std::runtime_error("config field '" + field + "': " + message), field_(field) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// Filesystem failure while reading a config or writing a report.
class io_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace entrobound
