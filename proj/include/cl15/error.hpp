#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cl15 {

/// Malformed input text (formulas, runs, cirquents, proofs, game files).
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t position)
        : std::runtime_error(what + " at position " + std::to_string(position)),
          position_(position) {}

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

/// A structurally invalid cirquent (violates group/membership conditions).
class CirquentError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Rule parameters that do not fit the conclusion cirquent.
class RuleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A configured enumeration or search cap was exceeded.
class CapExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace cl15
