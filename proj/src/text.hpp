#pragma once

// Small cursor shared by the block-structured text formats (cirquents, proofs).

#include <cctype>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "cl15/error.hpp"

namespace cl15::text {

class Cursor {
public:
    explicit Cursor(std::string_view s, std::size_t offset = 0) : s_(s), base_(offset) {}

    void skip_ws() {
        while (i_ < s_.size()) {
            if (std::isspace(static_cast<unsigned char>(s_[i_]))) {
                ++i_;
            } else if (s_[i_] == '#') {
                while (i_ < s_.size() && s_[i_] != '\n') ++i_;
            } else {
                break;
            }
        }
    }

    bool at_end() {
        skip_ws();
        return i_ >= s_.size();
    }

    char peek() {
        skip_ws();
        return i_ < s_.size() ? s_[i_] : '\0';
    }

    bool eat(std::string_view tok) {
        skip_ws();
        if (s_.substr(i_, tok.size()) != tok) return false;
        i_ += tok.size();
        return true;
    }

    void expect(std::string_view tok) {
        if (!eat(tok)) fail("expected '" + std::string(tok) + "'");
    }

    std::string word() {
        skip_ws();
        const std::size_t start = i_;
        while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_')) ++i_;
        if (start == i_) fail("expected a name");
        return std::string(s_.substr(start, i_ - start));
    }

    std::size_t number() {
        skip_ws();
        const std::size_t start = i_;
        std::size_t v = 0;
        while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) {
            v = v * 10 + static_cast<std::size_t>(s_[i_] - '0');
            ++i_;
        }
        if (start == i_) fail("expected a number");
        return v;
    }

    /// [n, n, ...]
    std::vector<std::size_t> number_list() {
        std::vector<std::size_t> out;
        expect("[");
        if (eat("]")) return out;
        do out.push_back(number());
        while (eat(","));
        expect("]");
        return out;
    }

    /// [[n, ...], ...]
    std::vector<std::vector<std::size_t>> number_lists() {
        std::vector<std::vector<std::size_t>> out;
        expect("[");
        if (eat("]")) return out;
        do out.push_back(number_list());
        while (eat(","));
        expect("]");
        return out;
    }

    /// Raw text up to (not including) the first of `stops` at bracket depth 0.
    std::string until_any(std::string_view stops) {
        skip_ws();
        const std::size_t start = i_;
        int depth = 0;
        while (i_ < s_.size()) {
            const char c = s_[i_];
            if (depth == 0 && stops.find(c) != std::string_view::npos) break;
            if (c == '(' || c == '[' || c == '{') ++depth;
            if (c == ')' || c == ']' || c == '}') --depth;
            ++i_;
        }
        std::string out(s_.substr(start, i_ - start));
        while (!out.empty() && std::isspace(static_cast<unsigned char>(out.back()))) out.pop_back();
        return out;
    }

    /// Position in the outermost text.
    std::size_t pos() const noexcept { return base_ + i_; }
    std::size_t local() const noexcept { return i_; }

    [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos()); }

private:
    std::string_view s_;
    std::size_t base_;
    std::size_t i_ = 0;
};

inline std::string join_numbers(const std::vector<std::size_t>& v) {
    std::string out = "[";
    for (std::size_t k = 0; k < v.size(); ++k) {
        if (k) out += ",";
        out += std::to_string(v[k]);
    }
    return out + "]";
}

inline std::string join_groups(const std::vector<std::vector<std::size_t>>& gs) {
    std::string out = "[";
    for (std::size_t k = 0; k < gs.size(); ++k) {
        if (k) out += ", ";
        out += join_numbers(gs[k]);
    }
    return out + "]";
}

} // namespace cl15::text
