#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>

namespace tagnet {

// Interns identifier strings to dense uint32 ids. The lookup keys are views
// into names_, which is a deque so stored strings never relocate. Copying
// rebuilds the index so the views point into the copy's own storage.
class StringPool {
public:
    StringPool() = default;
    StringPool(StringPool&&) = default;
    StringPool& operator=(StringPool&&) = default;
    StringPool(const StringPool& other) : names_(other.names_) { rebuild_index(); }
    StringPool& operator=(const StringPool& other) {
        if (this != &other) {
            names_ = other.names_;
            rebuild_index();
        }
        return *this;
    }

    std::uint32_t intern(std::string_view s) {
        auto it = index_.find(s);
        if (it != index_.end()) return it->second;
        names_.emplace_back(s);
        const auto id = static_cast<std::uint32_t>(names_.size() - 1);
        index_.emplace(names_.back(), id);
        return id;
    }

    std::optional<std::uint32_t> find(std::string_view s) const {
        auto it = index_.find(s);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    const std::string& name(std::uint32_t id) const { return names_[id]; }

    std::size_t size() const { return names_.size(); }

private:
    void rebuild_index() {
        index_.clear();
        index_.reserve(names_.size());
        for (std::size_t i = 0; i < names_.size(); ++i)
            index_.emplace(names_[i], static_cast<std::uint32_t>(i));
    }

    std::deque<std::string> names_;
    std::unordered_map<std::string_view, std::uint32_t> index_;
};

// Ingestion hygiene applied to every identifier: trim ASCII whitespace and
// fold ASCII letters to lowercase. Bytes outside ASCII pass through.
inline std::string normalize_id(std::string_view raw) {
    std::size_t begin = 0;
    std::size_t end = raw.size();
    auto is_space = [](char c) {
        return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v';
    };
    while (begin < end && is_space(raw[begin])) ++begin;
    while (end > begin && is_space(raw[end - 1])) --end;
    std::string out;
    out.reserve(end - begin);
    for (std::size_t i = begin; i < end; ++i) {
        char c = raw[i];
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
        out.push_back(c);
    }
    return out;
}

} // namespace tagnet
