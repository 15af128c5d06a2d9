// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 psq contributors

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace psq {

/// Transparent hashing so string_view lookups never allocate.
struct TokenHash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const noexcept {
        return std::hash<std::string_view>{}(s);
    }
};

template <typename T>
using TokenMap = std::unordered_map<std::string, T, TokenHash, std::equal_to<>>;

/// Bijective token <-> dense id map; ids are contiguous from 0 in
/// first-encounter order.
class Vocabulary {
public:
    std::uint32_t intern(std::string_view token) {
        auto it = ids_.find(token);
        if (it != ids_.end())
            return it->second;
        const auto id = static_cast<std::uint32_t>(tokens_.size());
        tokens_.emplace_back(token);
        ids_.emplace(tokens_.back(), id);
        return id;
    }

    std::optional<std::uint32_t> find(std::string_view token) const {
        auto it = ids_.find(token);
        if (it == ids_.end())
            return std::nullopt;
        return it->second;
    }

    const std::string& token(std::uint32_t id) const {
        if (id >= tokens_.size())
            throw std::out_of_range("token id " + std::to_string(id));
        return tokens_[id];
    }

    std::uint32_t size() const { return static_cast<std::uint32_t>(tokens_.size()); }
    const std::vector<std::string>& tokens() const { return tokens_; }

private:
    std::vector<std::string> tokens_;
    TokenMap<std::uint32_t> ids_;
};

} // namespace psq
