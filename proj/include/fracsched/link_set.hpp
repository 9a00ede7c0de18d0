#pragma once

#include <array>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace fracsched {

/// Set of link indices in [0, 128), stored as two 64-bit words.
class LinkSet {
public:
    static constexpr std::size_t kCapacity = 128;

    constexpr LinkSet() = default;
    LinkSet(std::initializer_list<std::size_t> ids) {
        for (std::size_t id : ids) insert(id);
    }

    static LinkSet from_ids(const std::vector<std::uint32_t>& ids) {
        LinkSet s;
        for (auto id : ids) s.insert(id);
        return s;
    }

    void insert(std::size_t id) {
        check(id);
        words_[id >> 6u] |= bit(id);
    }
    void erase(std::size_t id) {
        check(id);
        words_[id >> 6u] &= ~bit(id);
    }
    [[nodiscard]] bool contains(std::size_t id) const {
        return id < kCapacity && (words_[id >> 6u] & bit(id)) != 0;
    }
    [[nodiscard]] std::size_t size() const {
        return static_cast<std::size_t>(std::popcount(words_[0]) + std::popcount(words_[1]));
    }
    [[nodiscard]] bool empty() const { return (words_[0] | words_[1]) == 0; }

    /// Smallest member; the set must be non-empty.
    [[nodiscard]] std::size_t front() const {
        if (words_[0] != 0) return static_cast<std::size_t>(std::countr_zero(words_[0]));
        return 64 + static_cast<std::size_t>(std::countr_zero(words_[1]));
    }
    /// Largest member; the set must be non-empty.
    [[nodiscard]] std::size_t back() const {
        if (words_[1] != 0) return 127 - static_cast<std::size_t>(std::countl_zero(words_[1]));
        return 63 - static_cast<std::size_t>(std::countl_zero(words_[0]));
    }

    template <class F>
    void for_each(F&& f) const {
        for (std::size_t w = 0; w < 2; ++w) {
            std::uint64_t bits = words_[w];
            while (bits != 0) {
                const auto tz = static_cast<std::size_t>(std::countr_zero(bits));
                f(w * 64 + tz);
                bits &= bits - 1;
            }
        }
    }

    [[nodiscard]] std::vector<std::uint32_t> to_vector() const {
        std::vector<std::uint32_t> out;
        out.reserve(size());
        for_each([&](std::size_t id) { out.push_back(static_cast<std::uint32_t>(id)); });
        return out;
    }

    [[nodiscard]] bool intersects(const LinkSet& o) const {
        return ((words_[0] & o.words_[0]) | (words_[1] & o.words_[1])) != 0;
    }
    [[nodiscard]] bool is_subset_of(const LinkSet& o) const {
        return (words_[0] & ~o.words_[0]) == 0 && (words_[1] & ~o.words_[1]) == 0;
    }

    LinkSet& operator|=(const LinkSet& o) {
        words_[0] |= o.words_[0];
        words_[1] |= o.words_[1];
        return *this;
    }
    LinkSet& operator&=(const LinkSet& o) {
        words_[0] &= o.words_[0];
        words_[1] &= o.words_[1];
        return *this;
    }
    LinkSet& operator^=(const LinkSet& o) {
        words_[0] ^= o.words_[0];
        words_[1] ^= o.words_[1];
        return *this;
    }
    friend LinkSet operator|(LinkSet a, const LinkSet& b) { return a |= b; }
    friend LinkSet operator&(LinkSet a, const LinkSet& b) { return a &= b; }
    friend LinkSet operator^(LinkSet a, const LinkSet& b) { return a ^= b; }
    /// Members of `a` not in `b`.
    friend LinkSet operator-(LinkSet a, const LinkSet& b) {
        a.words_[0] &= ~b.words_[0];
        a.words_[1] &= ~b.words_[1];
        return a;
    }

    friend bool operator==(const LinkSet&, const LinkSet&) = default;

    [[nodiscard]] const std::array<std::uint64_t, 2>& words() const { return words_; }

    [[nodiscard]] std::string to_string() const {
        std::string s = "{";
        bool first = true;
        for_each([&](std::size_t id) {
            if (!first) s += ',';
            s += std::to_string(id);
            first = false;
        });
        return s + "}";
    }

private:
    static constexpr std::uint64_t bit(std::size_t id) { return std::uint64_t{1} << (id & 63u); }
    static void check(std::size_t id) {
        if (id >= kCapacity) throw std::out_of_range("link index " + std::to_string(id) + " exceeds 127");
    }

    std::array<std::uint64_t, 2> words_{};
};

/// Canonical matching order: by cardinality, then lexicographically by the
/// sorted member indices. For equal cardinalities the lexicographically
/// smaller set is the one owning the smallest element of the symmetric
/// difference.
inline bool canonical_less(const LinkSet& a, const LinkSet& b) {
    const std::size_t sa = a.size();
    const std::size_t sb = b.size();
    if (sa != sb) return sa < sb;
    const LinkSet diff = a ^ b;
    if (diff.empty()) return false;
    return a.contains(diff.front());
}

struct LinkSetHash {
    std::size_t operator()(const LinkSet& s) const noexcept {
        const auto& w = s.words();
        return std::hash<std::uint64_t>{}(w[0] * 0x9E3779B97F4A7C15ULL ^ w[1]);
    }
};

}  // namespace fracsched
