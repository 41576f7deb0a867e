#pragma once

/**
 * @file bitset.hpp
 * @brief Runtime-sized bitset over element indices.
 *
 * Every set of monoid elements in the library (idempotents, units, product
 * sets, stabilizers) is one of these. Word storage is exposed so the search
 * engine can hash and compare states without copying.
 */

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace ebconst {

class DynamicBitset {
public:
    using Word = std::uint64_t;
    static constexpr std::size_t kWordBits = 64;

    DynamicBitset() = default;
    explicit DynamicBitset(std::size_t size)
        : size_(size), words_((size + kWordBits - 1) / kWordBits, 0) {}

    [[nodiscard]] std::size_t size() const noexcept { return size_; }

    [[nodiscard]] bool test(std::size_t i) const noexcept {
        return (words_[i / kWordBits] >> (i % kWordBits)) & 1u;
    }
    void set(std::size_t i) noexcept { words_[i / kWordBits] |= Word{1} << (i % kWordBits); }
    void reset(std::size_t i) noexcept { words_[i / kWordBits] &= ~(Word{1} << (i % kWordBits)); }
    void clear() noexcept { std::fill(words_.begin(), words_.end(), Word{0}); }

    void set_all() noexcept {
        std::fill(words_.begin(), words_.end(), ~Word{0});
        trim();
    }

    [[nodiscard]] std::size_t count() const noexcept {
        std::size_t c = 0;
        for (Word w : words_) c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }

    [[nodiscard]] bool any() const noexcept {
        for (Word w : words_)
            if (w) return true;
        return false;
    }
    [[nodiscard]] bool none() const noexcept { return !any(); }

    [[nodiscard]] bool intersects(const DynamicBitset& other) const noexcept {
        for (std::size_t i = 0; i < words_.size(); ++i)
            if (words_[i] & other.words_[i]) return true;
        return false;
    }

    [[nodiscard]] bool is_subset_of(const DynamicBitset& other) const noexcept {
        for (std::size_t i = 0; i < words_.size(); ++i)
            if (words_[i] & ~other.words_[i]) return false;
        return true;
    }

    DynamicBitset& operator|=(const DynamicBitset& other) noexcept {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
        return *this;
    }
    DynamicBitset& operator&=(const DynamicBitset& other) noexcept {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= other.words_[i];
        return *this;
    }

    friend DynamicBitset operator|(DynamicBitset a, const DynamicBitset& b) { return a |= b; }
    friend DynamicBitset operator&(DynamicBitset a, const DynamicBitset& b) { return a &= b; }

    bool operator==(const DynamicBitset& other) const = default;

    /// Calls f(i) for every set bit, ascending.
    template <class F>
    void for_each(F&& f) const {
        for (std::size_t w = 0; w < words_.size(); ++w) {
            Word bits = words_[w];
            while (bits) {
                const auto tz = static_cast<std::size_t>(std::countr_zero(bits));
                f(w * kWordBits + tz);
                bits &= bits - 1;
            }
        }
    }

    [[nodiscard]] std::vector<std::size_t> indices() const {
        std::vector<std::size_t> out;
        out.reserve(count());
        for_each([&](std::size_t i) { out.push_back(i); });
        return out;
    }

    [[nodiscard]] std::span<const Word> words() const noexcept { return words_; }
    [[nodiscard]] std::span<Word> words() noexcept { return words_; }

    [[nodiscard]] std::size_t hash() const noexcept {
        std::size_t h = 0x9e3779b97f4a7c15ull;
        for (Word w : words_) {
            h ^= std::hash<Word>{}(w) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        }
        return h;
    }

private:
    void trim() noexcept {
        const std::size_t rem = size_ % kWordBits;
        if (rem != 0 && !words_.empty()) words_.back() &= (Word{1} << rem) - 1;
    }

    std::size_t size_ = 0;
    std::vector<Word> words_;
};

}  // namespace ebconst
