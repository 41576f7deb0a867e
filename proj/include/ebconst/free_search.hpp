#pragma once

/**
 * @file free_search.hpp
 * @brief Exhaustive search for the longest sequence over a finite
 * commutative monoid none of whose nonempty subsequences has its product in
 * a forbidden set.
 *
 * With forbidden = {identity} in a group this is a zero-sum-free search
 * (Davenport constant); with forbidden = idempotents it is the
 * Erdős–Burgess search.
 *
 * Search model:
 *  - Sequences are enumerated as nondecreasing index lists (commutativity
 *    makes only the multiset matter).
 *  - The state is the bitset P of products of nonempty subsequences; adding
 *    a gives P ∪ {a} ∪ aP, and a branch dies as soon as P meets the
 *    forbidden set.
 *  - P grows strictly with every admissible element (otherwise a and all its
 *    powers, including an idempotent one, would lie in P), so the remaining
 *    depth is at most (#non-forbidden) - |P|. At the root this is the bound
 *    I(S) <= |S| - |E| + 1.
 *  - Elements are first merged under the congruence x ~ y iff xz and yz are
 *    forbidden for exactly the same z. Whether a sequence is free depends
 *    only on the classes of its terms, so the search runs over classes and
 *    witnesses are lifted to least representatives.
 *  - Dominance: if {z : az forbidden} is a strict subset of {z : bz forbidden},
 *    replacing b by a keeps any free sequence free, so existence questions
 *    never need to branch on b while a is still available (a sits at or
 *    after the least allowed position). Witness reconstruction and full
 *    enumeration still visit every child.
 *  - Iterative deepening from a known-achievable length; decision results
 *    are memoized per (P, least allowed next class) as [lower, upper] bounds
 *    on the longest extension.
 */

#include <cstddef>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "ebconst/bitset.hpp"
#include "ebconst/monoid.hpp"

namespace ebconst {

struct FreeSearchOptions {
    /// Length the deepening starts from. Should be achievable; if not, the
    /// search steps down first.
    std::size_t start_length = 0;
    /// Restrict sequence terms to these elements (nullopt: all elements).
    std::optional<DynamicBitset> candidates;
    /// Abort with SearchBudgetExceeded after this many expanded nodes (0 = no limit).
    std::uint64_t node_budget = 0;
    /// Approximate cap on memo entries.
    std::size_t memo_budget = std::size_t{1} << 21;
};

struct FreeSearchStats {
    std::uint64_t nodes = 0;
    std::uint64_t memo_hits = 0;
    std::size_t classes = 0;     ///< congruence classes of the monoid
    std::size_t depth_cap = 0;   ///< |S| - |F| for the original monoid
    std::size_t start_length = 0;
};

struct FreeSearchResult {
    std::size_t max_length = 0;
    /// Lexicographically least free sequence of length max_length.
    Sequence witness;
    FreeSearchStats stats;
};

class FreeSequenceSearch {
public:
    FreeSequenceSearch(const FiniteCommutativeMonoid& monoid, DynamicBitset forbidden,
                       FreeSearchOptions options = {});

    /// Longest free length with its lex-least witness.
    FreeSearchResult run();

    /// Whether a free sequence of exactly `length` terms exists.
    bool exists(std::size_t length);

    /// Every free sequence of exactly `length` terms (as multisets of
    /// original elements), sorted. Throws CapacityError past `limit`.
    std::vector<Sequence> enumerate(std::size_t length, std::size_t limit);

    [[nodiscard]] const FreeSearchStats& stats() const noexcept { return stats_; }

private:
    using Word = DynamicBitset::Word;

    struct MemoEntry {
        std::uint32_t lower;  // an extension of this length exists
        std::uint32_t upper;  // no longer extension exists
    };
    struct KeyHash {
        std::size_t operator()(const std::vector<Word>& k) const noexcept;
    };
    using Memo = std::unordered_map<std::vector<Word>, MemoEntry, KeyHash>;

    void build_classes(const FiniteCommutativeMonoid& monoid, const DynamicBitset& forbidden);

    // Writes P ∪ {c} ∪ cP into `out`; false if it meets the forbidden set.
    bool extend(const Word* state, std::size_t state_count, std::uint32_t cls, Word* out) const;
    bool decide(const Word* state, std::size_t state_count, std::size_t min_pos,
                const std::vector<std::uint32_t>& feasible, std::size_t remaining, std::size_t depth);
    MemoEntry* memo_find(const std::vector<Word>& key);
    void memo_store(const std::vector<Word>& key, MemoEntry entry);
    std::vector<Word> make_key(const Word* state, std::size_t min_pos) const;

    // Children below a node. `positions`/`states`/`counts` are the expanded
    // children; `open` lists every candidate not known to be infeasible.
    struct Children {
        std::vector<std::uint32_t> positions;
        std::vector<Word> states;
        std::vector<std::size_t> counts;
        std::vector<std::uint32_t> open;
    };
    // With `prune_dominated`, skips candidates dominated by a class at a
    // position >= min_pos (they stay in `open` unexpanded).
    void expand(const Word* state, std::size_t min_pos, const std::vector<std::uint32_t>& feasible,
                bool prune_dominated, Children& out) const;
    static std::vector<std::uint32_t> tail_from(const std::vector<std::uint32_t>& open, std::uint32_t pos);

    void collect(std::vector<Word> state, std::size_t min_pos, std::vector<std::uint32_t> feasible,
                 std::size_t remaining, std::vector<std::uint32_t>& path,
                 std::vector<std::vector<std::uint32_t>>& out, std::size_t limit);

    FreeSearchOptions options_;
    FreeSearchStats stats_;

    std::size_t class_count_ = 0;
    std::size_t words_ = 0;
    std::vector<std::uint32_t> table_;          // class product table
    std::vector<Word> forbidden_words_;
    std::size_t free_classes_ = 0;              // classes not forbidden
    std::vector<std::uint32_t> order_;          // candidate classes, ascending by representative
    std::vector<Element> representative_;       // per class: least allowed member
    std::vector<std::vector<Element>> allowed_members_;
    /// Per candidate position: the largest position of a dominating class, or -1.
    std::vector<std::int64_t> max_dominator_;

    Memo memo_current_;
    Memo memo_previous_;
    std::vector<Children> scratch_;
};

}  // namespace ebconst
