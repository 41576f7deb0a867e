#include "ebconst/free_search.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <string>

#include "ebconst/errors.hpp"

namespace ebconst {

namespace {

constexpr std::size_t kWordBits = DynamicBitset::kWordBits;
// Above this many candidate classes the quadratic dominance table is skipped.
constexpr std::size_t kDominanceLimit = 2048;

inline bool test_bit(const DynamicBitset::Word* w, std::size_t i) {
    return (w[i / kWordBits] >> (i % kWordBits)) & 1u;
}
inline void set_bit(DynamicBitset::Word* w, std::size_t i) {
    w[i / kWordBits] |= DynamicBitset::Word{1} << (i % kWordBits);
}

}  // namespace

std::size_t FreeSequenceSearch::KeyHash::operator()(const std::vector<Word>& k) const noexcept {
    std::size_t h = 0xcbf29ce484222325ull;
    for (Word w : k) {
        h ^= w + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        h *= 0x100000001b3ull;
    }
    return h;
}

FreeSequenceSearch::FreeSequenceSearch(const FiniteCommutativeMonoid& monoid, DynamicBitset forbidden,
                                       FreeSearchOptions options)
    : options_(std::move(options)) {
    if (forbidden.size() != monoid.size()) throw DomainError("forbidden set has wrong size");
    if (options_.candidates && options_.candidates->size() != monoid.size())
        throw DomainError("candidate mask has wrong size");
    stats_.depth_cap = monoid.size() - forbidden.count();
    build_classes(monoid, forbidden);
    stats_.classes = class_count_;
    // One scratch level per depth; sized up front so references stay valid.
    scratch_.resize(free_classes_ + 2);
}

void FreeSequenceSearch::build_classes(const FiniteCommutativeMonoid& monoid, const DynamicBitset& forbidden) {
    const std::size_t n = monoid.size();
    std::vector<std::uint32_t> class_of(n);
    std::vector<Element> first_member;
    std::vector<DynamicBitset> signature;
    {
        std::unordered_map<std::vector<Word>, std::uint32_t, KeyHash> ids;
        DynamicBitset sig(n);
        for (std::size_t x = 0; x < n; ++x) {
            sig.clear();
            const auto r = monoid.row(static_cast<Element>(x));
            for (std::size_t z = 0; z < n; ++z)
                if (forbidden.test(r[z])) sig.set(z);
            std::vector<Word> key(sig.words().begin(), sig.words().end());
            auto [it, inserted] = ids.try_emplace(std::move(key), static_cast<std::uint32_t>(first_member.size()));
            if (inserted) {
                first_member.push_back(static_cast<Element>(x));
                signature.push_back(sig);
            }
            class_of[x] = it->second;
        }
    }
    class_count_ = first_member.size();
    words_ = (class_count_ + kWordBits - 1) / kWordBits;

    table_.resize(class_count_ * class_count_);
    for (std::size_t a = 0; a < class_count_; ++a)
        for (std::size_t b = 0; b < class_count_; ++b)
            table_[a * class_count_ + b] = class_of[monoid.mul(first_member[a], first_member[b])];

    forbidden_words_.assign(words_, 0);
    std::vector<bool> class_forbidden(class_count_, false);
    for (std::size_t c = 0; c < class_count_; ++c) {
        if (forbidden.test(first_member[c])) {
            set_bit(forbidden_words_.data(), c);
            class_forbidden[c] = true;
        }
    }
    free_classes_ = class_count_ - static_cast<std::size_t>(
                                       std::count(class_forbidden.begin(), class_forbidden.end(), true));

    allowed_members_.assign(class_count_, {});
    for (std::size_t x = 0; x < n; ++x)
        if (!options_.candidates || options_.candidates->test(x))
            allowed_members_[class_of[x]].push_back(static_cast<Element>(x));

    representative_.assign(class_count_, 0);
    for (std::size_t c = 0; c < class_count_; ++c) {
        if (class_forbidden[c] || allowed_members_[c].empty()) continue;
        representative_[c] = allowed_members_[c].front();
        order_.push_back(static_cast<std::uint32_t>(c));
    }
    std::sort(order_.begin(), order_.end(),
              [&](std::uint32_t a, std::uint32_t b) { return representative_[a] < representative_[b]; });

    const std::size_t k = order_.size();
    max_dominator_.assign(k, -1);
    if (k > kDominanceLimit) return;
    for (std::size_t b = 0; b < k; ++b) {
        const auto& sb = signature[order_[b]];
        for (std::size_t a = k; a-- > 0;) {
            if (a == b) continue;
            if (signature[order_[a]].is_subset_of(sb)) {
                max_dominator_[b] = static_cast<std::int64_t>(a);
                break;
            }
        }
    }
}

bool FreeSequenceSearch::extend(const Word* state, std::size_t state_count, std::uint32_t cls, Word* out) const {
    std::copy(state, state + words_, out);
    set_bit(out, cls);
    if (state_count == 0) return true;
    const std::uint32_t* row = table_.data() + static_cast<std::size_t>(cls) * class_count_;
    const Word* forbidden = forbidden_words_.data();
    for (std::size_t w = 0; w < words_; ++w) {
        Word bits = state[w];
        while (bits) {
            const std::size_t x = w * kWordBits + static_cast<std::size_t>(std::countr_zero(bits));
            bits &= bits - 1;
            const std::uint32_t y = row[x];
            if (test_bit(forbidden, y)) return false;
            set_bit(out, y);
        }
    }
    return true;
}

std::vector<FreeSequenceSearch::Word> FreeSequenceSearch::make_key(const Word* state, std::size_t min_pos) const {
    std::vector<Word> key(state, state + words_);
    key.push_back(static_cast<Word>(min_pos));
    return key;
}

FreeSequenceSearch::MemoEntry* FreeSequenceSearch::memo_find(const std::vector<Word>& key) {
    if (auto it = memo_current_.find(key); it != memo_current_.end()) return &it->second;
    if (auto it = memo_previous_.find(key); it != memo_previous_.end()) {
        const MemoEntry entry = it->second;
        memo_previous_.erase(it);
        memo_store(key, entry);
        return &memo_current_.find(key)->second;
    }
    return nullptr;
}

void FreeSequenceSearch::memo_store(const std::vector<Word>& key, MemoEntry entry) {
    if (memo_current_.size() >= std::max<std::size_t>(options_.memo_budget / 2, 1)) {
        memo_previous_ = std::move(memo_current_);
        memo_current_ = Memo{};
    }
    memo_current_[key] = entry;
}

void FreeSequenceSearch::expand(const Word* state, std::size_t min_pos,
                                const std::vector<std::uint32_t>& feasible, bool prune_dominated,
                                Children& out) const {
    std::size_t count = 0;
    for (std::size_t w = 0; w < words_; ++w) count += static_cast<std::size_t>(std::popcount(state[w]));
    out.positions.clear();
    out.counts.clear();
    out.open.clear();
    out.states.resize(feasible.size() * words_);
    for (auto pos : feasible) {
        if (prune_dominated && max_dominator_[pos] >= static_cast<std::int64_t>(min_pos)) {
            out.open.push_back(pos);
            continue;
        }
        Word* dst = out.states.data() + out.positions.size() * words_;
        if (!extend(state, count, order_[pos], dst)) continue;
        std::size_t c = 0;
        for (std::size_t w = 0; w < words_; ++w) c += static_cast<std::size_t>(std::popcount(dst[w]));
        out.positions.push_back(pos);
        out.counts.push_back(c);
        out.open.push_back(pos);
    }
}

std::vector<std::uint32_t> FreeSequenceSearch::tail_from(const std::vector<std::uint32_t>& open, std::uint32_t pos) {
    return {std::lower_bound(open.begin(), open.end(), pos), open.end()};
}

bool FreeSequenceSearch::decide(const Word* state, std::size_t state_count, std::size_t min_pos,
                                const std::vector<std::uint32_t>& feasible, std::size_t remaining,
                                std::size_t depth) {
    if (remaining == 0) return true;
    if (free_classes_ < state_count + remaining) return false;

    auto key = make_key(state, min_pos);
    if (const MemoEntry* e = memo_find(key)) {
        ++stats_.memo_hits;
        if (e->lower >= remaining) return true;
        if (e->upper < remaining) return false;
    }
    ++stats_.nodes;
    if (options_.node_budget != 0 && stats_.nodes > options_.node_budget)
        throw SearchBudgetExceeded("free-sequence search exceeded " + std::to_string(options_.node_budget) +
                                   " nodes");

    // Children of this node stay in scratch_[depth] while deeper levels run.
    Children& kids = scratch_[depth];
    expand(state, min_pos, feasible, true, kids);
    const std::size_t kid_count = kids.positions.size();

    bool found = false;
    std::vector<std::uint32_t> tail;
    for (std::size_t i = 0; i < kid_count && !found; ++i) {
        if (free_classes_ < kids.counts[i] + remaining - 1) continue;
        tail = tail_from(kids.open, kids.positions[i]);
        found = decide(kids.states.data() + i * words_, kids.counts[i], kids.positions[i], tail,
                       remaining - 1, depth + 1);
    }

    MemoEntry entry{0, static_cast<std::uint32_t>(free_classes_ - state_count)};
    if (const MemoEntry* e = memo_find(key)) entry = *e;
    if (found) entry.lower = std::max<std::uint32_t>(entry.lower, static_cast<std::uint32_t>(remaining));
    else entry.upper = std::min<std::uint32_t>(entry.upper, static_cast<std::uint32_t>(remaining - 1));
    memo_store(key, entry);
    return found;
}

bool FreeSequenceSearch::exists(std::size_t length) {
    std::vector<Word> root(words_, 0);
    std::vector<std::uint32_t> all(order_.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<std::uint32_t>(i);
    return decide(root.data(), 0, 0, all, length, 0);
}

FreeSearchResult FreeSequenceSearch::run() {
    const std::size_t cap = free_classes_;
    std::size_t best = std::min(options_.start_length, cap);
    stats_.start_length = best;
    while (best > 0 && !exists(best)) --best;
    while (best < cap && exists(best + 1)) ++best;

    // Lex-least witness: at each level take the first child that can still
    // reach the target length.
    std::vector<Element> witness;
    std::vector<Word> state(words_, 0);
    std::size_t state_count = 0;
    std::vector<std::uint32_t> feasible(order_.size());
    for (std::size_t i = 0; i < feasible.size(); ++i) feasible[i] = static_cast<std::uint32_t>(i);
    Children kids;
    for (std::size_t remaining = best; remaining > 0; --remaining) {
        expand(state.data(), 0, feasible, false, kids);
        bool advanced = false;
        for (std::size_t i = 0; i < kids.positions.size(); ++i) {
            auto tail = tail_from(kids.open, kids.positions[i]);
            std::vector<Word> child(kids.states.begin() + static_cast<std::ptrdiff_t>(i * words_),
                                    kids.states.begin() + static_cast<std::ptrdiff_t>((i + 1) * words_));
            if (decide(child.data(), kids.counts[i], kids.positions[i], tail, remaining - 1, 0)) {
                witness.push_back(representative_[order_[kids.positions[i]]]);
                state = std::move(child);
                state_count = kids.counts[i];
                feasible = std::move(tail);
                advanced = true;
                break;
            }
        }
        if (!advanced) throw InvariantFailure("witness reconstruction lost the optimal path");
    }
    (void)state_count;
    return {best, Sequence(std::move(witness)), stats_};
}

void FreeSequenceSearch::collect(std::vector<Word> state, std::size_t min_pos, std::vector<std::uint32_t> feasible,
                                 std::size_t remaining, std::vector<std::uint32_t>& path,
                                 std::vector<std::vector<std::uint32_t>>& out, std::size_t limit) {
    if (remaining == 0) {
        out.push_back(path);
        if (out.size() > limit) throw CapacityError("more than " + std::to_string(limit) + " extremal sequences");
        return;
    }
    Children kids;
    expand(state.data(), min_pos, feasible, false, kids);
    for (std::size_t i = 0; i < kids.positions.size(); ++i) {
        auto tail = tail_from(kids.open, kids.positions[i]);
        std::vector<Word> child(kids.states.begin() + static_cast<std::ptrdiff_t>(i * words_),
                                kids.states.begin() + static_cast<std::ptrdiff_t>((i + 1) * words_));
        if (!decide(child.data(), kids.counts[i], kids.positions[i], tail, remaining - 1, 0)) continue;
        path.push_back(order_[kids.positions[i]]);
        collect(std::move(child), kids.positions[i], std::move(tail), remaining - 1, path, out, limit);
        path.pop_back();
    }
}

std::vector<Sequence> FreeSequenceSearch::enumerate(std::size_t length, std::size_t limit) {
    std::vector<std::vector<std::uint32_t>> class_paths;
    std::vector<std::uint32_t> path;
    std::vector<std::uint32_t> all(order_.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<std::uint32_t>(i);
    collect(std::vector<Word>(words_, 0), 0, all, length, path, class_paths, limit);

    // Lift each class multiset to every multiset of allowed members.
    std::vector<Sequence> result;
    for (const auto& cp : class_paths) {
        std::map<std::uint32_t, std::size_t> multiplicity;
        for (auto c : cp) ++multiplicity[c];
        std::vector<std::vector<Element>> partial{{}};
        for (const auto& [cls, m] : multiplicity) {
            const auto& members = allowed_members_[cls];
            std::vector<std::vector<Element>> next;
            // Nondecreasing index choices of size m from members.
            std::vector<std::size_t> pick(m, 0);
            for (;;) {
                for (const auto& base : partial) {
                    auto ext = base;
                    for (auto ix : pick) ext.push_back(members[ix]);
                    next.push_back(std::move(ext));
                    if (result.size() + next.size() > limit)
                        throw CapacityError("more than " + std::to_string(limit) + " extremal sequences");
                }
                std::size_t k = m;
                while (k > 0 && pick[k - 1] + 1 == members.size()) --k;
                if (k == 0) break;
                ++pick[k - 1];
                for (std::size_t j = k; j < m; ++j) pick[j] = pick[k - 1];
            }
            partial = std::move(next);
        }
        for (auto& seq : partial) result.emplace_back(std::move(seq));
    }
    std::sort(result.begin(), result.end());
    return result;
}

}  // namespace ebconst
