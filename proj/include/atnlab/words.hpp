#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "atnlab/rational.hpp"

namespace atnlab {

// Symbols are 0-based internally; every user-facing surface (text
// serialization, reports, CLI) converts to the 1-based convention.
struct Alphabet {
    int size;

    explicit Alphabet(int k) : size(k) {
        if (k < 2) throw std::invalid_argument("alphabet size must be at least 2");
        if (k > 255) throw std::invalid_argument("alphabet size exceeds byte storage (255)");
    }
};

// Closed integer interval [first, last].
struct IndexInterval {
    std::int64_t first = 0;
    std::int64_t last = 0;

    IndexInterval() = default;
    IndexInterval(std::int64_t a, std::int64_t b) : first(a), last(b) {
        if (b < a) throw std::invalid_argument("interval: last < first");
    }

    std::int64_t length() const { return last - first + 1; }
    bool contains(std::int64_t i) const { return first <= i && i <= last; }
    bool contains(const IndexInterval& other) const {
        return first <= other.first && other.last <= last;
    }
    friend bool operator==(const IndexInterval&, const IndexInterval&) = default;
};

// Finite set of integer coordinates, stored sorted; duplicates are rejected.
class Support {
public:
    explicit Support(std::vector<std::int64_t> indices);
    static Support interval(std::int64_t first, std::int64_t last);
    static Support interval(const IndexInterval& window) {
        return interval(window.first, window.last);
    }

    std::size_t size() const { return indices_.size(); }
    std::int64_t operator[](std::size_t i) const { return indices_[i]; }
    const std::vector<std::int64_t>& indices() const { return indices_; }
    auto begin() const { return indices_.begin(); }
    auto end() const { return indices_.end(); }

    bool contains(std::int64_t index) const;
    bool is_subset_of(const Support& other) const;
    // Position of `index` within the sorted list; throws if absent.
    std::size_t position_of(std::int64_t index) const;
    IndexInterval hull() const { return {indices_.front(), indices_.back()}; }
    bool is_interval() const {
        return hull().length() == static_cast<std::int64_t>(size());
    }

    friend bool operator==(const Support&, const Support&) = default;

private:
    std::vector<std::int64_t> indices_;
};

Support shift_support(const Support& support, std::int64_t t);
Support support_union(const Support& a, const Support& b);

// Symbol assignment on a finite, possibly non-contiguous coordinate set.
class FunnyWord {
public:
    FunnyWord(Support support, std::vector<int> symbols);

    const Support& support() const { return support_; }
    const std::vector<int>& symbols() const { return symbols_; }
    std::size_t size() const { return symbols_.size(); }
    int symbol_at_position(std::size_t i) const { return symbols_[i]; }
    int symbol_at_index(std::int64_t index) const {
        return symbols_[support_.position_of(index)];
    }
    int max_symbol() const;

    friend bool operator==(const FunnyWord&, const FunnyWord&) = default;

private:
    Support support_;
    std::vector<int> symbols_;
};

// Contiguous word starting at a given coordinate: a funny word whose support
// is an integer interval.
class Word {
public:
    Word(std::int64_t start, std::vector<int> symbols);

    std::int64_t start() const { return start_; }
    IndexInterval window() const {
        return {start_, start_ + static_cast<std::int64_t>(symbols_.size()) - 1};
    }
    const std::vector<int>& symbols() const { return symbols_; }
    std::size_t size() const { return symbols_.size(); }
    int symbol_at_index(std::int64_t index) const;

    FunnyWord as_funny() const;

    friend bool operator==(const Word&, const Word&) = default;

private:
    std::int64_t start_;
    std::vector<int> symbols_;
};

// Fraction of coordinates where the two words disagree, as an exact rational.
Rational hamming_distance(const FunnyWord& w, const FunnyWord& v);

// The funny word (x_n)_{n in support}; support must lie inside x's window.
FunnyWord restrict_word(const Word& x, const Support& support);
FunnyWord restrict_word(const FunnyWord& x, const Support& support);

FunnyWord shift_word(const FunnyWord& w, std::int64_t t);

// Text form used in reports and config files, 1-based symbols:
//   Λ=[n1,n2,...]; W=[s1,s2,...]
// The parser also accepts plain "L=" for the support key.
std::string to_text(const FunnyWord& w);
FunnyWord funny_word_from_text(const std::string& text);

} // namespace atnlab
