#include "atnlab/words.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace atnlab {

Support::Support(std::vector<std::int64_t> indices) : indices_(std::move(indices)) {
    if (indices_.empty()) throw std::invalid_argument("support must be nonempty");
    std::sort(indices_.begin(), indices_.end());
    if (std::adjacent_find(indices_.begin(), indices_.end()) != indices_.end())
        throw std::invalid_argument("support contains duplicate indices");
}

Support Support::interval(std::int64_t first, std::int64_t last) {
    if (last < first) throw std::invalid_argument("support interval: last < first");
    std::vector<std::int64_t> idx(static_cast<std::size_t>(last - first + 1));
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = first + static_cast<std::int64_t>(i);
    return Support(std::move(idx));
}

bool Support::contains(std::int64_t index) const {
    return std::binary_search(indices_.begin(), indices_.end(), index);
}

bool Support::is_subset_of(const Support& other) const {
    return std::includes(other.indices_.begin(), other.indices_.end(),
                         indices_.begin(), indices_.end());
}

std::size_t Support::position_of(std::int64_t index) const {
    const auto it = std::lower_bound(indices_.begin(), indices_.end(), index);
    if (it == indices_.end() || *it != index)
        throw std::invalid_argument("support out of range");
    return static_cast<std::size_t>(it - indices_.begin());
}

Support shift_support(const Support& support, std::int64_t t) {
    std::vector<std::int64_t> idx;
    idx.reserve(support.size());
    for (std::int64_t i : support) idx.push_back(i + t);
    return Support(std::move(idx));
}

Support support_union(const Support& a, const Support& b) {
    std::vector<std::int64_t> merged;
    merged.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(merged));
    return Support(std::move(merged));
}

FunnyWord::FunnyWord(Support support, std::vector<int> symbols)
    : support_(std::move(support)), symbols_(std::move(symbols)) {
    if (symbols_.size() != support_.size())
        throw std::invalid_argument("funny word: one symbol per support index required");
    for (int s : symbols_)
        if (s < 0) throw std::invalid_argument("funny word: negative symbol");
}

int FunnyWord::max_symbol() const {
    return *std::max_element(symbols_.begin(), symbols_.end());
}

Word::Word(std::int64_t start, std::vector<int> symbols)
    : start_(start), symbols_(std::move(symbols)) {
    if (symbols_.empty()) throw std::invalid_argument("word must be nonempty");
    for (int s : symbols_)
        if (s < 0) throw std::invalid_argument("word: negative symbol");
}

int Word::symbol_at_index(std::int64_t index) const {
    if (!window().contains(index)) throw std::invalid_argument("support out of range");
    return symbols_[static_cast<std::size_t>(index - start_)];
}

FunnyWord Word::as_funny() const {
    return {Support::interval(window()), symbols_};
}

Rational hamming_distance(const FunnyWord& w, const FunnyWord& v) {
    if (w.support() != v.support()) throw std::invalid_argument("support mismatch");
    std::int64_t mismatches = 0;
    for (std::size_t i = 0; i < w.size(); ++i)
        if (w.symbols()[i] != v.symbols()[i]) ++mismatches;
    return {mismatches, static_cast<std::int64_t>(w.size())};
}

FunnyWord restrict_word(const Word& x, const Support& support) {
    const IndexInterval win = x.window();
    if (support.hull().first < win.first || support.hull().last > win.last)
        throw std::invalid_argument("support out of range");
    std::vector<int> symbols;
    symbols.reserve(support.size());
    for (std::int64_t i : support)
        symbols.push_back(x.symbols()[static_cast<std::size_t>(i - x.start())]);
    return {support, std::move(symbols)};
}

FunnyWord restrict_word(const FunnyWord& x, const Support& support) {
    if (!support.is_subset_of(x.support()))
        throw std::invalid_argument("support out of range");
    std::vector<int> symbols;
    symbols.reserve(support.size());
    for (std::int64_t i : support) symbols.push_back(x.symbol_at_index(i));
    return {support, std::move(symbols)};
}

FunnyWord shift_word(const FunnyWord& w, std::int64_t t) {
    return {shift_support(w.support(), t), w.symbols()};
}

std::string to_text(const FunnyWord& w) {
    std::ostringstream out;
    out << "Λ=[";
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i) out << ",";
        out << w.support()[i];
    }
    out << "]; W=[";
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i) out << ",";
        out << w.symbols()[i] + 1; // 1-based on the wire
    }
    out << "]";
    return out.str();
}

namespace {

std::vector<std::int64_t> parse_int_list(const std::string& text, std::size_t& pos) {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos >= text.size() || text[pos] != '[')
        throw std::invalid_argument("funny word text: expected '['");
    ++pos;
    std::vector<std::int64_t> values;
    std::string token;
    for (; pos < text.size(); ++pos) {
        const char c = text[pos];
        if (c == ',' || c == ']') {
            if (!token.empty()) {
                values.push_back(std::stoll(token));
                token.clear();
            } else if (c == ',') {
                throw std::invalid_argument("funny word text: empty list entry");
            }
            if (c == ']') {
                ++pos;
                return values;
            }
        } else if (!std::isspace(static_cast<unsigned char>(c))) {
            token.push_back(c);
        }
    }
    throw std::invalid_argument("funny word text: unterminated list");
}

// Accepts the key spelled either as the greek letter or as plain "L".
std::size_t expect_key(const std::string& text, std::size_t pos, const char* utf8_key,
                       const char* ascii_key) {
    while (pos < text.size() && (std::isspace(static_cast<unsigned char>(text[pos])) ||
                                 text[pos] == ';'))
        ++pos;
    const std::string u = utf8_key, a = ascii_key;
    if (text.compare(pos, u.size(), u) == 0)
        pos += u.size();
    else if (text.compare(pos, a.size(), a) == 0)
        pos += a.size();
    else
        throw std::invalid_argument(std::string("funny word text: expected key ") + ascii_key);
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos >= text.size() || text[pos] != '=')
        throw std::invalid_argument("funny word text: expected '='");
    return pos + 1;
}

} // namespace

FunnyWord funny_word_from_text(const std::string& text) {
    std::size_t pos = expect_key(text, 0, "Λ", "L");
    std::vector<std::int64_t> indices = parse_int_list(text, pos);
    pos = expect_key(text, pos, "W", "W");
    const std::vector<std::int64_t> raw = parse_int_list(text, pos);
    std::vector<int> symbols;
    symbols.reserve(raw.size());
    for (std::int64_t s : raw) {
        if (s < 1) throw std::invalid_argument("funny word text: symbols are 1-based");
        symbols.push_back(static_cast<int>(s - 1));
    }
    return {Support(std::move(indices)), std::move(symbols)};
}

} // namespace atnlab
