#include "pmsearch/tokenizer.hpp"

#include <algorithm>
#include <array>

namespace pmsearch {

namespace {

constexpr std::array<char const*, 33> kStopwords = {
    "a",    "an",   "and",  "are",   "as",    "at",   "be",    "but",  "by",   "for",  "if",
    "in",   "into", "is",   "it",    "no",    "not",  "of",    "on",   "or",   "such", "that",
    "the",  "their", "then", "there", "these", "they", "this", "to",   "was",  "will", "with",
};

bool is_token_byte(unsigned char c)
{
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c >= 0x80;
}

}  // namespace

std::span<char const* const> default_stopwords() { return kStopwords; }

Tokenizer::Tokenizer() : Tokenizer(true) {}

Tokenizer::Tokenizer(bool remove_stopwords)
{
    if (remove_stopwords) {
        m_stopwords.insert(kStopwords.begin(), kStopwords.end());
    }
}

Tokenizer::Tokenizer(std::vector<std::string> stopwords)
    : m_stopwords(std::make_move_iterator(stopwords.begin()), std::make_move_iterator(stopwords.end()))
{}

std::vector<std::string> Tokenizer::operator()(std::string_view text) const
{
    std::vector<std::string> tokens;
    std::string current;
    auto flush = [&] {
        if (!current.empty()) {
            if (!m_stopwords.contains(current)) {
                tokens.push_back(current);
            }
            current.clear();
        }
    };
    for (char ch : text) {
        auto c = static_cast<unsigned char>(ch);
        if (is_token_byte(c)) {
            current.push_back(c >= 'A' && c <= 'Z' ? static_cast<char>(c - 'A' + 'a') : ch);
        } else {
            flush();
        }
    }
    flush();
    return tokens;
}

std::vector<std::string> tokenize(std::string_view text)
{
    static Tokenizer const tokenizer;
    return tokenizer(text);
}

bool contains_sequence(std::span<std::string const> haystack, std::span<std::string const> needle)
{
    if (needle.empty()) {
        return false;
    }
    return std::search(haystack.begin(), haystack.end(), needle.begin(), needle.end()) != haystack.end();
}

}  // namespace pmsearch
