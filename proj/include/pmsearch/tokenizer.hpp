#pragma once

#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace pmsearch {

/// The 33-word English stop list used by default.
[[nodiscard]] std::span<char const* const> default_stopwords();

/// Lower-cases text and splits it on every character that is not an ASCII
/// letter or digit. Bytes >= 0x80 are treated as letters so UTF-8 sequences
/// stay inside their token.
class Tokenizer {
  public:
    Tokenizer();
    explicit Tokenizer(bool remove_stopwords);
    explicit Tokenizer(std::vector<std::string> stopwords);

    [[nodiscard]] std::vector<std::string> operator()(std::string_view text) const;

    [[nodiscard]] bool removes_stopwords() const { return !m_stopwords.empty(); }

  private:
    std::unordered_set<std::string> m_stopwords;
};

[[nodiscard]] std::vector<std::string> tokenize(std::string_view text);

/// True iff `needle` occurs as a contiguous run inside `haystack`.
[[nodiscard]] bool contains_sequence(std::span<std::string const> haystack, std::span<std::string const> needle);

}  // namespace pmsearch
