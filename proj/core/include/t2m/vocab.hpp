#pragma once

#include <string>
#include <unordered_map>
#include <vector>

namespace t2m {

// Token list from raw text: lowercase, punctuation stripped, split on
// whitespace.
std::vector<std::string> tokenize(const std::string& text);

// Word -> dense index map. Index 0 is the reserved unknown token; real
// words follow, ordered by descending corpus frequency then
// lexicographically, so construction is deterministic.
class Vocabulary {
public:
    static constexpr const char* kUnknown = "<unk>";
    static constexpr int kUnknownIndex = 0;

    Vocabulary();

    static Vocabulary build(const std::vector<std::vector<std::string>>& corpus, int min_count);
    // From an explicit index-ordered word list (embedding file loads).
    static Vocabulary from_words(const std::vector<std::string>& words);

    // Unknown index for out-of-vocabulary words.
    int index(const std::string& word) const;
    bool contains(const std::string& word) const;
    const std::string& word(int index) const;
    int size() const { return static_cast<int>(words_.size()); }

    const std::vector<std::string>& words() const { return words_; }

    std::vector<int> encode(const std::vector<std::string>& tokens) const;

private:
    std::vector<std::string> words_;
    std::unordered_map<std::string, int> index_;
};

}  // namespace t2m
