#include "t2m/vocab.hpp"

#include <algorithm>
#include <cctype>
#include <map>

#include "t2m/errors.hpp"

namespace t2m {

std::vector<std::string> tokenize(const std::string& text) {
    std::vector<std::string> tokens;
    std::string current;
    for (unsigned char ch : text) {
        if (std::isalnum(ch) || ch == '\'') {
            current.push_back(static_cast<char>(std::tolower(ch)));
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

Vocabulary::Vocabulary() {
    words_.push_back(kUnknown);
    index_[kUnknown] = kUnknownIndex;
}

Vocabulary Vocabulary::build(const std::vector<std::vector<std::string>>& corpus, int min_count) {
    if (corpus.empty()) throw InputError("build_vocabulary: empty corpus");
    // std::map keeps word iteration deterministic.
    std::map<std::string, long> counts;
    for (const auto& sentence : corpus) {
        for (const auto& word : sentence) ++counts[word];
    }
    std::vector<std::pair<std::string, long>> entries(counts.begin(), counts.end());
    std::stable_sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    Vocabulary vocab;
    for (const auto& [word, count] : entries) {
        if (count < min_count) continue;
        if (word == kUnknown) continue;
        vocab.index_[word] = static_cast<int>(vocab.words_.size());
        vocab.words_.push_back(word);
    }
    return vocab;
}

Vocabulary Vocabulary::from_words(const std::vector<std::string>& words) {
    Vocabulary vocab;
    vocab.words_.clear();
    vocab.index_.clear();
    for (const auto& word : words) {
        if (vocab.index_.count(word)) {
            throw InputError("vocabulary: duplicate word '" + word + "'");
        }
        vocab.index_[word] = static_cast<int>(vocab.words_.size());
        vocab.words_.push_back(word);
    }
    if (!vocab.index_.count(kUnknown)) {
        throw InputError("vocabulary: word list lacks the reserved unknown token");
    }
    return vocab;
}

int Vocabulary::index(const std::string& word) const {
    auto it = index_.find(word);
    return it == index_.end() ? index_.at(kUnknown) : it->second;
}

bool Vocabulary::contains(const std::string& word) const { return index_.count(word) != 0; }

const std::string& Vocabulary::word(int index) const {
    if (index < 0 || index >= size()) {
        throw InputError("vocabulary: index " + std::to_string(index) + " out of range");
    }
    return words_[static_cast<std::size_t>(index)];
}

std::vector<int> Vocabulary::encode(const std::vector<std::string>& tokens) const {
    std::vector<int> ids;
    ids.reserve(tokens.size());
    for (const auto& t : tokens) ids.push_back(index(t));
    return ids;
}

}  // namespace t2m
