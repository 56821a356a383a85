#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "t2m/tensor.hpp"
#include "t2m/vocab.hpp"

namespace t2m {

// Word embedding matrix V (n_e x d); column j embeds vocabulary word j.
struct EmbeddingMatrix {
    int n_e = 0;
    int d = 0;
    Tensor V;  // {n_e, d}

    static EmbeddingMatrix zeros(int n_e, int d);
    Tensor column(int j) const;  // {n_e}
};

// Embedded sentence: per-token embedding vectors plus the source
// token indices.
struct EmbeddedSentence {
    std::vector<int> tokens;
    std::vector<Tensor> vectors;  // each {n_e}

    std::size_t length() const { return tokens.size(); }
};

// e_t = V w_t with one-hot w_t, i.e. column selection.
EmbeddedSentence embed(const std::vector<int>& tokens, const EmbeddingMatrix& V);

struct SkipGramConfig {
    int n_e = 64;
    int window = 2;
    int negatives = 5;
    int epochs = 5;
    double lr = 0.025;
    int min_count = 1;
    std::uint64_t seed = 0;
};

// Skip-gram with negative sampling over a tokenized corpus.
// Deterministic under a fixed seed. Returns the input-side vectors as
// the embedding matrix.
EmbeddingMatrix train_embeddings(const std::vector<std::vector<std::string>>& corpus,
                                 const Vocabulary& vocab, const SkipGramConfig& config);

// Embedding text file: first line "d n_e", then one line per word:
// token followed by n_e decimal floats, space-separated. Word order is
// vocabulary index order.
void save_embeddings(const std::string& path, const Vocabulary& vocab, const EmbeddingMatrix& V);
std::pair<Vocabulary, EmbeddingMatrix> load_embeddings(const std::string& path);

double cosine_similarity(const Tensor& a, const Tensor& b);

}  // namespace t2m
