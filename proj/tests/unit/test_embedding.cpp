#include <filesystem>

#include <doctest.h>

#include "t2m/embedding.hpp"
#include "t2m/errors.hpp"
#include "test_util.hpp"

using namespace t2m;
using t2m::testing::random_tensor;

namespace {

std::string temp_path(const char* name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("tokenize lowercases and strips punctuation") {
    const auto tokens = tokenize("A man, walking quickly!");
    CHECK(tokens == std::vector<std::string>{"a", "man", "walking", "quickly"});
    CHECK(tokenize("  ").empty());
}

TEST_CASE("vocabulary construction") {
    const std::vector<std::vector<std::string>> corpus = {{"a", "man"}, {"a", "woman"}};
    SUBCASE("min_count=1 keeps all three words plus the unknown token") {
        const Vocabulary v = Vocabulary::build(corpus, 1);
        CHECK(v.size() == 4);
        CHECK(v.contains("a"));
        CHECK(v.contains("man"));
        CHECK(v.contains("woman"));
        CHECK(v.index(Vocabulary::kUnknown) == Vocabulary::kUnknownIndex);
        // Frequency then lexicographic order, after the unknown slot.
        CHECK(v.index("a") == 1);
        CHECK(v.index("man") == 2);
        CHECK(v.index("woman") == 3);
    }
    SUBCASE("identical corpora produce identical assignments") {
        const Vocabulary v1 = Vocabulary::build(corpus, 1);
        const Vocabulary v2 = Vocabulary::build(corpus, 1);
        CHECK(v1.words() == v2.words());
    }
    SUBCASE("min_count=2 maps rare words to unknown") {
        const Vocabulary v = Vocabulary::build(corpus, 2);
        CHECK(v.size() == 2);  // <unk> and "a"
        CHECK(v.index("man") == Vocabulary::kUnknownIndex);
        CHECK(v.index("woman") == Vocabulary::kUnknownIndex);
        CHECK(v.index("a") == 1);
    }
    SUBCASE("empty corpus rejected") {
        CHECK_THROWS_AS(Vocabulary::build({}, 1), InputError);
    }
    SUBCASE("round-trip index(word(i)) == i") {
        const Vocabulary v = Vocabulary::build(corpus, 1);
        for (int i = 0; i < v.size(); ++i) CHECK(v.index(v.word(i)) == i);
    }
}

TEST_CASE("embed is column selection") {
    SUBCASE("identity matrix yields basis vectors") {
        EmbeddingMatrix V = EmbeddingMatrix::zeros(3, 3);
        for (int i = 0; i < 3; ++i) V.V.at(i, i) = 1.0;
        const EmbeddedSentence e = embed({2}, V);
        CHECK(e.vectors.size() == 1);
        CHECK(e.vectors[0] == Tensor::vector({0.0, 0.0, 1.0}));
    }
    SUBCASE("zero matrix yields zero embeddings") {
        const EmbeddingMatrix V = EmbeddingMatrix::zeros(4, 5);
        const EmbeddedSentence e = embed({0, 3, 4}, V);
        for (const auto& vec : e.vectors) {
            for (std::size_t i = 0; i < vec.numel(); ++i) CHECK(vec[i] == 0.0);
        }
    }
    SUBCASE("explicit matrix-times-one-hot equals column extraction exactly") {
        Rng rng(17);
        EmbeddingMatrix V = EmbeddingMatrix::zeros(6, 9);
        V.V = random_tensor(rng, {6, 9});
        for (int token = 0; token < 9; ++token) {
            Tensor onehot({9});
            onehot[static_cast<std::size_t>(token)] = 1.0;
            Tensor product({6});
            for (int i = 0; i < 6; ++i) {
                double acc = 0.0;
                for (int j = 0; j < 9; ++j) acc += V.V.at(i, j) * onehot[static_cast<std::size_t>(j)];
                product[static_cast<std::size_t>(i)] = acc;
            }
            const EmbeddedSentence e = embed({token}, V);
            CHECK(e.vectors[0] == product);  // 0 ulp
        }
    }
    SUBCASE("out-of-range index rejected") {
        const EmbeddingMatrix V = EmbeddingMatrix::zeros(2, 3);
        CHECK_THROWS_AS(embed({3}, V), InputError);
    }
    SUBCASE("embed is linear in V") {
        Rng rng(23);
        EmbeddingMatrix V1 = EmbeddingMatrix::zeros(4, 6);
        EmbeddingMatrix V2 = EmbeddingMatrix::zeros(4, 6);
        V1.V = random_tensor(rng, {4, 6});
        V2.V = random_tensor(rng, {4, 6});
        EmbeddingMatrix Vsum = EmbeddingMatrix::zeros(4, 6);
        for (std::size_t i = 0; i < Vsum.V.numel(); ++i) Vsum.V[i] = V1.V[i] + V2.V[i];
        const std::vector<int> tokens = {0, 5, 2};
        const auto e1 = embed(tokens, V1);
        const auto e2 = embed(tokens, V2);
        const auto es = embed(tokens, Vsum);
        for (std::size_t t = 0; t < tokens.size(); ++t) {
            for (std::size_t i = 0; i < 4; ++i) {
                CHECK(es.vectors[t][i] ==
                      doctest::Approx(e1.vectors[t][i] + e2.vectors[t][i]).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("skip-gram embeddings") {
    // Controlled co-occurrence: "red blue" always appear together,
    // "green yellow" likewise, and the two groups never mix.
    std::vector<std::vector<std::string>> corpus;
    for (int i = 0; i < 100; ++i) {
        corpus.push_back({"red", "blue", "thing", "here"});
        corpus.push_back({"green", "yellow", "object", "there"});
    }
    const Vocabulary vocab = Vocabulary::build(corpus, 1);
    SkipGramConfig cfg;
    cfg.n_e = 16;
    cfg.window = 2;
    cfg.negatives = 4;
    cfg.epochs = 8;
    cfg.seed = 5;

    const EmbeddingMatrix V = train_embeddings(corpus, vocab, cfg);

    SUBCASE("co-occurring words are closer than never co-occurring ones") {
        const Tensor red = V.column(vocab.index("red"));
        const Tensor blue = V.column(vocab.index("blue"));
        const Tensor green = V.column(vocab.index("green"));
        CHECK(cosine_similarity(red, blue) > cosine_similarity(red, green));
    }
    SUBCASE("training is deterministic under the seed") {
        const EmbeddingMatrix V2 = train_embeddings(corpus, vocab, cfg);
        CHECK(V.V == V2.V);
    }
    SUBCASE("every embedding is finite") { CHECK(V.V.all_finite()); }
    SUBCASE("corpus smaller than the window is rejected") {
        const std::vector<std::vector<std::string>> tiny = {{"a"}};
        const Vocabulary tv = Vocabulary::build(tiny, 1);
        CHECK_THROWS_AS(train_embeddings(tiny, tv, cfg), InputError);
    }
}

TEST_CASE("embedding file round-trip") {
    std::vector<std::vector<std::string>> corpus = {{"walk", "run", "jump"}};
    const Vocabulary vocab = Vocabulary::build(corpus, 1);
    Rng rng(3);
    EmbeddingMatrix V = EmbeddingMatrix::zeros(5, vocab.size());
    V.V = random_tensor(rng, {5, vocab.size()});

    const std::string path = temp_path("t2m_test_embeddings.txt");
    save_embeddings(path, vocab, V);
    const auto [vocab2, V2] = load_embeddings(path);
    CHECK(vocab2.words() == vocab.words());
    CHECK(V2.n_e == 5);
    CHECK(V2.V == V.V);  // %.17g round-trips doubles exactly
    std::filesystem::remove(path);
}
