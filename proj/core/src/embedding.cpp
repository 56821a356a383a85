#include "t2m/embedding.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "t2m/errors.hpp"
#include "t2m/rng.hpp"

namespace t2m {

EmbeddingMatrix EmbeddingMatrix::zeros(int n_e, int d) {
    EmbeddingMatrix m;
    m.n_e = n_e;
    m.d = d;
    m.V = Tensor({n_e, d});
    return m;
}

Tensor EmbeddingMatrix::column(int j) const {
    Tensor col({n_e});
    for (int i = 0; i < n_e; ++i) col[static_cast<std::size_t>(i)] = V.at(i, j);
    return col;
}

EmbeddedSentence embed(const std::vector<int>& tokens, const EmbeddingMatrix& V) {
    EmbeddedSentence out;
    out.tokens = tokens;
    out.vectors.reserve(tokens.size());
    for (int t : tokens) {
        if (t < 0 || t >= V.d) {
            throw InputError("embed: token index " + std::to_string(t) +
                             " out of range for vocabulary of size " + std::to_string(V.d));
        }
        out.vectors.push_back(V.column(t));
    }
    return out;
}

namespace {

double sigmoid(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

// Cumulative unigram^(3/4) distribution for negative sampling.
struct UnigramSampler {
    std::vector<double> cumulative;

    explicit UnigramSampler(const std::vector<long>& counts) {
        cumulative.resize(counts.size());
        double total = 0.0;
        for (std::size_t i = 0; i < counts.size(); ++i) {
            total += std::pow(static_cast<double>(counts[i]) + 1.0, 0.75);
            cumulative[i] = total;
        }
        for (auto& c : cumulative) c /= total;
    }

    int sample(Rng& rng) const {
        const double u = rng.uniform01();
        std::size_t lo = 0;
        std::size_t hi = cumulative.size() - 1;
        while (lo < hi) {
            const std::size_t mid = (lo + hi) / 2;
            if (cumulative[mid] < u) {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        return static_cast<int>(lo);
    }
};

}  // namespace

EmbeddingMatrix train_embeddings(const std::vector<std::vector<std::string>>& corpus,
                                 const Vocabulary& vocab, const SkipGramConfig& config) {
    if (config.n_e < 2) throw InputError("train_embeddings: n_e must be >= 2");
    std::size_t total_tokens = 0;
    for (const auto& s : corpus) total_tokens += s.size();
    if (total_tokens < static_cast<std::size_t>(config.window) + 1) {
        throw InputError("train_embeddings: corpus smaller than context window");
    }

    const int d = vocab.size();
    const int n_e = config.n_e;
    std::vector<long> counts(static_cast<std::size_t>(d), 0);
    std::vector<std::vector<int>> sentences;
    sentences.reserve(corpus.size());
    for (const auto& s : corpus) {
        sentences.push_back(vocab.encode(s));
        for (int id : sentences.back()) ++counts[static_cast<std::size_t>(id)];
    }
    UnigramSampler sampler(counts);

    Rng rng(config.seed);
    // Classic initialization: input vectors small uniform, output zeros.
    std::vector<double> syn0(static_cast<std::size_t>(d) * n_e);
    std::vector<double> syn1(static_cast<std::size_t>(d) * n_e, 0.0);
    for (auto& w : syn0) w = rng.uniform(-0.5 / n_e, 0.5 / n_e);

    std::vector<double> hidden_err(static_cast<std::size_t>(n_e));
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        for (const auto& sentence : sentences) {
            const int len = static_cast<int>(sentence.size());
            for (int center = 0; center < len; ++center) {
                const int center_id = sentence[static_cast<std::size_t>(center)];
                double* v_center = &syn0[static_cast<std::size_t>(center_id) * n_e];
                for (int off = -config.window; off <= config.window; ++off) {
                    if (off == 0) continue;
                    const int pos = center + off;
                    if (pos < 0 || pos >= len) continue;
                    const int context_id = sentence[static_cast<std::size_t>(pos)];
                    std::fill(hidden_err.begin(), hidden_err.end(), 0.0);
                    for (int k = 0; k <= config.negatives; ++k) {
                        int target;
                        double label;
                        if (k == 0) {
                            target = context_id;
                            label = 1.0;
                        } else {
                            target = sampler.sample(rng);
                            if (target == context_id) continue;
                            label = 0.0;
                        }
                        double* v_out = &syn1[static_cast<std::size_t>(target) * n_e];
                        double score = 0.0;
                        for (int i = 0; i < n_e; ++i) score += v_center[i] * v_out[i];
                        const double g = (label - sigmoid(score)) * config.lr;
                        for (int i = 0; i < n_e; ++i) {
                            hidden_err[static_cast<std::size_t>(i)] += g * v_out[i];
                            v_out[i] += g * v_center[i];
                        }
                    }
                    for (int i = 0; i < n_e; ++i) {
                        v_center[i] += hidden_err[static_cast<std::size_t>(i)];
                    }
                }
            }
        }
    }

    EmbeddingMatrix m = EmbeddingMatrix::zeros(n_e, d);
    for (int j = 0; j < d; ++j) {
        for (int i = 0; i < n_e; ++i) {
            m.V.at(i, j) = syn0[static_cast<std::size_t>(j) * n_e + i];
        }
    }
    if (!m.V.all_finite()) throw NumericError("train_embeddings: non-finite embedding");
    return m;
}

void save_embeddings(const std::string& path, const Vocabulary& vocab, const EmbeddingMatrix& V) {
    if (vocab.size() != V.d) {
        throw ShapeError("save_embeddings: vocabulary size " + std::to_string(vocab.size()) +
                         " vs embedding columns " + std::to_string(V.d));
    }
    std::ofstream os(path);
    if (!os) throw InputError("save_embeddings: cannot open '" + path + "'");
    os << V.d << ' ' << V.n_e << '\n';
    char buf[32];
    for (int j = 0; j < V.d; ++j) {
        os << vocab.word(j);
        for (int i = 0; i < V.n_e; ++i) {
            std::snprintf(buf, sizeof(buf), "%.17g", V.V.at(i, j));
            os << ' ' << buf;
        }
        os << '\n';
    }
    if (!os) throw InputError("save_embeddings: write failed for '" + path + "'");
}

std::pair<Vocabulary, EmbeddingMatrix> load_embeddings(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw InputError("load_embeddings: cannot open '" + path + "'");
    std::string line;
    if (!std::getline(is, line)) throw InputError("load_embeddings: empty file " + path);
    int d = 0;
    int n_e = 0;
    {
        std::istringstream head(line);
        if (!(head >> d >> n_e) || d <= 0 || n_e <= 0) {
            throw InputError("load_embeddings: bad header line '" + line + "'");
        }
    }
    std::vector<std::string> words;
    words.reserve(static_cast<std::size_t>(d));
    EmbeddingMatrix m = EmbeddingMatrix::zeros(n_e, d);
    for (int j = 0; j < d; ++j) {
        if (!std::getline(is, line)) {
            throw InputError("load_embeddings: expected " + std::to_string(d) + " rows, got " +
                             std::to_string(j));
        }
        std::istringstream row(line);
        std::string word;
        if (!(row >> word)) {
            throw InputError("load_embeddings: malformed line " + std::to_string(j + 2));
        }
        words.push_back(word);
        for (int i = 0; i < n_e; ++i) {
            double v;
            if (!(row >> v)) {
                throw InputError("load_embeddings: line " + std::to_string(j + 2) +
                                 ": expected " + std::to_string(n_e) + " floats");
            }
            m.V.at(i, j) = v;
        }
    }
    return {Vocabulary::from_words(words), std::move(m)};
}

double cosine_similarity(const Tensor& a, const Tensor& b) {
    require_same_shape(a, b, "cosine_similarity");
    double num = 0.0;
    double na = 0.0;
    double nb = 0.0;
    for (std::size_t i = 0; i < a.numel(); ++i) {
        num += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    const double den = std::sqrt(na) * std::sqrt(nb);
    return den == 0.0 ? 0.0 : num / den;
}

}  // namespace t2m
