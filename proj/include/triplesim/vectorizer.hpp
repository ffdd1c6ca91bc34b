#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

#include "triplesim/tokenize.hpp"

namespace triplesim {

/// Word to dense-vector lookup. Lookups are pure and stable for the
/// lifetime of the object; implementations are immutable after build.
class Vectorizer {
public:
    virtual ~Vectorizer() = default;

    /// The word's vector, or nullptr for out-of-vocabulary words.
    virtual const Eigen::VectorXd* lookup(const std::string& word) const = 0;
    virtual Eigen::Index dimension() const = 0;
};

/// dot(a,b) / (|a| |b|); 0 when either norm is 0. Throws LengthMismatch.
double cosine(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

/// Immutable word -> vector table loaded from word2vec text format.
class EmbeddingStore final : public Vectorizer {
public:
    EmbeddingStore(Eigen::Index dimension,
                   std::unordered_map<std::string, Eigen::VectorXd> table);

    const Eigen::VectorXd* lookup(const std::string& word) const override;
    Eigen::Index dimension() const override { return dimension_; }
    std::size_t size() const { return table_.size(); }
    const std::unordered_map<std::string, Eigen::VectorXd>& table() const { return table_; }

private:
    Eigen::Index dimension_;
    std::unordered_map<std::string, Eigen::VectorXd> table_;
};

/// Parses `<word_count> <dimension>` followed by `word v1 ... v_dim` rows.
/// Duplicate words keep the last occurrence. Throws FormatError on bad
/// rows and DimensionMismatch when a row disagrees with the header.
EmbeddingStore load_word2vec_text(std::istream& in);

/// File variant; gzip-compressed input is detected by the 0x1f 0x8b magic
/// bytes and inflated transparently.
EmbeddingStore load_word2vec_file(const std::filesystem::path& path);

/// Word rows sorted lexicographically, floats printed round-trip exact.
void save_word2vec_text(const EmbeddingStore& store, std::ostream& out);

/// Deterministic per (lexicon order, dimension, seed): every word gets a
/// unit-norm vector with components drawn uniformly from (-1, 1).
EmbeddingStore generate_toy_embeddings(const std::vector<std::string>& lexicon,
                                       Eigen::Index dimension, std::uint64_t seed);

/// Term-document tf-idf rows over a corpus of tokenized entity documents:
/// component d of word w is tf(w,d) * ln(N/df(w)) with tf the
/// within-document relative frequency. Document count is the dimension.
class TfidfModel final : public Vectorizer {
public:
    const Eigen::VectorXd* lookup(const std::string& word) const override;
    Eigen::Index dimension() const override { return static_cast<Eigen::Index>(n_docs_); }

    std::size_t document_count() const { return n_docs_; }
    std::size_t vocabulary_size() const { return rows_.size(); }
    /// 0 for out-of-vocabulary words.
    std::size_t document_frequency(const std::string& word) const;

    friend TfidfModel build_tfidf(const std::vector<WordList>& corpus);

private:
    std::size_t n_docs_ = 0;
    std::unordered_map<std::string, std::size_t> df_;
    std::unordered_map<std::string, Eigen::VectorXd> rows_;
};

/// Throws EmptyCorpus when no documents are given.
TfidfModel build_tfidf(const std::vector<WordList>& corpus);

}  // namespace triplesim
