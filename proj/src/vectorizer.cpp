#include "triplesim/vectorizer.hpp"

#include <zlib.h>

#include <algorithm>
#include <cfloat>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <random>
#include <sstream>
#include <utility>

#include "triplesim/errors.hpp"

namespace triplesim {

double cosine(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    if (a.size() != b.size())
        throw LengthMismatch("cosine: vector lengths " + std::to_string(a.size()) + " vs " +
                             std::to_string(b.size()));
    const double na = a.norm();
    const double nb = b.norm();
    if (na == 0.0 || nb == 0.0) return 0.0;
    return a.dot(b) / (na * nb);
}

EmbeddingStore::EmbeddingStore(Eigen::Index dimension,
                               std::unordered_map<std::string, Eigen::VectorXd> table)
    : dimension_(dimension), table_(std::move(table)) {
    if (dimension_ <= 0) throw std::invalid_argument("embedding dimension must be positive");
    for (const auto& [word, vec] : table_)
        if (vec.size() != dimension_)
            throw DimensionMismatch(0, "vector for '" + word + "' has length " +
                                           std::to_string(vec.size()) + ", expected " +
                                           std::to_string(dimension_));
}

const Eigen::VectorXd* EmbeddingStore::lookup(const std::string& word) const {
    const auto it = table_.find(word);
    return it == table_.end() ? nullptr : &it->second;
}

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && line[i] == ' ') ++i;
        const std::size_t start = i;
        while (i < line.size() && line[i] != ' ') ++i;
        if (i > start) fields.push_back(line.substr(start, i - start));
    }
    return fields;
}

double parse_double(std::string_view field, std::size_t line_no) {
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), out);
    if (ec != std::errc() || ptr != field.data() + field.size())
        throw FormatError(line_no, "unparseable float '" + std::string(field) + "'");
    return out;
}

std::string gunzip(const std::string& compressed) {
    z_stream zs{};
    // 15 + 16 selects the gzip wrapper.
    if (inflateInit2(&zs, 15 + 16) != Z_OK) throw Error("zlib initialization failed");
    zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(compressed.data()));
    zs.avail_in = static_cast<uInt>(compressed.size());

    std::string out;
    char buffer[1 << 16];
    int rc = Z_OK;
    do {
        zs.next_out = reinterpret_cast<Bytef*>(buffer);
        zs.avail_out = sizeof(buffer);
        rc = inflate(&zs, Z_NO_FLUSH);
        if (rc != Z_OK && rc != Z_STREAM_END) {
            inflateEnd(&zs);
            throw Error("gzip decompression failed");
        }
        out.append(buffer, sizeof(buffer) - zs.avail_out);
    } while (rc != Z_STREAM_END);
    inflateEnd(&zs);
    return out;
}

}  // namespace

EmbeddingStore load_word2vec_text(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw FormatError(1, "missing header line");

    const auto header = split_fields(line);
    if (header.size() != 2) throw FormatError(1, "header must be '<word_count> <dimension>'");
    long long declared_count = 0;
    long long dim = 0;
    if (std::from_chars(header[0].data(), header[0].data() + header[0].size(), declared_count)
                .ec != std::errc() ||
        std::from_chars(header[1].data(), header[1].data() + header[1].size(), dim).ec !=
                std::errc() ||
        dim <= 0)
        throw FormatError(1, "header must be '<word_count> <dimension>'");

    std::unordered_map<std::string, Eigen::VectorXd> table;
    table.reserve(static_cast<std::size_t>(std::max(declared_count, 0LL)));
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto fields = split_fields(line);
        if (fields.empty()) continue;
        if (fields.size() != static_cast<std::size_t>(dim) + 1)
            throw DimensionMismatch(line_no, "row has " + std::to_string(fields.size() - 1) +
                                                 " components, expected " + std::to_string(dim));
        Eigen::VectorXd vec(dim);
        for (long long i = 0; i < dim; ++i)
            vec[i] = parse_double(fields[static_cast<std::size_t>(i) + 1], line_no);
        table[std::string(fields[0])] = std::move(vec);  // duplicates: last occurrence wins
    }
    return EmbeddingStore(static_cast<Eigen::Index>(dim), std::move(table));
}

EmbeddingStore load_word2vec_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open embeddings file: " + path.string());
    std::string raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (raw.size() >= 2 && static_cast<unsigned char>(raw[0]) == 0x1f &&
        static_cast<unsigned char>(raw[1]) == 0x8b)
        raw = gunzip(raw);
    std::istringstream stream(raw);
    return load_word2vec_text(stream);
}

void save_word2vec_text(const EmbeddingStore& store, std::ostream& out) {
    std::map<std::string, const Eigen::VectorXd*> sorted;
    for (const auto& [word, vec] : store.table()) sorted.emplace(word, &vec);
    out << store.size() << ' ' << store.dimension() << '\n';
    char buf[64];
    for (const auto& [word, vec] : sorted) {
        out << word;
        for (Eigen::Index i = 0; i < vec->size(); ++i) {
            std::snprintf(buf, sizeof(buf), "%.*g", DBL_DECIMAL_DIG, (*vec)[i]);
            out << ' ' << buf;
        }
        out << '\n';
    }
}

EmbeddingStore generate_toy_embeddings(const std::vector<std::string>& lexicon,
                                       Eigen::Index dimension, std::uint64_t seed) {
    if (lexicon.empty()) throw EmptyLexicon();
    if (dimension < 2) throw std::invalid_argument("toy embedding dimension must be at least 2");

    std::mt19937_64 rng(seed);
    std::unordered_map<std::string, Eigen::VectorXd> table;
    table.reserve(lexicon.size());
    for (const std::string& word : lexicon) {
        Eigen::VectorXd vec(dimension);
        for (Eigen::Index i = 0; i < dimension; ++i) {
            // Map raw engine output to [0, 1) directly; the stdlib
            // distribution is not pinned across implementations.
            const double unit = static_cast<double>(rng() >> 11) * 0x1.0p-53;
            vec[i] = 2.0 * unit - 1.0;
        }
        const double norm = vec.norm();
        if (norm > 0.0) vec /= norm;
        table[word] = std::move(vec);  // duplicate lexicon entries: last wins
    }
    return EmbeddingStore(dimension, std::move(table));
}

const Eigen::VectorXd* TfidfModel::lookup(const std::string& word) const {
    const auto it = rows_.find(word);
    return it == rows_.end() ? nullptr : &it->second;
}

std::size_t TfidfModel::document_frequency(const std::string& word) const {
    const auto it = df_.find(word);
    return it == df_.end() ? 0 : it->second;
}

TfidfModel build_tfidf(const std::vector<WordList>& corpus) {
    if (corpus.empty()) throw EmptyCorpus();

    const std::size_t n_docs = corpus.size();
    TfidfModel model;
    model.n_docs_ = n_docs;

    std::vector<std::unordered_map<std::string, std::size_t>> counts(n_docs);
    for (std::size_t d = 0; d < n_docs; ++d) {
        for (const std::string& word : corpus[d]) ++counts[d][word];
        for (const auto& [word, count] : counts[d]) ++model.df_[word];
    }

    for (const auto& [word, df] : model.df_) {
        Eigen::VectorXd row = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n_docs));
        const double idf = std::log(static_cast<double>(n_docs) / static_cast<double>(df));
        for (std::size_t d = 0; d < n_docs; ++d) {
            const auto it = counts[d].find(word);
            if (it == counts[d].end()) continue;
            const double tf =
                static_cast<double>(it->second) / static_cast<double>(corpus[d].size());
            row[static_cast<Eigen::Index>(d)] = tf * idf;
        }
        model.rows_[word] = std::move(row);
    }
    return model;
}

}  // namespace triplesim
