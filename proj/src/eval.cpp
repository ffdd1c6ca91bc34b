#include "triplesim/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

#include "triplesim/errors.hpp"

namespace triplesim {

namespace {

// Scores one unordered entity pair under the given method.
class PairScorer {
public:
    PairScorer(const Dataset& data, MethodId method, const Vectorizer* vec,
               const SimilarityConfig& cfg)
        : data_(data), method_(method), cfg_(cfg), vec_(vec) {
        cfg_.validate();
        if (method_ == MethodId::N2) {
            std::vector<WordList> corpus;
            corpus.reserve(data.size());
            for (const EntityGraph& g : data.entities()) corpus.push_back(entity_document(g));
            tfidf_ = build_tfidf(corpus);
            vec_ = &*tfidf_;
        } else if (method_ != MethodId::Jaccard && vec_ == nullptr) {
            throw std::invalid_argument("method " + method_name(method_) +
                                        " requires an embedding vectorizer");
        }
        if (cfg_.numeric_normalization == NumericNormalization::RangeScaled)
            ranges_ = collect_predicate_ranges(data);
    }

    double operator()(const EntityGraph& a, const EntityGraph& b) const {
        switch (method_) {
            case MethodId::Jaccard: return jaccard(a, b);
            case MethodId::SiLi: return sili(a, b, *vec_, cfg_, ranges()).value;
            case MethodId::N1:
            case MethodId::N2: return sim_graphs(a, b, *vec_, cfg_, ranges()).value;
        }
        throw std::logic_error("unreachable method");
    }

    const SimilarityConfig& config() const { return cfg_; }

private:
    const PredicateRanges* ranges() const { return ranges_ ? &*ranges_ : nullptr; }

    const Dataset& data_;
    MethodId method_;
    SimilarityConfig cfg_;
    const Vectorizer* vec_;
    std::optional<TfidfModel> tfidf_;
    std::optional<PredicateRanges> ranges_;
};

}  // namespace

SimilarityMatrix pairwise_matrix(const Dataset& data, MethodId method, const Vectorizer* vec,
                                 const SimilarityConfig& cfg, unsigned threads) {
    if (data.empty()) throw std::invalid_argument("pairwise matrix needs a non-empty dataset");
    const PairScorer scorer(data, method, vec, cfg);

    const std::size_t n = data.size();
    SimilarityMatrix matrix;
    matrix.ids.reserve(n);
    for (const EntityGraph& g : data.entities()) matrix.ids.push_back(g.id());
    matrix.values.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    matrix.method = method;
    matrix.config = scorer.config();

    // The diagonal holds the method's identity value by definition; the
    // tf-idf vectorizer would otherwise drag self-similarity below 1
    // because corpus-wide words carry zero weight.
    const auto identity_value = [&](const EntityGraph& g) {
        if (method == MethodId::Jaccard || cfg.combine == CombineMode::Normalized) return 1.0;
        return (g.qualitative().empty() ? 0.0 : 1.0) + (g.quantitative().empty() ? 0.0 : 1.0);
    };

    // Flattened strict upper triangle; every cell is independent, so any
    // partition of the index space is deterministic.
    std::vector<std::pair<std::size_t, std::size_t>> cells;
    cells.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i) {
        matrix.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) =
            identity_value(data.entities()[i]);
        for (std::size_t j = i + 1; j < n; ++j) cells.emplace_back(i, j);
    }

    const auto worker = [&](std::size_t begin, std::size_t end) {
        for (std::size_t c = begin; c < end; ++c) {
            const auto [i, j] = cells[c];
            const double value =
                scorer(data.entities()[i], data.entities()[j]);
            matrix.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = value;
            matrix.values(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = value;
        }
    };

    const unsigned workers = std::max(1u, threads);
    if (workers == 1) {
        worker(0, cells.size());
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (cells.size() + workers - 1) / workers;
        for (unsigned t = 0; t < workers; ++t) {
            const std::size_t begin = std::min(cells.size(), static_cast<std::size_t>(t) * chunk);
            const std::size_t end = std::min(cells.size(), begin + chunk);
            if (begin < end) pool.emplace_back(worker, begin, end);
        }
        for (std::thread& t : pool) t.join();
    }
    return matrix;
}

std::map<MethodId, double> highest_score_share(const std::vector<SimilarityMatrix>& matrices) {
    if (matrices.empty()) throw ShapeMismatch("no matrices given");
    const std::vector<std::string>& ids = matrices.front().ids;
    for (const SimilarityMatrix& m : matrices) {
        if (m.ids != ids || m.values.rows() != matrices.front().values.rows())
            throw ShapeMismatch("matrices disagree in ids or shape");
        if (m.method != MethodId::Jaccard && m.config.combine != CombineMode::Normalized)
            throw std::invalid_argument(
                "highest-score shares require normalized combine for method " +
                method_name(m.method));
    }

    std::map<MethodId, double> shares;
    for (const SimilarityMatrix& m : matrices) shares[m.method] = 0.0;

    const Eigen::Index n = matrices.front().values.rows();
    const std::size_t total_pairs = static_cast<std::size_t>(n) * (n - 1) / 2;
    if (total_pairs == 0) return shares;

    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            double best = matrices.front().values(i, j);
            for (const SimilarityMatrix& m : matrices) best = std::max(best, m.values(i, j));
            std::size_t tied = 0;
            for (const SimilarityMatrix& m : matrices) tied += m.values(i, j) == best;
            for (const SimilarityMatrix& m : matrices)
                if (m.values(i, j) == best)
                    shares[m.method] += 1.0 / static_cast<double>(tied);
        }
    }
    for (auto& [method, share] : shares) share /= static_cast<double>(total_pairs);
    return shares;
}

Histogram histogram(const SimilarityMatrix& matrix, double bin_width) {
    if (bin_width <= 0.0) throw std::invalid_argument("bin width must be positive");
    Histogram h;
    h.bin_width = bin_width;

    const Eigen::Index n = matrix.values.rows();
    std::vector<std::uint64_t> counts;
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double v = matrix.values(i, j);
            const std::size_t bin =
                static_cast<std::size_t>(std::max(0.0, std::floor(v / bin_width)));
            if (bin >= counts.size()) counts.resize(bin + 1, 0);
            ++counts[bin];
            ++h.total;
        }
    }
    h.bins.reserve(counts.size());
    for (std::size_t k = 0; k < counts.size(); ++k)
        h.bins.emplace_back(static_cast<double>(k) * bin_width, counts[k]);
    return h;
}

namespace {

std::string format_fixed(double value) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.6f", value);
    return buf;
}

}  // namespace

std::string export_matrix_csv(const SimilarityMatrix& matrix) {
    std::string out = "id";
    for (const std::string& id : matrix.ids) {
        out += ',';
        out += id;
    }
    out += '\n';
    const Eigen::Index n = matrix.values.rows();
    for (Eigen::Index i = 0; i < n; ++i) {
        out += matrix.ids[static_cast<std::size_t>(i)];
        for (Eigen::Index j = 0; j < n; ++j) {
            out += ',';
            out += format_fixed(matrix.values(i, j));
        }
        out += '\n';
    }
    return out;
}

std::string export_heatmap_pgm(const SimilarityMatrix& matrix) {
    const Eigen::Index n = matrix.values.rows();
    const double max_value = matrix.values.maxCoeff();
    std::string out = "P5\n" + std::to_string(n) + " " + std::to_string(n) + "\n255\n";
    out.reserve(out.size() + static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            unsigned char gray = 0;
            if (max_value > 0.0) {
                const double scaled = 255.0 * std::max(0.0, matrix.values(i, j)) / max_value;
                gray = static_cast<unsigned char>(std::lround(std::min(255.0, scaled)));
            }
            out += static_cast<char>(gray);
        }
    }
    return out;
}

std::string export_histogram_csv(const Histogram& histogram) {
    std::string out = "bin_lower,count\n";
    for (const auto& [lower, count] : histogram.bins)
        out += format_fixed(lower) + "," + std::to_string(count) + "\n";
    return out;
}

std::vector<std::pair<std::string, double>> rank_top_k(const Dataset& data,
                                                       const std::string& query_id,
                                                       std::size_t k, MethodId method,
                                                       const Vectorizer* vec,
                                                       const SimilarityConfig& cfg) {
    const EntityGraph* query = data.find(query_id);
    if (query == nullptr) throw UnknownEntity(query_id);
    const PairScorer scorer(data, method, vec, cfg);

    std::vector<std::pair<std::string, double>> ranked;
    ranked.reserve(data.size() - 1);
    for (const EntityGraph& other : data.entities()) {
        if (other.id() == query_id) continue;
        ranked.emplace_back(other.id(), scorer(*query, other));
    }
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    if (ranked.size() > k) ranked.resize(k);
    return ranked;
}

EvalReport run_eval(const Dataset& data, const std::vector<MethodId>& methods,
                    const Vectorizer* vec, const SimilarityConfig& cfg, unsigned threads,
                    double bin_width) {
    const auto started = std::chrono::steady_clock::now();

    SimilarityConfig normalized = cfg;
    normalized.combine = CombineMode::Normalized;

    std::vector<MethodId> ordered(methods);
    std::sort(ordered.begin(), ordered.end());
    ordered.erase(std::unique(ordered.begin(), ordered.end()), ordered.end());

    EvalReport report;
    for (MethodId method : ordered) {
        SimilarityMatrix matrix = pairwise_matrix(data, method, vec, normalized, threads);
        Histogram h = histogram(matrix, bin_width);

        MethodStats stats;
        const Eigen::Index n = matrix.values.rows();
        bool first = true;
        double sum = 0.0;
        std::size_t pairs = 0;
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index j = i + 1; j < n; ++j) {
                const double v = matrix.values(i, j);
                if (first) {
                    stats.min = stats.max = v;
                    first = false;
                } else {
                    stats.min = std::min(stats.min, v);
                    stats.max = std::max(stats.max, v);
                }
                sum += v;
                ++pairs;
            }
        }
        stats.mean = pairs == 0 ? 0.0 : sum / static_cast<double>(pairs);

        report.stats[method] = stats;
        report.histograms[method] = std::move(h);
        report.matrices.push_back(std::move(matrix));
    }
    report.shares = highest_score_share(report.matrices);
    report.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return report;
}

nlohmann::json report_to_json(const EvalReport& report) {
    nlohmann::json per_method = nlohmann::json::object();
    for (const SimilarityMatrix& matrix : report.matrices) {
        const MethodId method = matrix.method;
        const Histogram& h = report.histograms.at(method);
        nlohmann::json bins = nlohmann::json::array();
        for (const auto& [lower, count] : h.bins) bins.push_back({lower, count});
        per_method[method_name(method)] = {
            {"min", report.stats.at(method).min},
            {"max", report.stats.at(method).max},
            {"mean", report.stats.at(method).mean},
            {"highest_score_share", report.shares.at(method)},
            {"histogram", {{"bin_width", h.bin_width}, {"bins", bins}, {"total", h.total}}},
        };
    }
    const std::size_t n = report.matrices.empty() ? 0 : report.matrices.front().ids.size();
    return nlohmann::json{
        {"entity_count", n},
        {"pair_count", n * (n > 0 ? n - 1 : 0) / 2},
        {"per_method", per_method},
        {"runtime_seconds", report.runtime_seconds},
    };
}

namespace {

constexpr const char* kVehiclePrefix = "http://example.org/vehicle/";
constexpr const char* kOntologyPrefix = "http://example.org/vo#";
constexpr const char* kXsdInteger = "http://www.w3.org/2001/XMLSchema#integer";

const std::vector<std::string> kBrands = {
    "audi",  "bmw",   "citroen", "dacia", "fiat",   "ford",    "honda", "hyundai",
    "kia",   "mazda", "mercedes", "nissan", "opel",  "peugeot", "renault", "seat",
    "skoda", "tesla", "toyota",  "volkswagen"};
const std::vector<std::string> kModels = {
    "aircross", "allroad", "berlingo", "caddy",   "clio",   "corsa",  "duster",
    "focus",    "golf",    "ibiza",    "kona",    "megane", "octavia", "panda",
    "polo",     "qashqai", "tiguan",   "tucson",  "vitara", "yaris"};
const std::vector<std::string> kFuels = {"diesel", "petrol", "hybrid", "electric", "lpg"};
const std::vector<std::string> kTransmissions = {"manual", "automatic", "semi automatic"};
const std::vector<std::string> kColors = {"black", "white", "grey",   "blue",  "red",
                                          "green", "silver", "orange", "brown", "yellow"};
const std::vector<std::string> kBodies = {"hatchback", "sedan", "wagon",       "suv",
                                          "coupe",     "van",   "convertible", "pickup"};

// Bounded draw with a platform-stable mapping from the raw engine output.
std::uint64_t draw(std::mt19937_64& rng, std::uint64_t bound) { return rng() % bound; }

const std::string& pick(std::mt19937_64& rng, const std::vector<std::string>& vocab) {
    return vocab[static_cast<std::size_t>(draw(rng, vocab.size()))];
}

std::string padded_index(std::size_t i) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "v%06zu", i);
    return buf;
}

}  // namespace

SynthResult synth_dataset(std::size_t n_entities, std::uint64_t seed) {
    if (n_entities == 0) throw std::invalid_argument("synthetic dataset needs n >= 1");

    std::mt19937_64 rng(seed);
    std::vector<EntityGraph> entities;
    entities.reserve(n_entities);
    for (std::size_t i = 0; i < n_entities; ++i) {
        const Term subject = Term::iri(kVehiclePrefix + padded_index(i));
        const auto qualitative = [&](const char* predicate, const std::string& value) {
            return Triple(subject, Term::iri(std::string(kOntologyPrefix) + predicate),
                          Term::literal(value));
        };
        const auto quantitative = [&](const char* predicate, std::uint64_t value) {
            return Triple(subject, Term::iri(std::string(kOntologyPrefix) + predicate),
                          Term::literal(std::to_string(value), kXsdInteger));
        };
        std::vector<Triple> triples;
        triples.reserve(9);
        triples.push_back(qualitative("has_brand", pick(rng, kBrands)));
        triples.push_back(qualitative("has_model", pick(rng, kModels)));
        triples.push_back(qualitative("has_fuel", pick(rng, kFuels)));
        triples.push_back(qualitative("has_transmission", pick(rng, kTransmissions)));
        triples.push_back(qualitative("has_color", pick(rng, kColors)));
        triples.push_back(qualitative("has_body", pick(rng, kBodies)));
        triples.push_back(quantitative("has_mileage", draw(rng, 300001)));
        triples.push_back(quantitative("has_year", 1990 + draw(rng, 34)));
        triples.push_back(quantitative("has_price", 500 + draw(rng, 79501)));
        entities.emplace_back(subject, std::move(triples));
    }

    SynthResult result{Dataset(std::move(entities)), {}};
    result.lexicon = collect_lexicon(result.dataset);
    return result;
}

}  // namespace triplesim
