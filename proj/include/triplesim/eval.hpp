#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "triplesim/baselines.hpp"
#include "triplesim/rdf.hpp"
#include "triplesim/similarity.hpp"
#include "triplesim/vectorizer.hpp"

namespace triplesim {

/// Dense symmetric matrix of pairwise scores over a dataset, rows and
/// columns indexed by the canonically sorted entity ids.
struct SimilarityMatrix {
    std::vector<std::string> ids;
    Eigen::MatrixXd values;
    MethodId method = MethodId::N1;
    SimilarityConfig config;
};

/// Computes the strict upper triangle and mirrors it; diagonal cells
/// hold the method's identity value (1, or the Literal-combine per-kind
/// sum). The result is independent of the worker count. N2 builds its
/// tf-idf model from the dataset itself; Jaccard ignores the vectorizer.
SimilarityMatrix pairwise_matrix(const Dataset& data, MethodId method, const Vectorizer* vec,
                                 const SimilarityConfig& cfg, unsigned threads = 1);

/// Fraction of off-diagonal pairs on which each method attains the
/// maximal score, ties split evenly. Requires normalized combine for the
/// engine methods; throws ShapeMismatch on id or shape disagreement.
std::map<MethodId, double> highest_score_share(const std::vector<SimilarityMatrix>& matrices);

struct Histogram {
    double bin_width = 0.05;
    std::vector<std::pair<double, std::uint64_t>> bins;  // (lower edge, count)
    std::uint64_t total = 0;
};

/// Distribution of the off-diagonal upper-triangle scores; value v falls
/// in bin floor(v / bin_width).
Histogram histogram(const SimilarityMatrix& matrix, double bin_width = 0.05);

/// Header row `id,<id1>,...` then one row per entity, six decimal places.
std::string export_matrix_csv(const SimilarityMatrix& matrix);

/// Binary PGM (P5), one pixel per cell, gray = round(255 * value / max);
/// an all-zero matrix renders black.
std::string export_heatmap_pgm(const SimilarityMatrix& matrix);

std::string export_histogram_csv(const Histogram& histogram);

/// Entities other than the query sorted by score descending, ties broken
/// by id ascending, truncated to k. Throws UnknownEntity.
std::vector<std::pair<std::string, double>> rank_top_k(const Dataset& data,
                                                       const std::string& query_id,
                                                       std::size_t k, MethodId method,
                                                       const Vectorizer* vec,
                                                       const SimilarityConfig& cfg);

struct MethodStats {
    double min = 0.0;
    double max = 0.0;
    double mean = 0.0;
};

struct EvalReport {
    std::vector<SimilarityMatrix> matrices;
    std::map<MethodId, MethodStats> stats;         // over off-diagonal pairs
    std::map<MethodId, Histogram> histograms;
    std::map<MethodId, double> shares;
    double runtime_seconds = 0.0;
};

/// Full experiment pipeline: one matrix per method, per-method stats and
/// histograms, and the highest-score shares. Combine mode is forced to
/// Normalized so the methods stay commensurable.
EvalReport run_eval(const Dataset& data, const std::vector<MethodId>& methods,
                    const Vectorizer* vec, const SimilarityConfig& cfg, unsigned threads = 1,
                    double bin_width = 0.05);

/// Pretty-printable report with stable key order.
nlohmann::json report_to_json(const EvalReport& report);

struct SynthResult {
    Dataset dataset;
    std::vector<std::string> lexicon;  // sorted unique tokens of the dataset
};

/// Seeded synthetic vehicle corpus: per entity six qualitative triples
/// drawn from fixed vocabularies and three quantitative ones (mileage,
/// year, price). Deterministic per (n_entities, seed).
SynthResult synth_dataset(std::size_t n_entities, std::uint64_t seed);

}  // namespace triplesim
