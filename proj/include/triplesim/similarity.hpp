#pragma once

#include <Eigen/Dense>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "triplesim/rdf.hpp"
#include "triplesim/tokenize.hpp"
#include "triplesim/vectorizer.hpp"

#include <nlohmann/json_fwd.hpp>

namespace triplesim {

enum class NumericNormalization { Literal, RangeScaled };
enum class AlignmentStrategy { ByPredicate, BestMatch };
enum class CombineMode { Literal, Normalized };

/// Weights and modes of the hybrid triple-set similarity. Unit weights
/// with a component count of 3 make identical triples score exactly 1.
struct SimilarityConfig {
    double alpha = 1.0;  // subject weight
    double beta = 1.0;   // predicate weight
    double gamma = 1.0;  // object weight
    bool clamp_negative_cosine = true;
    NumericNormalization numeric_normalization = NumericNormalization::Literal;
    AlignmentStrategy alignment = AlignmentStrategy::ByPredicate;
    CombineMode combine = CombineMode::Literal;

    /// Divisor N of the per-triple weighted sum. The subject-blind
    /// baseline shrinks it to 2; it is not part of the JSON surface.
    int component_count = 3;

    /// Throws std::invalid_argument unless weights are non-negative with
    /// at least one positive and component_count is positive.
    void validate() const;
};

SimilarityConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const SimilarityConfig& cfg);

/// Observed min/max of a quantitative predicate's values over a dataset,
/// used by range-scaled numeric normalization.
struct ValueRange {
    double min = 0.0;
    double max = 0.0;
    double span() const { return max - min; }
};

using PredicateRanges = std::map<std::string, ValueRange>;

PredicateRanges collect_predicate_ranges(const Dataset& dataset);

/// Per-component contributions of a triple-level score; they sum to the value.
struct TripleBreakdown {
    double subject = 0.0;
    double predicate = 0.0;
    double object = 0.0;
};

/// Aggregation detail of a set-level score.
struct GraphBreakdown {
    double qualitative_term = 0.0;
    double quantitative_term = 0.0;
    std::size_t qualitative_count = 0;   // aligned pairs + unmatched, qualitative
    std::size_t quantitative_count = 0;  // aligned pairs + unmatched, quantitative
    std::size_t matched_pairs = 0;
    std::size_t unmatched_count = 0;
};

struct Score {
    double value = 0.0;
    std::optional<TripleBreakdown> components;
    std::optional<GraphBreakdown> graph;
};

enum class Side { Left, Right };

struct AlignedPair {
    Triple left;
    Triple right;
    ObjectKind kind;
    double score;
};

struct UnmatchedTriple {
    Triple triple;
    Side side;
    ObjectKind kind;
};

/// Pairing of two entity graphs' triples. Pairs never mix object kinds
/// and each triple joins at most one pair; aligning (g2, g1) yields the
/// same pairs with sides swapped.
struct Alignment {
    std::vector<AlignedPair> pairs;
    std::vector<UnmatchedTriple> unmatched;
};

/// Cosine of the two word vectors, clamped to [0, 1] unless raw cosines
/// are requested. Out-of-vocabulary fallback: 1 for equal strings, else 0.
double sim_word_pair(const std::string& w1, const std::string& w2, const Vectorizer& vec,
                     const SimilarityConfig& cfg);

/// Best match of one word against a component's word list.
double sim_word_to_qspo(const std::string& word, const WordList& qspo, const Vectorizer& vec,
                        const SimilarityConfig& cfg);

/// Bidirectional average of best word matches between two components.
/// Two empty lists score 1, exactly one empty list scores 0.
double sim_qualitative(const WordList& q1, const WordList& q2, const Vectorizer& vec,
                       const SimilarityConfig& cfg);

/// 1 / (1 + euclidean distance). An optional per-component scale divides
/// both inputs first (entries <= 0 leave the component unscaled); it is
/// honored only under range-scaled normalization.
double sim_quantitative(const Eigen::VectorXd& o1, const Eigen::VectorXd& o2,
                        const SimilarityConfig& cfg, const Eigen::VectorXd* scale = nullptr);

/// Weighted per-component similarity of two triples with qualitative
/// objects. Throws KindMismatch when an object is quantitative.
Score sim_triple_qualitative(const Triple& a1, const Triple& a2, const Vectorizer& vec,
                             const SimilarityConfig& cfg);

/// Same, for quantitative objects: the object channel uses the numeric
/// distance score. Throws KindMismatch when an object is qualitative.
Score sim_triple_quantitative(const Triple& a1, const Triple& a2, const Vectorizer& vec,
                              const SimilarityConfig& cfg,
                              const PredicateRanges* ranges = nullptr);

/// Pairs triples across two graphs. Within each object kind, triples are
/// grouped by exact predicate IRI; candidate cross pairs inside a shared
/// group are sorted by score (descending), then by the unordered pair of
/// canonical serializations, and consumed greedily. Under BestMatch the
/// leftovers enter a second greedy pass across predicate groups.
Alignment align_triples(const EntityGraph& g1, const EntityGraph& g2, const Vectorizer& vec,
                        const SimilarityConfig& cfg, const PredicateRanges* ranges = nullptr);

/// Set-level similarity: per-kind mean over aligned pairs plus unmatched
/// triples (which contribute 0), the two means summed (Literal combine,
/// range [0,2]) or pooled into one mean (Normalized, range [0,1]).
/// Throws BothEmpty when neither graph has triples.
Score sim_graphs(const EntityGraph& g1, const EntityGraph& g2, const Vectorizer& vec,
                 const SimilarityConfig& cfg, const PredicateRanges* ranges = nullptr);

}  // namespace triplesim
