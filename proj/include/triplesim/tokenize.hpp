#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "triplesim/rdf.hpp"

namespace triplesim {

/// Ordered list of lowercase words extracted from one term.
using WordList = std::vector<std::string>;

/// Fragment after the last '#' if present, else after the last '/',
/// else the whole IRI.
std::string local_name(std::string_view iri);

/// Splits text on whitespace, '_', '-', '.', ',', lowercase-to-uppercase
/// camelCase boundaries and letter/digit boundaries, lowercasing every
/// fragment. No stemming, no stop-word removal.
WordList split_words(std::string_view text);

/// IRIs and blank nodes go through local_name first; literals are split
/// on their lexical form.
WordList tokenize(const Term& term);

/// Concatenation of the tokenized subject, predicate and object words of
/// every triple, in canonical triple order. One entity graph is one
/// document for corpus-level vectorization.
WordList entity_document(const EntityGraph& graph);

/// Sorted unique tokens over every term of every entity.
std::vector<std::string> collect_lexicon(const Dataset& dataset);

}  // namespace triplesim
