#include "triplesim/tokenize.hpp"

#include <algorithm>
#include <set>

namespace triplesim {

namespace {

bool is_delimiter(char c) {
    switch (c) {
        case ' ':
        case '\t':
        case '\n':
        case '\r':
        case '_':
        case '-':
        case '.':
        case ',':
            return true;
        default:
            return false;
    }
}

bool is_lower(char c) { return c >= 'a' && c <= 'z'; }
bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }
// Non-ASCII bytes (UTF-8 continuation etc.) count as letters.
bool is_letter(char c) {
    return is_lower(c) || is_upper(c) || static_cast<unsigned char>(c) >= 0x80;
}

char to_lower(char c) { return is_upper(c) ? static_cast<char>(c - 'A' + 'a') : c; }

}  // namespace

std::string local_name(std::string_view iri) {
    std::size_t cut = iri.rfind('#');
    if (cut == std::string_view::npos) cut = iri.rfind('/');
    if (cut == std::string_view::npos) return std::string(iri);
    return std::string(iri.substr(cut + 1));
}

WordList split_words(std::string_view text) {
    WordList words;
    std::string current;
    const auto flush = [&] {
        if (!current.empty()) {
            words.push_back(current);
            current.clear();
        }
    };
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (is_delimiter(c)) {
            flush();
            continue;
        }
        if (!current.empty()) {
            const char prev = text[i - 1];
            const bool camel = is_lower(prev) && is_upper(c);
            const bool class_change = (is_letter(prev) && is_digit(c)) ||
                                      (is_digit(prev) && is_letter(c));
            if (camel || class_change) flush();
        }
        current += to_lower(c);
    }
    flush();
    return words;
}

WordList tokenize(const Term& term) {
    if (term.is_literal()) return split_words(term.value());
    return split_words(local_name(term.value()));
}

WordList entity_document(const EntityGraph& graph) {
    WordList doc;
    for (const Triple& t : graph.triples()) {
        for (const Term* term : {&t.subject, &t.predicate, &t.object}) {
            WordList words = tokenize(*term);
            doc.insert(doc.end(), std::make_move_iterator(words.begin()),
                       std::make_move_iterator(words.end()));
        }
    }
    return doc;
}

std::vector<std::string> collect_lexicon(const Dataset& dataset) {
    std::set<std::string> unique;
    for (const EntityGraph& g : dataset.entities()) {
        WordList doc = entity_document(g);
        unique.insert(std::make_move_iterator(doc.begin()), std::make_move_iterator(doc.end()));
    }
    return {unique.begin(), unique.end()};
}

}  // namespace triplesim
