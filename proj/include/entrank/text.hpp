#pragma once
// Shared token utilities: lowercasing, name tokenization, suffix stemming,
// Jaccard overlap.  Everything here is pure and deterministic.

#include <set>
#include <string>
#include <vector>

namespace entrank {

using Tokens = std::vector<std::string>;

std::string to_lower(std::string s);

// Splits a composite KG name ("/film/film/prequel", "medical_treatment")
// into lowercase tokens.  Separators are '/' and '_'; empty pieces dropped.
Tokens name_tokens(const std::string& name);

// Splits free text on whitespace, lowercased.
Tokens whitespace_tokens(const std::string& text);

// Suffix-strip stemmer over a fixed list (ing, es, ed, ly, s).  Strips the
// longest matching suffix once, as long as at least two characters remain.
std::string stem(const std::string& word);
Tokens stem_all(const Tokens& tokens);

std::set<std::string> token_set(const Tokens& tokens);
std::set<std::string> stemmed_token_set(const Tokens& tokens);

// |A n B| / |A u B|; 0 when both sides are empty.
double jaccard(const std::set<std::string>& a, const std::set<std::string>& b);

std::string join_tokens(const Tokens& tokens, char sep = ' ');

}  // namespace entrank
