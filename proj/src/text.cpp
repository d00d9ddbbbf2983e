#include "entrank/text.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <sstream>

namespace entrank {

std::string to_lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

Tokens name_tokens(const std::string& name) {
  Tokens out;
  std::string cur;
  for (char c : to_lower(name)) {
    if (c == '/' || c == '_') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

Tokens whitespace_tokens(const std::string& text) {
  Tokens out;
  std::istringstream in(to_lower(text));
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

std::string stem(const std::string& word) {
  // Longest suffix first so "walking" -> "walk" rather than "walkin" + "g".
  static constexpr std::array<const char*, 5> suffixes = {"ing", "es", "ed", "ly", "s"};
  for (const char* suf : suffixes) {
    const std::size_t n = std::char_traits<char>::length(suf);
    if (word.size() >= n + 2 && word.compare(word.size() - n, n, suf) == 0) {
      return word.substr(0, word.size() - n);
    }
  }
  return word;
}

Tokens stem_all(const Tokens& tokens) {
  Tokens out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(stem(t));
  return out;
}

std::set<std::string> token_set(const Tokens& tokens) {
  return {tokens.begin(), tokens.end()};
}

std::set<std::string> stemmed_token_set(const Tokens& tokens) {
  std::set<std::string> out;
  for (const auto& t : tokens) out.insert(stem(t));
  return out;
}

double jaccard(const std::set<std::string>& a, const std::set<std::string>& b) {
  if (a.empty() && b.empty()) return 0.0;
  std::size_t inter = 0;
  for (const auto& x : a) inter += b.count(x);
  const std::size_t uni = a.size() + b.size() - inter;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

std::string join_tokens(const Tokens& tokens, char sep) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out.push_back(sep);
    out += tokens[i];
  }
  return out;
}

}  // namespace entrank
