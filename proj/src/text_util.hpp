#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "countreg/errors.hpp"

namespace countreg::detail {

inline std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

inline std::vector<std::string> split_on(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

struct Line {
  int number;
  std::vector<std::string> tokens;
};

// tokenized non-empty lines with comments removed. A comment starts at `#`
// when it is the first non-blank character of the line or follows at least two
// blanks; a `#` after a single space is an ordinary symbol (markers use it)
inline std::string strip_comment(const std::string& raw) {
  size_t first = raw.find_first_not_of(" \t");
  if (first == std::string::npos || raw[first] == '#') return "";
  for (size_t i = first; i < raw.size(); ++i) {
    if (raw[i] != '#') continue;
    if (raw[i - 1] == '\t') return raw.substr(0, i);
    if (i >= 2 && raw[i - 1] == ' ' && (raw[i - 2] == ' ' || raw[i - 2] == '\t')) return raw.substr(0, i);
  }
  return raw;
}

inline std::vector<Line> tokenize_lines(const std::string& text) {
  std::vector<Line> out;
  std::istringstream in(text);
  std::string raw;
  int n = 0;
  while (std::getline(in, raw)) {
    ++n;
    auto toks = split_ws(strip_comment(raw));
    if (!toks.empty()) out.push_back({n, toks});
  }
  return out;
}

inline long parse_long(const std::string& s, int line) {
  try {
    size_t pos = 0;
    long v = std::stol(s, &pos);
    if (pos != s.size()) throw ParseError("bad integer '" + s + "'", line);
    return v;
  } catch (const std::logic_error&) {
    throw ParseError("bad integer '" + s + "'", line);
  }
}

inline std::string join(const std::vector<std::string>& v, const std::string& sep) {
  std::string s;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) s += sep;
    s += v[i];
  }
  return s;
}

}  // namespace countreg::detail
