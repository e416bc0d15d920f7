#pragma once

#include <cctype>
#include <sstream>
#include <string>
#include <vector>

namespace mdrkit {

inline std::string trim_copy(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::string strip_comment(const std::string& line) {
  std::size_t h = line.find('#');
  // '#' also prefixes algebra constants inside formulas
  while (h != std::string::npos && h + 1 < line.size() &&
         (std::isalnum(static_cast<unsigned char>(line[h + 1])) || line[h + 1] == '_'))
    h = line.find('#', h + 1);
  return h == std::string::npos ? line : line.substr(0, h);
}

inline std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

inline std::vector<std::string> split_words(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

inline bool starts_with(const std::string& s, const std::string& prefix) {
  return s.compare(0, prefix.size(), prefix) == 0;
}

}  // namespace mdrkit
