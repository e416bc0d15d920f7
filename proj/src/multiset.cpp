#include "mdrkit/multiset.hpp"

#include "mdrkit/error.hpp"

namespace mdrkit {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::vector<std::string> split_multiset_literal(const std::string& text) {
  std::string t = trim(text);
  if (t.size() < 2 || t.front() != '[' || t.back() != ']')
    throw ParseError("multiset literal must be enclosed in [ ]", 0);
  std::string body = t.substr(1, t.size() - 2);
  std::vector<std::string> out;
  if (trim(body).empty()) return out;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= body.size(); ++i) {
    char c = i < body.size() ? body[i] : ',';
    if (c == '(' || c == '[' || c == '{') ++depth;
    if (c == ')' || c == ']' || c == '}') --depth;
    if (depth < 0) throw ParseError("unbalanced brackets in multiset literal", i + 1);
    if (c == ',' && depth == 0) {
      std::string item = trim(body.substr(start, i - start));
      if (item.empty()) throw ParseError("empty multiset element", start + 1);
      out.push_back(item);
      start = i + 1;
    }
  }
  if (depth != 0) throw ParseError("unbalanced brackets in multiset literal", t.size());
  return out;
}

}  // namespace mdrkit
