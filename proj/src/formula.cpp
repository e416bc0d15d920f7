#include "mdrkit/formula.hpp"

#include <algorithm>
#include <cctype>
#include <functional>

#include "mdrkit/error.hpp"

namespace mdrkit {

namespace {

std::size_t mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

int precedence(Op op) {
  switch (op) {
    case Op::Impl: return 1;
    case Op::Join: return 2;
    case Op::Meet: return 3;
    case Op::Fuse: return 4;
    default: return 5;
  }
}

const char* symbol(Op op) {
  switch (op) {
    case Op::Impl: return "->";
    case Op::Join: return "|";
    case Op::Meet: return "&";
    case Op::Fuse: return "*";
    default: return "";
  }
}

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  Formula parse() {
    Formula f = implication();
    skip();
    if (i_ != s_.size()) throw ParseError("unexpected '" + std::string(1, s_[i_]) + "'", i_ + 1);
    return f;
  }

 private:
  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  bool accept(const std::string& tok) {
    skip();
    if (s_.compare(i_, tok.size(), tok) == 0) {
      i_ += tok.size();
      return true;
    }
    return false;
  }
  bool accept_fuse() { return accept("*") || accept("\xE2\x8A\x97"); }

  Formula implication() {
    Formula l = disjunction();
    if (accept("->")) return Formula::impl(l, implication());
    return l;
  }
  Formula disjunction() {
    Formula l = conjunction();
    while (true) {
      skip();
      if (i_ + 1 < s_.size() && s_[i_] == '|' && s_[i_ + 1] == '>') return l;
      if (!accept("|")) return l;
      l = Formula::join(l, conjunction());
    }
  }
  Formula conjunction() {
    Formula l = fusion();
    while (accept("&")) l = Formula::meet(l, fusion());
    return l;
  }
  Formula fusion() {
    Formula l = atom();
    while (accept_fuse()) l = Formula::fuse(l, atom());
    return l;
  }
  Formula atom() {
    skip();
    if (i_ >= s_.size()) throw ParseError("unexpected end of input", i_ + 1);
    char c = s_[i_];
    if (c == '(') {
      ++i_;
      Formula f = implication();
      if (!accept(")")) throw ParseError("expected ')'", i_ + 1);
      return f;
    }
    if (c == '1') {
      ++i_;
      if (i_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[i_])))
        throw ParseError("malformed constant", i_ + 1);
      return Formula::one();
    }
    if (c == '#') {
      ++i_;
      std::size_t start = i_;
      while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_'))
        ++i_;
      if (i_ == start) throw ParseError("expected constant name after '#'", i_ + 1);
      return Formula::constant(s_.substr(start, i_ - start));
    }
    if (c >= 'a' && c <= 'z') {
      std::size_t start = i_;
      while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_'))
        ++i_;
      return Formula::var(s_.substr(start, i_ - start));
    }
    throw ParseError("unexpected '" + std::string(1, c) + "'", i_ + 1);
  }

  const std::string& s_;
  std::size_t i_ = 0;
};

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

Formula::Formula() : Formula(one()) {}

Formula Formula::var(const std::string& name) {
  auto n = std::make_shared<Node>();
  n->op = Op::Var;
  n->name = name;
  n->hash = mix(1, std::hash<std::string>{}(name));
  n->size = 1;
  n->depth = 0;
  return Formula(n);
}

Formula Formula::one() {
  static const Formula unit = [] {
    auto n = std::make_shared<Node>();
    n->op = Op::One;
    n->hash = 2;
    n->size = 1;
    n->depth = 0;
    return Formula(n);
  }();
  return unit;
}

Formula Formula::constant(const std::string& name) {
  auto n = std::make_shared<Node>();
  n->op = Op::Const;
  n->name = name;
  n->hash = mix(3, std::hash<std::string>{}(name));
  n->size = 1;
  n->depth = 0;
  return Formula(n);
}

Formula Formula::binary(Op op, const Formula& l, const Formula& r) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->left = l.node_;
  n->right = r.node_;
  n->hash = mix(mix(static_cast<std::size_t>(op) + 10, l.hash()), r.hash());
  n->size = 1 + l.size() + r.size();
  n->depth = 1 + std::max(l.depth(), r.depth());
  return Formula(n);
}

int Formula::compare(const Node* a, const Node* b) {
  if (a == b) return 0;
  if (a->size != b->size) return a->size < b->size ? -1 : 1;
  if (a->op != b->op) return a->op < b->op ? -1 : 1;
  if (a->left == nullptr) {
    int c = a->name.compare(b->name);
    return c < 0 ? -1 : (c > 0 ? 1 : 0);
  }
  int c = compare(a->left.get(), b->left.get());
  if (c != 0) return c;
  return compare(a->right.get(), b->right.get());
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (a.hash() != b.hash() || a.size() != b.size()) return false;
  return Formula::compare(a.node_.get(), b.node_.get()) == 0;
}

bool operator<(const Formula& a, const Formula& b) {
  return Formula::compare(a.node_.get(), b.node_.get()) < 0;
}

std::string Formula::str() const {
  switch (op()) {
    case Op::Var: return name();
    case Op::One: return "1";
    case Op::Const: return "#" + name();
    default: break;
  }
  int p = precedence(op());
  Formula l = left(), r = right();
  bool right_assoc = op() == Op::Impl;
  bool lp = precedence(l.op()) < p || (right_assoc && precedence(l.op()) == p);
  bool rp = precedence(r.op()) < p || (!right_assoc && precedence(r.op()) == p);
  std::string ls = lp ? "(" + l.str() + ")" : l.str();
  std::string rs = rp ? "(" + r.str() + ")" : r.str();
  return ls + symbol(op()) + rs;
}

void Formula::collect_vars(std::set<std::string>& out) const {
  if (op() == Op::Var) {
    out.insert(name());
  } else if (is_binary()) {
    left().collect_vars(out);
    right().collect_vars(out);
  }
}

std::set<std::string> Formula::vars() const {
  std::set<std::string> out;
  collect_vars(out);
  return out;
}

void Formula::collect_subformulas(std::set<Formula>& out) const {
  if (!out.insert(*this).second) return;
  if (is_binary()) {
    left().collect_subformulas(out);
    right().collect_subformulas(out);
  }
}

Formula parse_formula(const std::string& src) { return Parser(src).parse(); }

FMultiset parse_fmultiset(const std::string& src) {
  return parse_multiset<Formula>(src, [](const std::string& s) { return parse_formula(s); });
}

std::string to_string(const FMultiset& m) {
  return to_string(m, [](const Formula& f) { return f.str(); });
}

std::set<std::string> vars_of(const FMultiset& m) {
  std::set<std::string> out;
  for (const auto& [f, n] : m.entries()) f.collect_vars(out);
  return out;
}

// Substitutions

Substitution::Substitution(std::vector<std::pair<std::string, Formula>> table,
                           std::optional<Formula> fallback)
    : fallback_(std::move(fallback)) {
  std::sort(table.begin(), table.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (i > 0 && table[i].first == table[i - 1].first)
      throw InputError("substitution assigns variable '" + table[i].first + "' twice");
    const auto& [v, t] = table[i];
    bool redundant = fallback_ ? t == *fallback_ : (t.is_var() && t.name() == v);
    if (!redundant) table_.push_back(table[i]);
  }
}

Formula Substitution::image(const std::string& var) const {
  auto it = std::lower_bound(table_.begin(), table_.end(), var,
                             [](const auto& e, const std::string& v) { return e.first < v; });
  if (it != table_.end() && it->first == var) return it->second;
  if (fallback_) return *fallback_;
  return Formula::var(var);
}

Formula Substitution::operator()(const Formula& f) const {
  switch (f.op()) {
    case Op::Var: {
      if (is_identity()) return f;
      auto it = std::lower_bound(table_.begin(), table_.end(), f.name(),
                                 [](const auto& e, const std::string& v) { return e.first < v; });
      if (it != table_.end() && it->first == f.name()) return it->second;
      return fallback_ ? *fallback_ : f;
    }
    case Op::One:
    case Op::Const: return f;
    default: {
      Formula l = (*this)(f.left());
      Formula r = (*this)(f.right());
      if (l == f.left() && r == f.right()) return f;
      return Formula::binary(f.op(), l, r);
    }
  }
}

FMultiset Substitution::operator()(const FMultiset& m) const {
  return map_morphism<Formula>([this](const Formula& f) { return (*this)(f); }, m);
}

std::string Substitution::str() const {
  std::string out = "{";
  bool first = true;
  for (const auto& [v, t] : table_) {
    if (!first) out += ", ";
    out += v + "=" + t.str();
    first = false;
  }
  if (fallback_) {
    if (!first) out += ", ";
    out += "*=" + fallback_->str();
  }
  return out + "}";
}

bool operator==(const Substitution& a, const Substitution& b) {
  if (a.fallback_.has_value() != b.fallback_.has_value()) return false;
  if (a.fallback_ && !(*a.fallback_ == *b.fallback_)) return false;
  return a.table_ == b.table_;
}

bool operator<(const Substitution& a, const Substitution& b) {
  if (a.fallback_.has_value() != b.fallback_.has_value()) return !a.fallback_.has_value();
  if (a.fallback_ && *a.fallback_ != *b.fallback_) return *a.fallback_ < *b.fallback_;
  return a.table_ < b.table_;
}

Substitution compose(const Substitution& s, const Substitution& p) {
  std::vector<std::pair<std::string, Formula>> table;
  for (const auto& [v, t] : p.table()) table.emplace_back(v, s(t));
  std::optional<Formula> fallback;
  if (p.fallback()) {
    fallback = s(*p.fallback());
  } else {
    fallback = s.fallback();
    for (const auto& [v, t] : s.table()) {
      bool shadowed = std::any_of(p.table().begin(), p.table().end(),
                                  [&](const auto& e) { return e.first == v; });
      if (!shadowed) table.emplace_back(v, t);
    }
  }
  return Substitution(std::move(table), fallback);
}

Substitution parse_substitution(const std::string& src) {
  std::string t = trim(src);
  if (t.size() < 2 || t.front() != '{' || t.back() != '}')
    throw ParseError("substitution must be enclosed in { }", 1);
  std::string inner = "[" + t.substr(1, t.size() - 2) + "]";
  std::vector<std::pair<std::string, Formula>> table;
  std::optional<Formula> fallback;
  for (const auto& item : split_multiset_literal(inner)) {
    std::size_t eq = item.find('=');
    if (eq == std::string::npos) throw ParseError("expected var=formula in substitution", 1);
    std::string v = trim(item.substr(0, eq));
    Formula f = parse_formula(item.substr(eq + 1));
    if (v == "*") {
      fallback = f;
    } else {
      if (v.empty() || v[0] < 'a' || v[0] > 'z')
        throw ParseError("bad variable '" + v + "' in substitution", 1);
      table.emplace_back(v, f);
    }
  }
  return Substitution(std::move(table), fallback);
}

FMultiset apply_subst(const Substitution& s, const FMultiset& g) { return s(g); }

SubstMultiset subst_product(const SubstMultiset& x, const SubstMultiset& y) {
  SubstMultiset out;
  for (const auto& [s, n] : x.entries())
    for (const auto& [p, m] : y.entries()) out.insert(compose(s, p), n * m);
  return out;
}

FMultiset sigma_action(const SubstMultiset& x, const FMultiset& g) {
  FMultiset out;
  for (const auto& [s, n] : x.entries())
    for (const auto& [f, m] : g.entries()) out.insert(s(f), n * m);
  return out;
}

std::string to_string(const SubstMultiset& m) {
  return to_string(m, [](const Substitution& s) { return s.str(); });
}

std::string Consecution::str() const {
  return to_string(premises) + " |> " + to_string(conclusions);
}

std::set<std::string> Consecution::vars() const {
  std::set<std::string> out = vars_of(premises);
  for (const auto& v : vars_of(conclusions)) out.insert(v);
  return out;
}

Consecution parse_consecution(const std::string& src) {
  int depth = 0;
  std::size_t split = std::string::npos;
  for (std::size_t i = 0; i + 1 < src.size(); ++i) {
    if (src[i] == '[' || src[i] == '(') ++depth;
    if (src[i] == ']' || src[i] == ')') --depth;
    if (depth == 0 && src[i] == '|' && src[i + 1] == '>') {
      if (split != std::string::npos) throw ParseError("more than one '|>'", i + 1);
      split = i;
    }
  }
  if (split == std::string::npos) throw ParseError("expected '|>' in consecution", src.size());
  Consecution c;
  c.premises = parse_fmultiset(src.substr(0, split));
  c.conclusions = parse_fmultiset(src.substr(split + 2));
  return c;
}

}  // namespace mdrkit
