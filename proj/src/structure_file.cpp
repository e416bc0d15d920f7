#include "mdrkit/structure_file.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "mdrkit/error.hpp"
#include "mdrkit/text.hpp"

namespace mdrkit {

namespace {

struct Line {
  int number;
  std::string key;
  std::string rest;
};

struct Block {
  int number;
  std::string kind;
  std::string name;
  std::vector<Line> lines;
};

const std::set<std::string> kKinds = {"pomonoid", "posemiring", "module",       "dr",          "do",
                                      "ds",       "algebra",    "hypermatrix",  "monoidmatrix", "fuzzymatrix",
                                      "sequents"};

// Keys that name a block kind but also appear inside blocks as references.
bool is_reference(const std::vector<Block>& blocks, const std::string& key) {
  static const std::map<std::string, std::set<std::string>> refs = {
      {"hypermatrix", {"algebra"}}, {"sequents", {"algebra"}}, {"monoidmatrix", {"algebra", "pomonoid"}}};
  if (blocks.empty()) return false;
  auto it = refs.find(blocks.back().kind);
  if (it == refs.end() || !it->second.count(key)) return false;
  for (const auto& l : blocks.back().lines)
    if (l.key == key) return false;
  return true;
}

[[noreturn]] void fail(int line, const std::string& what) {
  throw InputError("line " + std::to_string(line) + ": " + what);
}

// "a+b=c" style triples.
struct Triple {
  std::string a, b, c;
};

Triple parse_triple(const Line& l, const std::string& word, const std::string& sep) {
  std::size_t s = word.find(sep), e = word.find('=');
  if (s == std::string::npos || e == std::string::npos || e < s)
    fail(l.number, "expected a" + sep + "b=c, got '" + word + "'");
  return {word.substr(0, s), word.substr(s + sep.size(), e - s - sep.size()), word.substr(e + 1)};
}

const Line* find_line(const Block& b, const std::string& key) {
  const Line* out = nullptr;
  for (const auto& l : b.lines)
    if (l.key == key) {
      if (out) fail(l.number, "duplicate '" + key + "'");
      out = &l;
    }
  return out;
}

const Line& need_line(const Block& b, const std::string& key) {
  const Line* l = find_line(b, key);
  if (!l) fail(b.number, b.kind + " " + b.name + " needs a '" + key + "' line");
  return *l;
}

std::string single_word(const Line& l) {
  auto w = split_words(l.rest);
  if (w.size() != 1) fail(l.number, "'" + l.key + "' takes exactly one argument");
  return w[0];
}

int index_in(const std::vector<std::string>& names, const std::string& e, const Line& l) {
  for (int i = 0; i < static_cast<int>(names.size()); ++i)
    if (names[i] == e) return i;
  fail(l.number, "unknown element '" + e + "'");
}

void check_keys(const Block& b, const std::set<std::string>& allowed) {
  for (const auto& l : b.lines)
    if (!allowed.count(l.key)) fail(l.number, "unexpected '" + l.key + "' in " + b.kind + " block");
}

std::vector<std::string> elements_of(const Block& b) {
  auto names = split_words(need_line(b, "elements").rest);
  if (names.empty()) fail(b.number, "empty carrier");
  std::set<std::string> seen(names.begin(), names.end());
  if (seen.size() != names.size()) fail(need_line(b, "elements").number, "repeated element");
  return names;
}

FinitePomonoid pomonoid_from(const Block& b) {
  auto names = elements_of(b);
  int n = static_cast<int>(names.size());
  std::vector<std::vector<bool>> le(n, std::vector<bool>(n, false));
  for (int i = 0; i < n; ++i) le[i][i] = true;
  std::vector<std::vector<int>> add(n, std::vector<int>(n, -1));
  int zero = index_in(names, single_word(need_line(b, "zero")), need_line(b, "zero"));
  for (const auto& l : b.lines) {
    if (l.key == "leq") {
      for (const auto& w : split_words(l.rest)) {
        std::size_t s = w.find("<=");
        if (s == std::string::npos) fail(l.number, "expected a<=b, got '" + w + "'");
        le[index_in(names, w.substr(0, s), l)][index_in(names, w.substr(s + 2), l)] = true;
      }
    } else if (l.key == "add") {
      for (const auto& w : split_words(l.rest)) {
        Triple t = parse_triple(l, w, "+");
        int x = index_in(names, t.a, l), y = index_in(names, t.b, l), z = index_in(names, t.c, l);
        for (auto [p, q] : {std::pair{x, y}, std::pair{y, x}}) {
          if (add[p][q] >= 0 && add[p][q] != z) fail(l.number, "conflicting sum for " + t.a + "+" + t.b);
          add[p][q] = z;
        }
      }
    }
  }
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (le[i][k] && le[k][j]) le[i][j] = true;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (add[i][j] < 0) fail(b.number, "missing sum " + names[i] + "+" + names[j] + " in " + b.name);
  return make_pomonoid(b.name, names, le, add, zero);
}

std::vector<int> binary_table(const Line& l, const std::vector<std::string>& names) {
  auto w = split_words(l.rest);
  std::size_t n = names.size();
  if (w.size() != n * n) fail(l.number, "table '" + l.key + "' needs " + std::to_string(n * n) + " entries");
  std::vector<int> out;
  for (const auto& e : w) out.push_back(index_in(names, e, l));
  return out;
}

std::vector<std::string> bracket_groups(const Line& l, char open, char close) {
  std::vector<std::string> out;
  const std::string& s = l.rest;
  std::size_t i = 0;
  while (true) {
    i = s.find_first_not_of(" \t", i);
    if (i == std::string::npos) break;
    if (s[i] != open) fail(l.number, std::string("expected '") + open + "'");
    std::size_t j = s.find(close, i);
    if (j == std::string::npos) fail(l.number, std::string("missing '") + close + "'");
    out.push_back(s.substr(i, j - i + 1));
    i = j + 1;
  }
  return out;
}

class Builder {
 public:
  explicit Builder(StructureFile& out) : out_(out) {}

  void build(const Block& b) {
    if (seen_.count(b.name)) fail(b.number, "duplicate name " + b.name);
    seen_.insert(b.name);
    out_.order.emplace_back(b.kind, b.name);
    if (b.kind == "pomonoid") {
      check_keys(b, {"elements", "zero", "leq", "add"});
      out_.pomonoids[b.name] = std::make_shared<const FinitePomonoid>(pomonoid_from(b));
    } else if (b.kind == "posemiring") {
      posemiring(b);
    } else if (b.kind == "module") {
      module(b);
    } else if (b.kind == "dr" || b.kind == "do" || b.kind == "ds") {
      deductive(b);
    } else if (b.kind == "algebra") {
      algebra(b);
    } else if (b.kind == "hypermatrix") {
      check_keys(b, {"algebra", "filter-gen"});
      const FiniteAlgebra& a = algebra_ref(need_line(b, "algebra"));
      std::vector<std::string> lits;
      for (const auto& l : b.lines)
        if (l.key == "filter-gen")
          for (auto& g : bracket_groups(l, '[', ']')) lits.push_back(g);
      Hypermatrix h{a, parse_downset_gens(a, lits)};
      out_.hypermatrices[b.name] = h;
    } else if (b.kind == "monoidmatrix") {
      monoid_matrix(b);
    } else if (b.kind == "fuzzymatrix") {
      fuzzy(b);
    } else if (b.kind == "sequents") {
      check_keys(b, {"algebra", "seq"});
      SequentModel s;
      s.algebra = algebra_ref(need_line(b, "algebra"));
      for (const auto& l : b.lines) {
        if (l.key != "seq") continue;
        for (const auto& g : bracket_groups(l, '<', '>')) {
          std::vector<int> seq;
          std::string inner = g.substr(1, g.size() - 2);
          std::stringstream ss(inner);
          std::string item;
          while (std::getline(ss, item, ','))
            if (!trim_copy(item).empty()) seq.push_back(index_in(s.algebra.elements, trim_copy(item), l));
          s.sequences.insert(seq);
        }
      }
      out_.sequent_models[b.name] = s;
    }
  }

 private:
  BasePtr pomonoid_ref(const Line& l) {
    auto it = out_.pomonoids.find(single_word(l));
    if (it == out_.pomonoids.end()) fail(l.number, "unknown pomonoid '" + single_word(l) + "'");
    return it->second;
  }
  const FiniteAlgebra& algebra_ref(const Line& l) {
    auto it = out_.algebras.find(single_word(l));
    if (it == out_.algebras.end()) fail(l.number, "unknown algebra '" + single_word(l) + "'");
    return it->second;
  }

  void posemiring(const Block& b) {
    check_keys(b, {"elements", "zero", "leq", "add", "additive", "mul", "one"});
    FinitePoSemiring s;
    if (const Line* l = find_line(b, "additive"))
      s.additive = *pomonoid_ref(*l);
    else
      s.additive = pomonoid_from(b);
    const auto& names = s.additive.elements;
    int n = s.size();
    s.mul.assign(static_cast<std::size_t>(n) * n, -1);
    s.one = index_in(names, single_word(need_line(b, "one")), need_line(b, "one"));
    for (const auto& l : b.lines) {
      if (l.key != "mul") continue;
      for (const auto& w : split_words(l.rest)) {
        Triple t = parse_triple(l, w, "*");
        s.mul[index_in(names, t.a, l) * n + index_in(names, t.b, l)] = index_in(names, t.c, l);
      }
    }
    for (int i = 0; i < n * n; ++i)
      if (s.mul[i] < 0) fail(b.number, "missing product " + names[i / n] + "*" + names[i % n]);
    out_.posemirings[b.name] = s;
  }

  void module(const Block& b) {
    check_keys(b, {"scalars", "carrier", "act"});
    FiniteModule m;
    const Line& sl = need_line(b, "scalars");
    auto it = out_.posemirings.find(single_word(sl));
    if (it == out_.posemirings.end()) fail(sl.number, "unknown posemiring '" + single_word(sl) + "'");
    m.scalars = it->second;
    m.carrier = *pomonoid_ref(need_line(b, "carrier"));
    int ns = m.scalars.size(), nc = m.carrier.size();
    m.act.assign(static_cast<std::size_t>(ns) * nc, -1);
    for (const auto& l : b.lines) {
      if (l.key != "act") continue;
      for (const auto& w : split_words(l.rest)) {
        Triple t = parse_triple(l, w, "*");
        m.act[index_in(m.scalars.additive.elements, t.a, l) * nc + index_in(m.carrier.elements, t.b, l)] =
            index_in(m.carrier.elements, t.c, l);
      }
    }
    for (int i = 0; i < ns * nc; ++i)
      if (m.act[i] < 0)
        fail(b.number, "missing action " + m.scalars.additive.elements[i / nc] + "*" + m.carrier.elements[i % nc]);
    out_.modules[b.name] = m;
  }

  void deductive(const Block& b) {
    BasePtr base = pomonoid_ref(need_line(b, "on"));
    const auto& names = base->elements;
    int n = base->size();
    if (b.kind == "dr") {
      check_keys(b, {"on", "pairs", "generate"});
      std::vector<Mask> rows(n, 0);
      for (const auto& l : b.lines) {
        if (l.key != "pairs") continue;
        for (const auto& w : split_words(l.rest)) {
          std::size_t s = w.find("|-");
          if (s == std::string::npos) fail(l.number, "expected a|-b, got '" + w + "'");
          rows[index_in(names, w.substr(0, s), l)] |= bit(index_in(names, w.substr(s + 2), l));
        }
      }
      out_.drs[b.name] = find_line(b, "generate") ? dr_closure(base, rows) : DeductiveRelation{base, rows};
    } else if (b.kind == "do") {
      check_keys(b, {"on", "image"});
      std::vector<Mask> image(n, 0);
      std::vector<bool> given(n, false);
      for (const auto& l : b.lines) {
        if (l.key != "image") continue;
        std::size_t c = l.rest.find(':');
        if (c == std::string::npos) fail(l.number, "expected 'image a: b c'");
        int a = index_in(names, trim_copy(l.rest.substr(0, c)), l);
        if (given[a]) fail(l.number, "image of " + names[a] + " given twice");
        given[a] = true;
        for (const auto& e : split_words(l.rest.substr(c + 1))) image[a] |= bit(index_in(names, e, l));
      }
      for (int a = 0; a < n; ++a)
        if (!given[a]) fail(b.number, "missing image of " + names[a]);
      out_.dos[b.name] = DeductiveOperator{base, image};
    } else {
      check_keys(b, {"on", "member"});
      std::set<Mask> members;
      for (const auto& l : b.lines) {
        if (l.key != "member") continue;
        Mask m = 0;
        for (const auto& e : split_words(l.rest)) m |= bit(index_in(names, e, l));
        members.insert(m);
      }
      out_.dss[b.name] = DeductiveSystem{base, std::vector<Mask>(members.begin(), members.end())};
    }
  }

  void algebra(const Block& b) {
    check_keys(b, {"elements", "meet", "join", "fuse", "impl", "one", "const", "lukasiewicz", "godel"});
    FiniteAlgebra a;
    if (const Line* l = find_line(b, "lukasiewicz")) {
      a = luk_chain(std::stoi(single_word(*l)));
    } else if (const Line* g = find_line(b, "godel")) {
      a = godel_chain(std::stoi(single_word(*g)));
    } else {
      a.elements = elements_of(b);
      for (const auto& l : b.lines) {
        if (l.key == "meet") a.meet = binary_table(l, a.elements);
        if (l.key == "join") a.join = binary_table(l, a.elements);
        if (l.key == "fuse") a.fuse = binary_table(l, a.elements);
        if (l.key == "impl") a.impl = binary_table(l, a.elements);
        if (l.key == "one") a.one = index_in(a.elements, single_word(l), l);
      }
    }
    a.name = b.name;
    for (const auto& l : b.lines) {
      if (l.key != "const") continue;
      auto w = split_words(l.rest);
      if (w.size() != 2) fail(l.number, "expected 'const NAME element'");
      a.constants.emplace_back(w[0], index_in(a.elements, w[1], l));
    }
    a.check_shape();
    out_.algebras[b.name] = a;
  }

  void monoid_matrix(const Block& b) {
    check_keys(b, {"algebra", "pomonoid", "g", "f"});
    MonoidMatrix m;
    m.algebra = algebra_ref(need_line(b, "algebra"));
    m.d = *pomonoid_ref(need_line(b, "pomonoid"));
    if (const Line* l = find_line(b, "g"))
      for (const auto& e : split_words(l->rest)) m.g |= bit(index_in(m.d.elements, e, *l));
    const Line& fl = need_line(b, "f");
    m.f.assign(m.algebra.size(), -1);
    for (const auto& w : split_words(fl.rest)) {
      std::size_t s = w.find("->");
      if (s == std::string::npos) fail(fl.number, "expected a->d, got '" + w + "'");
      m.f[index_in(m.algebra.elements, w.substr(0, s), fl)] = index_in(m.d.elements, w.substr(s + 2), fl);
    }
    for (int a = 0; a < m.algebra.size(); ++a)
      if (m.f[a] < 0) fail(fl.number, "f misses " + m.algebra.elements[a]);
    out_.monoid_matrices[b.name] = m;
  }

  void fuzzy(const Block& b) {
    check_keys(b, {"chain", "threshold", "f"});
    int n = std::stoi(single_word(need_line(b, "chain")));
    Rational t = 1;
    if (const Line* l = find_line(b, "threshold")) t = parse_rational(single_word(*l));
    FuzzyMatrix m = fuzzy_identity(n, t);
    if (const Line* l = find_line(b, "f")) {
      auto w = split_words(l->rest);
      if (!(w.size() == 1 && w[0] == "id")) {
        if (static_cast<int>(w.size()) != n) fail(l->number, "f needs 'id' or " + std::to_string(n) + " values");
        m.f.clear();
        for (const auto& v : w) m.f.push_back(parse_rational(v));
      }
    }
    out_.fuzzy_matrices[b.name] = m;
  }

  StructureFile& out_;
  std::set<std::string> seen_;
};

}  // namespace

const Hypermatrix& StructureFile::first_hypermatrix() const {
  for (const auto& [kind, name] : order)
    if (kind == "hypermatrix") return hypermatrices.at(name);
  throw InputError("no hypermatrix block in the structure file");
}

StructureFile parse_structure_file(const std::string& text) {
  std::vector<Block> blocks;
  auto lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string line = trim_copy(strip_comment(lines[i]));
    if (line.empty()) continue;
    int number = static_cast<int>(i) + 1;
    std::size_t sp = line.find_first_of(" \t");
    std::string key = line.substr(0, sp);
    std::string rest = sp == std::string::npos ? "" : trim_copy(line.substr(sp));
    if (kKinds.count(key) && !is_reference(blocks, key)) {
      auto w = split_words(rest);
      if (w.size() != 1) fail(number, key + " needs exactly one name");
      blocks.push_back({number, key, w[0], {}});
      continue;
    }
    if (blocks.empty()) fail(number, "'" + key + "' outside a block");
    blocks.back().lines.push_back({number, key, rest});
  }
  StructureFile out;
  Builder builder(out);
  for (const auto& b : blocks) {
    try {
      builder.build(b);
    } catch (const std::invalid_argument&) {
      fail(b.number, "malformed number in " + b.kind + " " + b.name);
    } catch (const std::out_of_range&) {
      fail(b.number, "number out of range in " + b.kind + " " + b.name);
    }
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

StructureFile load_structure_file(const std::string& path) { return parse_structure_file(read_file(path)); }

}  // namespace mdrkit
