#include <algorithm>
#include <map>

#include "mdrkit/error.hpp"
#include "mdrkit/proof.hpp"
#include "mdrkit/text.hpp"

namespace mdrkit {

namespace {

const std::string kMvS = R"(# Positive Lukasiewicz schemata in &, |, *, ->, 1
axiom A1: [] |> [p -> (q -> p)]
axiom A2: [] |> [(p -> q) -> ((q -> r) -> (p -> r))]
axiom A3: [] |> [((p -> q) -> q) -> ((q -> p) -> p)]
axiom A4: [] |> [(p -> (q -> r)) -> (q -> (p -> r))]
axiom A5: [] |> [(p * q -> r) -> (p -> (q -> r))]
axiom A6: [] |> [(p -> (q -> r)) -> (p * q -> r)]
axiom A7: [] |> [p -> (q -> p * q)]
axiom A8: [] |> [p * q -> q * p]
axiom A9: [] |> [p & q -> p]
axiom A10: [] |> [p & q -> q]
axiom A11: [] |> [(r -> p) -> ((r -> q) -> (r -> p & q))]
axiom A12: [] |> [p -> p | q]
axiom A13: [] |> [q -> p | q]
axiom A14: [] |> [(p -> r) -> ((q -> r) -> (p | q -> r))]
axiom A15: [] |> [(p -> q) | (q -> p)]
axiom A16: [] |> [p & q -> p * (p -> q)]
axiom A17: [] |> [1]
axiom A18: [] |> [(1 -> p) -> p]
rule MP: [p, p -> q] |> [q]
)";

const std::string kTensorElim = "rule TE: [p * q] |> [p, q]\n";

using Bindings = std::vector<std::pair<std::string, Formula>>;

const Formula* lookup(const Bindings& b, const std::string& v) {
  for (const auto& [name, t] : b)
    if (name == v) return &t;
  return nullptr;
}

bool match_into(const Formula& pat, const Formula& tgt, Bindings& b) {
  if (pat.is_var()) {
    if (const Formula* t = lookup(b, pat.name())) return *t == tgt;
    b.emplace_back(pat.name(), tgt);
    return true;
  }
  if (pat.op() != tgt.op()) return false;
  if (!pat.is_binary()) return pat.op() != Op::Const || pat.name() == tgt.name();
  return match_into(pat.left(), tgt.left(), b) && match_into(pat.right(), tgt.right(), b);
}

Bindings bindings_of(const Substitution& s) {
  return Bindings(s.table().begin(), s.table().end());
}

Substitution to_subst(const Bindings& b, const Substitution& base) {
  return Substitution(b, base.fallback());
}

struct MultisetMatcher {
  std::vector<Formula> pattern;
  std::vector<std::pair<Formula, long>> target;
  const std::function<bool(const Bindings&)>* visit;
  bool stop = false;

  void run(std::size_t i, Bindings& b) {
    if (stop) return;
    if (i == pattern.size()) {
      if (!(*visit)(b)) stop = true;
      return;
    }
    for (auto& [f, left] : target) {
      if (left == 0) continue;
      std::size_t mark = b.size();
      if (match_into(pattern[i], f, b)) {
        --left;
        run(i + 1, b);
        ++left;
      }
      b.resize(mark);
      if (stop) return;
    }
  }
};

void match_raw(const FMultiset& pattern, const FMultiset& target, bool exact, const Bindings& base,
               const std::function<bool(const Bindings&)>& visit) {
  if (exact ? pattern.size() != target.size() : pattern.size() > target.size()) return;
  MultisetMatcher m;
  m.pattern = pattern.expand();
  // Larger patterns first: they bind more and fail sooner.
  std::stable_sort(m.pattern.begin(), m.pattern.end(),
                   [](const Formula& a, const Formula& b) { return a.size() > b.size(); });
  for (const auto& [f, n] : target.entries()) m.target.emplace_back(f, static_cast<long>(n));
  m.visit = &visit;
  Bindings b = base;
  m.run(0, b);
}

}  // namespace

std::string Schema::str() const {
  return std::string(is_axiom() ? "axiom " : "rule ") + name + ": " + body.str();
}

bool AxiomaticSystem::single_conclusion() const {
  return std::all_of(schemata.begin(), schemata.end(),
                     [](const Schema& s) { return s.body.conclusions.size() == 1; });
}

const Schema* AxiomaticSystem::find(const std::string& name) const {
  for (const auto& s : schemata)
    if (s.name == name) return &s;
  return nullptr;
}

std::string AxiomaticSystem::str() const {
  std::string out;
  for (const auto& s : schemata) out += s.str() + "\n";
  return out;
}

AxiomaticSystem load_system(const std::string& src) {
  AxiomaticSystem as;
  int axioms = 0, rules = 0;
  auto lines = split_lines(src);
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    std::string line = trim_copy(strip_comment(lines[ln]));
    if (line.empty()) continue;
    std::size_t colon = line.find(':');
    if (colon == std::string::npos)
      throw InputError("line " + std::to_string(ln + 1) + ": expected 'axiom:' or 'rule:'");
    auto head = split_words(line.substr(0, colon));
    if (head.empty() || head.size() > 2 || (head[0] != "axiom" && head[0] != "rule"))
      throw InputError("line " + std::to_string(ln + 1) + ": expected 'axiom:' or 'rule:'");
    Schema s;
    try {
      s.body = parse_consecution(line.substr(colon + 1));
    } catch (const InputError& e) {
      throw InputError("line " + std::to_string(ln + 1) + ": " + e.what());
    }
    bool axiom = head[0] == "axiom";
    if (axiom && !s.body.premises.empty())
      throw InputError("line " + std::to_string(ln + 1) + ": an axiom has no premises");
    s.name = head.size() == 2 ? head[1]
                              : (axiom ? "axiom" + std::to_string(++axioms)
                                       : "rule" + std::to_string(++rules));
    if (as.find(s.name)) throw InputError("line " + std::to_string(ln + 1) + ": duplicate name " + s.name);
    as.schemata.push_back(std::move(s));
  }
  return as;
}

const std::string& mv_s_source() { return kMvS; }

AxiomaticSystem builtin_system(const std::string& name) {
  if (name == "MV_s") return load_system(kMvS);
  if (name == "MV") return load_system(kMvS + kTensorElim);
  throw InputError("unknown built-in system '" + name + "' (expected MV_s or MV)");
}

std::optional<Substitution> match_formula(const Formula& pattern, const Formula& target,
                                          const Substitution& base) {
  Bindings b = bindings_of(base);
  if (!match_into(pattern, target, b)) return std::nullopt;
  return to_subst(b, base);
}

void match_multiset(const FMultiset& pattern, const FMultiset& target, bool exact,
                    const Substitution& base, const std::function<bool(const Substitution&)>& visit) {
  match_raw(pattern, target, exact, bindings_of(base),
            [&](const Bindings& b) { return visit(to_subst(b, base)); });
}

std::optional<Substitution> find_instance(const Schema& s, const FMultiset& premises,
                                          const FMultiset& conclusions) {
  std::optional<Substitution> out;
  match_raw(s.body.premises, premises, true, {}, [&](const Bindings& sigma) {
    match_raw(s.body.conclusions, conclusions, true, sigma, [&](const Bindings& full) {
      out = to_subst(full, Substitution());
      return false;
    });
    return !out;
  });
  return out;
}

// Classical consequence

namespace {

bool classical_eval(const Formula& f, const std::map<std::string, bool>& v) {
  switch (f.op()) {
    case Op::Var: return v.at(f.name());
    case Op::One: return true;
    case Op::Const: throw InputError("classical consequence does not interpret #" + f.name());
    case Op::Meet:
    case Op::Fuse: return classical_eval(f.left(), v) && classical_eval(f.right(), v);
    case Op::Join: return classical_eval(f.left(), v) || classical_eval(f.right(), v);
    case Op::Impl: return !classical_eval(f.left(), v) || classical_eval(f.right(), v);
  }
  return false;
}

}  // namespace

bool mdr_from_tcr(const Tcr& tcr, const FMultiset& gamma, const FMultiset& delta) {
  std::vector<Formula> root = gamma.root();
  std::set<Formula> x(root.begin(), root.end());
  for (const auto& [psi, n] : delta.entries())
    if (!tcr(x, psi)) return false;
  return true;
}

bool identity_tcr(const std::set<Formula>& x, const Formula& psi) { return x.count(psi) > 0; }

bool classical_tcr(const std::set<Formula>& x, const Formula& psi) {
  std::set<std::string> vs = psi.vars();
  for (const auto& f : x) f.collect_vars(vs);
  if (vs.size() > 20) throw SizeGuardError("classical consequence over more than 20 variables");
  std::vector<std::string> names(vs.begin(), vs.end());
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << names.size()); ++bits) {
    std::map<std::string, bool> v;
    for (std::size_t i = 0; i < names.size(); ++i) v[names[i]] = (bits >> i) & 1U;
    bool premises = std::all_of(x.begin(), x.end(), [&](const Formula& f) { return classical_eval(f, v); });
    if (premises && !classical_eval(psi, v)) return false;
  }
  return true;
}

}  // namespace mdrkit
