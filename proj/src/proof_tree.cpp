#include <algorithm>

#include "mdrkit/error.hpp"
#include "mdrkit/proof.hpp"
#include "mdrkit/text.hpp"

namespace mdrkit {

std::string TreeProof::str(int indent) const {
  std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  std::string tag;
  switch (kind) {
    case Kind::Hyp: tag = "hyp"; break;
    case Kind::Axiom: tag = rule.empty() ? "axiom" : "axiom [" + rule + "]"; break;
    case Kind::Rule: tag = rule.empty() ? "node" : "node [" + rule + "]"; break;
  }
  std::string out = pad + tag + ": " + label.str() + "\n";
  for (const auto& c : children) out += c.str(indent + 1);
  return out;
}

std::size_t TreeProof::node_count() const {
  std::size_t n = 1;
  for (const auto& c : children) n += c.node_count();
  return n;
}

FMultiset TreeProof::hypotheses() const {
  FMultiset out;
  if (kind == Kind::Hyp) out.insert(label);
  for (const auto& c : children) out = out + c.hypotheses();
  return out;
}

TreeProof parse_tree_proof(const std::string& src) {
  struct Pending {
    int indent;
    TreeProof node;
  };
  std::vector<Pending> stack;
  std::optional<TreeProof> root;
  auto close_to = [&](int indent) {
    while (!stack.empty() && stack.back().indent >= indent) {
      Pending p = std::move(stack.back());
      stack.pop_back();
      if (stack.empty()) {
        if (root) throw InputError("tree proof has more than one root");
        root = std::move(p.node);
      } else {
        stack.back().node.children.push_back(std::move(p.node));
      }
    }
  };
  auto lines = split_lines(src);
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    std::string raw = strip_comment(lines[ln]);
    std::string line = trim_copy(raw);
    if (line.empty()) continue;
    std::string where = "line " + std::to_string(ln + 1) + ": ";
    int indent = static_cast<int>(raw.find_first_not_of(' '));
    std::size_t colon = line.find(':');
    if (colon == std::string::npos) throw InputError(where + "expected 'hyp:', 'axiom:' or 'node:'");
    std::string head = trim_copy(line.substr(0, colon));
    TreeProof t;
    std::size_t br = head.find('[');
    std::string kind = trim_copy(head.substr(0, br));
    if (br != std::string::npos) {
      std::size_t close = head.find(']', br);
      if (close == std::string::npos) throw InputError(where + "unclosed rule name");
      t.rule = trim_copy(head.substr(br + 1, close - br - 1));
    }
    if (kind == "hyp") {
      t.kind = TreeProof::Kind::Hyp;
    } else if (kind == "axiom") {
      t.kind = TreeProof::Kind::Axiom;
    } else if (kind == "node") {
      t.kind = TreeProof::Kind::Rule;
    } else {
      throw InputError(where + "unknown node tag '" + kind + "'");
    }
    try {
      t.label = parse_formula(line.substr(colon + 1));
    } catch (const InputError& e) {
      throw InputError(where + e.what());
    }
    close_to(indent);
    if (stack.empty() && root) throw InputError(where + "tree proof has more than one root");
    stack.push_back({indent, std::move(t)});
  }
  close_to(0);
  if (!root) throw InputError("empty tree proof");
  return *root;
}

namespace {

// Returns the schema and substitution realising one tree node.
std::optional<std::pair<const Schema*, Substitution>> node_instance(const AxiomaticSystem& as,
                                                                    const TreeProof& t) {
  FMultiset premises;
  for (const auto& c : t.children) premises.insert(c.label);
  FMultiset conclusion{t.label};
  for (const auto& s : as.schemata) {
    if (!t.rule.empty() && s.name != t.rule) continue;
    if (s.is_axiom() != (t.kind == TreeProof::Kind::Axiom)) continue;
    if (auto sigma = find_instance(s, premises, conclusion)) return std::make_pair(&s, *sigma);
  }
  return std::nullopt;
}

std::string check_nodes(const AxiomaticSystem& as, const TreeProof& t) {
  switch (t.kind) {
    case TreeProof::Kind::Hyp:
      if (!t.children.empty()) return "hypothesis " + t.label.str() + " has children";
      return "";
    case TreeProof::Kind::Axiom:
      if (!t.children.empty()) return "axiom leaf " + t.label.str() + " has children";
      if (!node_instance(as, t)) return t.label.str() + " is not an axiom instance";
      return "";
    case TreeProof::Kind::Rule:
      if (t.children.empty()) return "rule node " + t.label.str() + " has no premises";
      if (!node_instance(as, t)) {
        FMultiset premises;
        for (const auto& c : t.children) premises.insert(c.label);
        return to_string(premises) + " |> [" + t.label.str() + "] is not a rule instance";
      }
      for (const auto& c : t.children) {
        std::string bad = check_nodes(as, c);
        if (!bad.empty()) return bad;
      }
      return "";
  }
  return "";
}

void require_single_conclusion(const AxiomaticSystem& as) {
  if (!as.single_conclusion()) throw InputError("axiomatic system is not single-conclusion");
}

}  // namespace

Verdict check_tree_proof(const AxiomaticSystem& as, const TreeProof& t, const FMultiset& premises,
                         const Formula& conclusion) {
  require_single_conclusion(as);
  Verdict v;
  auto reject = [&](std::string why) {
    v.ok = false;
    v.bad_step = 0;
    v.reason = std::move(why);
    return v;
  };
  if (t.label != conclusion)
    return reject("root " + t.label.str() + " is not " + conclusion.str());
  std::string bad = check_nodes(as, t);
  if (!bad.empty()) return reject(bad);
  FMultiset hyps = t.hypotheses();
  if (!submultiset(hyps, premises))
    return reject("hypothesis leaves " + to_string(hyps) + " exceed " + to_string(premises));
  return v;
}

namespace {

struct Occurrence {
  Formula formula;
  TreeProof tree;
  std::vector<std::size_t> steps;  // contributing steps, sorted
  FMultiset hyps;
};

}  // namespace

SplitResult split_derivation(const AxiomaticSystem& as, const Derivation& d,
                             const Consecution& claim, const Formula& phi) {
  require_single_conclusion(as);
  Verdict v = check_derivation(as, d, claim);
  if (!v.ok) throw InputError("derivation is not accepted: " + v.str());
  if (!claim.conclusions.contains(phi)) throw InputError(phi.str() + " is not a conclusion of the claim");
  std::vector<Occurrence> live;
  for (const auto& f : claim.premises.expand()) {
    TreeProof leaf;
    leaf.label = f;
    live.push_back({f, leaf, {}, FMultiset{f}});
  }
  for (std::size_t j = 1; j < d.steps.size(); ++j) {
    const Step& s = d.steps[j];
    const Schema* schema = as.find(s.rule);
    Occurrence made;
    made.formula = s.subst(schema->body.conclusions).entries()[0].first;
    made.tree.label = made.formula;
    made.tree.rule = s.rule;
    made.tree.kind = schema->is_axiom() ? TreeProof::Kind::Axiom : TreeProof::Kind::Rule;
    for (const auto& f : s.matched.expand()) {
      auto it = std::find_if(live.begin(), live.end(), [&](const Occurrence& o) { return o.formula == f; });
      if (it == live.end()) throw InternalError("accepted derivation consumed a missing occurrence");
      made.tree.children.push_back(std::move(it->tree));
      made.steps.insert(made.steps.end(), it->steps.begin(), it->steps.end());
      made.hyps = made.hyps + it->hyps;
      live.erase(it);
    }
    made.steps.push_back(j);
    std::sort(made.steps.begin(), made.steps.end());
    live.push_back(std::move(made));
  }
  auto it = std::find_if(live.begin(), live.end(), [&](const Occurrence& o) { return o.formula == phi; });
  if (it == live.end()) throw InternalError("accepted derivation lost a conclusion occurrence");
  SplitResult out;
  out.tree = it->tree;
  out.tree_premises = it->hyps;
  out.rest_premises = difference(claim.premises, it->hyps);
  FMultiset single{phi};
  out.rest_conclusions = difference(claim.conclusions, single);
  Step first;
  first.multiset = out.rest_premises;
  out.rest.steps.push_back(first);
  for (std::size_t j = 1; j < d.steps.size(); ++j) {
    if (std::binary_search(it->steps.begin(), it->steps.end(), j)) continue;
    Step s = d.steps[j];
    const Schema* schema = as.find(s.rule);
    s.multiset = difference(out.rest.steps.back().multiset, s.matched) + s.subst(schema->body.conclusions);
    out.rest.steps.push_back(std::move(s));
  }
  return out;
}

namespace {

void emit_steps(const AxiomaticSystem& as, const TreeProof& t, Derivation& d) {
  if (t.kind == TreeProof::Kind::Hyp) return;
  for (const auto& c : t.children) emit_steps(as, c, d);
  auto inst = node_instance(as, t);
  if (!inst) throw InputError("tree node " + t.label.str() + " is not justified");
  Step s;
  s.rule = inst->first->name;
  s.subst = inst->second;
  s.matched = s.subst(inst->first->body.premises);
  s.multiset = difference(d.steps.back().multiset, s.matched) + FMultiset{t.label};
  d.steps.push_back(std::move(s));
}

}  // namespace

Derivation tree_to_derivation(const AxiomaticSystem& as, const TreeProof& t,
                              const FMultiset& premises) {
  Verdict v = check_tree_proof(as, t, premises, t.label);
  if (!v.ok) throw InputError("tree proof is not accepted: " + v.str());
  Derivation d;
  Step first;
  first.multiset = premises;
  d.steps.push_back(first);
  emit_steps(as, t, d);
  return d;
}

}  // namespace mdrkit
