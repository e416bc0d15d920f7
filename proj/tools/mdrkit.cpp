#include <algorithm>
#include <cstdlib>
#include <set>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "mdrkit/algebra.hpp"
#include "mdrkit/deductive.hpp"
#include "mdrkit/error.hpp"
#include "mdrkit/formula.hpp"
#include "mdrkit/mv_oracle.hpp"
#include "mdrkit/proof.hpp"
#include "mdrkit/semantics.hpp"
#include "mdrkit/structure_file.hpp"

using namespace mdrkit;

namespace {

enum Exit { kValid = 0, kInvalid = 1, kInconclusive = 2, kInputError = 3 };

using Record = std::vector<std::pair<std::string, std::string>>;

class Out {
 public:
  bool porcelain = false;

  void emit(const std::string& human, const Record& rec) const {
    if (!porcelain) {
      std::cout << human;
      if (!human.empty() && human.back() != '\n') std::cout << '\n';
      return;
    }
    for (std::size_t i = 0; i < rec.size(); ++i)
      std::cout << (i ? "\t" : "") << rec[i].first << "=" << escape(rec[i].second);
    std::cout << '\n';
  }

 private:
  static std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
      if (c == '\n') out += "\\n";
      else if (c == '\t') out += "\\t";
      else out += c;
    }
    return out;
  }
};

AxiomaticSystem system_arg(const std::string& s) {
  if (s == "MV_s" || s == "MV") return builtin_system(s);
  return load_system(read_file(s));
}

int report_lines(const Out& out, const std::string& kind, const std::string& name, const Report& r) {
  if (r.ok()) {
    out.emit(kind + " " + name + ": valid", {{"kind", kind}, {"name", name}, {"status", "valid"}});
    return kValid;
  }
  for (const auto& v : r.violations())
    out.emit(kind + " " + name + ": violation " + v.axiom + ": " + v.witness,
             {{"kind", kind}, {"name", name}, {"status", "violation"}, {"axiom", v.axiom}, {"witness", v.witness}});
  return kInvalid;
}

template <class Map>
const typename Map::mapped_type& pick(const Map& m, const std::string& name, const char* what) {
  if (name.empty()) {
    if (m.empty()) throw InputError(std::string("no ") + what + " block in the structure file");
    return m.begin()->second;
  }
  auto it = m.find(name);
  if (it == m.end()) throw InputError(std::string("no ") + what + " named " + name);
  return it->second;
}

const Hypermatrix& pick_hyper(const StructureFile& f, const std::string& name) {
  return name.empty() ? f.first_hypermatrix() : pick(f.hypermatrices, name, "hypermatrix");
}

int cmd_parse(const Out& out, const std::string& text, const std::string& kind_in) {
  std::string kind = kind_in;
  if (kind == "auto") {
    std::size_t lead = text.find_first_not_of(" \t");
    char c = lead == std::string::npos ? '\0' : text[lead];
    if (text.find("|>") != std::string::npos) kind = "consecution";
    else if (c == '[') kind = "multiset";
    else if (c == '{') kind = "substitution";
    else kind = "formula";
  }
  std::string value;
  if (kind == "formula") {
    Formula f = parse_formula(text);
    value = f.str();
    out.emit("formula " + value + " (size " + std::to_string(f.size()) + ", depth " + std::to_string(f.depth()) + ")",
             {{"kind", kind}, {"text", value}, {"size", std::to_string(f.size())}, {"depth", std::to_string(f.depth())}});
  } else if (kind == "multiset") {
    value = to_string(parse_fmultiset(text));
    out.emit("multiset " + value, {{"kind", kind}, {"text", value}});
  } else if (kind == "consecution") {
    value = parse_consecution(text).str();
    out.emit("consecution " + value, {{"kind", kind}, {"text", value}});
  } else if (kind == "substitution") {
    value = parse_substitution(text).str();
    out.emit("substitution " + value, {{"kind", kind}, {"text", value}});
  } else {
    throw InputError("unknown kind " + kind);
  }
  return kValid;
}

int cmd_validate(const Out& out, const std::string& path) {
  StructureFile f = load_structure_file(path);
  int code = kValid;
  auto note = [&](int c) { code = std::max(code, c); };
  for (const auto& [kind, name] : f.order) {
    Report r;
    if (kind == "pomonoid") r = validate(*f.pomonoids.at(name));
    else if (kind == "posemiring") r = validate(f.posemirings.at(name));
    else if (kind == "module") r = validate(f.modules.at(name));
    else if (kind == "dr") r = validate(f.drs.at(name));
    else if (kind == "do") r = validate(f.dos.at(name));
    else if (kind == "ds") r = validate(f.dss.at(name));
    else if (kind == "algebra") {
      const FiniteAlgebra& a = f.algebras.at(name);
      if (a.is_rl_signature()) r = validate_rl(a);
    } else if (kind == "hypermatrix") r = validate(f.hypermatrices.at(name));
    else if (kind == "monoidmatrix") r = validate(f.monoid_matrices.at(name));
    else if (kind == "fuzzymatrix") r = validate(f.fuzzy_matrices.at(name));
    else if (kind == "sequents") to_multisets(f.sequent_models.at(name));
    note(report_lines(out, kind, name, r));
  }
  return code;
}

int cmd_trinity(const Out& out, const std::string& path) {
  StructureFile f = load_structure_file(path);
  int code = kValid;
  for (const auto& [kind, name] : f.order) {
    if (kind == "pomonoid") {
      BasePtr base = f.pomonoids.at(name);
      if (!validate(*base).ok()) {
        out.emit("pomonoid " + name + ": not a dually integral Abelian pomonoid", {{"pomonoid", name}, {"status", "invalid"}});
        code = std::max(code, int(kInvalid));
        continue;
      }
      auto drs = enumerate_drs(base);
      if (drs.truncated) {
        out.emit("pomonoid " + name + ": census truncated at " + std::to_string(drs.items.size()),
                 {{"pomonoid", name}, {"status", "truncated"}, {"drs", std::to_string(drs.items.size())}});
        code = std::max(code, int(kInconclusive));
        continue;
      }
      std::size_t bad = 0;
      std::set<std::vector<Mask>> dos, dss;
      for (const auto& d : drs.items) {
        DeductiveOperator o = to_do(d);
        DeductiveSystem s = to_ds(d);
        dos.insert(o.image);
        dss.insert(s.members);
        if (!(to_dr(o) == d) || !(to_dr(s) == d) || !(to_ds(o) == s) || !(to_do(s) == o)) ++bad;
      }
      std::string census = std::to_string(drs.items.size()) + "/" + std::to_string(dos.size()) + "/" +
                           std::to_string(dss.size());
      Record rec{{"pomonoid", name}, {"drs", std::to_string(drs.items.size())},
                 {"dos", std::to_string(dos.size())}, {"dss", std::to_string(dss.size())}};
      std::string human = "pomonoid " + name + ": DR/DO/DS census " + census;
      if (base->size() <= 4) {
        auto bdo = enumerate_dos_brute(base);
        auto bds = enumerate_dss_brute(base);
        human += ", brute-force DO/DS census " + std::to_string(bdo.items.size()) + "/" + std::to_string(bds.items.size());
        rec.emplace_back("brute_dos", std::to_string(bdo.items.size()));
        rec.emplace_back("brute_dss", std::to_string(bds.items.size()));
        if (bdo.items.size() != drs.items.size() || bds.items.size() != drs.items.size()) ++bad;
      }
      if (dos.size() != drs.items.size() || dss.size() != drs.items.size()) ++bad;
      human += bad ? ", roundtrip failures " + std::to_string(bad) : ", roundtrips ok";
      rec.emplace_back("status", bad ? "fail" : "ok");
      out.emit(human, rec);
      if (bad) code = std::max(code, int(kInvalid));
    } else if (kind == "dr" || kind == "do" || kind == "ds") {
      DeductiveRelation d;
      if (kind == "dr") d = f.drs.at(name);
      else if (kind == "do") d = to_dr(f.dos.at(name));
      else d = to_dr(f.dss.at(name));
      std::string text = kind + " " + name + "\n  as relation: " + d.str() + "\n  as operator: " + to_do(d).str() +
                         "\n  as system: " + to_ds(d).str();
      out.emit(text, {{"kind", kind}, {"name", name}, {"dr", d.str()}, {"do", to_do(d).str()}, {"ds", to_ds(d).str()}});
    }
  }
  return code;
}

int cmd_bj(const Out& out, const std::string& path) {
  StructureFile f = load_structure_file(path);
  int code = kValid;
  for (const auto& [kind, name] : f.order) {
    if (kind != "pomonoid") continue;
    Report r = bj_diagram_check(f.pomonoids.at(name));
    if (r.ok())
      out.emit("pomonoid " + name + ": all companion diagrams commute", {{"pomonoid", name}, {"status", "ok"}});
    else
      code = std::max(code, report_lines(out, "pomonoid", name, r));
  }
  return code;
}

int print_verdict(const Out& out, const Verdict& v) {
  out.emit(v.str(), {{"status", v.ok ? "accepted" : "rejected"}, {"step", std::to_string(v.bad_step)}, {"reason", v.reason}});
  return v.ok ? kValid : kInvalid;
}

int cmd_check(const Out& out, const std::string& sys, const std::string& proof, const std::string& claim_text) {
  AxiomaticSystem as = system_arg(sys);
  Consecution claim = parse_consecution(claim_text);
  std::string text = read_file(proof);
  if (text.find("step:") != std::string::npos) return print_verdict(out, check_derivation(as, parse_derivation(text), claim));
  if (claim.conclusions.size() != 1) throw InputError("a tree proof needs a single-conclusion claim");
  return print_verdict(out, check_tree_proof(as, parse_tree_proof(text), claim.premises,
                                             claim.conclusions.entries()[0].first));
}

int cmd_derive(const Out& out, const std::string& sys, const std::string& claim_text, int depth,
               std::uint64_t nodes) {
  AxiomaticSystem as = system_arg(sys);
  Consecution claim = parse_consecution(claim_text);
  SearchResult r = search_derivation(as, claim, {depth, nodes});
  Record rec{{"status", r.status_str()}, {"nodes", std::to_string(r.nodes)}};
  if (!r.found()) {
    out.emit(r.status_str() + " after " + std::to_string(r.nodes) + " nodes (inconclusive)", rec);
    return kInconclusive;
  }
  rec.emplace_back("depth", std::to_string(r.derivation.depth()));
  rec.emplace_back("derivation", r.derivation.str());
  out.emit("found at depth " + std::to_string(r.derivation.depth()) + "\n" + r.derivation.str(), rec);
  return kValid;
}

int cmd_split(const Out& out, const std::string& sys, const std::string& proof, const std::string& phi_text,
              const std::string& claim_text) {
  AxiomaticSystem as = system_arg(sys);
  Derivation d = parse_derivation(read_file(proof));
  if (d.steps.empty()) throw InputError("empty derivation");
  Consecution claim = claim_text.empty() ? Consecution{d.steps.front().multiset, d.steps.back().multiset}
                                         : parse_consecution(claim_text);
  Formula phi = parse_formula(phi_text);
  SplitResult s = split_derivation(as, d, claim, phi);
  Verdict vt = check_tree_proof(as, s.tree, s.tree_premises, phi);
  Verdict vr = check_derivation(as, s.rest, Consecution{s.rest_premises, s.rest_conclusions});
  std::string human = "tree proof of " + phi.str() + " from " + to_string(s.tree_premises) + ":\n" + s.tree.str() +
                      "rest derivation of " + to_string(s.rest_conclusions) + " from " + to_string(s.rest_premises) +
                      ":\n" + s.rest.str() + "tree " + (vt.ok ? "accepted" : "rejected") + ", rest " +
                      (vr.ok ? "accepted" : "rejected");
  out.emit(human, {{"tree_premises", to_string(s.tree_premises)}, {"tree", s.tree.str()},
                   {"rest_premises", to_string(s.rest_premises)}, {"rest", s.rest.str()},
                   {"tree_status", vt.ok ? "accepted" : "rejected"}, {"rest_status", vr.ok ? "accepted" : "rejected"}});
  return vt.ok && vr.ok ? kValid : kInvalid;
}

int cmd_oracle(const Out& out, const std::string& text, const OracleOptions& opt) {
  Consecution c = parse_consecution(text);
  OracleVerdict v = mv_oracle(c, opt);
  if (v.valid) {
    out.emit(v.label(), {{"verdict", v.label()}, {"max_chain", std::to_string(v.max_chain)}});
    return kValid;
  }
  std::string where = v.chain ? "chain " + std::to_string(v.chain) : "sample";
  out.emit("Invalid " + v.witness_str() + " (" + where + ")",
           {{"verdict", "Invalid"}, {"witness", v.witness_str()}, {"found_by", where}});
  return kInvalid;
}

int cmd_hyper(const Out& out, const std::string& path, const std::string& text, bool plain, const std::string& name) {
  StructureFile f = load_structure_file(path);
  const Hypermatrix& h = pick_hyper(f, name);
  HyperVerdict v = hyper_check(h, parse_consecution(text), plain ? HyperMode::Plain : HyperMode::Contextual);
  std::string mode = plain ? "plain" : "contextual";
  if (v.holds) {
    out.emit("holds (" + mode + ")", {{"mode", mode}, {"verdict", "holds"}});
    return kValid;
  }
  out.emit("fails (" + mode + ") " + v.witness, {{"mode", mode}, {"verdict", "fails"}, {"witness", v.witness}});
  return kInvalid;
}

int cmd_leibniz(const Out& out, const std::string& path, const std::string& name) {
  StructureFile f = load_structure_file(path);
  const Hypermatrix& h = pick_hyper(f, name);
  Partition p = leibniz(h);
  Hypermatrix r = quotient(h, p);
  std::string cong = partition_str(p, h.algebra.elements);
  out.emit("leibniz congruence " + cong + "\nreduced model: " + r.str(),
           {{"congruence", cong}, {"reduced_size", std::to_string(r.algebra.size())},
            {"reduced_filter", r.filter.str(r.algebra.elements)}});
  return kValid;
}

int cmd_gentzen(const Out& out, const std::string& path, const std::string& dir, const std::string& name) {
  StructureFile f = load_structure_file(path);
  if (dir == "to-sequents") {
    const Hypermatrix& h = pick_hyper(f, name);
    SequentModel s = to_sequents(h);
    Report r = gentzen_check(h);
    out.emit(s.str(), {{"direction", dir}, {"sequents", s.str()}, {"checks", r.ok() ? "ok" : "fail"}});
    return std::max(int(kValid), report_lines(out, "bridge", h.algebra.name, r));
  }
  if (dir == "to-multisets") {
    const SequentModel& s = pick(f.sequent_models, name, "sequents");
    Hypermatrix h = to_multisets(s);
    out.emit(h.str(), {{"direction", dir}, {"filter", h.filter.str(h.algebra.elements)}});
    return kValid;
  }
  throw InputError("--dir must be to-sequents or to-multisets");
}

int cmd_filter(const Out& out, const std::string& sys, const std::string& path, const std::string& algebra,
               const std::string& seed, const FilterOptions& opt) {
  AxiomaticSystem as = system_arg(sys);
  StructureFile f = load_structure_file(path);
  const FiniteAlgebra& a = pick(f.algebras, algebra, "algebra");
  std::vector<std::string> lits;
  for (std::size_t i = 0; (i = seed.find('[', i)) != std::string::npos;) {
    std::size_t j = seed.find(']', i);
    if (j == std::string::npos) throw InputError("unbalanced seed literal");
    lits.push_back(seed.substr(i, j - i + 1));
    i = j + 1;
  }
  Downset s = parse_downset_gens(a, lits);
  FilterResult r = filter_generate(as, a, s.gens, opt);
  std::string gens = r.filter.str(a.elements);
  out.emit("filter " + gens + (r.truncated ? " (truncated)" : " (fixpoint, verified)"),
           {{"filter", gens}, {"truncated", r.truncated ? "yes" : "no"}, {"iterations", std::to_string(r.iterations)}});
  return r.truncated ? kInconclusive : kValid;
}

int cmd_fuzzy(const Out& out, const std::string& path, const std::string& text, bool family, const std::string& name) {
  StructureFile f = load_structure_file(path);
  const FuzzyMatrix& m = pick(f.fuzzy_matrices, name, "fuzzymatrix");
  Consecution c = parse_consecution(text);
  HyperVerdict v = family ? fuzzy_family_check(m, c) : fuzzy_check(m, c);
  out.emit(v.holds ? "holds" : "fails " + v.witness, {{"verdict", v.holds ? "holds" : "fails"}, {"witness", v.witness}});
  return v.holds ? kValid : kInvalid;
}

int cmd_monoid(const Out& out, const std::string& path, const std::string& name, int max_size) {
  StructureFile f = load_structure_file(path);
  const MonoidMatrix& m = pick(f.monoid_matrices, name, "monoidmatrix");
  Report r = validate(m);
  if (!r.ok()) return report_lines(out, "monoidmatrix", name, r);
  HyperResult h = to_hyper(m, max_size);
  RoundtripReport rt = roundtrip_check(m, max_size);
  auto yn = [](bool b) { return std::string(b ? "yes" : "no"); };
  std::string gens = h.hyper.filter.str(m.algebra.elements);
  out.emit("hypermatrix filter " + gens + (h.truncated ? " (truncated at size " + std::to_string(max_size) + ")" : "") +
               "\nH^{M^H} = H: " + yn(rt.hyper_identity) + "\nf_D(M^{H^M}) = M: " + yn(rt.matrix_identity) +
               " (pushed G " + mask_str(rt.pushed_g, m.d.elements) + ", attained part of G " +
               mask_str(rt.attained_g, m.d.elements) + ")",
           {{"filter", gens}, {"truncated", yn(h.truncated)}, {"hyper_identity", yn(rt.hyper_identity)},
            {"matrix_identity", yn(rt.matrix_identity)}, {"attained_identity", yn(rt.attained_identity)}});
  return rt.hyper_identity && rt.matrix_identity ? kValid : kInvalid;
}

int default_jobs() {
  if (const char* env = std::getenv("MDRKIT_JOBS")) {
    try {
      return std::max(1, std::stoi(env));
    } catch (const std::exception&) {
      return 1;
    }
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mdrkit: multiset deductive relations toolkit"};
  app.require_subcommand(1);
  Out out;
  app.add_flag("--porcelain", out.porcelain, "tab-separated key=value records");
  int jobs = default_jobs();
  app.add_option("--jobs", jobs, "worker threads (default MDRKIT_JOBS or 1)")->check(CLI::PositiveNumber);

  std::string text, kind = "auto", file, sys, proof, claim, name, dir = "to-sequents", algebra;
  std::string seed;
  int depth = 6, max_size = 8;
  std::uint64_t nodes = 2000000;
  bool plain = false, family = false;
  OracleOptions oopt;
  FilterOptions fopt;

  auto* parse = app.add_subcommand("parse", "parse and print a formula, multiset, consecution or substitution");
  parse->add_option("text", text)->required();
  parse->add_option("--kind", kind)->check(CLI::IsMember({"auto", "formula", "multiset", "consecution", "substitution"}));

  auto* val = app.add_subcommand("validate", "validate every block of a structure file");
  val->add_option("file", file)->required();
  auto* tri = app.add_subcommand("trinity", "DR/DO/DS census and conversions");
  tri->add_option("file", file)->required();
  auto* bj = app.add_subcommand("bj", "check the companion diagrams on every pomonoid");
  bj->add_option("file", file)->required();

  auto* check = app.add_subcommand("check", "check a derivation or tree proof");
  check->add_option("system", sys, "MV_s, MV or a system file")->required();
  check->add_option("proof", proof)->required();
  check->add_option("claim", claim)->required();

  auto* derive = app.add_subcommand("derive", "bounded derivation search");
  derive->add_option("system", sys)->required();
  derive->add_option("claim", claim)->required();
  derive->add_option("--depth", depth, "maximal number of multisets")->check(CLI::PositiveNumber);
  derive->add_option("--nodes", nodes, "node budget");

  auto* split = app.add_subcommand("split", "split a derivation at a conclusion formula");
  split->add_option("system", sys)->required();
  split->add_option("derivation", proof)->required();
  split->add_option("formula", text)->required();
  split->add_option("--claim", claim, "defaults to first |> last multiset");

  auto* oracle = app.add_subcommand("oracle-mv", "bounded Lukasiewicz-chain oracle");
  oracle->add_option("consecution", text)->required();
  oracle->add_option("--max-chain", oopt.max_chain)->check(CLI::Range(2, 1000));
  oracle->add_option("--samples", oopt.samples)->check(CLI::NonNegativeNumber);
  oracle->add_option("--max-denominator", oopt.max_denominator)->check(CLI::PositiveNumber);
  oracle->add_option("--seed", oopt.seed);

  auto* hyper = app.add_subcommand("hyper", "hypermatrix consequence");
  hyper->add_option("file", file)->required();
  hyper->add_option("consecution", text)->required();
  hyper->add_flag("--plain", plain, "use the plain relation instead of the contextual one");
  hyper->add_option("--name", name);

  auto* leib = app.add_subcommand("leibniz", "Leibniz congruence and reduced model");
  leib->add_option("file", file)->required();
  leib->add_option("--name", name);

  auto* gen = app.add_subcommand("gentzen", "hypermatrix/sequent bridge");
  gen->add_option("file", file)->required();
  gen->add_option("--dir", dir)->check(CLI::IsMember({"to-sequents", "to-multisets"}));
  gen->add_option("--name", name);

  auto* filt = app.add_subcommand("filter", "generate a filter of a system on a finite algebra");
  filt->add_option("system", sys)->required();
  filt->add_option("file", file)->required();
  filt->add_option("--algebra", algebra);
  filt->add_option("--seed", seed, "generator literals such as '[1,1] [1/2]'");
  filt->add_option("--max-size", fopt.max_size)->check(CLI::PositiveNumber);
  filt->add_option("--max-iterations", fopt.max_iterations)->check(CLI::PositiveNumber);

  auto* fuzzy = app.add_subcommand("fuzzy", "fuzzy matrix consequence");
  fuzzy->add_option("file", file)->required();
  fuzzy->add_option("consecution", text)->required();
  fuzzy->add_flag("--family", family, "all thresholds at once");
  fuzzy->add_option("--name", name);

  auto* monoid = app.add_subcommand("monoid", "monoid matrix to hypermatrix and roundtrip identities");
  monoid->add_option("file", file)->required();
  monoid->add_option("--name", name);
  monoid->add_option("--max-size", max_size)->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }
  oopt.jobs = jobs;

  try {
    if (*parse) return cmd_parse(out, text, kind);
    if (*val) return cmd_validate(out, file);
    if (*tri) return cmd_trinity(out, file);
    if (*bj) return cmd_bj(out, file);
    if (*check) return cmd_check(out, sys, proof, claim);
    if (*derive) return cmd_derive(out, sys, claim, depth, nodes);
    if (*split) return cmd_split(out, sys, proof, text, claim);
    if (*oracle) return cmd_oracle(out, text, oopt);
    if (*hyper) return cmd_hyper(out, file, text, plain, name);
    if (*leib) return cmd_leibniz(out, file, name);
    if (*gen) return cmd_gentzen(out, file, dir, name);
    if (*filt) return cmd_filter(out, sys, file, algebra, seed, fopt);
    if (*fuzzy) return cmd_fuzzy(out, file, text, family, name);
    if (*monoid) return cmd_monoid(out, file, name, max_size);
  } catch (const SizeGuardError& e) {
    std::cerr << "inconclusive: " << e.what() << '\n';
    return kInconclusive;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const InternalError& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInvalid;
  }
  return kInputError;
}
