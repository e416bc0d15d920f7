#include <doctest.h>

#include <random>

#include "mdrkit/algebra.hpp"
#include "mdrkit/error.hpp"
#include "mdrkit/mv_oracle.hpp"
#include "mdrkit/proof.hpp"
#include "mdrkit/semantics.hpp"
#include "mdrkit/structure_file.hpp"
#include "semantics_oracle.hpp"
#include "support.hpp"

using namespace mdrkit;
using namespace testing_support;

namespace {

Consecution C(const std::string& s) { return parse_consecution(s); }

Hypermatrix constants_example() {
  FiniteAlgebra a = constants_algebra();
  return {a, make_downset(2, {{1, 1}})};
}

std::vector<FiniteAlgebra> small_algebras() {
  StructureFile hf = load_structure_file(data_path("hyper01.txt"));
  return {luk_chain(2), luk_chain(3), godel_chain(3), hf.algebras.at("B01")};
}

Consecution random_consecution(std::mt19937_64& rng, const std::vector<std::string>& vars) {
  return {random_fmultiset(rng, 2, 1, vars), random_fmultiset(rng, 2, 1, vars)};
}

}  // namespace

TEST_CASE("finite residuated lattices") {
  for (int n = 2; n <= 6; ++n) {
    CHECK(validate_rl(luk_chain(n)).ok());
    CHECK(validate_rl(godel_chain(n)).ok());
  }
  FiniteAlgebra broken = luk_chain(3);
  broken.impl[0] = 0;
  CHECK_FALSE(validate_rl(broken).ok());
  CHECK(luk_chain(3).elements == std::vector<std::string>{"0", "1/2", "1"});
}

TEST_CASE("consequence over residuated lattices") {
  std::vector<FiniteAlgebra> k{luk_chain(3), godel_chain(3)};
  CHECK(rl_consequence(k, C("[] |> []")));
  CHECK(rl_consequence(k, C("[p, q] |> [p]")));
  CHECK_FALSE(rl_consequence({luk_chain(3)}, C("[p] |> [p, p]")));
  CHECK(rl_consequence({godel_chain(3)}, C("[p] |> [p, p]")));
}

TEST_CASE("MV chain oracle") {
  OracleVerdict mp = mv_oracle(C("[p, p->q] |> [q]"));
  CHECK(mp.valid);
  CHECK(mp.label() == "Valid≤11");
  CHECK(mv_oracle(C("[p*q] |> [p, q]")).valid);
  OracleVerdict dup = mv_oracle(C("[p] |> [p, p]"));
  CHECK_FALSE(dup.valid);
  CHECK(dup.chain == 3);
  CHECK(dup.witness_str() == "p=1/2");
  CHECK_FALSE(mv_holds_at(C("[p] |> [p, p]"), dup.witness));
  CHECK_THROWS_AS(mv_oracle(C("[#0] |> [p]")), InputError);
  OracleVerdict g = mv_oracle(C("[] |> [p | (p -> q)]"));
  CHECK_FALSE(g.valid);
  CHECK_FALSE(mv_holds_at(C("[] |> [p | (p -> q)]"), g.witness));
}

TEST_CASE("chain oracle agrees with finite chain evaluation") {
  std::mt19937_64 rng(23);
  std::vector<FiniteAlgebra> chains;
  for (int n = 2; n <= 6; ++n) chains.push_back(luk_chain(n));
  for (int i = 0; i < 200; ++i) {
    Consecution c = random_consecution(rng, {"p", "q"});
    OracleVerdict v = mv_oracle(c, {6, 0, 1, 0, 1});
    INFO(c.str());
    CHECK(v.valid == rl_consequence(chains, c));
    if (!v.valid) CHECK_FALSE(mv_holds_at(c, v.witness));
  }
}

TEST_CASE("oracle is deterministic across job counts") {
  std::mt19937_64 rng(29);
  for (int i = 0; i < 40; ++i) {
    Consecution c = random_consecution(rng, {"p", "q", "r"});
    OracleVerdict a = mv_oracle(c, {11, 500, 32, 5, 1});
    OracleVerdict b = mv_oracle(c, {11, 500, 32, 5, 4});
    CHECK(a.valid == b.valid);
    CHECK(a.witness_str() == b.witness_str());
  }
}

TEST_CASE("hypermatrix consequence matches direct unfolding") {
  std::mt19937_64 rng(31);
  auto algebras = small_algebras();
  for (int i = 0; i < 60; ++i) {
    const FiniteAlgebra& a = algebras[i % 3];
    Hypermatrix h{a, random_downset(rng, a.size(), 3, 3)};
    for (int j = 0; j < 20; ++j) {
      Consecution c = random_consecution(rng, {"p", "q"});
      INFO(h.str(), c.str());
      REQUIRE(hyper_check(h, c, HyperMode::Contextual).holds == brute_hyper(h, c, true));
      REQUIRE(hyper_check(h, c, HyperMode::Plain).holds == brute_hyper(h, c, false));
    }
  }
}

TEST_CASE("contextual and plain consequence separate on the constants example") {
  Hypermatrix h = constants_example();
  CHECK(validate(h).ok());
  CHECK(hyper_check(h, C("[#0] |> [#1]"), HyperMode::Plain).holds);
  CHECK_FALSE(hyper_check(h, C("[#0, #1] |> [#1, #1]"), HyperMode::Plain).holds);
  CHECK_FALSE(hyper_check(h, C("[#0] |> [#1]"), HyperMode::Contextual).holds);
  CHECK(hyper_check(h, C("[] |> []"), HyperMode::Contextual).holds);
  CHECK(hyper_check(h, C("[#1, #0] |> [#0]"), HyperMode::Contextual).holds);
  HyperVerdict v = hyper_check(h, C("[#0] |> [#1]"), HyperMode::Contextual);
  CHECK(v.witness.find("context=[1]") != std::string::npos);
  CHECK_THROWS_AS(hyper_check(h, C("[#2] |> []"), HyperMode::Plain), InputError);
}

TEST_CASE("filter generation") {
  FiniteAlgebra l2 = luk_chain(2);
  AxiomaticSystem empty = load_system("");
  FilterResult e = filter_generate(empty, l2, {Bag{0, 0}});
  CHECK_FALSE(e.truncated);
  CHECK(e.filter == make_downset(2, {{0, 0}}));
  AxiomaticSystem mp = load_system("rule MP: [p, p -> q] |> [q]\n");
  FilterResult m = filter_generate(mp, l2, {Bag{0, 1}});
  CHECK_FALSE(m.truncated);
  CHECK(m.filter == make_downset(2, {{0, 1}}));
  CHECK(m.verification.ok());
  FilterResult m2 = filter_generate(mp, l2, {Bag{0, 2}, Bag{1, 1}});
  CHECK_FALSE(m2.truncated);
  CHECK(m2.verification.ok());
  for (const auto& g : m2.filter.gens) CHECK(bag_size(g) <= 2);
  CHECK(m2.filter.contains(Bag{1, 1}));
  // theorems grow contexts without bound
  FilterResult mv = filter_generate(builtin_system("MV_s"), luk_chain(3), {Bag{0, 0, 1}}, {5, 100});
  CHECK(mv.truncated);
}

TEST_CASE("generated filters are models of the system") {
  std::mt19937_64 rng(37);
  AxiomaticSystem sys = load_system("rule MP: [p, p -> q] |> [q]\n");
  int checked = 0;
  for (int i = 0; i < 20; ++i) {
    FiniteAlgebra a = i % 2 ? luk_chain(3) : luk_chain(2);
    Downset seed = random_downset(rng, a.size(), 2, 2);
    FilterResult r = filter_generate(sys, a, seed.gens, {6, 200});
    if (r.truncated) continue;
    ++checked;
    Hypermatrix h{a, r.filter};
    for (const auto& s : sys.schemata) CHECK(brute_hyper(h, s.body, true));
    for (const auto& g : seed.gens) CHECK(r.filter.contains(g));
  }
  CHECK(checked >= 15);
}

TEST_CASE("Leibniz congruence equals the brute-force maximum") {
  std::mt19937_64 rng(41);
  for (const auto& a : small_algebras()) {
    for (int i = 0; i < 25; ++i) {
      Hypermatrix h{a, random_downset(rng, a.size(), 3, 2)};
      INFO(h.str());
      Partition l = leibniz(h);
      CHECK(l == brute_leibniz(h));
      Hypermatrix r = reduce_model(h);
      CHECK(leibniz(r) == identity_partition(r.algebra.size()));
      Hypermatrix rr = reduce_model(r);
      CHECK(rr.algebra.size() == r.algebra.size());
      CHECK(rr.filter == r.filter);
    }
  }
  Hypermatrix ex = constants_example();
  CHECK(leibniz(ex) == identity_partition(2));
  Hypermatrix red = reduce_model(ex);
  CHECK(red.filter == ex.filter);
  Hypermatrix triv{constants_algebra(), make_downset(2, {{0, 0}})};
  CHECK(leibniz(triv) == total_partition(2));
  CHECK(reduce_model(triv).algebra.size() == 1);
  std::vector<Bag> level;
  all_bags(3, 4, [&](const Bag& x) {
    if (bag_size(x) == 4) level.push_back(x);
  });
  Hypermatrix full{luk_chain(3), make_downset(3, level)};
  CHECK(leibniz(full) == total_partition(3));
}

TEST_CASE("congruence enumeration") {
  for (const auto& a : small_algebras()) {
    std::set<Partition> lib;
    for (const auto& p : congruences(a)) lib.insert(p);
    std::set<Partition> brute;
    for (const auto& p : all_partitions(a.size()))
      if (brute_is_congruence(a, p)) brute.insert(p);
    CHECK(lib == brute);
  }
}

TEST_CASE("Gentzen bridge") {
  FiniteAlgebra l3 = luk_chain(3);
  Hypermatrix ab{l3, make_downset(3, {{0, 1, 1}})};
  SequentModel s = to_sequents(ab);
  std::set<std::vector<int>> expect{{}, {1}, {2}, {1, 2}, {2, 1}};
  CHECK(s.sequences == expect);
  Hypermatrix empty{l3, make_downset(3, {{0, 0, 0}})};
  CHECK(to_sequents(empty).sequences == std::set<std::vector<int>>{{}});
  SequentModel perm;
  perm.algebra = l3;
  perm.sequences = {{}, {0}, {2}, {0, 2}, {2, 0}, {2, 2}};
  CHECK(to_sequents(to_multisets(perm)).sequences == perm.sequences);
  SequentModel bad;
  bad.algebra = l3;
  bad.sequences = {{}, {0, 2}};
  CHECK_THROWS_AS(to_multisets(bad), InputError);
  std::mt19937_64 rng(43);
  for (int i = 0; i < 40; ++i) {
    const FiniteAlgebra a = i % 2 ? luk_chain(3) : godel_chain(3);
    Hypermatrix h{a, random_downset(rng, 3, 3, 3)};
    CHECK(gentzen_check(h).ok());
    CHECK(to_multisets(to_sequents(h)).filter == h.filter);
  }
}

TEST_CASE("monoid matrices") {
  StructureFile bf = load_structure_file(data_path("boolean_matrix.txt"));
  const MonoidMatrix& classical = bf.monoid_matrices.at("Classical");
  CHECK(validate(classical).ok());
  HyperResult h = to_hyper(classical, 5);
  CHECK(h.truncated);
  all_bags(2, 5, [&](const Bag& x) { CHECK(h.hyper.filter.contains(x) == (x[0] == 0)); });

  Hypermatrix ab{luk_chain(3), make_downset(3, {{0, 1, 1}, {0, 0, 3}})};
  CHECK(to_hyper(from_hyper(ab)).hyper.filter == ab.filter);

  MonoidMatrix id = push(classical, classical.d, {0, 1});
  CHECK(id.g == classical.d.downset_of(classical.g));
  CHECK(id.f == classical.f);

  // G = D and f ≡ 0 on the 2-chain: the bare identity fails, the attained one holds.
  MonoidMatrix zero;
  zero.algebra = luk_chain(2);
  zero.d = max_chain(2);
  zero.g = zero.d.all();
  zero.f = {0, 0};
  REQUIRE(validate(zero).ok());
  RoundtripReport r = roundtrip_check(zero, 4);
  CHECK(r.hyper_identity);
  CHECK_FALSE(r.matrix_identity);
  CHECK(r.attained_identity);
  CHECK(r.pushed_g == bit(0));

  MonoidMatrix bad = classical;
  bad.g = bit(1);
  CHECK(validate(bad).has("G downset"));
  CHECK_THROWS_AS(push(classical, truncated_sum(3), {0, 1}), InputError);
  CHECK_THROWS_AS(roundtrip_check(classical, 1), InputError);
}

TEST_CASE("monoid matrix roundtrips on random instances") {
  std::mt19937_64 rng(47);
  std::vector<FinitePomonoid> ds{max_chain(2), max_chain(3), truncated_sum(3), truncated_sum(4)};
  int checked = 0;
  for (int i = 0; i < 60; ++i) {
    MonoidMatrix m;
    m.algebra = i % 2 ? luk_chain(3) : luk_chain(2);
    m.d = ds[i % ds.size()];
    for (int a = 0; a < m.algebra.size(); ++a)
      m.f.push_back(std::uniform_int_distribution<int>(0, m.d.size() - 1)(rng));
    m.g = m.d.downset_of(bit(std::uniform_int_distribution<int>(0, m.d.size() - 1)(rng)));
    if (!validate(m).ok()) continue;
    ++checked;
    RoundtripReport r = roundtrip_check(m, 6);
    CHECK(r.hyper_identity);
    CHECK(r.attained_identity);
    // the bare identity holds exactly when every designated value is attained
    CHECK(r.matrix_identity == (r.attained_g == m.g));
  }
  CHECK(checked > 20);
}

TEST_CASE("fuzzy matrices") {
  FuzzyMatrix id3 = fuzzy_identity(3, Rational(1, 2));
  CHECK(validate(id3).ok());
  FuzzyMatrix sq = fuzzy_identity(5);
  for (int i = 0; i < 5; ++i) sq.f[i] = Rational(i * i, 16);
  CHECK(validate(sq).has("tensor preservation"));
  FuzzyMatrix flat = fuzzy_identity(3);
  flat.f = {Rational(0), Rational(0), Rational(1)};
  CHECK(validate(flat).has("strict monotonicity"));
  for (int n = 2; n <= 5; ++n) {
    FuzzyMatrix m = fuzzy_identity(n, Rational(1, 2));
    CHECK(fuzzy_check(m, C("[p, q] |> [q]")).holds);
    CHECK(fuzzy_check(m, C("[p, p->q] |> [q]")).holds);
    CHECK(fuzzy_family_check(m, C("[p, p->q] |> [q]")).holds);
  }
  CHECK_FALSE(fuzzy_check(fuzzy_identity(3, Rational(1, 2)), C("[p] |> [p, p]")).holds);
  CHECK(fuzzy_check(fuzzy_identity(3), C("[p] |> [p, p]")).holds);
  HyperVerdict v = fuzzy_family_check(fuzzy_identity(3), C("[p] |> [p, p]"));
  CHECK_FALSE(v.holds);
  CHECK(v.witness == "p=1/2");
  CHECK(fuzzy_consequence({fuzzy_identity(3), fuzzy_identity(4, Rational(2, 3))}, C("[p*q] |> [p, q]")));
}

TEST_CASE("fuzzy consequence matches bounded context enumeration") {
  std::mt19937_64 rng(53);
  for (int n : {3, 4}) {
    FiniteAlgebra a = luk_chain(n);
    for (int t = 0; t < n; ++t) {
      FuzzyMatrix m = fuzzy_identity(n, Rational(t, n - 1));
      for (int i = 0; i < 30; ++i) {
        Consecution c = random_consecution(rng, {"p", "q"});
        std::set<std::string> vs = c.vars();
        std::vector<std::string> vars(vs.begin(), vs.end());
        bool expect = true;
        for_each_valuation(static_cast<int>(vars.size()), n, [&](const std::vector<int>& vals) {
          std::map<std::string, int> val;
          for (std::size_t k = 0; k < vars.size(); ++k) val[vars[k]] = vals[k];
          int fg = n - 1, fd = n - 1;
          for (const auto& f : c.premises.expand()) fg = std::max(0, fg + evaluate(a, f, val) - (n - 1));
          for (const auto& f : c.conclusions.expand()) fd = std::max(0, fd + evaluate(a, f, val) - (n - 1));
          for (int ctx = 0; ctx < n; ++ctx) {
            int cg = std::max(0, ctx + fg - (n - 1)), cd = std::max(0, ctx + fd - (n - 1));
            if (cg >= t && cd < t) expect = false;
          }
          return expect;
        });
        INFO(c.str(), " threshold ", t);
        CHECK(fuzzy_check(m, c).holds == expect);
      }
    }
  }
}
