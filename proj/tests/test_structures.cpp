#include <doctest.h>

#include <set>

#include "mdrkit/deductive.hpp"
#include "mdrkit/error.hpp"
#include "mdrkit/structure_file.hpp"
#include "mdrkit/structures.hpp"
#include "structures_oracle.hpp"
#include "support.hpp"

using namespace mdrkit;

namespace {

BasePtr share(const FinitePomonoid& p) { return std::make_shared<const FinitePomonoid>(p); }

FinitePoSemiring n3_semiring() {
  FinitePoSemiring s;
  s.additive = truncated_sum(3);
  s.one = 1;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) s.mul.push_back(std::min(a * b, 2));
  return s;
}

FinitePoSemiring boolean_semiring() {
  FinitePoSemiring s;
  s.additive = max_chain(2);
  s.one = 1;
  s.mul = {0, 0, 0, 1};
  return s;
}

}  // namespace

TEST_CASE("pomonoid validation") {
  CHECK(validate(truncated_sum(3)).ok());
  CHECK(validate(max_chain(2)).ok());
  CHECK(validate(powerset_pomonoid(2)).ok());
  FinitePomonoid p = truncated_sum(3);
  // 0 no longer bottom: only 1 <= 0 <= 2 ordering kept consistent
  p = make_pomonoid("bad", {"0", "1", "2"}, {{true, false, true}, {true, true, true}, {false, false, true}},
                    {{0, 1, 2}, {1, 2, 2}, {2, 2, 2}}, 0);
  Report r = validate(p);
  CHECK(r.has("dual integrality"));
  CHECK_THROWS_AS(make_pomonoid("x", {"0"}, {{true}}, {{1}}, 0).check_shape(), InputError);
}

TEST_CASE("fixtures parse and validate") {
  for (const char* f : {"pomonoids.txt", "n3.txt", "module.txt"}) {
    StructureFile s = load_structure_file(testing_support::data_path(f));
    for (const auto& [name, p] : s.pomonoids) CHECK(validate(*p).ok());
    for (const auto& [name, d] : s.drs) CHECK(validate(d).ok());
    for (const auto& [name, d] : s.dos) CHECK(validate(d).ok());
    for (const auto& [name, d] : s.dss) CHECK(validate(d).ok());
    for (const auto& [name, m] : s.modules) CHECK(validate(m).ok());
  }
  CHECK_THROWS_AS(parse_structure_file("pomonoid P\nelements 0 1\nzero 0\nadd 0+0=0\n"), InputError);
  CHECK_THROWS_AS(parse_structure_file("elements 0\n"), InputError);
  CHECK_THROWS_AS(parse_structure_file("pomonoid P\nelements 0\nzero 0\nadd 0+0=0\npomonoid P\n"), InputError);
}

TEST_CASE("DR validation") {
  BasePtr n3 = share(truncated_sum(3));
  CHECK(validate(least_dr(n3)).ok());
  CHECK(validate(full_dr(n3)).ok());
  DeductiveRelation d = least_dr(n3);
  d.rows[2] &= ~bit(1);
  CHECK(validate(d).has("generalised reflexivity"));
}

TEST_CASE("DR census matches the brute-force scan") {
  for (const auto& p : {truncated_sum(1), max_chain(2), truncated_sum(3), max_chain(3), powerset_pomonoid(2)}) {
    BasePtr base = share(p);
    auto census = enumerate_drs(base);
    REQUIRE_FALSE(census.truncated);
    std::set<std::vector<Mask>> got;
    for (const auto& d : census.items) {
      CHECK(validate(d).ok());
      got.insert(d.rows);
    }
    CHECK(got.size() == census.items.size());
    CHECK(got == testing_support::brute_drs(p));
    if (p.size() == 1) CHECK(census.items.size() == 1);
  }
}

TEST_CASE("trinity conversions are mutually inverse and order preserving") {
  for (const auto& p : {max_chain(2), truncated_sum(3), max_chain(3)}) {
    BasePtr base = share(p);
    auto drs = enumerate_drs(base).items;
    auto dos = enumerate_dos_brute(base).items;
    auto dss = enumerate_dss_brute(base).items;
    CHECK(dos.size() == drs.size());
    CHECK(dss.size() == drs.size());
    for (const auto& d : drs) {
      CHECK(to_dr(to_do(d)) == d);
      CHECK(to_dr(to_ds(d)) == d);
      CHECK(to_do(to_ds(to_do(d))) == to_do(d));
      CHECK(to_ds(to_do(to_ds(d))) == to_ds(d));
      CHECK(validate(to_do(d)).ok());
      CHECK(validate(to_ds(d)).ok());
      for (int a = 0; a < p.size(); ++a)
        for (int b = 0; b < p.size(); ++b) CHECK(d.entails(a, b) == has(to_do(d).image[a], b));
      for (const auto& e : drs) {
        CHECK(leq(d, e) == leq(to_do(d), to_do(e)));
        CHECK(leq(d, e) == leq(to_ds(d), to_ds(e)));
      }
    }
  }
  BasePtr n3 = share(truncated_sum(3));
  DeductiveOperator least = to_do(least_dr(n3));
  for (int a = 0; a < 3; ++a) CHECK(least.image[a] == n3->below(a));
}

TEST_CASE("theories") {
  BasePtr n3 = share(truncated_sum(3));
  TheoryReport least = theories(least_dr(n3));
  CHECK(least.theorems == bit(n3->zero));
  CHECK(least.checks.ok());
  TheoryReport full = theories(full_dr(n3));
  CHECK(full.th_pomonoid.size() == 1);
  for (Mask m : full.principal) CHECK(m == n3->all());
  for (const auto& d : enumerate_drs(n3).items) {
    TheoryReport t = theories(d);
    CHECK(t.checks.ok());
    std::vector<Mask> upsets;
    for (Mask m = 0; m < 8; ++m) {
      bool closed = true;
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
          if (has(m, a) && d.entails(a, b) && !has(m, b)) closed = false;
      if (closed) upsets.push_back(m);
    }
    CHECK(t.theories == upsets);
  }
}

TEST_CASE("meets of deductive operators") {
  BasePtr n3 = share(truncated_sum(3));
  auto drs = enumerate_drs(n3).items;
  std::vector<DeductiveOperator> all;
  for (const auto& d : drs) all.push_back(to_do(d));
  DeductiveOperator top = to_do(full_dr(n3));
  for (const auto& d : all) {
    CHECK(do_meet({d, top}) == d);
    CHECK(do_meet({d, d}) == d);
  }
  CHECK(do_meet(all) == to_do(least_dr(n3)));
}

TEST_CASE("Blok-Jonsson companions") {
  BasePtr n3 = share(truncated_sum(3));
  FiniteAcr a = bj_companion(least_dr(n3));
  for (Mask x = 0; x < 8; ++x)
    for (int i = 0; i < 3; ++i) {
      bool some = false;
      for (int y = 0; y < 3; ++y) some = some || (has(x, y) && n3->leq(i, y));
      CHECK(a.entails(x, i) == some);
    }
  ClosureOperator c = bj_companion(to_do(full_dr(n3)));
  CHECK(c.table[0] == 0);
  for (Mask x = 1; x < 8; ++x) CHECK(c.table[x] == n3->all());
  for (const auto& p : {truncated_sum(1), max_chain(2), truncated_sum(3), max_chain(3)}) CHECK(bj_diagram_check(share(p)).ok());
}

TEST_CASE("lifting finite ACRs") {
  std::vector<std::string> names{"a", "b"};
  DeductiveRelation id = dr_from_acr(acr_from_rules(names, {}));
  for (int x = 0; x < 4; ++x)
    for (int y = 0; y < 4; ++y) CHECK(id.entails(x, y) == ((y & ~x) == 0));
  DeductiveRelation full = dr_from_acr(acr_from_rules(names, {{0, 0}, {0, 1}}));
  CHECK(full == full_dr(full.base));
  DeductiveRelation one = dr_from_acr(acr_from_rules(names, {{bit(0), 1}}));
  CHECK(validate(one).ok());
  CHECK(one.entails(1, 3));
  CHECK_FALSE(one.entails(2, 1));
  CHECK(one.entails(3, 2));
}

TEST_CASE("action invariance agrees with a direct scan") {
  FiniteModule m = regular_module(n3_semiring());
  REQUIRE(validate(m).ok());
  int falses = 0;
  for (std::uint32_t code = 0; code < 512; ++code) {
    DeductiveOperator d{share(m.carrier), {code & 7U, (code >> 3) & 7U, (code >> 6) & 7U}};
    bool expect = true;
    for (int s = 0; s < 3; ++s)
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
          if (has(d.image[b], a) && !has(d.image[m.apply(s, b)], m.apply(s, a))) expect = false;
    Check c = action_invariant_check(m, d);
    REQUIRE(c.ok == expect);
    if (!expect) {
      CHECK_FALSE(c.witness.empty());
      ++falses;
    }
  }
  CHECK(falses > 0);
  DeductiveOperator bad{share(m.carrier), {bit(0), bit(0) | bit(1), bit(2)}};
  Check c = action_invariant_check(m, bad);
  CHECK_FALSE(c.ok);
  CHECK(action_invariant_check(m, to_do(full_dr(share(m.carrier)))).ok);
  FiniteModule b = regular_module(boolean_semiring());
  for (const auto& d : enumerate_drs(share(b.carrier)).items) CHECK(action_invariant_check(b, to_do(d)).ok);
}

TEST_CASE("quotient modules") {
  FiniteModule m = regular_module(n3_semiring());
  BasePtr base = share(m.carrier);
  QuotientModule same = quotient_module(m, to_do(least_dr(base)));
  CHECK(same.module.carrier.size() == 3);
  CHECK(same.report.ok());
  QuotientModule one = quotient_module(m, to_do(full_dr(base)));
  CHECK(one.module.carrier.size() == 1);
  for (const auto& d : enumerate_drs(base).items) {
    DeductiveOperator o = to_do(d);
    if (!action_invariant_check(m, o).ok) continue;
    QuotientModule q = quotient_module(m, o);
    CHECK(q.report.ok());
    CHECK(validate(q.module).ok());
  }
  DeductiveOperator bad{base, {bit(0), bit(0) | bit(1), bit(2)}};
  CHECK_THROWS_AS(quotient_module(m, bad), InputError);
}

TEST_CASE("kernels of module morphisms") {
  FiniteModule m = regular_module(n3_semiring());
  BasePtr base = share(m.carrier);
  ModuleMorphism id{&m, &m, {0, 1, 2}};
  CHECK(validate(id).ok());
  KernelResult k = kernel_do(id);
  CHECK(k.report.ok());
  for (int a = 0; a < 3; ++a) CHECK(k.kernel.image[a] == base->below(a));

  FiniteModule z;
  z.scalars = m.scalars;
  z.carrier = truncated_sum(1);
  z.act = {0, 0, 0};
  REQUIRE(validate(z).ok());
  ModuleMorphism zero{&m, &z, {0, 0, 0}};
  CHECK(validate(zero).ok());
  KernelResult kz = kernel_do(zero);
  for (int a = 0; a < 3; ++a) CHECK(kz.kernel.image[a] == base->all());
  CHECK(kz.report.ok());

  for (const auto& d : enumerate_drs(base).items) {
    DeductiveOperator o = to_do(d);
    if (!action_invariant_check(m, o).ok) continue;
    QuotientModule q = quotient_module(m, o);
    ModuleMorphism proj{&m, &q.module, q.morphism};
    REQUIRE(validate(proj).ok());
    KernelResult kp = kernel_do(proj);
    CHECK(kp.report.ok());
    CHECK(kp.kernel == o);
  }
}

TEST_CASE("cyclic projective witness") {
  FiniteModule m = regular_module(n3_semiring());
  CHECK(cyclic_projective_witness(m, 1, 1).ok());
  FiniteModule one;
  one.scalars = m.scalars;
  one.carrier = truncated_sum(1);
  one.act = {0, 0, 0};
  CHECK(cyclic_projective_witness(one, 0, 0).ok());
  CHECK(cyclic_projective_witness(one, 0, 2).has("order reflection"));
  FiniteModule two;
  two.scalars = boolean_semiring();
  two.carrier = powerset_pomonoid(2);
  two.act = {0, 0, 0, 0, 0, 1, 2, 3};
  REQUIRE(validate(two).ok());
  for (int v = 0; v < 4; ++v)
    for (int mu = 0; mu < 2; ++mu) CHECK(cyclic_projective_witness(two, v, mu).has("A*{v}=R"));
}
