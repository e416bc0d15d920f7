#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "mdrkit/formula.hpp"
#include "mdrkit/report.hpp"

namespace mdrkit {

using Rational = boost::multiprecision::cpp_rational;

std::string rational_str(const Rational& q);
Rational parse_rational(const std::string& s);

// Finite algebra in the language of &, |, *, ->, 1, possibly with extra
// named constants. Absent operations have empty tables.
struct FiniteAlgebra {
  std::string name;
  std::vector<std::string> elements;
  std::vector<int> meet, join, fuse, impl;  // row-major n*n
  int one = -1;
  std::vector<std::pair<std::string, int>> constants;

  int size() const { return static_cast<int>(elements.size()); }
  bool has_op(Op op) const;
  int apply(Op op, int a, int b) const;
  int constant(const std::string& c) const;  // throws InputError
  int index(const std::string& element) const;
  // Checks table shapes; throws InputError.
  void check_shape() const;
  bool is_rl_signature() const;
  bool leq(int a, int b) const { return apply(Op::Meet, a, b) == a; }
};

// Formula compiled to postfix form over a fixed variable list.
struct CompiledFormula {
  struct Instr {
    Op op;
    int arg;  // variable index for Var, constant name index for Const
  };
  std::vector<Instr> code;
};

class Compiler {
 public:
  explicit Compiler(std::vector<std::string> vars) : vars_(std::move(vars)) {}
  CompiledFormula compile(const Formula& f);
  const std::vector<std::string>& vars() const { return vars_; }
  const std::vector<std::string>& constants() const { return constants_; }

 private:
  void emit(const Formula& f, CompiledFormula& out);
  std::vector<std::string> vars_;
  std::vector<std::string> constants_;
};

// Evaluates with constants resolved through `consts` (indexed as in Compiler).
int evaluate(const FiniteAlgebra& a, const CompiledFormula& f, const std::vector<int>& vals,
             const std::vector<int>& consts);
int evaluate(const FiniteAlgebra& a, const Formula& f, const std::map<std::string, int>& val);

// Calls visit(values) for every assignment of k variables into n values in
// lexicographic order; stops early when visit returns false. Returns false if
// it stopped early.
template <class Visit>
bool for_each_valuation(int k, int n, Visit&& visit) {
  std::vector<int> v(k, 0);
  while (true) {
    if (!visit(static_cast<const std::vector<int>&>(v))) return false;
    int i = k - 1;
    while (i >= 0 && v[i] == n - 1) v[i--] = 0;
    if (i < 0) return true;
    ++v[i];
  }
}

Report validate_rl(const FiniteAlgebra& a);

// {0, 1/(n-1), ..., 1} with the Łukasiewicz operations.
FiniteAlgebra luk_chain(int n);
// {0, ..., 1} with fusion = meet (the Gödel chain).
FiniteAlgebra godel_chain(int n);
// Constants #0 and #1 only, no operations.
FiniteAlgebra constants_algebra();

bool rl_consequence(const std::vector<FiniteAlgebra>& algebras, const Consecution& c);

}  // namespace mdrkit
