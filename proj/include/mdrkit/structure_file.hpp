#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "mdrkit/algebra.hpp"
#include "mdrkit/deductive.hpp"
#include "mdrkit/semantics.hpp"
#include "mdrkit/structures.hpp"

namespace mdrkit {

// Contents of a line-based structure file, in order of appearance.
struct StructureFile {
  std::vector<std::pair<std::string, std::string>> order;  // (kind, name)
  std::map<std::string, BasePtr> pomonoids;
  std::map<std::string, FinitePoSemiring> posemirings;
  std::map<std::string, FiniteModule> modules;
  std::map<std::string, DeductiveRelation> drs;
  std::map<std::string, DeductiveOperator> dos;
  std::map<std::string, DeductiveSystem> dss;
  std::map<std::string, FiniteAlgebra> algebras;
  std::map<std::string, Hypermatrix> hypermatrices;
  std::map<std::string, MonoidMatrix> monoid_matrices;
  std::map<std::string, FuzzyMatrix> fuzzy_matrices;
  std::map<std::string, SequentModel> sequent_models;

  const Hypermatrix& first_hypermatrix() const;  // throws InputError
};

StructureFile parse_structure_file(const std::string& text);
StructureFile load_structure_file(const std::string& path);
std::string read_file(const std::string& path);  // throws InputError

}  // namespace mdrkit
