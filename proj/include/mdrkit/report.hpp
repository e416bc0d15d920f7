#pragma once

#include <string>
#include <vector>

namespace mdrkit {

struct Violation {
  std::string axiom;
  std::string witness;
};

// Outcome of a validation: empty iff every checked axiom holds.
class Report {
 public:
  bool ok() const { return violations_.empty(); }
  const std::vector<Violation>& violations() const { return violations_; }

  // Records the first witness per axiom only.
  void add(const std::string& axiom, const std::string& witness) {
    for (const auto& v : violations_)
      if (v.axiom == axiom) return;
    violations_.push_back({axiom, witness});
  }
  void merge(const Report& other, const std::string& prefix = "") {
    for (const auto& v : other.violations_) add(prefix + v.axiom, v.witness);
  }
  bool has(const std::string& axiom) const {
    for (const auto& v : violations_)
      if (v.axiom == axiom) return true;
    return false;
  }
  std::string str() const {
    if (ok()) return "valid\n";
    std::string out;
    for (const auto& v : violations_) out += "violation " + v.axiom + ": " + v.witness + "\n";
    return out;
  }

 private:
  std::vector<Violation> violations_;
};

}  // namespace mdrkit
