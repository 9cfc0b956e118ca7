#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "vvi/expr.hpp"
#include "vvi/geometry.hpp"

namespace vvi {

/// VVI(F, K): m component maps F_l : R^n -> R^n over a constraint set K.
class VviProblem {
 public:
  /// Throws std::invalid_argument unless m >= 1 and every field and K share
  /// the same dimension.
  VviProblem(std::string name, std::vector<VectorField> fields, ConvexSet k);

  const std::string& name() const { return name_; }
  std::size_t n() const { return k_.dimension(); }
  std::size_t m() const { return fields_.size(); }
  const std::vector<VectorField>& fields() const { return fields_; }
  const ConvexSet& constraint_set() const { return k_; }

 private:
  std::string name_;
  std::vector<VectorField> fields_;
  ConvexSet k_;
};

}  // namespace vvi
