#pragma once

#include "sdlab/convergence.hpp"
#include "sdlab/hierarchy.hpp"

namespace sdlab::bench {

inline const FractalHierarchy& gasket() {
  static const FractalHierarchy h(build_sierpinski_structure(), sierpinski_parameters(), 7);
  return h;
}

inline const ConvergenceLab& lab() {
  static const ConvergenceLab l(gasket(), default_admissible_drift(gasket(), 2.0 / 3.0));
  return l;
}

}  // namespace sdlab::bench
