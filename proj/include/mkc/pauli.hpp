#pragma once

#include <unsupported/Eigen/KroneckerProduct>

#include "mkc/types.hpp"

namespace mkc::pauli {

inline Mat2 s0() { return Mat2::Identity(); }

inline Mat2 sx() {
  Mat2 m;
  m << 0, 1, 1, 0;
  return m;
}

inline Mat2 sy() {
  Mat2 m;
  m << 0, cd(0, -1), cd(0, 1), 0;
  return m;
}

inline Mat2 sz() {
  Mat2 m;
  m << 1, 0, 0, -1;
  return m;
}

// '0', 'x', 'y', 'z'
inline Mat2 by_label(char c) {
  switch (c) {
    case '0': return s0();
    case 'x': return sx();
    case 'y': return sy();
    case 'z': return sz();
  }
  throw precondition_error(std::string("unknown Pauli label '") + c + "'");
}

// Gamma^{ij} = tau^i (x) sigma^j; row = 2*tau + sigma.
inline Mat4 gamma(char i, char j) { return Eigen::kroneckerProduct(by_label(i), by_label(j)).eval(); }

}  // namespace mkc::pauli
