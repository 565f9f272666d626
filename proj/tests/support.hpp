#pragma once

#include <complex>
#include <random>

#include "qms/algebra.hpp"

namespace qms::test {

inline Matrix mat2(std::complex<double> a, std::complex<double> b, std::complex<double> c, std::complex<double> d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

inline Matrix sigma_x() { return mat2(0, 1, 1, 0); }
inline Matrix sigma_y() { return mat2(0, std::complex<double>(0, -1), std::complex<double>(0, 1), 0); }
inline Matrix sigma_z() { return mat2(1, 0, 0, -1); }

inline Element single(const Matrix& m) {
  return Element(BlockAlgebra({static_cast<int>(m.rows())}), {m});
}

inline Element diag(const BlockAlgebra& alg, std::initializer_list<double> values) {
  Element x(alg);
  int i = 0;
  for (double v : values) x.block(i++)(0, 0) = v;
  return x;
}

inline double max_diff(const Element& a, const Element& b) { return (a - b).max_abs_entry(); }

}  // namespace qms::test
