#ifndef QREV_TESTS_SUPPORT_HPP
#define QREV_TESTS_SUPPORT_HPP

#include <string>

#include <doctest.h>

#include "qrev/fixtures.hpp"
#include "qrev/matcore.hpp"

namespace qrev::test {

using fixtures::Rng;

inline CMatrix ket_bra(Eigen::Index d, Eigen::Index i, Eigen::Index j) {
  CMatrix m = CMatrix::Zero(d, d);
  m(i, j) = 1.0;
  return m;
}

inline CMatrix diag(std::initializer_list<double> xs) {
  RVector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index k = 0;
  for (double x : xs) v(k++) = x;
  return v.cast<cplx>().asDiagonal();
}

// Name of the error code thrown by f, "none" if it returns.
template <typename F>
std::string thrown_code(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return std::string(error_name(e.code()));
  }
  return "none";
}

}  // namespace qrev::test

#endif
