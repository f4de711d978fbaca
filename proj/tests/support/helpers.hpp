#pragma once

#include <algorithm>
#include <cmath>

#include "nare/linalg.hpp"
#include "oracles.hpp"

namespace testing_support {

inline oracle::Rows to_rows(const nare::DenseMatrix& m) {
  oracle::Rows r(m.rows(), std::vector<double>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r[i][j] = m(i, j);
  return r;
}

inline double min_entry(const nare::DenseMatrix& m) {
  const auto d = m.data();
  return *std::min_element(d.begin(), d.end());
}

inline constexpr double kEps = 0x1p-52;

}  // namespace testing_support
