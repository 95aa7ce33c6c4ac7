#ifndef DIRACSIM_FFT_HPP
#define DIRACSIM_FFT_HPP

#include <cstddef>

#include "diracsim/types.hpp"

namespace diracsim::fft {

enum class Direction { forward, backward };

/// Unitary in-place DFT of `howmany` interleaved sequences of length n.
/// Element i of sequence h lives at data[h*dist + i*stride]. Forward uses
/// exp(-2*pi*i*j*k/n); both directions are scaled by 1/sqrt(n).
void transform(cplx* data, std::size_t n, std::size_t howmany, std::size_t stride,
               std::size_t dist, Direction dir);

/// Unitary in-place DFT of every column of a column-major matrix.
template <typename Derived>
void transform_columns(Eigen::MatrixBase<Derived>& m, Direction dir) {
  static_assert(!Derived::IsRowMajor, "column-major storage expected");
  if (m.size() == 0) return;
  transform(m.derived().data(), static_cast<std::size_t>(m.rows()),
            static_cast<std::size_t>(m.cols()), 1, static_cast<std::size_t>(m.outerStride()),
            dir);
}

/// Unitary in-place DFT of every row of a column-major matrix.
template <typename Derived>
void transform_rows(Eigen::MatrixBase<Derived>& m, Direction dir) {
  static_assert(!Derived::IsRowMajor, "column-major storage expected");
  if (m.size() == 0) return;
  transform(m.derived().data(), static_cast<std::size_t>(m.cols()),
            static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.outerStride()), 1,
            dir);
}

}  // namespace diracsim::fft

#endif  // DIRACSIM_FFT_HPP
