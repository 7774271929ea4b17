#include "qcn/pauli.hpp"

#include <cmath>

#include "qcn/linalg.hpp"

namespace qcn {

ComplexMatrix pauli(int axis) {
  switch (axis) {
    case 0:
      return ComplexMatrix::identity(2);
    case 1:
      return ComplexMatrix::from_rows({{0.0, 1.0}, {1.0, 0.0}});
    case 2:
      return ComplexMatrix::from_rows(
          {{0.0, Complex(0.0, -1.0)}, {Complex(0.0, 1.0), 0.0}});
    case 3:
      return ComplexMatrix::from_rows({{1.0, 0.0}, {0.0, -1.0}});
    default:
      throw ContractViolation("pauli: axis must be in {0,1,2,3}");
  }
}

ComplexMatrix pauli_string(const std::vector<int> &axes) {
  if (axes.empty()) throw ContractViolation("pauli_string: empty axis list");
  ComplexMatrix out = pauli(axes[0]);
  for (std::size_t k = 1; k < axes.size(); ++k)
    out = tensor_product(out, pauli(axes[k]));
  return out;
}

std::vector<std::vector<int>> all_pauli_axes(std::size_t n) {
  std::size_t total = 1;
  for (std::size_t k = 0; k < n; ++k) total *= 4;
  std::vector<std::vector<int>> out;
  out.reserve(total);
  for (std::size_t s = 0; s < total; ++s) {
    std::vector<int> axes(n);
    std::size_t x = s;
    for (std::size_t k = n; k-- > 0;) {
      axes[k] = static_cast<int>(x % 4);
      x /= 4;
    }
    out.push_back(std::move(axes));
  }
  return out;
}

std::vector<std::vector<int>> diagonal_pauli_axes(std::size_t n) {
  const std::size_t total = std::size_t{1} << n;
  std::vector<std::vector<int>> out;
  out.reserve(total);
  for (std::size_t s = 0; s < total; ++s) {
    std::vector<int> axes(n);
    for (std::size_t k = 0; k < n; ++k)
      axes[k] = ((s >> (n - 1 - k)) & 1u) ? 3 : 0;
    out.push_back(std::move(axes));
  }
  return out;
}

std::vector<Complex> max_entangled_state(std::size_t n) {
  if (n == 0 || n % 2 != 0)
    throw ContractViolation("max_entangled_state: n must be positive even");
  const std::size_t half = n / 2;
  const std::size_t ds = std::size_t{1} << half;
  const std::size_t dim = std::size_t{1} << n;
  std::vector<Complex> v(dim, 0.0);
  const double amp = 1.0 / std::sqrt(static_cast<double>(ds));
  for (std::size_t i = 0; i < ds; ++i) {
    // B half carries the bits of i in reverse order (qubit k pairs with
    // qubit n-1-k).
    std::size_t rev = 0;
    for (std::size_t b = 0; b < half; ++b)
      if ((i >> b) & 1u) rev |= std::size_t{1} << (half - 1 - b);
    v[i * ds + rev] = amp;
  }
  return v;
}

std::vector<Complex> plus_state(std::size_t n) {
  const std::size_t dim = std::size_t{1} << n;
  return std::vector<Complex>(dim, 1.0 / std::sqrt(static_cast<double>(dim)));
}

ComplexMatrix projector(const std::vector<Complex> &v) {
  ComplexMatrix out(v.size());
  for (std::size_t r = 0; r < v.size(); ++r)
    for (std::size_t c = 0; c < v.size(); ++c)
      out(r, c) = v[r] * std::conj(v[c]);
  return out;
}

} // namespace qcn
