#include "qcn/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace qcn {

namespace {

void decompose_index(std::size_t x, const std::vector<std::size_t> &dims,
                     std::vector<std::size_t> &digits) {
  for (std::size_t i = dims.size(); i-- > 0;) {
    digits[i] = x % dims[i];
    x /= dims[i];
  }
}

double offdiag_norm(const ComplexMatrix &a) {
  double s = 0.0;
  for (std::size_t r = 0; r < a.dim(); ++r)
    for (std::size_t c = 0; c < a.dim(); ++c)
      if (r != c) s += std::norm(a(r, c));
  return std::sqrt(s);
}

} // namespace

Factorization::Factorization(std::vector<std::size_t> dims)
    : dims_(std::move(dims)), total_(1) {
  if (dims_.empty())
    throw DimensionError("Factorization: empty subsystem list");
  for (std::size_t d : dims_) {
    if (d == 0) throw DimensionError("Factorization: zero subsystem dim");
    total_ *= d;
  }
}

Factorization Factorization::qubits(std::size_t n) {
  if (n == 0) throw DimensionError("Factorization::qubits: n must be >= 1");
  return Factorization(std::vector<std::size_t>(n, 2));
}

Factorization Factorization::single(std::size_t dim) {
  return Factorization(std::vector<std::size_t>{dim});
}

Factorization Factorization::concat(const Factorization &other) const {
  std::vector<std::size_t> dims = dims_;
  dims.insert(dims.end(), other.dims_.begin(), other.dims_.end());
  return Factorization(std::move(dims));
}

void Factorization::require_matches(const ComplexMatrix &m) const {
  if (total_ != m.dim())
    throw DimensionError("factorization product " + std::to_string(total_) +
                         " does not match matrix dim " +
                         std::to_string(m.dim()));
}

ComplexMatrix tensor_product(const ComplexMatrix &a, const ComplexMatrix &b) {
  const std::size_t da = a.dim(), db = b.dim();
  ComplexMatrix out(da * db);
  for (std::size_t ra = 0; ra < da; ++ra)
    for (std::size_t ca = 0; ca < da; ++ca) {
      const Complex v = a(ra, ca);
      if (v == Complex{}) continue;
      for (std::size_t rb = 0; rb < db; ++rb)
        for (std::size_t cb = 0; cb < db; ++cb)
          out(ra * db + rb, ca * db + cb) = v * b(rb, cb);
    }
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix &m, const Factorization &f,
                            const std::vector<std::size_t> &keep) {
  f.require_matches(m);
  for (std::size_t i = 0; i < keep.size(); ++i) {
    if (keep[i] >= f.count())
      throw DimensionError("partial_trace: keep index out of range");
    if (i > 0 && keep[i] <= keep[i - 1])
      throw DimensionError("partial_trace: keep indices must be ascending");
  }
  std::vector<bool> kept(f.count(), false);
  for (std::size_t k : keep) kept[k] = true;

  std::size_t out_dim = 1;
  for (std::size_t k : keep) out_dim *= f[k];
  ComplexMatrix out(out_dim);

  const std::size_t dim = m.dim();
  std::vector<std::size_t> rd(f.count()), cd(f.count());
  for (std::size_t r = 0; r < dim; ++r) {
    decompose_index(r, f.dims(), rd);
    for (std::size_t c = 0; c < dim; ++c) {
      decompose_index(c, f.dims(), cd);
      bool diagonal = true;
      for (std::size_t i = 0; i < f.count(); ++i)
        if (!kept[i] && rd[i] != cd[i]) {
          diagonal = false;
          break;
        }
      if (!diagonal) continue;
      std::size_t R = 0, C = 0;
      for (std::size_t k : keep) {
        R = R * f[k] + rd[k];
        C = C * f[k] + cd[k];
      }
      out(R, C) += m(r, c);
    }
  }
  return out;
}

ComplexMatrix partial_transpose(const ComplexMatrix &m, const Factorization &f,
                                std::size_t which) {
  f.require_matches(m);
  if (which >= f.count())
    throw DimensionError("partial_transpose: subsystem index out of range");

  const std::size_t dim = m.dim();
  ComplexMatrix out(dim);
  std::vector<std::size_t> rd(f.count()), cd(f.count());
  for (std::size_t r = 0; r < dim; ++r) {
    decompose_index(r, f.dims(), rd);
    for (std::size_t c = 0; c < dim; ++c) {
      decompose_index(c, f.dims(), cd);
      std::swap(rd[which], cd[which]);
      std::size_t R = 0, C = 0;
      for (std::size_t i = 0; i < f.count(); ++i) {
        R = R * f[i] + rd[i];
        C = C * f[i] + cd[i];
      }
      out(R, C) = m(r, c);
      std::swap(rd[which], cd[which]);
    }
  }
  return out;
}

ComplexMatrix partial_transpose_from(const ComplexMatrix &m,
                                     const Factorization &f, std::size_t cut) {
  if (cut > f.count())
    throw DimensionError("partial_transpose_from: cut out of range");
  ComplexMatrix out = m;
  for (std::size_t i = cut; i < f.count(); ++i)
    out = partial_transpose(out, f, i);
  return out;
}

ComplexMatrix permute_subsystems(const ComplexMatrix &m, const Factorization &f,
                                 const std::vector<std::size_t> &perm) {
  f.require_matches(m);
  if (perm.size() != f.count())
    throw DimensionError("permute_subsystems: permutation length mismatch");
  std::vector<bool> seen(f.count(), false);
  for (std::size_t p : perm) {
    if (p >= f.count() || seen[p])
      throw DimensionError("permute_subsystems: not a permutation");
    seen[p] = true;
  }

  std::vector<std::size_t> new_dims(f.count());
  for (std::size_t i = 0; i < f.count(); ++i) new_dims[i] = f[perm[i]];

  const std::size_t dim = m.dim();
  ComplexMatrix out(dim);
  std::vector<std::size_t> rd(f.count()), cd(f.count());
  for (std::size_t r = 0; r < dim; ++r) {
    decompose_index(r, f.dims(), rd);
    for (std::size_t c = 0; c < dim; ++c) {
      decompose_index(c, f.dims(), cd);
      std::size_t R = 0, C = 0;
      for (std::size_t i = 0; i < f.count(); ++i) {
        R = R * new_dims[i] + rd[perm[i]];
        C = C * new_dims[i] + cd[perm[i]];
      }
      out(R, C) = m(r, c);
    }
  }
  return out;
}

EigResult hermitian_eig(const ComplexMatrix &m, double convergence_tol,
                        double hermitian_tol) {
  if (!m.is_hermitian(hermitian_tol))
    throw ContractViolation("hermitian_eig: input is not Hermitian");

  const std::size_t n = m.dim();
  ComplexMatrix a = m;
  // Symmetrize exactly so roundoff in the input cannot drift the iteration.
  for (std::size_t r = 0; r < n; ++r) {
    a(r, r) = Complex(a(r, r).real(), 0.0);
    for (std::size_t c = r + 1; c < n; ++c) {
      const Complex avg = 0.5 * (a(r, c) + std::conj(a(c, r)));
      a(r, c) = avg;
      a(c, r) = std::conj(avg);
    }
  }
  ComplexMatrix v = ComplexMatrix::identity(n);

  const double scale = std::max(1.0, a.frobenius_norm());
  const double target = convergence_tol * scale;
  constexpr int kMaxSweeps = 100;
  int sweep = 0;
  for (; sweep < kMaxSweeps; ++sweep) {
    if (offdiag_norm(a) <= target) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex beta = a(p, q);
        const double beta_abs = std::abs(beta);
        if (beta_abs < 1e-300) {
          a(p, q) = a(q, p) = 0.0;
          continue;
        }
        const double alpha = a(p, p).real();
        const double gamma = a(q, q).real();
        const double tau = (gamma - alpha) / (2.0 * beta_abs);
        const double t =
            (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::hypot(1.0, tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const Complex phase = beta / beta_abs;
        const Complex s = t * c * phase;

        // rows: row_p <- c*row_p - s*row_q ; row_q <- conj(s)*row_p + c*row_q
        for (std::size_t j = 0; j < n; ++j) {
          const Complex rp = a(p, j), rq = a(q, j);
          a(p, j) = c * rp - s * rq;
          a(q, j) = std::conj(s) * rp + c * rq;
        }
        // cols: col_p <- c*col_p - conj(s)*col_q ; col_q <- s*col_p + c*col_q
        for (std::size_t i = 0; i < n; ++i) {
          const Complex cp = a(i, p), cq = a(i, q);
          a(i, p) = c * cp - std::conj(s) * cq;
          a(i, q) = s * cp + c * cq;
          const Complex vp = v(i, p), vq = v(i, q);
          v(i, p) = c * vp - std::conj(s) * vq;
          v(i, q) = s * vp + c * vq;
        }
        a(p, q) = a(q, p) = 0.0;
        a(p, p) = Complex(a(p, p).real(), 0.0);
        a(q, q) = Complex(a(q, q).real(), 0.0);
      }
    }
  }
  if (sweep == kMaxSweeps)
    throw Error("hermitian_eig: Jacobi iteration failed to converge");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return a(x, x).real() < a(y, y).real();
  });

  EigResult result;
  result.values.resize(n);
  result.vectors = ComplexMatrix(n);
  for (std::size_t k = 0; k < n; ++k) {
    result.values[k] = a(order[k], order[k]).real();
    for (std::size_t i = 0; i < n; ++i) result.vectors(i, k) = v(i, order[k]);
  }
  return result;
}

std::vector<double> hermitian_eigenvalues(const ComplexMatrix &m,
                                          double convergence_tol,
                                          double hermitian_tol) {
  return hermitian_eig(m, convergence_tol, hermitian_tol).values;
}

double trace_norm(const ComplexMatrix &m, double hermitian_tol) {
  if (!m.is_hermitian(hermitian_tol))
    throw ContractViolation(
        "trace_norm: only Hermitian matrices are supported");
  const auto evals = hermitian_eigenvalues(m, 1e-12, hermitian_tol);
  double s = 0.0;
  for (double v : evals) s += std::abs(v);
  return s;
}

ComplexMatrix invert(const ComplexMatrix &m, double condition_threshold) {
  const std::size_t n = m.dim();
  if (n == 0) throw DimensionError("invert: empty matrix");

  ComplexMatrix a = m;
  ComplexMatrix inv = ComplexMatrix::identity(n);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    double best = std::abs(a(col, col));
    for (std::size_t r = col + 1; r < n; ++r) {
      const double v = std::abs(a(r, col));
      if (v > best) {
        best = v;
        piv = r;
      }
    }
    if (best < 1e-300)
      throw SingularMatrixError("invert: singular matrix (zero pivot)",
                                std::numeric_limits<double>::infinity());
    if (piv != col) {
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(a(col, j), a(piv, j));
        std::swap(inv(col, j), inv(piv, j));
      }
    }
    const Complex d = a(col, col);
    for (std::size_t j = 0; j < n; ++j) {
      a(col, j) /= d;
      inv(col, j) /= d;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const Complex factor = a(r, col);
      if (factor == Complex{}) continue;
      for (std::size_t j = 0; j < n; ++j) {
        a(r, j) -= factor * a(col, j);
        inv(r, j) -= factor * inv(col, j);
      }
    }
  }

  const double cond = m.one_norm() * inv.one_norm();
  if (cond > condition_threshold)
    throw SingularMatrixError("invert: condition estimate " +
                                  std::to_string(cond) + " above threshold",
                              cond);
  return inv;
}

} // namespace qcn
