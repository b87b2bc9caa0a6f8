#pragma once

#include "dremkit/operators.hpp"

namespace dremkit {

namespace detail {

template <typename Scalar>
Scalar det3(Scalar a, Scalar b, Scalar c, Scalar d, Scalar e, Scalar f, Scalar g, Scalar h, Scalar i) {
  return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g);
}

// Closed-form cofactor adjugates, m <= 4.
template <typename Derived>
typename Derived::PlainObject small_adjugate(const Eigen::MatrixBase<Derived>& M) {
  using Scalar = typename Derived::Scalar;
  const Index m = M.rows();
  typename Derived::PlainObject adj(m, m);
  switch (m) {
    case 1:
      adj(0, 0) = Scalar(1);
      break;
    case 2:
      adj << M(1, 1), -M(0, 1), -M(1, 0), M(0, 0);
      break;
    case 3:
      adj(0, 0) = M(1, 1) * M(2, 2) - M(1, 2) * M(2, 1);
      adj(0, 1) = M(0, 2) * M(2, 1) - M(0, 1) * M(2, 2);
      adj(0, 2) = M(0, 1) * M(1, 2) - M(0, 2) * M(1, 1);
      adj(1, 0) = M(1, 2) * M(2, 0) - M(1, 0) * M(2, 2);
      adj(1, 1) = M(0, 0) * M(2, 2) - M(0, 2) * M(2, 0);
      adj(1, 2) = M(0, 2) * M(1, 0) - M(0, 0) * M(1, 2);
      adj(2, 0) = M(1, 0) * M(2, 1) - M(1, 1) * M(2, 0);
      adj(2, 1) = M(0, 1) * M(2, 0) - M(0, 0) * M(2, 1);
      adj(2, 2) = M(0, 0) * M(1, 1) - M(0, 1) * M(1, 0);
      break;
    case 4:
      for (Index i = 0; i < 4; ++i) {
        for (Index j = 0; j < 4; ++j) {
          // adj(i, j) is the signed minor with row j and column i removed.
          Scalar s[9];
          int n = 0;
          for (Index r = 0; r < 4; ++r) {
            if (r == j) continue;
            for (Index c = 0; c < 4; ++c) {
              if (c == i) continue;
              s[n++] = M(r, c);
            }
          }
          const Scalar minor = det3(s[0], s[1], s[2], s[3], s[4], s[5], s[6], s[7], s[8]);
          adj(i, j) = ((i + j) % 2 == 0) ? minor : -minor;
        }
      }
      break;
    default:
      throw std::logic_error("small_adjugate: m > 4");
  }
  return adj;
}

}  // namespace detail

/// adj(M), satisfying adj(M) M = M adj(M) = det(M) I for any square M,
/// singular or not. Cofactor formulas for m <= 4, Faddeev-LeVerrier
/// recursion above. adj of a 1x1 matrix is [1].
template <typename Derived>
typename Derived::PlainObject adjugate(const Eigen::MatrixBase<Derived>& M) {
  using Plain = typename Derived::PlainObject;
  using Scalar = typename Derived::Scalar;
  const Index m = M.rows();
  if (m != M.cols() || m < 1) throw std::invalid_argument("adjugate: non-empty square matrix required");
  if (m <= 4) return detail::small_adjugate(M);

  // B_k = M B_{k-1} + c_{m-k+1} I,  c_{m-k} = -tr(M B_k) / k,  adj(M) = (-1)^{m+1} B_m.
  const Plain A = M;
  Plain B = Plain::Zero(m, m);
  Scalar coeff(1);
  for (Index k = 1; k <= m; ++k) {
    B = A * B;
    B.diagonal().array() += coeff;
    coeff = -(A * B).trace() / static_cast<Scalar>(k);
  }
  return (m % 2 == 1) ? B : Plain(-B);
}

/// det(M): cofactor expansion along the first row for m <= 4, LU with
/// partial pivoting above.
template <typename Derived>
typename Derived::Scalar determinant(const Eigen::MatrixBase<Derived>& M) {
  using Scalar = typename Derived::Scalar;
  const Index m = M.rows();
  if (m != M.cols() || m < 1) throw std::invalid_argument("determinant: non-empty square matrix required");
  if (m <= 4) {
    if (m == 1) return M(0, 0);
    const auto adj = detail::small_adjugate(M);
    Scalar det(0);
    for (Index j = 0; j < m; ++j) det += M(0, j) * adj(j, 0);
    return det;
  }
  return Eigen::PartialPivLU<typename Derived::PlainObject>(M).determinant();
}

/// d = adj(Phi0) phi, the feedthrough that raises det(Phi0 + d phi^T) by |d|^2.
template <typename DerivedM, typename DerivedV>
typename DerivedV::PlainObject feedforward_gain(const Eigen::MatrixBase<DerivedM>& Phi0,
                                                const Eigen::MatrixBase<DerivedV>& phi) {
  if (Phi0.rows() != phi.size()) throw std::invalid_argument("feedforward_gain: shapes disagree");
  return adjugate(Phi0) * phi;
}

/// Scalar regressions calY_i = Delta * theta_i obtained by mixing.
struct MixedRegression {
  Trajectory calY;   // m-vector samples, adj(Phi) Y
  Trajectory Delta;  // scalar samples, det(Phi)
};

MixedRegression mix(const Trajectory& Y, const Trajectory& Phi);
inline MixedRegression mix(const ExtendedRegression& ext) { return mix(ext.Y, ext.Phi); }

/// Extension through `bank0` (which must have zero feedthrough) followed by
/// the per-sample feedthrough d(t) = adj(Phi0(t)) phi(t):
///   Phi = Phi0 + d phi^T,  Y = Y0 + d y.
ExtendedRegression extend_with_feedforward(const OperatorBank& bank0, const Trajectory& y, const Trajectory& phi,
                                           Warnings* warnings = nullptr);

}  // namespace dremkit
