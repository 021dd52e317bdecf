#pragma once

#include <cmath>

#include "gad/types.hpp"

namespace gad {

/// Weighted inner product sum_i w_i u_i z_i over arbitrary Eigen
/// expressions. Sizes must agree; checked by the ProblemSpec overload.
/// Compensated (FMA product splits + Neumaier sums), so the result stays
/// accurate to a few ulps of the exact value even under heavy cancellation;
/// pair renormalization depends on that.
template <class DerivedU, class DerivedZ, class DerivedW>
typename DerivedU::Scalar weighted_inner(const Eigen::MatrixBase<DerivedU>& u,
                                         const Eigen::MatrixBase<DerivedZ>& z,
                                         const Eigen::MatrixBase<DerivedW>& w) {
  using S = typename DerivedU::Scalar;
  S sum = S(0);
  S comp = S(0);
  for (Index k = 0; k < u.size(); ++k) {
    const S a = u.coeff(k);
    const S b = z.coeff(k);
    const S c = w.coeff(k);
    const S ab = a * b;
    const S ab_err = std::fma(a, b, -ab);
    const S term = ab * c;
    const S term_err = std::fma(ab, c, -term) + ab_err * c;
    const S t = sum + term;
    comp += (std::abs(sum) >= std::abs(term) ? (sum - t) + term
                                             : (term - t) + sum) +
            term_err;
    sum = t;
  }
  return sum + comp;
}

/// Inner product in the problem metric. Throws DimensionError when either
/// argument does not have length problem.dim.
Scalar inner_product(const ProblemSpec& problem, const Vector& u, const Vector& z);

/// sqrt((u, u)) in the problem metric.
Scalar metric_norm(const ProblemSpec& problem, const Vector& u);

/// Componentwise max-magnitude norm (metric independent).
inline Scalar norm_inf(const Vector& u) {
  return u.size() == 0 ? 0.0 : u.cwiseAbs().maxCoeff();
}

/// Rescales a pair so that (v,v) = 1 and (w,v) = 1 in the problem metric:
/// v' = v / sqrt((v,v)), then w' = w / (w,v'). Idempotent. Throws
/// DegenerateDualityError when v is (near) zero or |(w,v')| < duality_tol.
DirectionPair normalize_pair(const ProblemSpec& problem, DirectionPair pair,
                             double duality_tol = 1e-10);

}  // namespace gad
