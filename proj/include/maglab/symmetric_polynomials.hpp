#pragma once

#include <Eigen/Core>

namespace maglab {

/// e_0..e_N of the entries of a, by the product recurrence
/// e_k <- e_k + a_n e_{k-1}, updated in descending k.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> elementary_symmetric(const Eigen::MatrixBase<Derived>& a) {
    using Scalar = typename Derived::Scalar;
    const Eigen::Index n = a.size();
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> e = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(n + 1);
    e(0) = Scalar(1);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index k = i + 1; k >= 1; --k) e(k) += a(i) * e(k - 1);
    return e;
}

/// e_k(a) / k! for k = 0..N. Same recurrence on f_k = e_k / k!, i.e.
/// f_k <- f_k + a_n f_{k-1} / k, so no factorial is ever formed.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> elementary_symmetric_over_factorial(
    const Eigen::MatrixBase<Derived>& a) {
    using Scalar = typename Derived::Scalar;
    const Eigen::Index n = a.size();
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> f = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(n + 1);
    f(0) = Scalar(1);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index k = i + 1; k >= 1; --k) f(k) += a(i) * f(k - 1) / Scalar(k);
    return f;
}

} // namespace maglab
