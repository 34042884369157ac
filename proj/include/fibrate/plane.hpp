#pragma once

#include "fibrate/linalg.hpp"

namespace fibrate {

/// An oriented 2-plane through the origin, stored as an ordered orthonormal
/// pair. The same type carries planes in R^4 and fiber planes in R^{2n}.
struct OrientedPlane {
    Vector u;
    Vector v;

    Eigen::Index dim() const { return u.size(); }

    /// Residual of x against the plane (zero iff x lies in the span).
    double containment_residual(const Vector& x) const {
        return (x - u.dot(x) * u - v.dot(x) * v).norm();
    }
};

/// Span of two independent vectors with the orientation they induce: the
/// change of basis from (u, v) to the stored pair has positive determinant.
inline OrientedPlane plane(const Vector& u, const Vector& v, double tol = 1e-10) {
    auto basis = orthonormalize({u, v}, tol, true);
    return OrientedPlane{basis[0], basis[1]};
}

}  // namespace fibrate
