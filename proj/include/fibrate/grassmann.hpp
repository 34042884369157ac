#pragma once

#include "fibrate/bivector.hpp"

namespace fibrate {

/// Distance between oriented planes measured through their area forms. This
/// is the plane-equality metric: two planes coincide with equal orientation
/// iff their area forms coincide, regardless of the stored basis pairs.
inline double plane_distance(const OrientedPlane& p, const OrientedPlane& q) {
    return (area_form(p) - area_form(q)).norm();
}

inline bool same_plane(const OrientedPlane& p, const OrientedPlane& q, double tol = 1e-8) {
    return plane_distance(p, q) < tol;
}

/// Orthogonal complement in R^4, oriented so the concatenated basis
/// (p1, p2, p3, p4) is positively oriented.
inline OrientedPlane orthogonal_complement(const OrientedPlane& p) {
    if (p.dim() != 4)
        throw std::invalid_argument("orthogonal_complement: plane must live in R^4");
    Matrix rows(2, 4);
    rows.row(0) = p.u.transpose();
    rows.row(1) = p.v.transpose();
    const KernelResult null_space = kernel(rows);
    Vector w1 = null_space.basis.col(0);
    Vector w2 = null_space.basis.col(1);
    Matrix full(4, 4);
    full.col(0) = p.u;
    full.col(1) = p.v;
    full.col(2) = w1;
    full.col(3) = w2;
    if (full.determinant() < 0.0) w2 = -w2;
    return OrientedPlane{w1, w2};
}

namespace detail {
inline double vector_angle(const Eigen::Matrix<double, 6, 1>& a,
                           const Eigen::Matrix<double, 6, 1>& b) {
    const Eigen::Matrix<double, 6, 1> an = a.normalized();
    const Eigen::Matrix<double, 6, 1> bn = b.normalized();
    return 2.0 * std::atan2((an - bn).norm(), (an + bn).norm());
}
}  // namespace detail

struct DualAngles {
    double minus;  // angle between the anti-self-dual components, in [0, pi]
    double plus;   // angle between the self-dual components
};

/// Angles between the dual components of the two area forms.
inline DualAngles dual_angles(const OrientedPlane& p, const OrientedPlane& q) {
    const DualParts dp = dual_split(area_form(p));
    const DualParts dq = dual_split(area_form(q));
    return DualAngles{
        detail::vector_angle(to_vec6(dp.anti_self_dual), to_vec6(dq.anti_self_dual)),
        detail::vector_angle(to_vec6(dp.self_dual), to_vec6(dq.self_dual))};
}

/// Two planes in R^4 share a nonzero vector iff <w_P, *w_Q> vanishes.
inline bool intersects(const OrientedPlane& p, const OrientedPlane& q, double tol) {
    return std::abs(inner(area_form(p), hodge_star(area_form(q)))) < tol;
}

enum class Side { minus, plus };

inline Side opposite(Side s) { return s == Side::minus ? Side::plus : Side::minus; }

/// The anchored embedding of p-perp into a dual eigenspace: u maps to the
/// chosen dual component of p ^ u. Linear in u, with norm |u| / sqrt(2).
inline Bivector dual_embed(const Vector& p, const Vector& u, Side side) {
    if (std::abs(p.dot(u)) >= 1e-10 * std::max(1.0, u.norm()))
        throw NotOrthogonal("dual_embed: u is not orthogonal to p (dot " +
                            std::to_string(p.dot(u)) + ")");
    const Bivector w = wedge(p, u);
    return side == Side::minus ? anti_self_dual_part(w) : self_dual_part(w);
}

/// Matrix of u -> dual component of p ^ u on all of R^4 (kernel span(p)).
inline Eigen::Matrix<double, 6, 4> dual_embed_matrix(const Vector& p, Side side) {
    Eigen::Matrix<double, 6, 4> m;
    for (int j = 0; j < 4; ++j) {
        const Bivector w = wedge(p, Vector(Vector::Unit(4, j)));
        const Bivector component =
            side == Side::minus ? anti_self_dual_part(w) : self_dual_part(w);
        m.col(j) = to_vec6(component);
    }
    return m;
}

/// Preimage of a dual eigenspace element under the anchored embedding. The
/// embedding restricted to p-perp is a rescaled isometry, so the least-squares
/// solution is 2 M^T a; a residual above 1e-8 means a has no preimage.
inline Vector dual_embed_inverse(const Vector& p, const Bivector& a, Side side) {
    const Eigen::Matrix<double, 6, 4> m = dual_embed_matrix(p, side);
    const Eigen::Matrix<double, 6, 1> av = to_vec6(a);
    Vector x = 2.0 * (m.transpose() * av);
    const double residual = (m * x - av).norm();
    if (residual > 1e-8)
        throw OffSphere("dual_embed_inverse: residual " + std::to_string(residual));
    x -= p.dot(x) * p;
    return x;
}

}  // namespace fibrate
