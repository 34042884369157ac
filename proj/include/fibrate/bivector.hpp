#pragma once

#include "fibrate/plane.hpp"

#include <array>
#include <cmath>
#include <utility>

namespace fibrate {

// Index pairs of the lexicographic basis of alternating bilinear maps on R^4:
// (1,2), (1,3), (1,4), (2,3), (2,4), (3,4) in zero-based form.
inline constexpr std::array<std::pair<int, int>, 6> kBivectorIndex = {
    {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

/// Element of the 6-dimensional space of alternating bilinear maps on R^4,
/// stored by its coordinates in the lexicographic basis.
struct Bivector {
    std::array<double, 6> coords{};

    double& operator[](std::size_t i) { return coords[i]; }
    double operator[](std::size_t i) const { return coords[i]; }

    Bivector& operator+=(const Bivector& o) {
        for (std::size_t i = 0; i < 6; ++i) coords[i] += o.coords[i];
        return *this;
    }
    Bivector& operator-=(const Bivector& o) {
        for (std::size_t i = 0; i < 6; ++i) coords[i] -= o.coords[i];
        return *this;
    }
    Bivector& operator*=(double s) {
        for (double& c : coords) c *= s;
        return *this;
    }

    friend Bivector operator+(Bivector a, const Bivector& b) { return a += b; }
    friend Bivector operator-(Bivector a, const Bivector& b) { return a -= b; }
    friend Bivector operator*(Bivector a, double s) { return a *= s; }
    friend Bivector operator*(double s, Bivector a) { return a *= s; }
    friend Bivector operator/(Bivector a, double s) { return a *= 1.0 / s; }
    friend Bivector operator-(Bivector a) { return a *= -1.0; }

    double norm() const {
        double s = 0.0;
        for (double c : coords) s += c * c;
        return std::sqrt(s);
    }

    bool all_finite() const {
        for (double c : coords) {
            if (!std::isfinite(c)) return false;
        }
        return true;
    }
};

inline Eigen::Matrix<double, 6, 1> to_vec6(const Bivector& a) {
    Eigen::Matrix<double, 6, 1> v;
    for (int i = 0; i < 6; ++i) v(i) = a[static_cast<std::size_t>(i)];
    return v;
}

inline Bivector from_vec6(const Eigen::Matrix<double, 6, 1>& v) {
    Bivector a;
    for (int i = 0; i < 6; ++i) a[static_cast<std::size_t>(i)] = v(i);
    return a;
}

inline double inner(const Bivector& a, const Bivector& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < 6; ++i) s += a[i] * b[i];
    return s;
}

/// Wedge product of two vectors in R^4: coordinate (i,j) is the 2x2 minor
/// x_i y_j - x_j y_i, the signed area of the projected parallelogram.
inline Bivector wedge(const Vector& x, const Vector& y) {
    if (x.size() != 4 || y.size() != 4)
        throw std::invalid_argument("wedge: vectors must live in R^4");
    Bivector a;
    for (std::size_t k = 0; k < 6; ++k) {
        const auto [i, j] = kBivectorIndex[k];
        a[k] = x(i) * y(j) - x(j) * y(i);
    }
    return a;
}

/// The unit decomposable bivector attached to an oriented plane in R^4.
inline Bivector area_form(const OrientedPlane& p) {
    return wedge(p.u, p.v);
}

/// Hodge star in coordinates: e12 <-> e34, e13 <-> -e24, e14 <-> e23.
inline Bivector hodge_star(const Bivector& a) {
    return Bivector{{a[5], -a[4], a[3], a[2], -a[1], a[0]}};
}

/// Coefficient of the volume form in a ^ b.
inline double wedge_volume(const Bivector& a, const Bivector& b) {
    return a[0] * b[5] - a[1] * b[4] + a[2] * b[3] + a[3] * b[2] - a[4] * b[1] + a[5] * b[0];
}

struct DualParts {
    Bivector anti_self_dual;  // the -1 eigencomponent of the Hodge star
    Bivector self_dual;       // the +1 eigencomponent
};

inline DualParts dual_split(const Bivector& a) {
    const Bivector s = hodge_star(a);
    return DualParts{(a - s) * 0.5, (a + s) * 0.5};
}

inline Bivector anti_self_dual_part(const Bivector& a) { return (a - hodge_star(a)) * 0.5; }
inline Bivector self_dual_part(const Bivector& a) { return (a + hodge_star(a)) * 0.5; }

/// A nonzero bivector is decomposable (a wedge of two vectors, equivalently a
/// scalar multiple of some area form) exactly when <a, *a> vanishes.
inline bool is_decomposable(const Bivector& a, double tol) {
    const double n = a.norm();
    return n > tol && std::abs(inner(a, hodge_star(a))) < tol * n * n;
}

/// The skew matrix A with A(i,j) = a(e_i, e_j).
inline Matrix skew_matrix_of(const Bivector& a) {
    Matrix m = Matrix::Zero(4, 4);
    for (std::size_t k = 0; k < 6; ++k) {
        const auto [i, j] = kBivectorIndex[k];
        m(i, j) = a[k];
        m(j, i) = -a[k];
    }
    return m;
}

inline Bivector bivector_of_skew(const Matrix& m) {
    Bivector a;
    for (std::size_t k = 0; k < 6; ++k) {
        const auto [i, j] = kBivectorIndex[k];
        a[k] = m(i, j);
    }
    return a;
}

/// Inverse of the area-form map on its image: recovers an oriented plane from
/// a unit decomposable bivector. The returned orthonormal pair is one
/// arbitrary representative; only the plane and its orientation are pinned.
inline OrientedPlane plane_of_area_form(const Bivector& a) {
    if (std::abs(a.norm() - 1.0) > 1e-8)
        throw NotUnitNorm("plane_of_area_form: norm " + std::to_string(a.norm()));
    if (!is_decomposable(a, 1e-8))
        throw NotDecomposable("plane_of_area_form: <a, *a> = " +
                              std::to_string(inner(a, hodge_star(a))));
    Eigen::JacobiSVD<Matrix> svd(skew_matrix_of(a), Eigen::ComputeFullU);
    Vector u = svd.matrixU().col(0);
    Vector v = svd.matrixU().col(1);
    if (inner(wedge(u, v), a) < 0.0) v = -v;
    return OrientedPlane{u, v};
}

// ---------------------------------------------------------------------------
// Darboux normal form
// ---------------------------------------------------------------------------

struct DarbouxForm {
    double a = 0.0;
    OrientedPlane p;
    double b = 0.0;
    OrientedPlane q;
};

/// Writes alpha = a * area_form(P) + b * area_form(Q) with P, Q intersecting
/// trivially. Built from the dual split: both rescaled dual components have
/// norm 1/sqrt(2), so their sum and difference are unit decomposable forms
/// whose planes satisfy <w_P, *w_Q> = 1. Degenerate components fall back to
/// fixed representatives; the decomposition is not unique there.
inline DarbouxForm darboux_decompose(const Bivector& alpha) {
    const auto parts = dual_split(alpha);
    const double nm = parts.anti_self_dual.norm();
    const double np = parts.self_dual.norm();
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);

    const Bivector minus_hat = nm > 1e-154
                                   ? parts.anti_self_dual * (inv_sqrt2 / nm)
                                   : Bivector{{0.5, 0, 0, 0, 0, -0.5}};
    const Bivector plus_hat = np > 1e-154
                                  ? parts.self_dual * (inv_sqrt2 / np)
                                  : Bivector{{0.5, 0, 0, 0, 0, 0.5}};

    DarbouxForm form;
    form.a = (std::sqrt(2.0) * nm + std::sqrt(2.0) * np) / 2.0;
    form.b = (std::sqrt(2.0) * np - std::sqrt(2.0) * nm) / 2.0;
    form.p = plane_of_area_form(minus_hat + plus_hat);
    form.q = plane_of_area_form(plus_hat - minus_hat);
    return form;
}

// ---------------------------------------------------------------------------
// Skew normal form by congruence
// ---------------------------------------------------------------------------

enum class SkewForm { B0, B1, B2 };

inline Matrix canonical_skew_matrix(SkewForm form) {
    Matrix b = Matrix::Zero(4, 4);
    const int blocks = form == SkewForm::B0 ? 0 : form == SkewForm::B1 ? 1 : 2;
    for (int k = 0; k < blocks; ++k) {
        b(2 * k, 2 * k + 1) = 1.0;
        b(2 * k + 1, 2 * k) = -1.0;
    }
    return b;
}

struct SkewReduction {
    Matrix q;       // invertible; q^T A q equals the canonical form
    SkewForm form;  // zero, one, or two unit symplectic blocks
};

/// Congruence reduction of a 4x4 skew-symmetric matrix to B0/B1/B2. Each step
/// picks the largest off-diagonal pivot, permutes it into the leading block,
/// rescales the block to the unit symplectic form and eliminates its row and
/// column pair; the accumulated column operations form q.
inline SkewReduction skew_normal_form(const Matrix& a) {
    if (a.rows() != 4 || a.cols() != 4)
        throw std::invalid_argument("skew_normal_form: expected a 4x4 matrix");
    if ((a + a.transpose()).cwiseAbs().maxCoeff() > 1e-12)
        throw NotSkew("skew_normal_form: A + A^T residual " +
                      std::to_string((a + a.transpose()).cwiseAbs().maxCoeff()));

    Matrix w = a;
    Matrix q = Matrix::Identity(4, 4);
    const double pivot_floor = 1e-12 * std::max(1.0, a.cwiseAbs().maxCoeff());
    int blocks = 0;

    for (int bs = 0; bs < 4; bs += 2) {
        // largest off-diagonal pivot in the trailing submatrix
        int pi = -1, pj = -1;
        double best = 0.0;
        for (int i = bs; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j)
                if (std::abs(w(i, j)) > best) {
                    best = std::abs(w(i, j));
                    pi = i;
                    pj = j;
                }
        if (best < pivot_floor) break;

        auto congruence_swap = [&](int r, int s) {
            if (r == s) return;
            w.col(r).swap(w.col(s));
            w.row(r).swap(w.row(s));
            q.col(r).swap(q.col(s));
        };
        congruence_swap(pi, bs);
        if (pj == bs) pj = pi;
        congruence_swap(pj, bs + 1);

        const double p = w(bs, bs + 1);
        w.col(bs + 1) /= p;
        w.row(bs + 1) /= p;
        q.col(bs + 1) /= p;

        for (int k = bs + 2; k < 4; ++k) {
            const double x = w(bs + 1, k);
            const double y = -w(bs, k);
            w.col(k) += x * w.col(bs) + y * w.col(bs + 1);
            w.row(k) += x * w.row(bs) + y * w.row(bs + 1);
            q.col(k) += x * q.col(bs) + y * q.col(bs + 1);
        }
        ++blocks;
    }

    const SkewForm form = blocks == 0 ? SkewForm::B0 : blocks == 1 ? SkewForm::B1 : SkewForm::B2;
    return SkewReduction{q, form};
}

}  // namespace fibrate
