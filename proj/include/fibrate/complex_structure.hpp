#pragma once

#include "fibrate/grassmann.hpp"

#include <vector>

namespace fibrate {

/// An orthogonal complex structure on R^{2n}: a matrix that squares to -id
/// and is simultaneously skew-symmetric and orthogonal (any two of the three
/// properties imply the third; validation checks all redundantly).
class ComplexStructure {
public:
    static ComplexStructure validate(Matrix j, double tol = 1e-10) {
        if (j.rows() != j.cols())
            throw NotComplexStructure("matrix not square", 0.0);
        if (j.rows() % 2 != 0 || j.rows() == 0)
            throw NotComplexStructure("dimension not even and positive", 0.0);
        const Matrix id = Matrix::Identity(j.rows(), j.cols());
        const double square_residual = (j * j + id).cwiseAbs().maxCoeff();
        const double skew_residual = (j + j.transpose()).cwiseAbs().maxCoeff();
        const double orthogonal_residual = (j * j.transpose() - id).cwiseAbs().maxCoeff();
        if (square_residual >= tol)
            throw NotComplexStructure("J^2 + id != 0", square_residual);
        if (skew_residual >= tol)
            throw NotComplexStructure("J + J^T != 0", skew_residual);
        if (orthogonal_residual >= tol)
            throw NotComplexStructure("J J^T - id != 0", orthogonal_residual);
        return ComplexStructure(std::move(j));
    }

    const Matrix& matrix() const { return j_; }
    Eigen::Index dim() const { return j_.rows(); }
    Eigen::Index pairs() const { return j_.rows() / 2; }  // the n of R^{2n}

    Vector apply(const Vector& x) const { return j_ * x; }

private:
    explicit ComplexStructure(Matrix j) : j_(std::move(j)) {}
    Matrix j_;
};

/// Multiplication by i on C^n viewed as R^{2n}: block diagonal rotations.
inline ComplexStructure standard_complex_structure(Eigen::Index n) {
    if (n < 1) throw std::invalid_argument("standard_complex_structure: n must be positive");
    Matrix j = Matrix::Zero(2 * n, 2 * n);
    for (Eigen::Index k = 0; k < n; ++k) {
        j(2 * k, 2 * k + 1) = -1.0;
        j(2 * k + 1, 2 * k) = 1.0;
    }
    return ComplexStructure::validate(std::move(j));
}

inline void require_orthogonal(const Matrix& t, double tol = 1e-10) {
    if (t.rows() != t.cols()) throw NotOrthogonal("matrix not square");
    const double residual =
        (t * t.transpose() - Matrix::Identity(t.rows(), t.cols())).cwiseAbs().maxCoeff();
    if (residual >= tol)
        throw NotOrthogonal("T T^T - id residual " + std::to_string(residual));
}

inline ComplexStructure conjugate(const ComplexStructure& j, const Matrix& t) {
    require_orthogonal(t);
    return ComplexStructure::validate(t * j.matrix() * t.transpose());
}

/// Splits R^{2n} into n mutually orthogonal invariant planes span(v, Jv).
/// Seeds are the standard basis vectors, taken in order, so the output is
/// deterministic.
inline std::vector<OrientedPlane> invariant_planes(const ComplexStructure& j) {
    const Eigen::Index d = j.dim();
    std::vector<Vector> accumulated;
    std::vector<OrientedPlane> planes;
    accumulated.reserve(d);
    while (static_cast<Eigen::Index>(accumulated.size()) < d) {
        Vector v;
        bool found = false;
        for (Eigen::Index i = 0; i < d; ++i) {
            Vector r = project_out(Vector(Vector::Unit(d, i)), accumulated);
            if (r.norm() > 1e-6) {
                v = r / r.norm();
                found = true;
                break;
            }
        }
        if (!found) throw Error("invariant_planes: no independent seed vector");
        Vector w = project_out(j.apply(v), accumulated);
        w -= v.dot(w) * v;
        w.normalize();
        accumulated.push_back(v);
        accumulated.push_back(w);
        planes.push_back(OrientedPlane{v, w});
    }
    return planes;
}

/// Sign of det [v1 Jv1 ... vn Jvn] assembled from invariant plane
/// representatives; independent of the choices made.
inline int structure_sign(const ComplexStructure& j) {
    const auto planes = invariant_planes(j);
    const Eigen::Index d = j.dim();
    Matrix q(d, d);
    for (Eigen::Index k = 0; k < j.pairs(); ++k) {
        q.col(2 * k) = planes[static_cast<std::size_t>(k)].u;
        q.col(2 * k + 1) = j.apply(planes[static_cast<std::size_t>(k)].u);
    }
    const int s = det_sign(q);
    if (s == 0) throw AmbiguousSign("structure_sign: determinant numerically zero");
    return s;
}

/// Orthogonal conjugate of the standard structure with the requested sign.
inline ComplexStructure random_complex_structure(Eigen::Index n, int want_sign,
                                                 std::uint64_t seed) {
    const Matrix t = random_orthogonal(2 * n, want_sign, seed);
    return conjugate(standard_complex_structure(n), t);
}

/// Orthogonal T with T^T J T equal to the standard structure. Its determinant
/// sign equals the sign of J.
inline Matrix conjugator_to_standard(const ComplexStructure& j) {
    const auto planes = invariant_planes(j);
    const Eigen::Index d = j.dim();
    Matrix t(d, d);
    for (Eigen::Index k = 0; k < j.pairs(); ++k) {
        t.col(2 * k) = planes[static_cast<std::size_t>(k)].u;
        t.col(2 * k + 1) = planes[static_cast<std::size_t>(k)].v;
    }
    return t;
}

/// The invariant plane span(p, Jp) through a unit vector; for a Hopf
/// fibration this is the plane of the fiber through p.
inline OrientedPlane fiber_plane(const ComplexStructure& j, const Vector& p) {
    if (std::abs(p.norm() - 1.0) > 1e-10)
        throw std::invalid_argument("fiber_plane: p must be a unit vector");
    return OrientedPlane{p, j.apply(p)};
}

enum class AgreementMode { difference, sum };

/// Kernel of J - K or J + K. Nonzero vectors of the difference kernel lie on
/// fibers shared by the two corresponding fibrations. The kernel is certified
/// J-invariant (which forces even dimension) before it is returned.
inline KernelResult agreement_space(const ComplexStructure& j, const ComplexStructure& k,
                                    AgreementMode mode) {
    if (j.dim() != k.dim())
        throw std::invalid_argument("agreement_space: dimension mismatch");
    const Matrix m =
        mode == AgreementMode::difference ? Matrix(j.matrix() - k.matrix())
                                          : Matrix(j.matrix() + k.matrix());
    KernelResult result = kernel(m);
    if (result.dimension % 2 != 0)
        throw AmbiguousRank("agreement_space: odd kernel dimension " +
                            std::to_string(result.dimension));
    if (result.dimension > 0) {
        const Matrix projector = result.basis * result.basis.transpose();
        const Matrix id = Matrix::Identity(j.dim(), j.dim());
        const double invariance =
            ((id - projector) * j.matrix() * projector).cwiseAbs().maxCoeff();
        if (invariance > 1e-8)
            throw AmbiguousRank("agreement_space: kernel invariance residual " +
                                std::to_string(invariance));
    }
    return result;
}

// ---------------------------------------------------------------------------
// Paired bases
// ---------------------------------------------------------------------------

/// Orthonormal bases E and F with e1 = f1 = p, J standard in E, K standard in
/// F, and a change-of-basis matrix made of a leading 1, n-1 rotation blocks
/// and a corner sign that records whether the two structures have equal sign.
struct PairedBases {
    Matrix e;  // columns e_1 .. e_2n
    Matrix f;  // columns f_1 .. f_2n
    Matrix q;  // f_j = sum_i q(i,j) e_i
    std::vector<std::array<double, 2>> angles;  // (c_k, s_k), k = 1 .. n-1
    int corner = 1;
};

/// Inductive construction: each step extends both bases by the images under J
/// and K, then (until the last step) picks e_{2k+1} from the component of
/// f_{2k} orthogonal to e_{2k}, falling back to a fresh standard basis vector
/// when the two are parallel. Every appended vector is re-orthonormalized
/// against its own basis to suppress drift.
inline PairedBases paired_bases(const ComplexStructure& j, const ComplexStructure& k,
                                const Vector& p) {
    if (j.dim() != k.dim())
        throw std::invalid_argument("paired_bases: dimension mismatch");
    if (p.size() != j.dim() || std::abs(p.norm() - 1.0) > 1e-10)
        throw std::invalid_argument("paired_bases: p must be a unit vector in R^{2n}");

    const Eigen::Index n = j.pairs();
    const Eigen::Index d = j.dim();
    std::vector<Vector> e{p}, f{p};
    std::vector<std::array<double, 2>> angles;
    int corner = 1;

    auto append_clean = [](std::vector<Vector>& list, Vector x) {
        x = project_out(std::move(x), list);
        x.normalize();
        list.push_back(x);
        return list.back();
    };

    for (Eigen::Index step = 1; step <= n; ++step) {
        const Vector e2k = append_clean(e, j.apply(e[e.size() - 1]));
        const Vector f2k = append_clean(f, k.apply(f[f.size() - 1]));

        if (step == n) {
            corner = f2k.dot(e2k) >= 0.0 ? 1 : -1;
            break;
        }

        Vector r = f2k - f2k.dot(e2k) * e2k;
        r = project_out(std::move(r), e);
        Vector e2k1;
        if (r.norm() < 1e-8) {
            // f_2k is parallel to e_2k; any unit vector orthogonal to the
            // current span works, the first available basis vector keeps it
            // deterministic
            bool found = false;
            for (Eigen::Index i = 0; i < d && !found; ++i) {
                Vector cand = project_out(Vector(Vector::Unit(d, i)), e);
                if (cand.norm() > 1e-6) {
                    e2k1 = cand / cand.norm();
                    found = true;
                }
            }
            if (!found) throw Error("paired_bases: no orthogonal extension found");
        } else {
            e2k1 = r / r.norm();
        }
        e.push_back(e2k1);

        const double c = std::clamp(f2k.dot(e2k), -1.0, 1.0);
        const double s = f2k.dot(e2k1);
        angles.push_back({c, s});
        append_clean(f, Vector(-s * e2k + c * e2k1));
    }

    PairedBases out;
    out.e = Matrix(d, d);
    out.f = Matrix(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
        out.e.col(i) = e[static_cast<std::size_t>(i)];
        out.f.col(i) = f[static_cast<std::size_t>(i)];
    }
    out.q = out.e.transpose() * out.f;
    out.angles = std::move(angles);
    out.corner = corner;
    return out;
}

/// The expected sparsity pattern of the paired-bases change of basis: the
/// largest entry outside the leading 1, the rotation blocks and the corner.
inline double paired_bases_pattern_residual(const PairedBases& pb) {
    const Eigen::Index d = pb.q.rows();
    Matrix expected = Matrix::Zero(d, d);
    expected(0, 0) = 1.0;
    for (std::size_t k = 0; k < pb.angles.size(); ++k) {
        const Eigen::Index r = 1 + 2 * static_cast<Eigen::Index>(k);
        expected(r, r) = pb.angles[k][0];
        expected(r + 1, r) = pb.angles[k][1];
        expected(r, r + 1) = -pb.angles[k][1];
        expected(r + 1, r + 1) = pb.angles[k][0];
    }
    expected(d - 1, d - 1) = static_cast<double>(pb.corner);
    return (pb.q - expected).cwiseAbs().maxCoeff();
}

}  // namespace fibrate
