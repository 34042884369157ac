#pragma once

#include "fibrate/complex_structure.hpp"
#include "fibrate/report.hpp"

namespace fibrate {

// Left multiplication by i, j, k on the quaternions viewed as R^4.
inline Matrix left_quaternion_i() {
    Matrix m(4, 4);
    m << 0, -1, 0, 0,
         1,  0, 0, 0,
         0,  0, 0, -1,
         0,  0, 1,  0;
    return m;
}

inline Matrix left_quaternion_j() {
    Matrix m(4, 4);
    m << 0,  0, -1, 0,
         0,  0,  0, 1,
         1,  0,  0, 0,
         0, -1,  0, 0;
    return m;
}

inline Matrix left_quaternion_k() {
    Matrix m(4, 4);
    m << 0, 0,  0, -1,
         0, 0, -1,  0,
         0, 1,  0,  0,
         1, 0,  0,  0;
    return m;
}

/// An orthogonal quaternionic structure on R^{4n}: a triple of orthogonal
/// complex structures with I J K = -id.
class QuatStructure {
public:
    static QuatStructure validate(const Matrix& i, const Matrix& j, const Matrix& k,
                                  double tol = 1e-10) {
        if (i.rows() != j.rows() || j.rows() != k.rows() || i.cols() != i.rows() ||
            j.cols() != j.rows() || k.cols() != k.rows())
            throw NotQuaternionic("factors must be square matrices of equal size", 0.0);
        if (i.rows() % 4 != 0 || i.rows() == 0)
            throw NotQuaternionic("dimension must be a positive multiple of 4", 0.0);

        ComplexStructure ci = validate_factor(i, "I", tol);
        ComplexStructure cj = validate_factor(j, "J", tol);
        ComplexStructure ck = validate_factor(k, "K", tol);

        const Matrix id = Matrix::Identity(i.rows(), i.rows());
        const double triple = (i * j * k + id).cwiseAbs().maxCoeff();
        if (triple >= tol) throw NotQuaternionic("I J K + id != 0", triple);
        const double product = (i * j - k).cwiseAbs().maxCoeff();
        if (product >= tol) throw NotQuaternionic("I J - K != 0", product);

        QuatStructure q(std::move(ci), std::move(cj), std::move(ck));
        q.spot_check_orthogonality(tol);
        return q;
    }

    const ComplexStructure& i() const { return i_; }
    const ComplexStructure& j() const { return j_; }
    const ComplexStructure& k() const { return k_; }
    Eigen::Index dim() const { return i_.dim(); }
    Eigen::Index quads() const { return dim() / 4; }  // the n of R^{4n}

private:
    QuatStructure(ComplexStructure i, ComplexStructure j, ComplexStructure k)
        : i_(std::move(i)), j_(std::move(j)), k_(std::move(k)) {}

    static ComplexStructure validate_factor(const Matrix& m, const std::string& name,
                                            double tol) {
        try {
            return ComplexStructure::validate(m, tol);
        } catch (const NotComplexStructure& e) {
            throw NotQuaternionic(name + " is " + e.what(), e.residual());
        }
    }

    void spot_check_orthogonality(double tol) const {
        auto rng = make_rng(0x5eed);
        for (int trial = 0; trial < 10; ++trial) {
            const Vector p = random_unit_vector(dim(), rng);
            Matrix frame(dim(), 4);
            frame.col(0) = p;
            frame.col(1) = i_.apply(p);
            frame.col(2) = j_.apply(p);
            frame.col(3) = k_.apply(p);
            const Matrix gram = frame.transpose() * frame - Matrix::Identity(4, 4);
            const double residual = gram.cwiseAbs().maxCoeff();
            if (residual > 10.0 * tol * static_cast<double>(dim()))
                throw NotQuaternionic("frame (p, Ip, Jp, Kp) not orthonormal", residual);
        }
    }

    ComplexStructure i_, j_, k_;
};

/// Blockwise left multiplication by i, j, k on H^n viewed as R^{4n}.
inline QuatStructure standard_quaternionic(Eigen::Index n) {
    if (n < 1) throw std::invalid_argument("standard_quaternionic: n must be positive");
    Matrix i = Matrix::Zero(4 * n, 4 * n);
    Matrix j = Matrix::Zero(4 * n, 4 * n);
    Matrix k = Matrix::Zero(4 * n, 4 * n);
    for (Eigen::Index b = 0; b < n; ++b) {
        i.block(4 * b, 4 * b, 4, 4) = left_quaternion_i();
        j.block(4 * b, 4 * b, 4, 4) = left_quaternion_j();
        k.block(4 * b, 4 * b, 4, 4) = left_quaternion_k();
    }
    return QuatStructure::validate(i, j, k);
}

inline QuatStructure conjugate(const QuatStructure& q, const Matrix& t) {
    require_orthogonal(t);
    return QuatStructure::validate(t * q.i().matrix() * t.transpose(),
                                   t * q.j().matrix() * t.transpose(),
                                   t * q.k().matrix() * t.transpose());
}

/// Sign of det [v Iv Jv Kv ...] over a greedy invariant 4-plane
/// decomposition; agrees with the signs of I, J, K as complex structures.
inline int quaternionic_sign(const QuatStructure& q) {
    const Eigen::Index d = q.dim();
    std::vector<Vector> accumulated;
    Matrix assembly(d, d);
    Eigen::Index col = 0;
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
        if (!found) throw AmbiguousSign("quaternionic_sign: no independent seed vector");
        const Vector iv = q.i().apply(v);
        const Vector jv = q.j().apply(v);
        const Vector kv = q.k().apply(v);
        assembly.col(col++) = v;
        assembly.col(col++) = iv;
        assembly.col(col++) = jv;
        assembly.col(col++) = kv;
        for (const Vector& w : {v, iv, jv, kv}) {
            Vector c = project_out(w, accumulated);
            c.normalize();
            accumulated.push_back(c);
        }
    }
    const int s = det_sign(assembly);
    if (s == 0) throw AmbiguousSign("quaternionic_sign: determinant numerically zero");
    return s;
}

/// An oriented 4-dimensional subspace given by an ordered orthonormal frame.
struct Plane4 {
    Matrix basis;  // 4n x 4, columns ordered

    Matrix projector() const { return basis * basis.transpose(); }
};

/// The fiber 4-space span(p, Ip, Jp, Kp) through a unit vector.
inline Plane4 fiber_space(const QuatStructure& q, const Vector& p) {
    if (p.size() != q.dim() || std::abs(p.norm() - 1.0) > 1e-10)
        throw std::invalid_argument("fiber_space: p must be a unit vector in R^{4n}");
    Matrix b(q.dim(), 4);
    b.col(0) = p;
    b.col(1) = q.i().apply(p);
    b.col(2) = q.j().apply(p);
    b.col(3) = q.k().apply(p);
    return Plane4{b};
}

enum class FiberAgreement { agree_oriented, agree_unoriented_only, disagree };

/// Compares the fiber 4-spaces of two structures through p: unoriented
/// equality through the orthogonal projectors, orientation through the
/// determinant of the change of basis between the frames.
inline FiberAgreement fibers_agree(const QuatStructure& q1, const QuatStructure& q2,
                                   const Vector& p, double tol = 1e-8) {
    const Plane4 f1 = fiber_space(q1, p);
    const Plane4 f2 = fiber_space(q2, p);
    const double projector_gap = (f1.projector() - f2.projector()).cwiseAbs().maxCoeff();
    if (projector_gap >= tol) return FiberAgreement::disagree;
    const double orientation = (f1.basis.transpose() * f2.basis).determinant();
    return orientation > 0.0 ? FiberAgreement::agree_oriented
                             : FiberAgreement::agree_unoriented_only;
}

/// Kernel of the stacked matrix [I1+I2; J1+J2; K1+K2]; nontrivial exactly
/// when the two structures share an invariant 4-space pointwise-negated.
inline KernelResult triple_kernel(const QuatStructure& q1, const QuatStructure& q2) {
    if (q1.dim() != q2.dim())
        throw std::invalid_argument("triple_kernel: dimension mismatch");
    const Eigen::Index d = q1.dim();
    Matrix stacked(3 * d, d);
    stacked.topRows(d) = q1.i().matrix() + q2.i().matrix();
    stacked.middleRows(d, d) = q1.j().matrix() + q2.j().matrix();
    stacked.bottomRows(d) = q1.k().matrix() + q2.k().matrix();
    return kernel(stacked);
}

namespace detail {

inline bool kernel_is_exact_span(const Matrix& m, const std::vector<Vector>& claimed) {
    for (const Vector& v : claimed)
        if ((m * v).cwiseAbs().maxCoeff() != 0.0) return false;
    const KernelResult kr = kernel(m);
    return kr.dimension == static_cast<Eigen::Index>(claimed.size());
}

}  // namespace detail

/// The 8-dimensional opposite-sign pair with no shared oriented fiber sphere:
/// conjugating the standard structure by the displayed orthogonal Q makes the
/// three sum matrices have kernels span{e1,e2}, span{e1,e3} and
/// span{e1+e8, e4-e5}, whose intersection is trivial. All arithmetic is on
/// small integers, so the kernel membership checks are exact.
inline Report s7_nonexistence_report() {
    Report report("s7-nonexistence", 0);
    report.tolerances = {{"integer_residual", 0.0}};

    Matrix q = Matrix::Identity(8, 8);
    q(0, 0) = -1.0;
    q(3, 3) = 0.0;
    q(3, 4) = -1.0;
    q(4, 3) = 1.0;
    q(4, 4) = 0.0;

    const QuatStructure plus = standard_quaternionic(2);
    const QuatStructure minus = conjugate(plus, q);

    const Matrix sum_i = q * plus.i().matrix() + plus.i().matrix() * q;
    const Matrix sum_j = q * plus.j().matrix() + plus.j().matrix() * q;
    const Matrix sum_k = q * plus.k().matrix() + plus.k().matrix() * q;

    auto unit = [](int i) { return Vector(Vector::Unit(8, i)); };
    const std::vector<Vector> span_i{unit(0), unit(1)};
    const std::vector<Vector> span_j{unit(0), unit(2)};
    const std::vector<Vector> span_k{Vector(unit(0) + unit(7)), Vector(unit(3) - unit(4))};

    report.record("kernel-of-sum-i", detail::kernel_is_exact_span(sum_i, span_i),
                  "kernel of Q I + I Q is not exactly span{e1, e2}");
    report.record("kernel-of-sum-j", detail::kernel_is_exact_span(sum_j, span_j),
                  "kernel of Q J + J Q is not exactly span{e1, e3}");
    report.record("kernel-of-sum-k", detail::kernel_is_exact_span(sum_k, span_k),
                  "kernel of Q K + K Q is not exactly span{e1+e8, e4-e5}");

    Matrix stacked(24, 8);
    stacked.topRows(8) = sum_i;
    stacked.middleRows(8, 8) = sum_j;
    stacked.bottomRows(8) = sum_k;
    const KernelResult triple = kernel(stacked);
    report.record("triple-intersection-trivial", triple.dimension == 0,
                  "triple kernel has dimension " + std::to_string(triple.dimension),
                  {{"dimension", static_cast<double>(triple.dimension)}});

    const KernelResult conj_triple = triple_kernel(plus, minus);
    report.record("conjugated-triple-trivial", conj_triple.dimension == 0,
                  "triple kernel of the conjugated pair has dimension " +
                      std::to_string(conj_triple.dimension));

    report.record("conjugator-determinant", det_sign(q) == -1,
                  "det sign of Q is not -1", {{"det_sign", static_cast<double>(det_sign(q))}});
    const int s_plus = quaternionic_sign(plus);
    const int s_minus = quaternionic_sign(minus);
    report.record("signs-opposite", s_plus == 1 && s_minus == -1,
                  "expected signs +1 and -1, got " + std::to_string(s_plus) + " and " +
                      std::to_string(s_minus),
                  {{"sign_plus", static_cast<double>(s_plus)},
                   {"sign_minus", static_cast<double>(s_minus)}});
    return report;
}

/// Sampling probe of the at-most-one-shared-fiber property for opposite-sign
/// pairs: collects points whose fibers agree with orientation and asserts
/// they all pin the same unoriented 4-space. Absence of agreements over the
/// samples is consistent with nonexistence, never proof.
inline Report shared_fiber_probe(const QuatStructure& q1, const QuatStructure& q2,
                                 int samples, std::uint64_t seed) {
    if (quaternionic_sign(q1) == quaternionic_sign(q2))
        throw std::invalid_argument("shared_fiber_probe: structures must have opposite sign");
    Report report("shared-fiber-probe", seed);
    report.tolerances = {{"projector_gap", 1e-8}};

    std::vector<Vector> points;
    for (Eigen::Index i = 0; i < q1.dim(); ++i)
        points.push_back(Vector(Vector::Unit(q1.dim(), i)));
    auto rng = make_rng(seed);
    while (static_cast<int>(points.size()) < samples + static_cast<int>(q1.dim()))
        points.push_back(random_unit_vector(q1.dim(), rng));

    std::vector<Matrix> projectors;
    for (const Vector& p : points)
        if (fibers_agree(q1, q2, p) == FiberAgreement::agree_oriented)
            projectors.push_back(fiber_space(q1, p).projector());

    double worst_gap = 0.0;
    for (std::size_t i = 0; i < projectors.size(); ++i)
        for (std::size_t j = i + 1; j < projectors.size(); ++j)
            worst_gap = std::max(worst_gap,
                                 (projectors[i] - projectors[j]).cwiseAbs().maxCoeff());

    const bool unique = worst_gap < 1e-8;
    const std::string detail_line =
        projectors.empty()
            ? "no oriented agreements found; consistent with nonexistence"
            : std::to_string(projectors.size()) + " agreements, all on one 4-space";
    report.record("agreements-share-one-fiber", unique,
                  "agreeing points span distinct 4-spaces (worst projector gap " +
                      std::to_string(worst_gap) + ")",
                  {{"agreement_count", static_cast<double>(projectors.size())},
                   {"worst_projector_gap", worst_gap}});
    if (unique) report.checks.back().details = detail_line;
    return report;
}

}  // namespace fibrate
