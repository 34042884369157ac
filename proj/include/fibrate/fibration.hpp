#pragma once

#include "fibrate/complex_structure.hpp"
#include "fibrate/report.hpp"

#include <optional>

namespace fibrate {

// ---------------------------------------------------------------------------
// Distance-decreasing sphere maps
// ---------------------------------------------------------------------------

/// A self-map of the unit 2-sphere, expressed in a fixed orthonormal frame of
/// the 3-space it lives in. The contraction family composes a rotation with
/// orthogonal projection onto the tangent plane at the target point followed
/// by the exponential map, which shrinks all geodesic distances by at least
/// the factor lambda.
struct SphereMap {
    enum class Kind { constant, contraction };

    Kind kind = Kind::constant;
    Eigen::Vector3d target = Eigen::Vector3d::UnitX();  // unit vector c
    double lambda = 0.0;                                // in [0, 1)
    Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();

    static SphereMap constant(const Eigen::Vector3d& c) {
        if (std::abs(c.norm() - 1.0) > 1e-10)
            throw std::invalid_argument("SphereMap: target must be a unit vector");
        SphereMap f;
        f.kind = Kind::constant;
        f.target = c;
        return f;
    }

    static SphereMap contraction(const Eigen::Vector3d& c, double lambda,
                                 const Eigen::Matrix3d& rotation = Eigen::Matrix3d::Identity()) {
        if (std::abs(c.norm() - 1.0) > 1e-10)
            throw std::invalid_argument("SphereMap: target must be a unit vector");
        if (!(lambda >= 0.0 && lambda < 1.0))
            throw std::invalid_argument("SphereMap: lambda must lie in [0, 1)");
        if ((rotation * rotation.transpose() - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() >
            1e-10)
            throw NotOrthogonal("SphereMap: rotation must be orthogonal");
        SphereMap f;
        f.kind = Kind::contraction;
        f.target = c;
        f.lambda = lambda;
        f.rotation = rotation;
        return f;
    }

    Eigen::Vector3d operator()(const Eigen::Vector3d& v) const {
        if (kind == Kind::constant) return target;
        const Eigen::Vector3d w = rotation * v;
        const Eigen::Vector3d t = w - w.dot(target) * target;
        const double tn = t.norm();
        if (tn < 1e-300) return target;
        const double reach = lambda * tn;
        return std::cos(reach) * target + std::sin(reach) * (t / tn);
    }
};

inline double geodesic_distance(const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
    return 2.0 * std::atan2((a - b).norm(), (a + b).norm());
}

struct DistanceReport {
    bool ok = false;
    double worst_ratio = 0.0;
};

/// Samples point pairs and reports the worst geodesic contraction ratio; ok
/// iff the map stays strictly below 1 with margin 1e-6.
inline DistanceReport is_distance_decreasing(const SphereMap& f, int samples,
                                             std::uint64_t seed) {
    if (samples < 2) throw std::invalid_argument("is_distance_decreasing: samples >= 2");
    auto rng = make_rng(seed);
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
        Eigen::Vector3d u, v;
        double d = 0.0;
        do {
            u = Eigen::Vector3d(random_unit_vector(3, rng));
            v = Eigen::Vector3d(random_unit_vector(3, rng));
            d = geodesic_distance(u, v);
        } while (d < 1e-9);
        worst = std::max(worst, geodesic_distance(f(u), f(v)) / d);
    }
    return DistanceReport{worst < 1.0 - 1e-6, worst};
}

// ---------------------------------------------------------------------------
// Frames of p-perp
// ---------------------------------------------------------------------------

/// Deterministic orthonormal frame of the orthogonal complement of a unit
/// vector in R^4, built from the kernel of the row p^T. Column signs are
/// canonicalized and the last column is flipped so det [p f1 f2 f3] > 0;
/// file formats that speak frame coordinates stay portable this way.
inline Matrix perp_frame(const Vector& p) {
    if (p.size() != 4 || std::abs(p.norm() - 1.0) > 1e-10)
        throw std::invalid_argument("perp_frame: p must be a unit vector in R^4");
    Matrix row(1, 4);
    row.row(0) = p.transpose();
    Matrix frame = kernel(row).basis;  // 4 x 3
    for (int j = 0; j < 3; ++j) {
        Eigen::Index imax = 0;
        frame.col(j).cwiseAbs().maxCoeff(&imax);
        if (frame(imax, j) < 0.0) frame.col(j) *= -1.0;
    }
    Matrix full(4, 4);
    full.col(0) = p;
    full.rightCols(3) = frame;
    if (full.determinant() < 0.0) frame.col(2) *= -1.0;
    return frame;
}

// ---------------------------------------------------------------------------
// Fibrations of the 3-sphere by oriented great circles
// ---------------------------------------------------------------------------

enum class Chirality { positive, negative };

/// A great-circle fibration given either by an orthogonal complex structure
/// (Hopf) or as the graph of a distance-decreasing sphere map anchored at a
/// base point (positive chirality: the map goes from the anti-self-dual
/// sphere to the self-dual one; negative chirality mirrors the sides).
class Fibration {
public:
    static Fibration hopf(ComplexStructure j) {
        if (j.dim() != 4)
            throw std::invalid_argument("Fibration::hopf: structure must act on R^4");
        Fibration f;
        f.structure_ = std::move(j);
        return f;
    }

    static Fibration graph(Vector p, SphereMap map, Chirality chirality,
                           int certify_samples = 200, std::uint64_t certify_seed = 0) {
        const auto report = is_distance_decreasing(map, certify_samples, certify_seed);
        if (!report.ok)
            throw Error("Fibration::graph: map is not distance-decreasing (worst ratio " +
                        std::to_string(report.worst_ratio) + ")");
        return graph_unchecked(std::move(p), std::move(map), chirality);
    }

    /// Skips the distance-decreasing certification; intended for negative
    /// controls that need a broken plane family on purpose.
    static Fibration graph_unchecked(Vector p, SphereMap map, Chirality chirality) {
        if (p.size() != 4 || std::abs(p.norm() - 1.0) > 1e-10)
            throw std::invalid_argument("Fibration::graph: base point must be unit in R^4");
        Fibration f;
        f.basepoint_ = std::move(p);
        f.map_ = std::move(map);
        f.chirality_ = chirality;
        return f;
    }

    bool is_hopf() const { return structure_.has_value(); }
    const ComplexStructure& structure() const { return structure_.value(); }
    const Vector& basepoint() const { return basepoint_; }
    const SphereMap& map() const { return map_; }
    Chirality chirality() const { return chirality_; }

private:
    Fibration() = default;
    std::optional<ComplexStructure> structure_;
    Vector basepoint_;
    SphereMap map_;
    Chirality chirality_ = Chirality::positive;
};

/// Rotates x by 90 degrees in the positive direction inside an oriented plane
/// containing it.
inline Vector rotate90_in(const OrientedPlane& pl, const Vector& x) {
    const double a = pl.u.dot(x);
    const double b = pl.v.dot(x);
    return a * pl.v - b * pl.u;
}

// forward declaration; the fiber lookup below defines it
inline OrientedPlane fiber_of(const Fibration& fib, const Vector& x, double eps = 1e-12,
                              int max_iter = 10000);

inline Vector rotate90(const Fibration& fib, const Vector& x) {
    if (std::abs(x.norm() - 1.0) > 1e-10)
        throw std::invalid_argument("rotate90: x must be a unit vector");
    if (fib.is_hopf()) return fib.structure().apply(x);
    const Vector r = rotate90_in(fiber_of(fib, x), x);
    return r / r.norm();
}

/// The oriented plane whose circle is the unique agreement of the negative
/// fibration through span(p,u) and the positive one through span(p,v); its
/// area form is the sum of the two anchored embeddings.
inline OrientedPlane agreement_plane(const Vector& p, const Vector& u, const Vector& v) {
    if (std::abs(u.norm() - 1.0) > 1e-8 || std::abs(v.norm() - 1.0) > 1e-8)
        throw NotOrthogonal("agreement_plane: u and v must be unit vectors");
    const Bivector w = dual_embed(p, u, Side::minus) + dual_embed(p, v, Side::plus);
    return plane_of_area_form(w);
}

/// The unique orthogonal complex structure of the requested sign whose fiber
/// plane through the basis of P is P itself.
inline ComplexStructure hopf_through(const OrientedPlane& p, int want_sign) {
    if (want_sign != 1 && want_sign != -1)
        throw std::invalid_argument("hopf_through: sign must be +1 or -1");
    const OrientedPlane comp = orthogonal_complement(p);
    const double s = static_cast<double>(want_sign);
    Matrix j = p.v * p.u.transpose() - p.u * p.v.transpose() +
               s * (comp.v * comp.u.transpose() - comp.u * comp.v.transpose());
    return ComplexStructure::validate(std::move(j));
}

namespace detail {

/// Precomputed anchored-embedding matrices for one anchor point.
struct EmbedPair {
    Eigen::Matrix<double, 6, 4> minus;
    Eigen::Matrix<double, 6, 4> plus;

    explicit EmbedPair(const Vector& p)
        : minus(dual_embed_matrix(p, Side::minus)), plus(dual_embed_matrix(p, Side::plus)) {}

    const Eigen::Matrix<double, 6, 4>& side(Side s) const {
        return s == Side::minus ? minus : plus;
    }
};

}  // namespace detail

/// Fiber lookup. Hopf fibrations answer directly through the structure. For
/// graph fibrations the plane through x is the fixed point of the map that
/// sends a point a on the domain sphere through the fibration's graph map and
/// back through the isometry graphing the planes that contain x; the graph
/// map is a contraction, so the iteration converges geometrically from any
/// start.
inline OrientedPlane fiber_of(const Fibration& fib, const Vector& x, double eps,
                              int max_iter) {
    if (x.size() != 4 || std::abs(x.norm() - 1.0) > 1e-10)
        throw std::invalid_argument("fiber_of: x must be a unit vector in R^4");
    if (fib.is_hopf()) return fiber_plane(fib.structure(), x);

    const Vector& p = fib.basepoint();
    const Matrix frame = perp_frame(p);
    const Side dom = fib.chirality() == Chirality::positive ? Side::minus : Side::plus;
    const Side cod = opposite(dom);

    const detail::EmbedPair at_p(p);
    const detail::EmbedPair at_x(x);
    const auto& mp_dom = at_p.side(dom);
    const auto& mp_cod = at_p.side(cod);
    const auto& mx_dom = at_x.side(dom);
    const auto& mx_cod = at_x.side(cod);
    const SphereMap& f = fib.map();

    using Vec6 = Eigen::Matrix<double, 6, 1>;
    auto graph_image = [&](const Vec6& a) -> Vec6 {
        const Vector u = 2.0 * (mp_dom.transpose() * a);  // unit, orthogonal to p
        const Eigen::Vector3d w3 = f(frame.transpose() * u);
        return mp_cod * (frame * w3);
    };

    Vec6 a = mp_dom * frame.col(0);
    bool converged = false;
    for (int it = 0; it < max_iter; ++it) {
        const Vec6 b = graph_image(a);
        const Vector u = 2.0 * (mx_cod.transpose() * b);
        const Vec6 next = mx_dom * u;
        const double delta = (next - a).norm();
        a = next;
        if (delta < eps) {
            converged = true;
            break;
        }
    }
    if (!converged)
        throw NoConvergence("fiber_of: fixed point iteration did not reach eps=" +
                            std::to_string(eps) + " in " + std::to_string(max_iter) +
                            " iterations");
    return plane_of_area_form(from_vec6(Vec6(a + graph_image(a))));
}

/// Sign of det [p p' q q'] for two sample points on distinct fibers, where
/// the primes are 90-degree rotations along the fibers. Constant over valid
/// choices; the sampling only exists to pick a non-degenerate pair.
inline int fibration_sign(const Fibration& fib, std::uint64_t seed) {
    auto rng = make_rng(seed);
    const Vector p = random_unit_vector(4, rng);
    const OrientedPlane pp = fiber_of(fib, p);
    for (int attempt = 0; attempt < 100; ++attempt) {
        const Vector q = random_unit_vector(4, rng);
        const OrientedPlane qq = fiber_of(fib, q);
        if (plane_distance(pp, qq) <= 1e-6) continue;
        Matrix m(4, 4);
        m.col(0) = p;
        m.col(1) = rotate90_in(pp, p);
        m.col(2) = q;
        m.col(3) = rotate90_in(qq, q);
        const int s = det_sign(m);
        if (s != 0) return s;
    }
    throw DegenerateSampling("fibration_sign: no sample pair on distinct fibers");
}

/// Samples the plane family of a fibration directly: fiber planes for Hopf,
/// the graph parametrization for graph variants.
inline std::vector<OrientedPlane> sample_fibers(const Fibration& fib, int count,
                                                std::uint64_t seed) {
    auto rng = make_rng(seed);
    std::vector<OrientedPlane> planes;
    planes.reserve(static_cast<std::size_t>(count));
    if (fib.is_hopf()) {
        for (int i = 0; i < count; ++i)
            planes.push_back(fiber_plane(fib.structure(), random_unit_vector(4, rng)));
        return planes;
    }
    const Matrix frame = perp_frame(fib.basepoint());
    for (int i = 0; i < count; ++i) {
        const Eigen::Vector3d v3(random_unit_vector(3, rng));
        const Eigen::Vector3d w3 = fib.map()(v3);
        const Vector u = frame * v3;
        const Vector w = frame * w3;
        planes.push_back(fib.chirality() == Chirality::positive
                             ? agreement_plane(fib.basepoint(), u, w)
                             : agreement_plane(fib.basepoint(), w, u));
    }
    return planes;
}

/// Checks the fibration axioms at sample scale: pairwise disjointness via the
/// dual-angle criterion with a constant sign of the angle difference, fiber
/// coverage via lookup and containment, and stability of the sign under
/// resampling. Failures land in the report instead of throwing.
inline Report verify_fibration(const Fibration& fib, int samples, std::uint64_t seed) {
    Report report("fibration", seed);
    report.tolerances = {{"containment", 1e-7}, {"theta_gap", 1e-9}};

    // disjointness
    try {
        const auto planes = sample_fibers(fib, samples, seed);
        int positive = 0, negative = 0, zeros = 0;
        double min_gap = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < planes.size(); ++i) {
            for (std::size_t j = i + 1; j < planes.size(); ++j) {
                if (plane_distance(planes[i], planes[j]) < 1e-9) continue;
                const DualAngles th = dual_angles(planes[i], planes[j]);
                const double diff = th.plus - th.minus;
                min_gap = std::min(min_gap, std::abs(diff));
                if (std::abs(diff) < 1e-9)
                    ++zeros;
                else if (diff > 0.0)
                    ++positive;
                else
                    ++negative;
            }
        }
        const bool ok = zeros == 0 && (positive == 0 || negative == 0);
        report.record("disjointness", ok,
                      "fibers intersect or angle-difference sign flips (" +
                          std::to_string(zeros) + " zero gaps, " + std::to_string(positive) +
                          " positive vs " + std::to_string(negative) + " negative)",
                      {{"min_theta_gap", min_gap},
                       {"positive_pairs", static_cast<double>(positive)},
                       {"negative_pairs", static_cast<double>(negative)}});
    } catch (const Error& e) {
        report.fail("disjointness", std::string("sampling failed: ") + e.what());
    }

    // coverage
    {
        auto rng = make_rng(seed + 1);
        double worst = 0.0;
        int failures = 0;
        std::string first_error;
        for (int i = 0; i < samples; ++i) {
            const Vector x = random_unit_vector(4, rng);
            try {
                const OrientedPlane pl = fiber_of(fib, x);
                worst = std::max(worst, pl.containment_residual(x));
            } catch (const Error& e) {
                ++failures;
                if (first_error.empty()) first_error = e.what();
            }
        }
        report.record("coverage", failures == 0 && worst < 1e-7,
                      "fiber lookup failed " + std::to_string(failures) + " times (" +
                          first_error + "), worst containment " + std::to_string(worst),
                      {{"worst_containment", worst},
                       {"lookup_failures", static_cast<double>(failures)}});
    }

    // sign stability
    try {
        const int s0 = fibration_sign(fib, seed + 2);
        bool stable = true;
        for (int i = 1; i < 10; ++i)
            if (fibration_sign(fib, seed + 2 + static_cast<std::uint64_t>(i)) != s0)
                stable = false;
        report.record("sign-stability", stable, "fibration sign varies across resamples",
                      {{"sign", static_cast<double>(s0)}});
    } catch (const Error& e) {
        report.fail("sign-stability", std::string("sign sampling failed: ") + e.what());
    }

    return report;
}

struct SlicePoint {
    Side side = Side::plus;   // which dual component is constant
    Bivector point;           // the constant value
    double spread = 0.0;      // max deviation across samples
};

/// For a Hopf structure the sign-matched dual component of all fiber area
/// forms is a single point; this measures the spread across samples.
inline SlicePoint hopf_slice(const ComplexStructure& j, int samples, std::uint64_t seed = 0) {
    if (j.dim() != 4)
        throw std::invalid_argument("hopf_slice: structure must act on R^4");
    const int sign = structure_sign(j);
    const Side side = sign > 0 ? Side::plus : Side::minus;
    auto rng = make_rng(seed);

    std::vector<Bivector> components;
    components.reserve(static_cast<std::size_t>(samples));
    Bivector mean;
    for (int i = 0; i < samples; ++i) {
        const Bivector w = area_form(fiber_plane(j, random_unit_vector(4, rng)));
        const Bivector c = side == Side::plus ? self_dual_part(w) : anti_self_dual_part(w);
        components.push_back(c);
        mean += c;
    }
    mean *= 1.0 / static_cast<double>(samples);
    double spread = 0.0;
    for (const Bivector& c : components) spread = std::max(spread, (c - mean).norm());
    return SlicePoint{side, mean, spread};
}

/// Fits a linear map to the fiberwise 90-degree rotation. Exactly linear
/// fibrations are the Hopf ones, in which case the fit recovers the structure.
inline ComplexStructure extract_linear_structure(const Fibration& fib, int samples,
                                                 std::uint64_t seed) {
    if (samples < 8)
        throw std::invalid_argument("extract_linear_structure: need at least 8 samples");
    auto rng = make_rng(seed);
    Matrix x(4, samples), y(4, samples);
    for (int i = 0; i < samples; ++i) {
        const Vector xi = random_unit_vector(4, rng);
        x.col(i) = xi;
        y.col(i) = rotate90(fib, xi);
    }
    const Matrix mt = Matrix(x.transpose()).colPivHouseholderQr().solve(Matrix(y.transpose()));
    const Matrix m = mt.transpose();
    const double residual = (m * x - y).cwiseAbs().maxCoeff();
    if (residual >= 1e-6) throw NotLinear(residual);
    return ComplexStructure::validate(m, 1e-6);
}

}  // namespace fibrate
