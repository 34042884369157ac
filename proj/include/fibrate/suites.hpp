#pragma once

#include "fibrate/fibration.hpp"
#include "fibrate/quaternionic.hpp"
#include "fibrate/report.hpp"

#include <chrono>
#include <functional>

namespace fibrate {

struct SuiteConfig {
    int trials = 300;
    std::uint64_t seed = 0;
    double tol = 1e-9;
};

namespace detail {

/// Runs one named check, converting stray exceptions into failures so a
/// verification run always produces a full report.
inline void run_check(Report& report, const std::string& name,
                      const std::function<void(Report&)>& body) {
    try {
        body(report);
    } catch (const std::exception& e) {
        report.fail(name, std::string("unexpected exception: ") + e.what());
    }
}

inline OrientedPlane random_plane(Eigen::Index dim, std::mt19937_64& rng) {
    for (;;) {
        try {
            return plane(random_unit_vector(dim, rng), random_unit_vector(dim, rng));
        } catch (const DependentInput&) {
        }
    }
}

/// A pair of planes built to share one given vector.
inline std::pair<OrientedPlane, OrientedPlane> planes_sharing(const Vector& x,
                                                              std::mt19937_64& rng) {
    for (;;) {
        try {
            OrientedPlane p = plane(x, random_unit_vector(x.size(), rng));
            OrientedPlane q = plane(x, random_unit_vector(x.size(), rng));
            if (plane_distance(p, q) > 1e-3) return {p, q};
        } catch (const DependentInput&) {
        }
    }
}

inline Bivector random_bivector(std::mt19937_64& rng) {
    std::normal_distribution<double> gauss;
    Bivector a;
    for (std::size_t i = 0; i < 6; ++i) a[i] = gauss(rng);
    return a;
}

inline double elapsed_ms_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
}

}  // namespace detail

// ---------------------------------------------------------------------------
// exterior
// ---------------------------------------------------------------------------

inline Report exterior_suite(const SuiteConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    Report report("exterior", cfg.seed);
    report.tolerances = {{"inner_oracle", 1e-10}, {"star_involution", 1e-14},
                         {"darboux_reconstruction", 1e-9}, {"tol", cfg.tol}};
    auto rng = make_rng(cfg.seed);

    detail::run_check(report, "inner-product-projection-determinant", [&](Report& r) {
        double worst = 0.0;
        for (int t = 0; t < cfg.trials; ++t) {
            const OrientedPlane p = detail::random_plane(4, rng);
            const OrientedPlane q = detail::random_plane(4, rng);
            // oracle: determinant of the 2x2 orthogonal projection matrix
            Eigen::Matrix2d proj;
            proj << p.u.dot(q.u), p.v.dot(q.u), p.u.dot(q.v), p.v.dot(q.v);
            worst = std::max(worst,
                             std::abs(inner(area_form(p), area_form(q)) - proj.determinant()));
        }
        r.record("inner-product-projection-determinant", worst < 1e-10,
                 "worst deviation " + std::to_string(worst), {{"worst", worst}});
    });

    detail::run_check(report, "hodge-sends-plane-to-complement", [&](Report& r) {
        double worst = 0.0;
        for (int t = 0; t < cfg.trials; ++t) {
            const OrientedPlane p = detail::random_plane(4, rng);
            worst = std::max(worst, (hodge_star(area_form(p)) -
                                     area_form(orthogonal_complement(p))).norm());
        }
        r.record("hodge-sends-plane-to-complement", worst < 1e-10,
                 "worst deviation " + std::to_string(worst), {{"worst", worst}});
    });

    detail::run_check(report, "star-involution", [&](Report& r) {
        double worst = 0.0;
        for (int t = 0; t < cfg.trials; ++t) {
            const Bivector a = detail::random_bivector(rng);
            worst = std::max(worst, (hodge_star(hodge_star(a)) - a).norm());
        }
        r.record("star-involution", worst < 1e-14, "worst deviation " + std::to_string(worst),
                 {{"worst", worst}});
    });

    detail::run_check(report, "duality-pairing", [&](Report& r) {
        double worst = 0.0;
        for (int t = 0; t < cfg.trials; ++t) {
            const Bivector a = detail::random_bivector(rng);
            const Bivector b = detail::random_bivector(rng);
            worst = std::max(worst, std::abs(wedge_volume(a, hodge_star(b)) - inner(a, b)));
        }
        r.record("duality-pairing", worst < 1e-12, "worst deviation " + std::to_string(worst),
                 {{"worst", worst}});
    });

    detail::run_check(report, "intersection-criterion", [&](Report& r) {
        double worst_shared = 0.0;
        for (int t = 0; t < cfg.trials; ++t) {
            const Vector x = random_unit_vector(4, rng);
            const auto [p, q] = detail::planes_sharing(x, rng);
            worst_shared =
                std::max(worst_shared, std::abs(inner(area_form(p),
                                                      hodge_star(area_form(q)))));
        }
        int bounded = 0;
        for (int t = 0; t < cfg.trials; ++t) {
            const OrientedPlane p = detail::random_plane(4, rng);
            const OrientedPlane q = detail::random_plane(4, rng);
            if (std::abs(inner(area_form(p), hodge_star(area_form(q)))) > 1e-6) ++bounded;
        }
        const double fraction = static_cast<double>(bounded) / cfg.trials;
        r.record("intersection-criterion", worst_shared < 1e-10 && fraction >= 0.99,
                 "shared-vector worst " + std::to_string(worst_shared) + ", fraction " +
                     std::to_string(fraction) + " bounded away",
                 {{"worst_shared", worst_shared}, {"fraction_bounded", fraction}});
    });

    detail::run_check(report, "sphere-product-image", [&](Report& r) {
        const double target = 1.0 / std::sqrt(2.0);
        double worst = 0.0;
        for (int t = 0; t < cfg.trials; ++t) {
            const DualParts parts = dual_split(area_form(detail::random_plane(4, rng)));
            worst = std::max(worst, std::abs(parts.anti_self_dual.norm() - target));
            worst = std::max(worst, std::abs(parts.self_dual.norm() - target));
        }
        // converse: both component norms 1/sqrt(2) forces decomposability
        bool converse = true;
        for (int t = 0; t < cfg.trials / 10 + 1; ++t) {
            DualParts parts = dual_split(detail::random_bivector(rng));
            if (parts.anti_self_dual.norm() < 1e-6 || parts.self_dual.norm() < 1e-6) continue;
            const Bivector a = parts.anti_self_dual * (target / parts.anti_self_dual.norm()) +
                               parts.self_dual * (target / parts.self_dual.norm());
            if (!is_decomposable(a, 1e-8)) converse = false;
        }
        r.record("sphere-product-image", worst < 1e-12 && converse,
                 "worst radius deviation " + std::to_string(worst), {{"worst", worst}});
    });

    detail::run_check(report, "darboux-reconstruction", [&](Report& r) {
        double worst = 0.0, worst_cert = 1.0;
        auto try_one = [&](const Bivector& a) {
            const DarbouxForm d = darboux_decompose(a);
            const Bivector recon = d.a * area_form(d.p) + d.b * area_form(d.q);
            worst = std::max(worst, (recon - a).norm());
            worst_cert = std::min(worst_cert, std::abs(inner(area_form(d.p),
                                                             hodge_star(area_form(d.q)))));
        };
        for (int t = 0; t < cfg.trials; ++t) try_one(detail::random_bivector(rng));
        // degenerate inputs: zero, purely self-dual, purely anti-self-dual, decomposable
        try_one(Bivector{});
        try_one(detail::random_bivector(rng) * 0.3 + Bivector{});
        try_one(self_dual_part(detail::random_bivector(rng)));
        try_one(anti_self_dual_part(detail::random_bivector(rng)));
        try_one(area_form(detail::random_plane(4, rng)));
        try_one(area_form(detail::random_plane(4, rng)) * 0.3);
        r.record("darboux-reconstruction", worst < 1e-9 && worst_cert > 0.99,
                 "worst reconstruction " + std::to_string(worst) +
                     ", weakest intersection certificate " + std::to_string(worst_cert),
                 {{"worst_reconstruction", worst}, {"weakest_certificate", worst_cert}});
    });

    detail::run_check(report, "skew-normal-form", [&](Report& r) {
        double worst = 0.0;
        bool classified = true;
        auto check_case = [&](const Matrix& a, SkewForm expected) {
            const SkewReduction red = skew_normal_form(a);
            if (red.form != expected) classified = false;
            worst = std::max(worst, (red.q.transpose() * a * red.q -
                                     canonical_skew_matrix(red.form))
                                        .cwiseAbs()
                                        .maxCoeff());
        };
        for (int t = 0; t < cfg.trials / 3 + 1; ++t) {
            check_case(Matrix::Zero(4, 4), SkewForm::B0);
            const Vector u = random_unit_vector(4, rng), v = random_unit_vector(4, rng);
            check_case(u * v.transpose() - v * u.transpose(), SkewForm::B1);
            Matrix g = gaussian_matrix(4, 4, rng);
            const Matrix rank4 = g - g.transpose();
            if (std::abs(rank4.determinant()) > 1e-8) check_case(rank4, SkewForm::B2);
        }
        r.record("skew-normal-form", classified && worst < 1e-9,
                 "misclassification or worst residual " + std::to_string(worst),
                 {{"worst_residual", worst}});
    });

    report.elapsed_ms = detail::elapsed_ms_since(t0);
    return report;
}

// ---------------------------------------------------------------------------
// grassmann
// ---------------------------------------------------------------------------

inline Report grassmann_suite(const SuiteConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    Report report("grassmann", cfg.seed);
    report.tolerances = {{"isometry_graph", 1e-8}, {"theta_criterion", 1e-7}, {"tol", cfg.tol}};
    auto rng = make_rng(cfg.seed + 1);

    detail::run_check(report, "constructor-preserves-orientation", [&](Report& r) {
        bool ok = true;
        for (int t = 0; t < cfg.trials; ++t) {
            const Vector u = gaussian_vector(4, rng);
            const Vector v = gaussian_vector(4, rng);
            if (wedge(u, v).norm() < 1e-3) continue;
            const OrientedPlane p = plane(u, v);
            if (inner(area_form(p), wedge(u, v)) <= 0.0) ok = false;
        }
        r.record("constructor-preserves-orientation", ok,
                 "orientation flipped by the constructor");
    });

    detail::run_check(report, "complement-orientation", [&](Report& r) {
        bool ok = true;
        double worst_roundtrip = 0.0;
        for (int t = 0; t < cfg.trials; ++t) {
            const OrientedPlane p = detail::random_plane(4, rng);
            const OrientedPlane c = orthogonal_complement(p);
            Matrix full(4, 4);
            full.col(0) = p.u;
            full.col(1) = p.v;
            full.col(2) = c.u;
            full.col(3) = c.v;
            if (full.determinant() <= 0.0) ok = false;
            worst_roundtrip =
                std::max(worst_roundtrip, plane_distance(orthogonal_complement(c), p));
        }
        r.record("complement-orientation", ok && worst_roundtrip < 1e-10,
                 "orientation or double-complement failed (worst " +
                     std::to_string(worst_roundtrip) + ")",
                 {{"worst_roundtrip", worst_roundtrip}});
    });

    detail::run_check(report, "planes-through-point-graph-isometry", [&](Report& r) {
        const Vector p = random_unit_vector(4, rng);
        std::vector<DualParts> samples;
        for (int t = 0; t < 50; ++t) {
            Vector u = project_out(random_unit_vector(4, rng), {p});
            if (u.norm() < 1e-3) { --t; continue; }
            u.normalize();
            samples.push_back(dual_split(area_form(plane(p, u))));
        }
        double worst = 0.0;
        for (std::size_t i = 0; i < samples.size(); ++i)
            for (std::size_t j = i + 1; j < samples.size(); ++j) {
                const double am = detail::vector_angle(to_vec6(samples[i].anti_self_dual),
                                                       to_vec6(samples[j].anti_self_dual));
                const double ap = detail::vector_angle(to_vec6(samples[i].self_dual),
                                                       to_vec6(samples[j].self_dual));
                worst = std::max(worst, std::abs(am - ap));
            }
        r.record("planes-through-point-graph-isometry", worst < 1e-8,
                 "pairwise angle mismatch " + std::to_string(worst), {{"worst", worst}});
    });

    detail::run_check(report, "theta-intersection-criterion", [&](Report& r) {
        int disagreements = 0;
        for (int t = 0; t < cfg.trials; ++t) {
            OrientedPlane p(detail::random_plane(4, rng)), q(detail::random_plane(4, rng));
            if (t % 2 == 0) {
                const Vector x = random_unit_vector(4, rng);
                std::tie(p, q) = detail::planes_sharing(x, rng);
            }
            const DualAngles th = dual_angles(p, q);
            const bool by_theta = std::abs(th.plus - th.minus) < 1e-7;
            const bool by_inner = intersects(p, q, 1e-9);
            if (by_theta != by_inner) ++disagreements;
        }
        r.record("theta-intersection-criterion", disagreements == 0,
                 std::to_string(disagreements) + " disagreements",
                 {{"disagreements", static_cast<double>(disagreements)}});
    });

    detail::run_check(report, "embed-rescaled-isometry", [&](Report& r) {
        double worst = 0.0;
        for (int t = 0; t < cfg.trials; ++t) {
            const Vector p = random_unit_vector(4, rng);
            Vector u = project_out(random_unit_vector(4, rng), {p});
            Vector w = project_out(random_unit_vector(4, rng), {p});
            if (u.norm() < 1e-3 || w.norm() < 1e-3) continue;
            for (const Side side : {Side::minus, Side::plus}) {
                const double lhs = inner(dual_embed(p, u, side), dual_embed(p, w, side));
                worst = std::max(worst, std::abs(lhs - u.dot(w) / 2.0));
            }
            u.normalize();
            worst = std::max(worst, std::abs(dual_embed(p, u, Side::minus).norm() -
                                             1.0 / std::sqrt(2.0)));
        }
        r.record("embed-rescaled-isometry", worst < 1e-10,
                 "worst deviation " + std::to_string(worst), {{"worst", worst}});
    });

    detail::run_check(report, "embed-roundtrip", [&](Report& r) {
        double worst = 0.0;
        for (int t = 0; t < cfg.trials; ++t) {
            const Vector p = random_unit_vector(4, rng);
            Vector u = project_out(random_unit_vector(4, rng), {p});
            if (u.norm() < 1e-3) continue;
            u.normalize();
            for (const Side side : {Side::minus, Side::plus}) {
                const Bivector a = dual_embed(p, u, side);
                worst = std::max(worst, (dual_embed_inverse(p, a, side) - u).norm());
                // linearity under scaling
                worst = std::max(
                    worst, (dual_embed_inverse(p, a * 0.25, side) - Vector(0.25 * u)).norm());
            }
        }
        r.record("embed-roundtrip", worst < 1e-10, "worst deviation " + std::to_string(worst),
                 {{"worst", worst}});
    });

    report.elapsed_ms = detail::elapsed_ms_since(t0);
    return report;
}

// ---------------------------------------------------------------------------
// ocs
// ---------------------------------------------------------------------------

inline Report ocs_suite(const SuiteConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    Report report("ocs", cfg.seed);
    report.tolerances = {{"kernel_tol_rel", 1e-7}, {"spectral_gap_floor", 1e3},
                         {"pattern_residual", 1e-9}, {"tol", cfg.tol}};
    auto rng = make_rng(cfg.seed + 2);
    std::uniform_int_distribution<int> coin(0, 1);

    detail::run_check(report, "opposite-sign-sum-kernel", [&](Report& r) {
        Eigen::Index min_dim = 1000;
        double min_gap = std::numeric_limits<double>::infinity();
        for (Eigen::Index n = 1; n <= 5; ++n) {
            for (int t = 0; t < cfg.trials; ++t) {
                const auto j = random_complex_structure(n, 1, rng());
                const auto k = random_complex_structure(n, -1, rng());
                const KernelResult kr = agreement_space(j, k, AgreementMode::sum);
                min_dim = std::min(min_dim, kr.dimension);
                min_gap = std::min(min_gap, kr.spectral_gap);
            }
        }
        r.record("opposite-sign-sum-kernel", min_dim >= 2,
                 "minimum kernel dimension " + std::to_string(min_dim),
                 {{"min_dimension", static_cast<double>(min_dim)}, {"min_gap", min_gap}});
    });

    detail::run_check(report, "mod4-law", [&](Report& r) {
        bool ok = true;
        double min_gap = std::numeric_limits<double>::infinity();
        for (Eigen::Index n = 1; n <= 5; ++n) {
            for (int t = 0; t < cfg.trials; ++t) {
                const bool opposite = coin(rng) == 1;
                const int s1 = coin(rng) == 1 ? 1 : -1;
                const int s2 = opposite ? -s1 : s1;
                const auto j = random_complex_structure(n, s1, rng());
                const auto k = random_complex_structure(n, s2, rng());
                const KernelResult kr = agreement_space(j, k, AgreementMode::sum);
                min_gap = std::min(min_gap, kr.spectral_gap);
                if (opposite && kr.dimension % 4 != 2) ok = false;
                if (!opposite && kr.dimension % 4 != 0) ok = false;
            }
        }
        // adversarial block-built pairs with kernel dimensions 0, 2, 4, 6
        const Matrix i2 = standard_complex_structure(1).matrix();
        auto blocks = [&](std::initializer_list<int> signs) {
            const auto n = static_cast<Eigen::Index>(signs.size());
            Matrix m = Matrix::Zero(2 * n, 2 * n);
            Eigen::Index b = 0;
            for (int s : signs) {
                m.block(2 * b, 2 * b, 2, 2) = static_cast<double>(s) * i2;
                ++b;
            }
            return ComplexStructure::validate(m);
        };
        struct Fixture {
            ComplexStructure j, k;
            Eigen::Index expected;
        };
        const Fixture fixtures[] = {
            {blocks({1, 1}), blocks({1, 1}), 0},        // same structure, kernel of 2J
            {blocks({1, 1}), blocks({-1, 1}), 2},       // one negated block
            {blocks({1, 1}), blocks({-1, -1}), 4},      // K = -J, n even
            {blocks({1, 1, 1}), blocks({-1, -1, -1}), 6},  // K = -J, n odd
        };
        for (const auto& fx : fixtures) {
            if (agreement_space(fx.j, fx.k, AgreementMode::sum).dimension != fx.expected)
                ok = false;
        }
        r.record("mod4-law", ok, "kernel dimension violated the mod-4 law",
                 {{"min_gap", min_gap}});
    });

    detail::run_check(report, "difference-kernel-existence", [&](Report& r) {
        Eigen::Index min_dim = 1000;
        for (Eigen::Index n : {2, 4}) {  // opposite sign, n even
            for (int t = 0; t < cfg.trials / 2 + 1; ++t) {
                const auto j = random_complex_structure(n, 1, rng());
                const auto k = random_complex_structure(n, -1, rng());
                min_dim = std::min(
                    min_dim, agreement_space(j, k, AgreementMode::difference).dimension);
            }
        }
        for (Eigen::Index n : {1, 3, 5}) {  // same sign, n odd
            for (int t = 0; t < cfg.trials / 2 + 1; ++t) {
                const int s = coin(rng) == 1 ? 1 : -1;
                const auto j = random_complex_structure(n, s, rng());
                const auto k = random_complex_structure(n, s, rng());
                min_dim = std::min(
                    min_dim, agreement_space(j, k, AgreementMode::difference).dimension);
            }
        }
        r.record("difference-kernel-existence", min_dim >= 2,
                 "minimum kernel dimension " + std::to_string(min_dim),
                 {{"min_dimension", static_cast<double>(min_dim)}});
    });

    detail::run_check(report, "kernel-invariance", [&](Report& r) {
        double worst = 0.0;
        for (int t = 0; t < cfg.trials; ++t) {
            const Eigen::Index n = 1 + static_cast<Eigen::Index>(t % 4);
            const auto j = random_complex_structure(n, 1, rng());
            const auto k = random_complex_structure(n, -1, rng());
            const KernelResult kr = agreement_space(j, k, AgreementMode::sum);
            if (kr.dimension == 0) continue;
            const Matrix projector = kr.basis * kr.basis.transpose();
            const Matrix id = Matrix::Identity(j.dim(), j.dim());
            for (const ComplexStructure* cs : {&j, &k})
                worst = std::max(worst, ((id - projector) * cs->matrix() * projector)
                                            .cwiseAbs()
                                            .maxCoeff());
        }
        r.record("kernel-invariance", worst < 1e-8,
                 "worst invariance residual " + std::to_string(worst), {{"worst", worst}});
    });

    detail::run_check(report, "base-case-determinant", [&](Report& r) {
        const Matrix i0 = standard_complex_structure(2).matrix();
        std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
        double worst = 0.0;
        for (int t = 0; t < 100; ++t) {
            const double theta = angle(rng);
            const double c = std::cos(theta), s = std::sin(theta);
            Matrix q = Matrix::Zero(4, 4);
            q(0, 0) = 1.0;
            q(1, 1) = c;
            q(1, 2) = -s;
            q(2, 1) = s;
            q(2, 2) = c;
            q(3, 3) = -1.0;
            worst = std::max(worst, std::abs(Matrix(i0 * q + q * i0).determinant()));
        }
        r.record("base-case-determinant", worst < 1e-10,
                 "worst |det| " + std::to_string(worst), {{"worst", worst}});
    });

    detail::run_check(report, "negation-sign", [&](Report& r) {
        bool ok = true;
        for (Eigen::Index n = 1; n <= 5; ++n) {
            for (int t = 0; t < cfg.trials / 10 + 1; ++t) {
                const int s = coin(rng) == 1 ? 1 : -1;
                const auto j = random_complex_structure(n, s, rng());
                const auto neg = ComplexStructure::validate(Matrix(-j.matrix()));
                const int expected = n % 2 == 0 ? structure_sign(j) : -structure_sign(j);
                if (structure_sign(neg) != expected) ok = false;
            }
        }
        r.record("negation-sign", ok, "sign of -J disagreed with (-1)^n sign(J)");
    });

    detail::run_check(report, "conjugation-validity-and-sign", [&](Report& r) {
        bool ok = true;
        for (int t = 0; t < cfg.trials; ++t) {
            const Eigen::Index n = 1 + static_cast<Eigen::Index>(t % 4);
            const int sj = coin(rng) == 1 ? 1 : -1;
            const int st = coin(rng) == 1 ? 1 : -1;
            const auto j = random_complex_structure(n, sj, rng());
            const Matrix t_mat = random_orthogonal(2 * n, st, rng());
            const auto c = conjugate(j, t_mat);  // validates internally
            if (structure_sign(c) != sj * st) ok = false;
        }
        r.record("conjugation-validity-and-sign", ok,
                 "conjugated structure failed validation or sign bookkeeping");
    });

    detail::run_check(report, "conjugator-to-standard", [&](Report& r) {
        double worst = 0.0;
        bool sign_ok = true;
        for (int t = 0; t < cfg.trials; ++t) {
            const Eigen::Index n = 1 + static_cast<Eigen::Index>(t % 4);
            const int s = coin(rng) == 1 ? 1 : -1;
            const auto j = random_complex_structure(n, s, rng());
            const Matrix t_mat = conjugator_to_standard(j);
            worst = std::max(worst, (t_mat.transpose() * j.matrix() * t_mat -
                                     standard_complex_structure(n).matrix())
                                        .cwiseAbs()
                                        .maxCoeff());
            if (det_sign(t_mat) != s) sign_ok = false;
        }
        r.record("conjugator-to-standard", worst < 1e-9 && sign_ok,
                 "worst residual " + std::to_string(worst), {{"worst", worst}});
    });

    detail::run_check(report, "fiber-correspondence", [&](Report& r) {
        double worst = 0.0;
        for (int t = 0; t < cfg.trials; ++t) {
            const Eigen::Index n = 1 + static_cast<Eigen::Index>(t % 3);
            const auto j = standard_complex_structure(n);
            const Matrix t_mat = random_orthogonal(2 * n, coin(rng) == 1 ? 1 : -1, rng());
            const auto c = conjugate(j, t_mat);
            const Vector p = random_unit_vector(2 * n, rng);
            const OrientedPlane lhs = fiber_plane(c, Vector(t_mat * p));
            const OrientedPlane base = fiber_plane(j, p);
            const OrientedPlane rhs{Vector(t_mat * base.u), Vector(t_mat * base.v)};
            if (n == 2)
                worst = std::max(worst, plane_distance(lhs, rhs));
            else
                worst = std::max(worst, (lhs.v - rhs.v).norm());  // same p, compare Jp images
        }
        r.record("fiber-correspondence", worst < 1e-9,
                 "worst fiber deviation " + std::to_string(worst), {{"worst", worst}});
    });

    detail::run_check(report, "paired-bases", [&](Report& r) {
        double worst_pattern = 0.0, worst_circle = 0.0, worst_standard = 0.0;
        bool corner_ok = true;
        for (int t = 0; t < cfg.trials; ++t) {
            const Eigen::Index n = 1 + static_cast<Eigen::Index>(t % 4);
            const int sj = coin(rng) == 1 ? 1 : -1;
            const int sk = coin(rng) == 1 ? 1 : -1;
            const auto j = random_complex_structure(n, sj, rng());
            const auto k = random_complex_structure(n, sk, rng());
            const Vector p = random_unit_vector(2 * n, rng);
            const PairedBases pb = paired_bases(j, k, p);
            worst_pattern = std::max(worst_pattern, paired_bases_pattern_residual(pb));
            for (const auto& cs : pb.angles)
                worst_circle = std::max(
                    worst_circle, std::abs(cs[0] * cs[0] + cs[1] * cs[1] - 1.0));
            const Matrix i0 = standard_complex_structure(n).matrix();
            worst_standard = std::max(
                worst_standard,
                (pb.e.transpose() * j.matrix() * pb.e - i0).cwiseAbs().maxCoeff());
            worst_standard = std::max(
                worst_standard,
                (pb.f.transpose() * k.matrix() * pb.f - i0).cwiseAbs().maxCoeff());
            if ((pb.corner == 1) != (sj == sk)) corner_ok = false;
        }
        r.record("paired-bases",
                 worst_pattern < 1e-9 && worst_circle < 1e-10 && worst_standard < 1e-9 &&
                     corner_ok,
                 "pattern " + std::to_string(worst_pattern) + ", circle " +
                     std::to_string(worst_circle) + ", standard-form " +
                     std::to_string(worst_standard) + ", corner " +
                     (corner_ok ? "ok" : "wrong"),
                 {{"worst_pattern", worst_pattern},
                  {"worst_circle", worst_circle},
                  {"worst_standard_form", worst_standard}});
    });

    detail::run_check(report, "standard-signs", [&](Report& r) {
        bool ok = true;
        for (Eigen::Index n = 1; n <= 6; ++n)
            if (structure_sign(standard_complex_structure(n)) != 1) ok = false;
        const auto neg2 =
            ComplexStructure::validate(Matrix(-standard_complex_structure(2).matrix()));
        const auto neg1 =
            ComplexStructure::validate(Matrix(-standard_complex_structure(1).matrix()));
        if (structure_sign(neg2) != 1 || structure_sign(neg1) != -1) ok = false;
        r.record("standard-signs", ok, "sign of a standard or negated standard structure wrong");
    });

    report.elapsed_ms = detail::elapsed_ms_since(t0);
    return report;
}

// ---------------------------------------------------------------------------
// gcfib
// ---------------------------------------------------------------------------

inline Report gcfib_suite(const SuiteConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    Report report("gcfib", cfg.seed);
    report.tolerances = {{"embed_compatibility", 1e-9}, {"graph_roundtrip", 1e-7},
                         {"slice_spread", 1e-10}, {"tol", cfg.tol}};
    auto rng = make_rng(cfg.seed + 3);
    std::uniform_int_distribution<int> coin(0, 1);

    auto random_perp_unit = [&](const Vector& p) {
        for (;;) {
            Vector u = project_out(random_unit_vector(4, rng), {p});
            if (u.norm() > 1e-3) return Vector(u / u.norm());
        }
    };

    detail::run_check(report, "embed-compatibility", [&](Report& r) {
        double worst = 0.0;
        for (int t = 0; t < cfg.trials; ++t) {
            const Vector p = random_unit_vector(4, rng);
            const Vector u = random_perp_unit(p);
            const Vector v = random_perp_unit(p);
            const OrientedPlane pl = agreement_plane(p, u, v);
            const Bivector expected =
                dual_embed(p, u, Side::minus) + dual_embed(p, v, Side::plus);
            worst = std::max(worst, (area_form(pl) - expected).norm());
        }
        r.record("embed-compatibility", worst < 1e-9,
                 "worst deviation " + std::to_string(worst), {{"worst", worst}});
    });

    detail::run_check(report, "graph-roundtrip", [&](Report& r) {
        double worst = 0.0;
        for (const Chirality chi : {Chirality::positive, Chirality::negative}) {
            const Vector p = random_unit_vector(4, rng);
            const SphereMap f = SphereMap::contraction(
                Eigen::Vector3d(random_unit_vector(3, rng)), 0.5);
            const Fibration fib = Fibration::graph(p, f, chi);
            const Matrix frame = perp_frame(p);
            const int lookups = std::min(cfg.trials, 100);
            for (int t = 0; t < lookups; ++t) {
                const Vector x = random_unit_vector(4, rng);
                const OrientedPlane pl = fiber_of(fib, x);
                const Bivector w = area_form(pl);
                const Side dom = chi == Chirality::positive ? Side::minus : Side::plus;
                const Bivector dom_part =
                    dom == Side::minus ? anti_self_dual_part(w) : self_dual_part(w);
                Vector v = dual_embed_inverse(p, dom_part, dom);
                v.normalize();
                const Eigen::Vector3d w3 = f(frame.transpose() * v);
                const OrientedPlane expected =
                    chi == Chirality::positive
                        ? agreement_plane(p, v, Vector(frame * w3))
                        : agreement_plane(p, Vector(frame * w3), v);
                worst = std::max(worst, plane_distance(pl, expected));
            }
        }
        r.record("graph-roundtrip", worst < 1e-7, "worst deviation " + std::to_string(worst),
                 {{"worst", worst}});
    });

    detail::run_check(report, "opposite-sign-agreement", [&](Report& r) {
        bool ok = true;
        for (int t = 0; t < cfg.trials; ++t) {
            const auto j = random_complex_structure(2, 1, rng());
            const auto k = random_complex_structure(2, -1, rng());
            if (agreement_space(j, k, AgreementMode::difference).dimension != 2) ok = false;
        }
        r.record("opposite-sign-agreement", ok,
                 "an opposite-sign pair did not share exactly one circle");
    });

    detail::run_check(report, "same-sign-avoidance", [&](Report& r) {
        bool ok = true;
        for (int t = 0; t < cfg.trials; ++t) {
            const int s = coin(rng) == 1 ? 1 : -1;
            const auto j = random_complex_structure(2, s, rng());
            const auto k = random_complex_structure(2, s, rng());
            const auto dim = agreement_space(j, k, AgreementMode::difference).dimension;
            const double gap = (j.matrix() - k.matrix()).cwiseAbs().maxCoeff();
            if (dim != 0 && dim != 4) ok = false;
            if (dim == 4 && gap >= 1e-9) ok = false;
        }
        r.record("same-sign-avoidance", ok, "same-sign pair shared a circle without being equal");
    });

    detail::run_check(report, "hopf-slices", [&](Report& r) {
        double worst_spread = 0.0;
        const int structures = std::min(cfg.trials, 100);
        for (int t = 0; t < structures; ++t) {
            const int s = coin(rng) == 1 ? 1 : -1;
            const auto j = random_complex_structure(2, s, rng());
            const SlicePoint sp = hopf_slice(j, 20, rng());
            worst_spread = std::max(worst_spread, sp.spread);
            if ((s > 0) != (sp.side == Side::plus)) worst_spread = 1.0;
        }
        const SlicePoint std_slice = hopf_slice(standard_complex_structure(2), 20, rng());
        const Bivector expected{{0.5, 0, 0, 0, 0, 0.5}};
        const double std_dev = (std_slice.point - expected).norm();
        r.record("hopf-slices", worst_spread < 1e-10 && std_dev < 1e-12,
                 "worst spread " + std::to_string(worst_spread) + ", standard point off by " +
                     std::to_string(std_dev),
                 {{"worst_spread", worst_spread}, {"standard_deviation", std_dev}});
    });

    detail::run_check(report, "fibration-signs", [&](Report& r) {
        bool ok = true;
        if (fibration_sign(Fibration::hopf(standard_complex_structure(2)), cfg.seed) != 1)
            ok = false;
        Matrix refl = Matrix::Identity(4, 4);
        refl(0, 0) = -1.0;
        if (fibration_sign(
                Fibration::hopf(conjugate(standard_complex_structure(2), refl)), cfg.seed) != -1)
            ok = false;
        const Vector p = random_unit_vector(4, rng);
        const Eigen::Vector3d c(random_unit_vector(3, rng));
        if (fibration_sign(Fibration::graph(p, SphereMap::constant(c), Chirality::positive),
                           cfg.seed) != 1)
            ok = false;
        if (fibration_sign(
                Fibration::graph(p, SphereMap::contraction(c, 0.7), Chirality::negative),
                cfg.seed) != -1)
            ok = false;
        r.record("fibration-signs", ok, "a fibration sign disagreed with its chirality");
    });

    detail::run_check(report, "fiber-lookup", [&](Report& r) {
        double worst_containment = 0.0, worst_graph = 0.0;
        for (const double lambda : {0.0, 0.5, 0.9}) {
            const Vector p = random_unit_vector(4, rng);
            const Eigen::Vector3d c(random_unit_vector(3, rng));
            const SphereMap f = lambda == 0.0 ? SphereMap::constant(c)
                                              : SphereMap::contraction(c, lambda);
            for (const Chirality chi : {Chirality::positive, Chirality::negative}) {
                const Fibration fib = Fibration::graph(p, f, chi);
                const Matrix frame = perp_frame(p);
                const int lookups = std::min(cfg.trials, 50);
                for (int t = 0; t < lookups; ++t) {
                    const Vector x = random_unit_vector(4, rng);
                    const OrientedPlane pl = fiber_of(fib, x);
                    worst_containment =
                        std::max(worst_containment, pl.containment_residual(x));
                    const Bivector w = area_form(pl);
                    const Side dom = chi == Chirality::positive ? Side::minus : Side::plus;
                    const Bivector dom_part =
                        dom == Side::minus ? anti_self_dual_part(w) : self_dual_part(w);
                    const Bivector cod_part =
                        dom == Side::minus ? self_dual_part(w) : anti_self_dual_part(w);
                    const Vector u = dual_embed_inverse(p, dom_part, dom);
                    const Eigen::Vector3d w3 = f(frame.transpose() * u);
                    const Bivector expected =
                        dual_embed(p, Vector(frame * w3), opposite(dom));
                    worst_graph = std::max(worst_graph, (cod_part - expected).norm());
                }
            }
        }
        r.record("fiber-lookup", worst_containment < 1e-7 && worst_graph < 1e-7,
                 "containment " + std::to_string(worst_containment) + ", graph condition " +
                     std::to_string(worst_graph),
                 {{"worst_containment", worst_containment}, {"worst_graph", worst_graph}});
    });

    detail::run_check(report, "linear-extraction", [&](Report& r) {
        bool ok = true;
        const auto j = random_complex_structure(2, 1, rng());
        const auto recovered =
            extract_linear_structure(Fibration::hopf(j), 30, rng());
        if ((recovered.matrix() - j.matrix()).cwiseAbs().maxCoeff() > 1e-8) ok = false;

        const Vector p = random_unit_vector(4, rng);
        const Eigen::Vector3d c(random_unit_vector(3, rng));
        const auto from_constant = extract_linear_structure(
            Fibration::graph(p, SphereMap::constant(c), Chirality::positive), 30, rng());
        if (structure_sign(from_constant) != 1) ok = false;

        bool threw = false;
        try {
            extract_linear_structure(
                Fibration::graph(p, SphereMap::contraction(c, 0.5), Chirality::positive), 30,
                rng());
        } catch (const NotLinear&) {
            threw = true;
        }
        if (!threw) ok = false;
        r.record("linear-extraction", ok,
                 "rotation fit misbehaved on a Hopf, constant-graph or contraction fibration");
    });

    detail::run_check(report, "expanding-map-negative-control", [&](Report& r) {
        SphereMap bad;
        bad.kind = SphereMap::Kind::contraction;
        bad.target = Eigen::Vector3d(random_unit_vector(3, rng));
        bad.lambda = 1.2;  // deliberately not distance-decreasing
        const Fibration fib = Fibration::graph_unchecked(random_unit_vector(4, rng), bad,
                                                         Chirality::positive);
        const Report inner = verify_fibration(fib, 40, rng());
        r.record("expanding-map-negative-control", inner.failures() > 0,
                 "an expanding map passed fibration verification");
    });

    detail::run_check(report, "hopf-and-graph-verification", [&](Report& r) {
        const Report hopf_rep =
            verify_fibration(Fibration::hopf(standard_complex_structure(2)), 40, rng());
        const Fibration graph_fib = Fibration::graph(
            random_unit_vector(4, rng),
            SphereMap::contraction(Eigen::Vector3d(random_unit_vector(3, rng)), 0.7),
            Chirality::positive);
        const Report graph_rep = verify_fibration(graph_fib, 40, rng());
        r.record("hopf-and-graph-verification",
                 hopf_rep.all_passed() && graph_rep.all_passed(),
                 "verification reported " +
                     std::to_string(hopf_rep.failures() + graph_rep.failures()) + " failures");
    });

    detail::run_check(report, "distance-decreasing-report", [&](Report& r) {
        const Eigen::Vector3d c(random_unit_vector(3, rng));
        const auto constant = is_distance_decreasing(SphereMap::constant(c), 200, rng());
        const auto half = is_distance_decreasing(SphereMap::contraction(c, 0.5), 2000, rng());
        const auto extreme =
            is_distance_decreasing(SphereMap::contraction(c, 0.999), 10000, rng());
        const bool ok = constant.ok && constant.worst_ratio == 0.0 && half.ok &&
                        half.worst_ratio < 0.51 && extreme.ok;
        r.record("distance-decreasing-report", ok,
                 "ratios: constant " + std::to_string(constant.worst_ratio) + ", half " +
                     std::to_string(half.worst_ratio) + ", extreme " +
                     std::to_string(extreme.worst_ratio),
                 {{"half_worst", half.worst_ratio}, {"extreme_worst", extreme.worst_ratio}});
    });

    report.elapsed_ms = detail::elapsed_ms_since(t0);
    return report;
}

// ---------------------------------------------------------------------------
// quat
// ---------------------------------------------------------------------------

inline Report quat_suite(const SuiteConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    Report report("quat", cfg.seed);
    report.tolerances = {{"witness_residual", 1e-10}, {"projector_gap", 1e-8}, {"tol", cfg.tol}};
    auto rng = make_rng(cfg.seed + 4);

    detail::run_check(report, "nonexistence-certificate", [&](Report& r) {
        const Report inner = s7_nonexistence_report();
        for (const Check& c : inner.checks) r.checks.push_back(c);
    });

    detail::run_check(report, "nonuniqueness-reproduction", [&](Report& r) {
        const QuatStructure q1 = standard_quaternionic(2);
        Matrix t = Matrix::Identity(8, 8);
        t.block(4, 4, 4, 4) = left_quaternion_i();
        const QuatStructure q2 = conjugate(q1, t);

        Matrix expected_j = Matrix::Zero(8, 8);
        expected_j.block(0, 0, 4, 4) = left_quaternion_j();
        expected_j.block(4, 4, 4, 4) = -left_quaternion_j();
        Matrix expected_k = Matrix::Zero(8, 8);
        expected_k.block(0, 0, 4, 4) = left_quaternion_k();
        expected_k.block(4, 4, 4, 4) = -left_quaternion_k();

        const bool blocks_exact =
            (q2.i().matrix() - q1.i().matrix()).cwiseAbs().maxCoeff() == 0.0 &&
            (q2.j().matrix() - expected_j).cwiseAbs().maxCoeff() == 0.0 &&
            (q2.k().matrix() - expected_k).cwiseAbs().maxCoeff() == 0.0;

        const Vector e1 = Vector::Unit(8, 0);
        const Vector e5 = Vector::Unit(8, 4);
        Vector r_mid = Vector::Zero(8);
        r_mid(0) = r_mid(4) = 1.0 / std::sqrt(2.0);

        const bool shares = fibers_agree(q1, q2, e1) == FiberAgreement::agree_oriented &&
                            fibers_agree(q1, q2, e5) == FiberAgreement::agree_oriented;
        const double mid_gap = (fiber_space(q1, r_mid).projector() -
                                fiber_space(q2, r_mid).projector())
                                   .cwiseAbs()
                                   .maxCoeff();
        r.record("nonuniqueness-reproduction",
                 blocks_exact && shares && mid_gap > 0.1 &&
                     fibers_agree(q1, q2, r_mid) == FiberAgreement::disagree,
                 "conjugated blocks, shared fibers or midpoint separation wrong",
                 {{"midpoint_projector_gap", mid_gap}});
    });

    detail::run_check(report, "detector-law", [&](Report& r) {
        Eigen::Index min_dim = 1000;
        for (int t = 0; t < cfg.trials; ++t) {
            const QuatStructure base = standard_quaternionic(1);
            const QuatStructure q1 = conjugate(base, random_orthogonal(4, 1, rng()));
            const QuatStructure q2 = conjugate(base, random_orthogonal(4, -1, rng()));
            min_dim = std::min(min_dim, triple_kernel(q1, q2).dimension);
        }
        r.record("detector-law", min_dim >= 1,
                 "triple kernel dimension dropped to " + std::to_string(min_dim),
                 {{"min_dimension", static_cast<double>(min_dim)}});
    });

    detail::run_check(report, "detector-witnesses", [&](Report& r) {
        std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
        double worst = 0.0;
        for (int t = 0; t < 100; ++t) {
            const double theta = angle(rng);
            const double c = std::cos(theta), s = std::sin(theta);
            Matrix q = Matrix::Zero(4, 4);
            q(0, 0) = 1.0;
            q(1, 1) = -1.0;
            q(2, 2) = c;
            q(2, 3) = -s;
            q(3, 2) = s;
            q(3, 3) = c;
            Vector w1(4), w2(4);
            w1 << -s, 1.0 + c, 0.0, 0.0;
            w2 << 1.0 - c, -s, 0.0, 0.0;
            for (const Matrix& l : {left_quaternion_i(), left_quaternion_j(),
                                    left_quaternion_k()}) {
                const Matrix sum = q * l + l * q;
                worst = std::max(worst, (sum * w1).cwiseAbs().maxCoeff());
                worst = std::max(worst, (sum * w2).cwiseAbs().maxCoeff());
            }
        }
        r.record("detector-witnesses", worst < 1e-10,
                 "worst witness residual " + std::to_string(worst), {{"worst", worst}});
    });

    detail::run_check(report, "sign-coherence", [&](Report& r) {
        bool ok = true;
        std::uniform_int_distribution<int> coin(0, 1);
        for (int t = 0; t < cfg.trials; ++t) {
            const Eigen::Index n = 1 + static_cast<Eigen::Index>(t % 2);
            const int s = coin(rng) == 1 ? 1 : -1;
            const QuatStructure q =
                conjugate(standard_quaternionic(n), random_orthogonal(4 * n, s, rng()));
            const int qs = quaternionic_sign(q);
            if (qs != s || qs != structure_sign(q.i()) || qs != structure_sign(q.j()) ||
                qs != structure_sign(q.k()))
                ok = false;
        }
        r.record("sign-coherence", ok,
                 "quaternionic sign disagreed with a factor sign or the conjugator");
    });

    detail::run_check(report, "surjectivity-sample", [&](Report& r) {
        double worst = 0.0;
        for (int t = 0; t < cfg.trials; ++t) {
            const Eigen::Index n = 1 + static_cast<Eigen::Index>(t % 2);
            const QuatStructure base = standard_quaternionic(n);
            const Matrix t_mat = random_orthogonal(4 * n, t % 2 == 0 ? 1 : -1, rng());
            const QuatStructure q = conjugate(base, t_mat);  // validates internally
            const Vector p = random_unit_vector(4 * n, rng);
            const Matrix lhs = fiber_space(q, Vector(t_mat * p)).basis;
            const Matrix rhs = t_mat * fiber_space(base, p).basis;
            worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff());
        }
        r.record("surjectivity-sample", worst < 1e-9,
                 "worst frame deviation " + std::to_string(worst), {{"worst", worst}});
    });

    detail::run_check(report, "agreement-locus-nonlinear", [&](Report& r) {
        const QuatStructure q1 = standard_quaternionic(2);
        Matrix t = Matrix::Identity(8, 8);
        t.block(4, 4, 4, 4) = left_quaternion_i();
        const QuatStructure q2 = conjugate(q1, t);
        const Vector e1 = Vector::Unit(8, 0);
        const Vector e5 = Vector::Unit(8, 4);
        Vector mid = Vector::Zero(8);
        mid(0) = mid(4) = 1.0 / std::sqrt(2.0);
        const bool ok = fibers_agree(q1, q2, e1) != FiberAgreement::disagree &&
                        fibers_agree(q1, q2, e5) != FiberAgreement::disagree &&
                        fibers_agree(q1, q2, mid) == FiberAgreement::disagree;
        r.record("agreement-locus-nonlinear", ok,
                 "agreement locus behaved linearly across e1, e5 and their midpoint");
    });

    detail::run_check(report, "shared-fiber-probe", [&](Report& r) {
        // pair sharing exactly the span of the first four coordinates
        const QuatStructure q1 = standard_quaternionic(2);
        Matrix t = Matrix::Identity(8, 8);
        t(4, 4) = -1.0;
        const QuatStructure q2 = conjugate(q1, t);
        const Report constructed = shared_fiber_probe(q1, q2, std::min(cfg.trials, 100),
                                                      rng());
        bool found_expected = true;
        if (fibers_agree(q1, q2, Vector(Vector::Unit(8, 0))) !=
            FiberAgreement::agree_oriented)
            found_expected = false;

        // the nonexistence pair reports no oriented agreements
        Matrix q8 = Matrix::Identity(8, 8);
        q8(0, 0) = -1.0;
        q8(3, 3) = 0.0;
        q8(3, 4) = -1.0;
        q8(4, 3) = 1.0;
        q8(4, 4) = 0.0;
        const QuatStructure nx = conjugate(q1, q8);
        const Report empty_probe = shared_fiber_probe(q1, nx, std::min(cfg.trials, 100),
                                                      rng());
        const bool none_found =
            empty_probe.all_passed() &&
            empty_probe.checks.at(0).stats.at("agreement_count") == 0.0;

        r.record("shared-fiber-probe",
                 constructed.all_passed() && found_expected && none_found,
                 "probe consistency failed on a constructed or counterexample pair");
    });

    report.elapsed_ms = detail::elapsed_ms_since(t0);
    return report;
}

// ---------------------------------------------------------------------------

inline Report run_suite(const std::string& name, const SuiteConfig& cfg) {
    if (name == "exterior") return exterior_suite(cfg);
    if (name == "grassmann") return grassmann_suite(cfg);
    if (name == "ocs") return ocs_suite(cfg);
    if (name == "gcfib") return gcfib_suite(cfg);
    if (name == "quat") return quat_suite(cfg);
    if (name == "all") {
        const auto t0 = std::chrono::steady_clock::now();
        Report merged("all", cfg.seed);
        for (const char* sub : {"exterior", "grassmann", "ocs", "gcfib", "quat"})
            merged.append(run_suite(sub, cfg), sub);
        merged.elapsed_ms = detail::elapsed_ms_since(t0);
        return merged;
    }
    throw std::invalid_argument("unknown suite: " + name);
}

}  // namespace fibrate
