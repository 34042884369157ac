#include "fibrate/fibration.hpp"

#include <catch_amalgamated.hpp>

using namespace fibrate;

namespace {

Vector unit4(int i) { return Vector(Vector::Unit(4, i)); }

Vector random_perp_unit(const Vector& p, std::mt19937_64& rng) {
    for (;;) {
        Vector u = project_out(random_unit_vector(4, rng), {p});
        if (u.norm() > 1e-3) return Vector(u / u.norm());
    }
}

Eigen::Matrix3d random_rotation3(std::mt19937_64& rng) {
    const Matrix t = random_orthogonal(3, 1, rng());
    Eigen::Matrix3d r;
    r = t;
    return r;
}

}  // namespace

TEST_CASE("sphere map families") {
    auto rng = make_rng(41);
    const Eigen::Vector3d c(random_unit_vector(3, rng));

    const SphereMap constant = SphereMap::constant(c);
    const auto rep0 = is_distance_decreasing(constant, 500, 1);
    CHECK(rep0.ok);
    CHECK(rep0.worst_ratio == 0.0);

    const SphereMap half = SphereMap::contraction(c, 0.5, random_rotation3(rng));
    const auto rep1 = is_distance_decreasing(half, 5000, 2);
    CHECK(rep1.ok);
    CHECK(rep1.worst_ratio < 0.51);

    const SphereMap extreme = SphereMap::contraction(c, 0.999);
    const auto rep2 = is_distance_decreasing(extreme, 10000, 3);
    CHECK(rep2.ok);

    CHECK_THROWS_AS(SphereMap::contraction(c, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(SphereMap::contraction(Eigen::Vector3d(2, 0, 0), 0.5),
                    std::invalid_argument);
}

TEST_CASE("perp frame is deterministic and oriented") {
    auto rng = make_rng(42);
    for (int t = 0; t < 50; ++t) {
        const Vector p = random_unit_vector(4, rng);
        const Matrix f = perp_frame(p);
        CHECK((f.transpose() * f - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((f.transpose() * p).cwiseAbs().maxCoeff() < 1e-12);
        Matrix full(4, 4);
        full.col(0) = p;
        full.rightCols(3) = f;
        CHECK(full.determinant() > 0.0);
        CHECK((perp_frame(p) - f).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("rotate90 on a Hopf fibration") {
    const Fibration hopf = Fibration::hopf(standard_complex_structure(2));
    CHECK((rotate90(hopf, unit4(0)) - unit4(1)).norm() == 0.0);

    auto rng = make_rng(43);
    for (int t = 0; t < 20; ++t) {
        const Vector x = random_unit_vector(4, rng);
        const Vector once = rotate90(hopf, x);
        CHECK(std::abs(once.dot(x)) < 1e-10);
        CHECK((rotate90(hopf, once) + x).norm() < 1e-8);
    }
}

TEST_CASE("agreement plane compatibility") {
    auto rng = make_rng(44);
    for (int t = 0; t < 300; ++t) {
        const Vector p = random_unit_vector(4, rng);
        const Vector u = random_perp_unit(p, rng);
        const Vector v = random_perp_unit(p, rng);
        const OrientedPlane pl = agreement_plane(p, u, v);
        const Bivector expected = dual_embed(p, u, Side::minus) + dual_embed(p, v, Side::plus);
        CHECK((area_form(pl) - expected).norm() < 1e-9);
    }
    // u = v collapses to the plane through p and u
    const Vector p = random_unit_vector(4, rng);
    const Vector u = random_perp_unit(p, rng);
    CHECK(same_plane(agreement_plane(p, u, u), plane(p, u), 1e-9));
    CHECK(same_plane(agreement_plane(unit4(0), unit4(1), unit4(1)),
                     plane(unit4(0), unit4(1)), 1e-12));
}

TEST_CASE("hopf through a plane") {
    const auto j_pos = hopf_through(plane(unit4(0), unit4(1)), 1);
    CHECK((j_pos.matrix() - standard_complex_structure(2).matrix()).cwiseAbs().maxCoeff() <
          1e-14);

    const auto j_neg = hopf_through(plane(unit4(0), unit4(1)), -1);
    CHECK((j_neg.apply(unit4(0)) - unit4(1)).norm() < 1e-14);
    CHECK((j_neg.apply(unit4(2)) + unit4(3)).norm() < 1e-14);
    CHECK(structure_sign(j_neg) == -1);

    auto rng = make_rng(45);
    for (int t = 0; t < 100; ++t) {
        const OrientedPlane p = plane(random_unit_vector(4, rng), random_unit_vector(4, rng));
        for (const int sign : {1, -1}) {
            const auto j = hopf_through(p, sign);
            CHECK(structure_sign(j) == sign);
            CHECK(plane_distance(fiber_plane(j, p.u), p) < 1e-9);
        }
    }
}

TEST_CASE("fiber lookup on Hopf fibrations") {
    const Fibration hopf = Fibration::hopf(standard_complex_structure(2));
    CHECK(same_plane(fiber_of(hopf, unit4(2)), plane(unit4(2), unit4(3)), 1e-12));
}

TEST_CASE("fiber lookup on a constant graph fibration") {
    auto rng = make_rng(46);
    const Vector p = random_unit_vector(4, rng);
    const Eigen::Vector3d c(random_unit_vector(3, rng));
    const Fibration fib = Fibration::graph(p, SphereMap::constant(c), Chirality::positive);

    // the fiber through the base point is the plane spanned by p and the
    // target mapped out of frame coordinates
    const Vector c_vec = perp_frame(p) * c;
    const OrientedPlane through_p = fiber_of(fib, p);
    CHECK(through_p.containment_residual(p) < 1e-9);
    CHECK(same_plane(through_p, plane(p, c_vec), 1e-8));
}

TEST_CASE("fiber lookup converges across the contraction family") {
    auto rng = make_rng(47);
    const Vector p = random_unit_vector(4, rng);
    const Eigen::Vector3d c(random_unit_vector(3, rng));
    const Eigen::Matrix3d rot = random_rotation3(rng);
    for (const Chirality chi : {Chirality::positive, Chirality::negative}) {
        const Fibration fib =
            Fibration::graph(p, SphereMap::contraction(c, 0.5, rot), chi);
        const Matrix frame = perp_frame(p);
        for (int t = 0; t < 100; ++t) {
            const Vector x = random_unit_vector(4, rng);
            const OrientedPlane pl = fiber_of(fib, x, 1e-12, 200);
            CHECK(pl.containment_residual(x) < 1e-7);

            // graph condition: the codomain part is the image of the domain part
            const Bivector w = area_form(pl);
            const Side dom = chi == Chirality::positive ? Side::minus : Side::plus;
            const Bivector dom_part =
                dom == Side::minus ? anti_self_dual_part(w) : self_dual_part(w);
            const Bivector cod_part =
                dom == Side::minus ? self_dual_part(w) : anti_self_dual_part(w);
            const Vector u = dual_embed_inverse(p, dom_part, dom);
            const Eigen::Vector3d w3 = fib.map()(frame.transpose() * u);
            CHECK((cod_part - dual_embed(p, Vector(frame * w3), opposite(dom))).norm() < 1e-7);
        }
    }
}

TEST_CASE("fiber lookup reports non-convergence") {
    auto rng = make_rng(48);
    const Vector p = random_unit_vector(4, rng);
    const Eigen::Vector3d c(random_unit_vector(3, rng));
    const Fibration fib =
        Fibration::graph(p, SphereMap::contraction(c, 0.95), Chirality::positive);
    CHECK_THROWS_AS(fiber_of(fib, random_unit_vector(4, rng), 1e-14, 3), NoConvergence);
}

TEST_CASE("fibration signs") {
    CHECK(fibration_sign(Fibration::hopf(standard_complex_structure(2)), 1) == 1);

    Matrix reflect = Matrix::Identity(4, 4);
    reflect(0, 0) = -1.0;
    CHECK(fibration_sign(
              Fibration::hopf(conjugate(standard_complex_structure(2), reflect)), 1) == -1);

    auto rng = make_rng(49);
    const Vector p = random_unit_vector(4, rng);
    const Eigen::Vector3d c(random_unit_vector(3, rng));
    CHECK(fibration_sign(Fibration::graph(p, SphereMap::constant(c), Chirality::positive),
                         7) == 1);
    CHECK(fibration_sign(
              Fibration::graph(p, SphereMap::contraction(c, 0.7), Chirality::negative), 7) ==
          -1);

    // independent of the sampling seed
    const Fibration fib =
        Fibration::graph(p, SphereMap::contraction(c, 0.3), Chirality::positive);
    for (std::uint64_t seed = 0; seed < 10; ++seed) CHECK(fibration_sign(fib, seed) == 1);
}

TEST_CASE("graph constructor rejects expanding maps") {
    auto rng = make_rng(50);
    SphereMap bad;
    bad.kind = SphereMap::Kind::contraction;
    bad.target = Eigen::Vector3d(random_unit_vector(3, rng));
    bad.lambda = 1.2;
    CHECK_THROWS_AS(
        Fibration::graph(random_unit_vector(4, rng), bad, Chirality::positive), Error);
}

TEST_CASE("verify_fibration passes valid fibrations and flags broken ones") {
    auto rng = make_rng(51);
    const Report hopf_rep =
        verify_fibration(Fibration::hopf(standard_complex_structure(2)), 50, 3);
    CHECK(hopf_rep.all_passed());

    const Vector p = random_unit_vector(4, rng);
    const Eigen::Vector3d c(random_unit_vector(3, rng));
    const Report graph_rep = verify_fibration(
        Fibration::graph(p, SphereMap::contraction(c, 0.7), Chirality::positive), 50, 3);
    CHECK(graph_rep.all_passed());

    SphereMap bad;
    bad.kind = SphereMap::Kind::contraction;
    bad.target = c;
    bad.lambda = 1.2;
    const Report broken =
        verify_fibration(Fibration::graph_unchecked(p, bad, Chirality::positive), 50, 3);
    CHECK(broken.failures() > 0);
}

TEST_CASE("hopf slices") {
    const SlicePoint std_slice = hopf_slice(standard_complex_structure(2), 50, 1);
    CHECK(std_slice.side == Side::plus);
    CHECK(std_slice.spread < 1e-12);
    CHECK((std_slice.point - Bivector{{0.5, 0, 0, 0, 0, 0.5}}).norm() < 1e-12);

    const auto neg = hopf_through(plane(unit4(0), unit4(1)), -1);
    const SlicePoint neg_slice = hopf_slice(neg, 50, 2);
    CHECK(neg_slice.side == Side::minus);
    CHECK(neg_slice.spread < 1e-12);

    auto rng = make_rng(52);
    for (int t = 0; t < 100; ++t) {
        const auto j = random_complex_structure(2, t % 2 == 0 ? 1 : -1, rng());
        CHECK(hopf_slice(j, 20, rng()).spread < 1e-10);
    }
}

TEST_CASE("linear structure extraction") {
    auto rng = make_rng(53);
    const auto j = random_complex_structure(2, 1, rng());
    const auto recovered = extract_linear_structure(Fibration::hopf(j), 30, 5);
    CHECK((recovered.matrix() - j.matrix()).cwiseAbs().maxCoeff() < 1e-8);

    const Vector p = random_unit_vector(4, rng);
    const Eigen::Vector3d c(random_unit_vector(3, rng));
    const auto from_constant = extract_linear_structure(
        Fibration::graph(p, SphereMap::constant(c), Chirality::positive), 30, 5);
    CHECK(structure_sign(from_constant) == 1);

    CHECK_THROWS_AS(
        extract_linear_structure(
            Fibration::graph(p, SphereMap::contraction(c, 0.5), Chirality::positive), 30, 5),
        NotLinear);
}

TEST_CASE("graph fibration fibers disjoint with constant angle-difference sign") {
    auto rng = make_rng(54);
    const Vector p = random_unit_vector(4, rng);
    const Eigen::Vector3d c(random_unit_vector(3, rng));
    for (const Chirality chi : {Chirality::positive, Chirality::negative}) {
        const Fibration fib =
            Fibration::graph(p, SphereMap::contraction(c, 0.7), chi);
        const auto planes = sample_fibers(fib, 40, 11);
        int pos = 0, neg = 0;
        for (std::size_t i = 0; i < planes.size(); ++i)
            for (std::size_t j = i + 1; j < planes.size(); ++j) {
                if (plane_distance(planes[i], planes[j]) < 1e-9) continue;
                const DualAngles th = dual_angles(planes[i], planes[j]);
                CHECK(std::abs(th.plus - th.minus) > 1e-9);
                (th.plus > th.minus ? pos : neg) += 1;
            }
        CHECK((pos == 0 || neg == 0));
    }
}
