#include "fibrate/grassmann.hpp"

#include <catch_amalgamated.hpp>

using namespace fibrate;

namespace {

Vector unit4(int i) { return Vector(Vector::Unit(4, i)); }

OrientedPlane random_plane4(std::mt19937_64& rng) {
    return plane(random_unit_vector(4, rng), random_unit_vector(4, rng));
}

Vector random_perp_unit(const Vector& p, std::mt19937_64& rng) {
    for (;;) {
        Vector u = project_out(random_unit_vector(p.size(), rng), {p});
        if (u.norm() > 1e-3) return Vector(u / u.norm());
    }
}

}  // namespace

TEST_CASE("plane constructor") {
    const OrientedPlane p = plane(unit4(0), unit4(1));
    CHECK((p.u - unit4(0)).norm() == 0.0);
    CHECK((p.v - unit4(1)).norm() == 0.0);

    Vector a(4), b(4);
    a << 2, 0, 0, 0;
    b << 1, 1, 0, 0;
    const OrientedPlane q = plane(a, b);
    CHECK((q.u - unit4(0)).norm() == 0.0);
    CHECK((q.v - unit4(1)).norm() < 1e-15);

    CHECK_THROWS_AS(plane(a, Vector(2.0 * a)), DependentInput);
    // orientation reversal shows in the area form
    CHECK((area_form(plane(unit4(1), unit4(0))) + wedge(unit4(0), unit4(1))).norm() == 0.0);
}

TEST_CASE("orthogonal complement") {
    const OrientedPlane c = orthogonal_complement(plane(unit4(0), unit4(1)));
    CHECK(same_plane(c, plane(unit4(2), unit4(3)), 1e-12));

    auto rng = make_rng(21);
    for (int t = 0; t < 200; ++t) {
        const OrientedPlane p = random_plane4(rng);
        const OrientedPlane c2 = orthogonal_complement(p);
        Matrix full(4, 4);
        full.col(0) = p.u;
        full.col(1) = p.v;
        full.col(2) = c2.u;
        full.col(3) = c2.v;
        CHECK(full.determinant() > 0.0);
        CHECK(plane_distance(orthogonal_complement(c2), p) < 1e-10);
        // complement through the star operator agrees
        CHECK((hodge_star(area_form(p)) - area_form(c2)).norm() < 1e-10);
    }
}

TEST_CASE("dual angles") {
    const OrientedPlane p = plane(unit4(0), unit4(1));
    const DualAngles self = dual_angles(p, p);
    CHECK(self.minus == 0.0);
    CHECK(self.plus == 0.0);

    const DualAngles across = dual_angles(p, plane(unit4(2), unit4(3)));
    CHECK(across.minus == Catch::Approx(M_PI).margin(1e-12));
    CHECK(across.plus == Catch::Approx(0.0).margin(1e-12));

    auto rng = make_rng(22);
    for (int t = 0; t < 100; ++t) {
        const Vector x = random_unit_vector(4, rng);
        const OrientedPlane a = plane(x, random_perp_unit(x, rng));
        const OrientedPlane b = plane(x, random_perp_unit(x, rng));
        const DualAngles th = dual_angles(a, b);
        CHECK(std::abs(th.plus - th.minus) < 1e-8);
    }
}

TEST_CASE("intersection test") {
    const OrientedPlane p = plane(unit4(0), unit4(1));
    CHECK(intersects(p, p, 1e-9));
    CHECK_FALSE(intersects(p, plane(unit4(2), unit4(3)), 1e-9));
    CHECK(std::abs(inner(area_form(p), hodge_star(area_form(plane(unit4(2), unit4(3)))))) ==
          1.0);

    Vector shared(4);
    shared << 0.5, 0.5, 0.5, 0.5;
    auto rng = make_rng(23);
    const OrientedPlane a = plane(shared, random_perp_unit(shared, rng));
    const OrientedPlane b = plane(shared, random_perp_unit(shared, rng));
    CHECK(intersects(a, b, 1e-9));
}

TEST_CASE("theta criterion matches the inner-product criterion") {
    auto rng = make_rng(24);
    for (int t = 0; t < 1000; ++t) {
        OrientedPlane p = random_plane4(rng);
        OrientedPlane q = random_plane4(rng);
        if (t % 3 == 0) {
            const Vector x = random_unit_vector(4, rng);
            p = plane(x, random_perp_unit(x, rng));
            q = plane(x, random_perp_unit(x, rng));
        }
        const DualAngles th = dual_angles(p, q);
        CHECK(intersects(p, q, 1e-9) == (std::abs(th.plus - th.minus) < 1e-7));
    }
}

TEST_CASE("anchored embedding") {
    // p = e1, u = e2, minus side: (e12 - e34) / 2
    const Bivector a = dual_embed(unit4(0), unit4(1), Side::minus);
    const Bivector expected{{0.5, 0, 0, 0, 0, -0.5}};
    CHECK((a - expected).norm() < 1e-15);

    auto rng = make_rng(25);
    for (int t = 0; t < 100; ++t) {
        const Vector p = random_unit_vector(4, rng);
        const Vector u = random_perp_unit(p, rng);
        const Vector w = random_perp_unit(p, rng);
        for (const Side side : {Side::minus, Side::plus}) {
            CHECK(dual_embed(p, u, side).norm() ==
                  Catch::Approx(1.0 / std::sqrt(2.0)).margin(1e-12));
            CHECK(inner(dual_embed(p, u, side), dual_embed(p, w, side)) ==
                  Catch::Approx(u.dot(w) / 2.0).margin(1e-12));
        }
    }

    CHECK_THROWS_AS(dual_embed(unit4(0), unit4(0), Side::minus), NotOrthogonal);
}

TEST_CASE("anchored embedding inverse") {
    const Bivector a{{0.5, 0, 0, 0, 0, -0.5}};
    CHECK((dual_embed_inverse(unit4(0), a, Side::minus) - unit4(1)).norm() < 1e-12);

    auto rng = make_rng(26);
    for (int t = 0; t < 200; ++t) {
        const Vector p = random_unit_vector(4, rng);
        const Vector u = random_perp_unit(p, rng);
        for (const Side side : {Side::minus, Side::plus}) {
            const Bivector w = dual_embed(p, u, side);
            CHECK((dual_embed_inverse(p, w, side) - u).norm() < 1e-10);
            // linear under scaling
            CHECK((dual_embed_inverse(p, w * 0.3, side) - Vector(0.3 * u)).norm() < 1e-10);
        }
    }

    // anything with a component on the wrong eigenspace has no preimage
    CHECK_THROWS_AS(dual_embed_inverse(unit4(0), Bivector{{1, 0, 0, 0, 0, 1}}, Side::minus),
                    OffSphere);
}

TEST_CASE("planes through a point graph an isometry") {
    auto rng = make_rng(27);
    const Vector p = random_unit_vector(4, rng);
    std::vector<DualParts> samples;
    for (int t = 0; t < 50; ++t)
        samples.push_back(dual_split(area_form(plane(p, random_perp_unit(p, rng)))));
    for (std::size_t i = 0; i < samples.size(); ++i)
        for (std::size_t j = i + 1; j < samples.size(); ++j) {
            const double am = detail::vector_angle(to_vec6(samples[i].anti_self_dual),
                                                   to_vec6(samples[j].anti_self_dual));
            const double ap = detail::vector_angle(to_vec6(samples[i].self_dual),
                                                   to_vec6(samples[j].self_dual));
            CHECK(std::abs(am - ap) < 1e-8);
        }
}
