#include "fibrate/json_io.hpp"

#include <catch_amalgamated.hpp>

using namespace fibrate;

TEST_CASE("matrix json round trip is exact for integer matrices") {
    Matrix m(2, 3);
    m << 1, -2, 3, 4, 0, -7;
    const Matrix back = matrix_from_json(matrix_to_json(m));
    CHECK((back - m).cwiseAbs().maxCoeff() == 0.0);

    auto rng = make_rng(71);
    const Matrix g = gaussian_matrix(5, 4, rng);
    CHECK((matrix_from_json(matrix_to_json(g)) - g).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("matrix json names offending fields") {
    try {
        matrix_from_json(json{{"rows", 2}, {"cols", 2}});
        FAIL("expected SchemaError");
    } catch (const SchemaError& e) {
        CHECK(e.field() == "data");
    }
    try {
        matrix_from_json(json{{"rows", 2}, {"cols", 2}, {"data", {1, 2, 3}}});
        FAIL("expected SchemaError");
    } catch (const SchemaError& e) {
        CHECK(e.field() == "data");
    }
    CHECK_THROWS_AS(
        matrix_from_json(json{{"schema", 5}, {"rows", 1}, {"cols", 1}, {"data", {1}}}),
        SchemaError);
}

TEST_CASE("bivector and plane round trips") {
    const Bivector a{{0.5, -1, 2, 0, 3, -0.25}};
    CHECK((bivector_from_json(bivector_to_json(a)) - a).norm() == 0.0);

    auto rng = make_rng(72);
    const OrientedPlane p = plane(random_unit_vector(4, rng), random_unit_vector(4, rng));
    const OrientedPlane back = plane_from_json(plane_to_json(p));
    CHECK(plane_distance(p, back) < 1e-14);

    CHECK_THROWS_AS(bivector_from_json(json{{"coords", {1, 2}}}), SchemaError);
    CHECK_THROWS_AS(plane_from_json(json{{"u", {1, 0, 0, 0}}, {"v", {2, 0, 0, 0}}}),
                    SchemaError);
}

TEST_CASE("complex structure json validates on load") {
    const auto j = random_complex_structure(2, -1, 9);
    const auto back = complex_structure_from_json(complex_structure_to_json(j));
    CHECK((back.matrix() - j.matrix()).cwiseAbs().maxCoeff() == 0.0);

    json broken = complex_structure_to_json(j);
    broken["data"][0] = 7.0;
    CHECK_THROWS_AS(complex_structure_from_json(broken), SchemaError);
}

TEST_CASE("quaternionic structure json round trip") {
    const QuatStructure q = standard_quaternionic(2);
    const QuatStructure back = quat_structure_from_json(quat_structure_to_json(q));
    CHECK((back.i().matrix() - q.i().matrix()).cwiseAbs().maxCoeff() == 0.0);
    CHECK((back.j().matrix() - q.j().matrix()).cwiseAbs().maxCoeff() == 0.0);
    CHECK((back.k().matrix() - q.k().matrix()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("fibration json round trips both variants") {
    const Fibration hopf = Fibration::hopf(standard_complex_structure(2));
    const Fibration hopf_back = fibration_from_json(fibration_to_json(hopf));
    REQUIRE(hopf_back.is_hopf());
    CHECK((hopf_back.structure().matrix() - hopf.structure().matrix())
              .cwiseAbs()
              .maxCoeff() == 0.0);

    auto rng = make_rng(73);
    const Vector p = random_unit_vector(4, rng);
    const Eigen::Matrix3d rot(random_orthogonal(3, 1, 5));
    const SphereMap f =
        SphereMap::contraction(Eigen::Vector3d(random_unit_vector(3, rng)), 0.5, rot);
    const Fibration graph = Fibration::graph(p, f, Chirality::negative);
    const Fibration graph_back = fibration_from_json(fibration_to_json(graph));
    REQUIRE_FALSE(graph_back.is_hopf());
    CHECK((graph_back.basepoint() - p).cwiseAbs().maxCoeff() == 0.0);
    CHECK(graph_back.chirality() == Chirality::negative);
    CHECK(graph_back.map().lambda == 0.5);
    CHECK((graph_back.map().rotation - rot).cwiseAbs().maxCoeff() == 0.0);

    // lookups agree after the round trip
    const Vector x = random_unit_vector(4, rng);
    CHECK(plane_distance(fiber_of(graph, x), fiber_of(graph_back, x)) < 1e-10);
}

TEST_CASE("fibration json rejects malformed specs") {
    json bad = fibration_to_json(Fibration::hopf(standard_complex_structure(2)));
    bad["variant"] = "spiral";
    CHECK_THROWS_AS(fibration_from_json(bad), SchemaError);

    json graph{{"variant", "graph"},
               {"p", {1, 0, 0, 0}},
               {"chirality", "positive"},
               {"map", {{"kind", "contraction"}, {"c", {1, 0, 0}}, {"lambda", 1.5}}}};
    try {
        fibration_from_json(graph);
        FAIL("expected SchemaError");
    } catch (const SchemaError& e) {
        CHECK(e.field() == "lambda");
    }
}

TEST_CASE("report json carries the schema and check fields") {
    Report r("demo", 11);
    r.tolerances["x"] = 1e-9;
    r.pass("first", "", {{"stat", 2.0}});
    r.fail("second", "broke");
    const json j = report_to_json(r);
    CHECK(j["schema"] == 1);
    CHECK(j["suite"] == "demo");
    CHECK(j["checks"].size() == 2);
    CHECK(j["checks"][0]["status"] == "pass");
    CHECK(j["checks"][1]["status"] == "fail");
    CHECK(j["checks"][1]["details"] == "broke");
}
