#include "fibrate/quaternionic.hpp"

#include <catch_amalgamated.hpp>

using namespace fibrate;

namespace {

Vector unit8(int i) { return Vector(Vector::Unit(8, i)); }

QuatStructure nonuniqueness_partner(const QuatStructure& base) {
    Matrix t = Matrix::Identity(8, 8);
    t.block(4, 4, 4, 4) = left_quaternion_i();
    return conjugate(base, t);
}

}  // namespace

TEST_CASE("left multiplication matrices obey the quaternion relations") {
    const Matrix li = left_quaternion_i();
    const Matrix lj = left_quaternion_j();
    const Matrix lk = left_quaternion_k();
    const Matrix id = Matrix::Identity(4, 4);
    CHECK((li * li + id).cwiseAbs().maxCoeff() == 0.0);
    CHECK((lj * lj + id).cwiseAbs().maxCoeff() == 0.0);
    CHECK((lk * lk + id).cwiseAbs().maxCoeff() == 0.0);
    CHECK((li * lj - lk).cwiseAbs().maxCoeff() == 0.0);
    CHECK((lj * lk - li).cwiseAbs().maxCoeff() == 0.0);
    CHECK((lk * li - lj).cwiseAbs().maxCoeff() == 0.0);
    CHECK((li * lj * lk + id).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("validation accepts the standard triple and rejects reorderings") {
    CHECK_NOTHROW(
        QuatStructure::validate(left_quaternion_i(), left_quaternion_j(), left_quaternion_k()));
    // swapping J and K makes IJK = +id
    CHECK_THROWS_AS(
        QuatStructure::validate(left_quaternion_i(), left_quaternion_k(), left_quaternion_j()),
        NotQuaternionic);
    CHECK_THROWS_AS(QuatStructure::validate(left_quaternion_i(), left_quaternion_j(),
                                            Matrix(-left_quaternion_k())),
                    NotQuaternionic);
}

TEST_CASE("standard quaternionic structure is exact") {
    const QuatStructure q = standard_quaternionic(2);
    const Matrix id = Matrix::Identity(8, 8);
    CHECK((q.i().matrix() * q.j().matrix() * q.k().matrix() + id).cwiseAbs().maxCoeff() ==
          0.0);
    CHECK(q.dim() == 8);
    CHECK(q.quads() == 2);
}

TEST_CASE("conjugation of quaternionic structures") {
    const QuatStructure q = standard_quaternionic(1);
    const QuatStructure same = conjugate(q, Matrix::Identity(4, 4));
    CHECK((same.i().matrix() - q.i().matrix()).cwiseAbs().maxCoeff() == 0.0);

    // the displayed nonuniqueness partner has J and K blocks negated below
    const QuatStructure q2 = nonuniqueness_partner(standard_quaternionic(2));
    Matrix expected_j = Matrix::Zero(8, 8);
    expected_j.block(0, 0, 4, 4) = left_quaternion_j();
    expected_j.block(4, 4, 4, 4) = -left_quaternion_j();
    Matrix expected_k = Matrix::Zero(8, 8);
    expected_k.block(0, 0, 4, 4) = left_quaternion_k();
    expected_k.block(4, 4, 4, 4) = -left_quaternion_k();
    CHECK((q2.i().matrix() - standard_quaternionic(2).i().matrix()).cwiseAbs().maxCoeff() ==
          0.0);
    CHECK((q2.j().matrix() - expected_j).cwiseAbs().maxCoeff() == 0.0);
    CHECK((q2.k().matrix() - expected_k).cwiseAbs().maxCoeff() == 0.0);

    auto rng = make_rng(61);
    for (int t = 0; t < 200; ++t) {
        const Eigen::Index n = 1 + static_cast<Eigen::Index>(t % 2);
        const Matrix t_mat = random_orthogonal(4 * n, t % 2 == 0 ? 1 : -1, rng());
        CHECK_NOTHROW(conjugate(standard_quaternionic(n), t_mat));
    }
}

TEST_CASE("quaternionic sign") {
    CHECK(quaternionic_sign(standard_quaternionic(1)) == 1);
    CHECK(quaternionic_sign(standard_quaternionic(2)) == 1);

    Matrix reflect = Matrix::Identity(4, 4);
    reflect(0, 0) = -1.0;
    CHECK(quaternionic_sign(conjugate(standard_quaternionic(1), reflect)) == -1);

    auto rng = make_rng(62);
    for (int t = 0; t < 200; ++t) {
        const Eigen::Index n = 1 + static_cast<Eigen::Index>(t % 2);
        const int s = t % 2 == 0 ? 1 : -1;
        const QuatStructure q =
            conjugate(standard_quaternionic(n), random_orthogonal(4 * n, s, rng()));
        const int qs = quaternionic_sign(q);
        CHECK(qs == s);
        CHECK(qs == structure_sign(q.i()));
        CHECK(qs == structure_sign(q.j()));
        CHECK(qs == structure_sign(q.k()));
    }
}

TEST_CASE("fiber spaces") {
    const QuatStructure q = standard_quaternionic(2);
    const Plane4 first = fiber_space(q, unit8(0));
    Matrix top = Matrix::Zero(8, 4);
    top.block(0, 0, 4, 4) = Matrix::Identity(4, 4);
    CHECK((first.projector() - top * top.transpose()).cwiseAbs().maxCoeff() == 0.0);

    const Plane4 second = fiber_space(q, unit8(4));
    Matrix bottom = Matrix::Zero(8, 4);
    bottom.block(4, 0, 4, 4) = Matrix::Identity(4, 4);
    CHECK((second.projector() - bottom * bottom.transpose()).cwiseAbs().maxCoeff() == 0.0);

    auto rng = make_rng(63);
    for (int t = 0; t < 100; ++t) {
        const QuatStructure r =
            conjugate(standard_quaternionic(2), random_orthogonal(8, 1, rng()));
        const Vector p = random_unit_vector(8, rng);
        const Matrix b = fiber_space(r, p).basis;
        CHECK((b.transpose() * b - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("fiber agreement on the nonuniqueness pair") {
    const QuatStructure q1 = standard_quaternionic(2);
    const QuatStructure q2 = nonuniqueness_partner(q1);

    CHECK(fibers_agree(q1, q2, unit8(0)) == FiberAgreement::agree_oriented);
    CHECK(fibers_agree(q1, q2, unit8(4)) == FiberAgreement::agree_oriented);

    Vector mid = Vector::Zero(8);
    mid(0) = mid(4) = 1.0 / std::sqrt(2.0);
    CHECK(fibers_agree(q1, q2, mid) == FiberAgreement::disagree);
    const double gap = (fiber_space(q1, mid).projector() - fiber_space(q2, mid).projector())
                           .cwiseAbs()
                           .maxCoeff();
    CHECK(gap > 0.1);

    CHECK(fibers_agree(q1, q1, random_unit_vector(8, 64)) == FiberAgreement::agree_oriented);
}

TEST_CASE("triple kernel detects shared invariant spaces") {
    auto rng = make_rng(65);
    for (int t = 0; t < 300; ++t) {
        const QuatStructure q1 =
            conjugate(standard_quaternionic(1), random_orthogonal(4, 1, rng()));
        const QuatStructure q2 =
            conjugate(standard_quaternionic(1), random_orthogonal(4, -1, rng()));
        CHECK(triple_kernel(q1, q2).dimension >= 1);
    }
}

TEST_CASE("detector witnesses solve all three kernels") {
    auto rng = make_rng(66);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
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
        CHECK(w1.norm() + w2.norm() > 0.5);  // never both zero
        for (const Matrix& l :
             {left_quaternion_i(), left_quaternion_j(), left_quaternion_k()}) {
            const Matrix sum = q * l + l * q;
            CHECK((sum * w1).cwiseAbs().maxCoeff() < 1e-10);
            CHECK((sum * w2).cwiseAbs().maxCoeff() < 1e-10);
        }
    }
}

TEST_CASE("nonexistence certificate") {
    const Report report = s7_nonexistence_report();
    for (const Check& c : report.checks) {
        INFO(c.name << ": " << c.details);
        CHECK(c.status == CheckStatus::pass);
    }

    // the three kernels pinned directly
    Matrix q = Matrix::Identity(8, 8);
    q(0, 0) = -1.0;
    q(3, 3) = 0.0;
    q(3, 4) = -1.0;
    q(4, 3) = 1.0;
    q(4, 4) = 0.0;
    const QuatStructure plus = standard_quaternionic(2);
    const Matrix sum_i = q * plus.i().matrix() + plus.i().matrix() * q;
    const Matrix sum_j = q * plus.j().matrix() + plus.j().matrix() * q;
    const Matrix sum_k = q * plus.k().matrix() + plus.k().matrix() * q;

    CHECK((sum_i * unit8(0)).cwiseAbs().maxCoeff() == 0.0);
    CHECK((sum_i * unit8(1)).cwiseAbs().maxCoeff() == 0.0);
    CHECK(kernel(sum_i).dimension == 2);

    CHECK((sum_j * unit8(0)).cwiseAbs().maxCoeff() == 0.0);
    CHECK((sum_j * unit8(2)).cwiseAbs().maxCoeff() == 0.0);
    CHECK(kernel(sum_j).dimension == 2);

    CHECK((sum_k * Vector(unit8(0) + unit8(7))).cwiseAbs().maxCoeff() == 0.0);
    CHECK((sum_k * Vector(unit8(3) - unit8(4))).cwiseAbs().maxCoeff() == 0.0);
    CHECK(kernel(sum_k).dimension == 2);

    const QuatStructure minus = conjugate(plus, q);
    CHECK(triple_kernel(plus, minus).dimension == 0);
    CHECK(quaternionic_sign(minus) == -1);
}

TEST_CASE("shared fiber probe") {
    const QuatStructure q1 = standard_quaternionic(2);

    // reflection fixing the leading 4-space: fibers agree exactly there
    Matrix t = Matrix::Identity(8, 8);
    t(4, 4) = -1.0;
    const QuatStructure q2 = conjugate(q1, t);
    REQUIRE(quaternionic_sign(q2) == -1);
    const Report probe = shared_fiber_probe(q1, q2, 50, 3);
    CHECK(probe.all_passed());
    CHECK(probe.checks.at(0).stats.at("agreement_count") >= 4.0);

    // the counterexample pair yields no oriented agreements
    Matrix q8 = Matrix::Identity(8, 8);
    q8(0, 0) = -1.0;
    q8(3, 3) = 0.0;
    q8(3, 4) = -1.0;
    q8(4, 3) = 1.0;
    q8(4, 4) = 0.0;
    const Report empty = shared_fiber_probe(q1, conjugate(q1, q8), 50, 3);
    CHECK(empty.all_passed());
    CHECK(empty.checks.at(0).stats.at("agreement_count") == 0.0);

    CHECK_THROWS_AS(shared_fiber_probe(q1, q1, 10, 0), std::invalid_argument);
}

TEST_CASE("surjectivity sample") {
    auto rng = make_rng(67);
    for (int t = 0; t < 100; ++t) {
        const QuatStructure base = standard_quaternionic(2);
        const Matrix t_mat = random_orthogonal(8, t % 2 == 0 ? 1 : -1, rng());
        const QuatStructure q = conjugate(base, t_mat);
        const Vector p = random_unit_vector(8, rng);
        const Matrix lhs = fiber_space(q, Vector(t_mat * p)).basis;
        const Matrix rhs = t_mat * fiber_space(base, p).basis;
        CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-9);
    }
}
