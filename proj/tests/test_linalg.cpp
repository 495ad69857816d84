#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bn/linalg.hpp"

using namespace bn;

namespace {

Mat make(std::size_t r, std::size_t c, std::initializer_list<int> vals) {
    Mat m(r, c);
    auto it = vals.begin();
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) m(i, j) = Scalar(*it++);
    return m;
}

}  // namespace

TEST_CASE("rank, kernel and rank-nullity") {
    Mat m = make(3, 4, {1, 2, 3, 4, 2, 4, 6, 8, 0, 1, 1, 0});
    CHECK(m.rank() == 2);
    auto ker = m.kernel();
    CHECK(ker.size() == 2);
    for (const auto& v : ker) {
        auto mv = m.apply(v);
        for (const auto& s : mv) CHECK(s.is_zero());
    }
    CHECK(span_rank(ker) == 2);
}

TEST_CASE("inverse over Q(i)") {
    Mat m(2, 2);
    m(0, 0) = Scalar(1);
    m(0, 1) = Scalar::i();
    m(1, 0) = Scalar(0);
    m(1, 1) = Scalar(Rational(1, 2));
    CHECK(m * m.inverse() == Mat::identity(2));
    CHECK(m.inverse() * m == Mat::identity(2));
    Mat sing = make(2, 2, {1, 2, 2, 4});
    CHECK_THROWS_AS(sing.inverse(), BnError);
}

TEST_CASE("signature of symmetric matrices") {
    Mat g = make(3, 3, {0, 1, 0, 1, 0, 0, 0, 0, 5});
    auto [p, q] = g.signature();
    CHECK(p == 2);
    CHECK(q == 1);
    Mat h = make(2, 2, {-1, 0, 0, -3});
    auto [p2, q2] = h.signature();
    CHECK(p2 == 0);
    CHECK(q2 == 2);
    // congruence invariance: S^T g S has the same signature for invertible S
    Mat s = make(3, 3, {1, 2, 0, 0, 1, 3, 1, 0, 1});
    auto [p3, q3] = (s.transpose() * g * s).signature();
    CHECK(p3 == 2);
    CHECK(q3 == 1);
}

TEST_CASE("span helpers") {
    std::vector<std::vector<Scalar>> space = {{Scalar(1), Scalar(0), Scalar(1)},
                                              {Scalar(0), Scalar(1), Scalar(1)}};
    CHECK(span_contains(space, {{Scalar(2), Scalar(3), Scalar(5)}}));
    CHECK(!span_contains(space, {{Scalar(0), Scalar(0), Scalar(1)}}));
    CHECK(span_rank(space) == 2);
}

TEST_CASE("polynomial matrices: derivative, eval, commutators") {
    PolyMat a(2, 2, 1);
    a(0, 0) = Polynomial::variable(1, 0);          // x1
    a(0, 1) = Polynomial::constant(1, Scalar(1));  // 1
    a(1, 1) = Polynomial::variable(1, 0) * Polynomial::variable(1, 0);
    PolyMat da = a.derivative(0);
    CHECK(da(0, 0) == Polynomial::constant(1, Scalar(1)));
    CHECK(da(1, 1) == Polynomial::variable(1, 0) * Scalar(2));
    Mat at2 = a.eval({Scalar(2)});
    CHECK(at2(0, 0) == Scalar(2));
    CHECK(at2(1, 1) == Scalar(4));
    PolyMat b = PolyMat::identity(2, 1) * Polynomial::variable(1, 0);
    CHECK(commutator(a, b).is_zero());
    CHECK(anticommutator(a, b) == a * b * Polynomial::constant(1, Scalar(2)));
    // Leibniz: d(ab) = (da)b + a(db)
    CHECK((a * b).derivative(0) == da * b + a * b.derivative(0));
}
