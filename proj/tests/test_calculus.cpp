#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bn/calculus.hpp"

using namespace bn;

namespace {

Polynomial X1(std::size_t d) { return Polynomial::variable(d, 0); }
Polynomial X2(std::size_t d) { return Polynomial::variable(d, 1); }

VectorField coord_vf(std::size_t d, std::size_t i) {
    VectorField v(d);
    v[i] = Polynomial::constant(d, Scalar(1));
    return v;
}

}  // namespace

TEST_CASE("exterior derivative squares to zero") {
    const std::size_t d = 3;
    DifferentialForm w(d, 1);
    w.set({0}, X1(d) * X2(d));
    w.set({2}, X1(d) * X1(d) * Polynomial::variable(d, 2));
    auto dw = exterior_derivative(w);
    CHECK(dw.degree() == 2);
    CHECK(exterior_derivative(dw).is_zero());
    // d(x1 x2 dx1) = x1 dx2 ^ dx1 => component (0,1) = -x1
    DifferentialForm a(d, 1);
    a.set({0}, X1(d) * X2(d));
    CHECK(exterior_derivative(a).coeff({0, 1}) == -X1(d));
}

TEST_CASE("wedge is graded-commutative and associative") {
    const std::size_t d = 4;
    auto dx = [&](std::size_t i) { return DifferentialForm::dx(d, i); };
    auto w12 = wedge(dx(0), dx(1));
    CHECK(w12.coeff({0, 1}) == Polynomial::constant(d, Scalar(1)));
    CHECK(wedge(dx(1), dx(0)) == -w12);
    CHECK(wedge(dx(0), dx(0)).is_zero());
    auto l = wedge(wedge(dx(0), dx(1)), dx(2));
    auto r = wedge(dx(0), wedge(dx(1), dx(2)));
    CHECK(l == r);
    // 2-forms commute
    auto w34 = wedge(dx(2), dx(3));
    CHECK(wedge(w12, w34) == wedge(w34, w12));
    // Leibniz: d(f w) = df ^ w + f dw
    auto f = X1(d) * X2(d);
    DifferentialForm w(d, 1);
    w.set({2}, X1(d));
    auto df = exterior_derivative(DifferentialForm::scalar(d, f));
    CHECK(exterior_derivative(w * f) == wedge(df, w) + exterior_derivative(w) * f);
}

TEST_CASE("interior product: antiderivation, square zero") {
    const std::size_t d = 3;
    auto dx = [&](std::size_t i) { return DifferentialForm::dx(d, i); };
    VectorField X(d);
    X[0] = X2(d);
    X[1] = Polynomial::constant(d, Scalar(1));
    auto w = wedge(dx(0), dx(1));
    auto iw = interior(X, w);
    // i_X (dx1^dx2) = X^1 dx2 - X^2 dx1 = x2 dx2 - dx1
    CHECK(iw.coeff({1}) == X2(d));
    CHECK(iw.coeff({0}) == -Polynomial::constant(d, Scalar(1)));
    CHECK(interior(X, iw).is_zero());
    auto vol = wedge(w, dx(2));
    CHECK(interior(X, interior(X, vol)).is_zero());
}

TEST_CASE("fully antisymmetric component accessor") {
    const std::size_t d = 3;
    DifferentialForm w(d, 2);
    w.set({0, 2}, X1(d));
    CHECK(w.component({2, 0}) == -X1(d));
    CHECK(w.component({0, 2}) == X1(d));
    CHECK(w.component({1, 1}).is_zero());
}

TEST_CASE("lie bracket of vector fields") {
    const std::size_t d = 2;
    VectorField X(d), Y(d);
    X[0] = X1(d);  // x1 d1
    Y[1] = X1(d);  // x1 d2
    auto b = lie_bracket(X, Y);  // [x1 d1, x1 d2] = x1 d2
    CHECK(b[0].is_zero());
    CHECK(b[1] == X1(d));
    CHECK(lie_bracket(X, X).is_zero());
    // Jacobi identity on coordinate-weighted fields
    VectorField Z(d);
    Z[0] = X2(d);
    auto jac = lie_bracket(X, lie_bracket(Y, Z)) + lie_bracket(Y, lie_bracket(Z, X)) +
               lie_bracket(Z, lie_bracket(X, Y));
    CHECK(jac.is_zero());
}

TEST_CASE("Cartan formula consistency checks") {
    const std::size_t d = 3;
    VectorField X(d);
    X[0] = X2(d);
    X[2] = X1(d) * X1(d);
    DifferentialForm w(d, 2);
    w.set({0, 1}, X1(d));
    w.set({1, 2}, X2(d) * Polynomial::variable(d, 2));
    // L_X d w = d L_X w
    CHECK(lie_derivative(X, exterior_derivative(w)) == exterior_derivative(lie_derivative(X, w)));
    // L_X on a function equals X(f)
    auto f = X1(d) * X2(d) + Polynomial::variable(d, 2);
    auto lf = lie_derivative(X, DifferentialForm::scalar(d, f));
    CHECK(lf.coeff({}) == X.apply(f));
    // L_X i_Y w - i_Y L_X w = i_{[X,Y]} w
    VectorField Y(d);
    Y[1] = X1(d);
    auto lhs = lie_derivative(X, interior(Y, w)) - interior(Y, lie_derivative(X, w));
    CHECK(lhs == interior(lie_bracket(X, Y), w));
}

TEST_CASE("vector field application is a derivation") {
    const std::size_t d = 2;
    VectorField X(d);
    X[0] = X2(d);
    X[1] = X1(d) * X1(d);
    auto f = X1(d) * X1(d);
    auto g = X2(d) + Polynomial::constant(d, Scalar(3));
    CHECK(X.apply(f * g) == X.apply(f) * g + f * X.apply(g));
}
