#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bn/courant.hpp"

#include <random>

using namespace bn;

namespace {

Algebroid twisted_d3() {
    // F2 = dx1^dx2, H3 = dx1^dx2^dx3; both closed, F2^F2 = 0 in d=3
    DifferentialForm F2(3, 2), H3(3, 3);
    F2.set({0, 1}, Polynomial::constant(3, Scalar(1)));
    H3.set({0, 1, 2}, Polynomial::constant(3, Scalar(1)));
    return Algebroid(3, F2, H3);
}

Algebroid bad_f2_d3() {
    // F2 = x3 dx1^dx2 is not closed
    DifferentialForm F2(3, 2), H3(3, 3);
    F2.set({0, 1}, Polynomial::variable(3, 2));
    return Algebroid(3, F2, H3);
}

}  // namespace

TEST_CASE("pairing has the model values and signature (d+1,d)") {
    Algebroid E(2);
    auto d1 = Section::frame(2, 0), e = Section::frame(2, 2), dx1 = Section::frame(2, 3);
    CHECK(pairing(e, e) == Polynomial::constant(2, Scalar(1)));
    CHECK(pairing(d1, dx1) == Polynomial::constant(2, Scalar(Rational(1, 2))));
    CHECK(pairing(d1, d1).is_zero());
    Section m = d1 - dx1;
    CHECK(pairing(m, m) == Polynomial::constant(2, Scalar(-1)));
    auto [p, q] = E.gram().signature();
    CHECK(p == 3);
    CHECK(q == 2);
    // components round-trip
    auto s = random_sections(2, 7, 2, 1)[0];
    CHECK(Section::from_components(2, s.components()) == s);
}

TEST_CASE("bracket coefficient scan pins the valid set") {
    auto survivors = bracket_coefficient_scan();
    REQUIRE(survivors.size() == 2);
    // exactly the canonical triple and its sign flip under e -> -e
    bool has_canonical = false, has_flip = false;
    for (const auto& c : survivors) {
        if (c == BracketConstants{1, -2, 2}) has_canonical = true;
        if (c == BracketConstants{-1, 2, -2}) has_flip = true;
    }
    CHECK(has_canonical);
    CHECK(has_flip);
    CHECK(kBracketConstants == BracketConstants{1, -2, 2});
}

TEST_CASE("axiom suite passes on untwisted and validly twisted models") {
    for (int twisted = 0; twisted <= 1; ++twisted) {
        Algebroid E = twisted ? twisted_d3() : Algebroid(2);
        auto samples = random_sections(E.d(), 0, 2, 20);
        auto rep = check_courant_axioms(E, samples);
        CHECK_MESSAGE(rep.pass(), rep.to_string());
    }
}

TEST_CASE("non-closed F2 fails with a witness") {
    Algebroid E = bad_f2_d3();
    CHECK(!E.twist_closed());
    auto rep = check_courant_axioms(E, random_sections(3, 0, 2, 20));
    CHECK(!rep.pass());
    CHECK(!rep.jacobi);
    CHECK(!rep.witness.empty());
}

TEST_CASE("dH3 = F2^F2 coupling is necessary in d=4") {
    DifferentialForm F2(4, 2), H3good(4, 3), H3bad(4, 3);
    F2.set({0, 1}, Polynomial::constant(4, Scalar(1)));
    F2.set({2, 3}, Polynomial::constant(4, Scalar(1)));
    H3good.set({1, 2, 3}, Polynomial::variable(4, 0) * Scalar(2));
    H3bad.set({1, 2, 3}, Polynomial::variable(4, 0));  // dH3 = 1/2 F2^F2
    CHECK(Algebroid(4, F2, H3good).twist_closed());
    CHECK(!Algebroid(4, F2, H3bad).twist_closed());
    auto rep = check_courant_axioms(Algebroid(4, F2, H3bad), random_sections(4, 1, 1, 12));
    CHECK(!rep.pass());
}

TEST_CASE("basic bracket values") {
    Algebroid E(2);
    // [d1, x1 dx2] = L_{d1}(x1 dx2) = dx2
    Section u = Section::frame(2, 0);
    Section v = Section::frame(2, 4) * Polynomial::variable(2, 0);
    Section b = dorfman(E, u, v);
    CHECK(b.X.is_zero());
    CHECK(b.f.is_zero());
    CHECK(b.xi == DifferentialForm::dx(2, 1));
    // [u0, u0] = 0 when <u0,u0> is constant
    Section e = Section::frame(2, 2);
    CHECK(dorfman(E, e, e).is_zero());
    Section m = Section::frame(2, 0) - Section::frame(2, 3);
    CHECK(dorfman(E, m, m).is_zero());
}

TEST_CASE("dorfman-lie derivative") {
    Algebroid E = twisted_d3();
    std::size_t N = E.rank();
    // A = Id commutes with everything
    PolyMat id = PolyMat::identity(N, 3);
    for (std::size_t k = 0; k < N; ++k)
        CHECK(dorfman_lie(E, Section::frame(3, k), id).is_zero());
    // defining property on arbitrary sections: (L_u A)v = [u, Av] - A[u,v]
    auto ss = random_sections(3, 3, 1, 3);
    PolyMat A(N, N, 3);
    A(0, 1) = Polynomial::variable(3, 0);
    A(4, 2) = Polynomial::constant(3, Scalar(2));
    PolyMat L = dorfman_lie(E, ss[0], A);
    Section v = ss[1];
    Section lhs = Section::from_components(3, L.apply(v.components()));
    Section rhs = dorfman(E, ss[0], Section::from_components(3, A.apply(v.components()))) -
                  Section::from_components(3, A.apply(dorfman(E, ss[0], v).components()));
    CHECK(lhs == rhs);
}

TEST_CASE("connection axioms: base connection and skew corrections") {
    Algebroid E = twisted_d3();
    auto samples = random_sections(3, 5, 2, 10);
    auto rep0 = check_connection_axioms(Connection::base(E), samples);
    CHECK_MESSAGE(rep0.pass(), rep0.witness);
    // skew correction accepted, non-skew rejected
    std::size_t N = E.rank();
    ThreeTensor t(N);
    t(0, 1, 2) = Scalar(1);
    t(0, 2, 1) = Scalar(-1);
    t(3, 0, 4) = Scalar(2);
    t(3, 4, 0) = Scalar(-2);
    Connection D(E, correction_from_constant_tensor(E, t));
    auto rep1 = check_connection_axioms(D, samples);
    CHECK_MESSAGE(rep1.pass(), rep1.witness);
    Correction bad = zero_correction(E);
    bad[0](0, 0) = Polynomial::constant(3, Scalar(1));
    CHECK_THROWS_AS(Connection(E, bad), BnError);
}

TEST_CASE("torsion: skewness, tensoriality, shift law") {
    Algebroid E = twisted_d3();
    std::size_t N = E.rank();
    Connection D0 = Connection::base(E);
    PolyThreeTensor T0 = torsion(D0);
    CHECK(T0.totally_skew());
    // tensoriality: T(fu, v, w) = f T(u,v,w) on random sections
    auto ss = random_sections(3, 11, 1, 3);
    Polynomial f = Polynomial::variable(3, 0);
    CHECK(torsion_on_sections(D0, ss[0] * f, ss[1], ss[2]) ==
          torsion_on_sections(D0, ss[0], ss[1], ss[2]) * f);
    // frame tensor agrees with direct section evaluation
    Polynomial direct = torsion_on_sections(D0, Section::frame(3, 0), Section::frame(3, 1),
                                            Section::frame(3, 6));
    CHECK(direct == T0(0, 1, 6));
    // shift law for 50 random totally-skew constant corrections
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 50; ++trial) {
        ThreeTensor t(N);
        for (int m = 0; m < 4; ++m) {
            std::size_t i = rng() % N, j = rng() % N, k = rng() % N;
            if (i == j || j == k || i == k) continue;
            Scalar c(static_cast<long>(rng() % 5) - 2);
            // add c * alternation of e^i (x) e^j (x) e^k
            std::size_t idx[3] = {i, j, k};
            int sgn[6] = {1, -1, -1, 1, 1, -1};
            std::size_t perm[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                      {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
            for (int p = 0; p < 6; ++p)
                t(idx[perm[p][0]], idx[perm[p][1]], idx[perm[p][2]]) += c * Scalar(sgn[p]);
        }
        CHECK(t.totally_skew());
        Connection D = D0.add(correction_from_constant_tensor(E, t));
        PolyThreeTensor diff = torsion(D) - T0;
        // T^{D+t} - T^D = del t = 3t for totally skew t
        bool ok = true;
        for (std::size_t i = 0; i < N && ok; ++i)
            for (std::size_t j = 0; j < N && ok; ++j)
                for (std::size_t k = 0; k < N && ok; ++k)
                    ok = (diff(i, j, k) - Polynomial::constant(3, t(i, j, k) * Scalar(3)))
                             .is_zero();
        CHECK(ok);
    }
    // general shift law T^{D+eta} - T^D = del(eta) for a non-skew-in-(jk)... eta
    ThreeTensor s(N);
    s(0, 1, 2) = Scalar(1);
    s(0, 2, 1) = Scalar(-1);
    s(2, 0, 5) = Scalar(3);
    s(2, 5, 0) = Scalar(-3);
    Correction eta = correction_from_constant_tensor(E, s);
    PolyThreeTensor etap = correction_components(E, eta);
    PolyThreeTensor diff = torsion(D0.add(eta)) - T0;
    CHECK(diff == cyclic_del(etap));
}

TEST_CASE("correction component round-trip") {
    Algebroid E(2);
    std::size_t N = E.rank();
    ThreeTensor t(N);
    t(1, 0, 3) = Scalar(2);
    t(1, 3, 0) = Scalar(-2);
    t(4, 1, 2) = Scalar(Rational(1, 2));
    t(4, 2, 1) = Scalar(Rational(-1, 2));
    Correction eta = correction_from_constant_tensor(E, t);
    CHECK(correction_is_skew(E, eta));
    PolyThreeTensor comps = correction_components(E, eta);
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j)
            for (std::size_t k = 0; k < N; ++k)
                CHECK(comps(i, j, k) == Polynomial::constant(2, t(i, j, k)));
    Correction back = correction_from_components(E, comps);
    for (std::size_t k = 0; k < N; ++k) CHECK(back[k] == eta[k]);
}

TEST_CASE("deterministic random sections") {
    auto a = random_sections(3, 42, 2, 5);
    auto b = random_sections(3, 42, 2, 5);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
    auto c = random_sections(3, 43, 2, 5);
    bool all_equal = true;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!(a[i] == c[i])) all_equal = false;
    CHECK(!all_equal);
}
