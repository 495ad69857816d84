#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "bn/adapted.hpp"

#include <random>

using namespace bn;

namespace {

Fixture all_fixtures(std::size_t i) {
    switch (i) {
        case 0: return fixture_cx_even();
        case 1: return fixture_cx_odd();
        case 2: return fixture_kah();
        case 3: return fixture_cx_even_f2();
        case 4: return fixture_ni();
        case 5: return fixture_kah3(false);
        default: return fixture_kah3(true);
    }
}
constexpr std::size_t kFixtureCount = 7;

Fixture kah3_nonintegrable() {
    Fixture base = fixture_kah3(false);
    DifferentialForm F2(3, 2), H3(3, 3);
    F2.set({0, 2}, Polynomial::constant(3, Scalar(1)));
    return {"kah3_f2", Algebroid(3, F2, H3), base.S};
}

Connection prepared(const Fixture& fx) {
    return make_u0_parallel(torsion_free_base(fx.E), fx.S.u0);
}

}  // namespace

TEST_CASE("torsion-free base across all fixtures") {
    for (std::size_t i = 0; i < kFixtureCount; ++i) {
        Fixture fx = all_fixtures(i);
        Connection D = torsion_free_base(fx.E);
        CHECK_MESSAGE(torsion(D).is_zero(), fx.name);
    }
}

TEST_CASE("u0-parallelizing correction: postconditions, fixed point, shift law") {
    for (std::size_t i = 0; i < kFixtureCount; ++i) {
        Fixture fx = all_fixtures(i);
        Connection D = torsion_free_base(fx.E);
        Connection D1 = make_u0_parallel(D, fx.S.u0);
        CHECK_MESSAGE(covariant_vector_endo(D1, fx.S.u0).is_zero(), fx.name);
        CHECK_MESSAGE(torsion(D1).is_zero(), fx.name);
        // already-parallel input is a fixed point
        Connection D2 = make_u0_parallel(D1, fx.S.u0);
        CHECK_MESSAGE(D2.eta() == D1.eta(), fx.name);
        // the correction is del-closed: torsion difference vanished above, and
        // the cyclic sum of its components is exactly that difference
        Correction delta;
        for (std::size_t k = 0; k < fx.E.rank(); ++k)
            delta.push_back(D1.eta()[k] - D.eta()[k]);
        CHECK_MESSAGE(cyclic_del(correction_components(fx.E, delta)).is_zero(), fx.name);
    }
}

TEST_CASE("throws on preconditions") {
    Fixture fx = fixture_cx_even_f2();
    // base connection of a twisted algebroid has torsion
    CHECK(!torsion(Connection::base(fx.E)).is_zero());
    CHECK_THROWS_AS(make_u0_parallel(Connection::base(fx.E), fx.S.u0), BnError);
    Connection D = torsion_free_base(fx.E);  // does not parallelize u0 by itself here
    if (!covariant_vector_endo(D, fx.S.u0).is_zero())
        CHECK_THROWS_AS(build_adapted(D, fx.S), BnError);
}

TEST_CASE("bracket expression of the Nijenhuis pairing") {
    for (const char* name : {"cx_even", "cx_even_f2", "ni", "kah3_h3"}) {
        Fixture fx = std::string(name) == "cx_even"      ? fixture_cx_even()
                     : std::string(name) == "cx_even_f2" ? fixture_cx_even_f2()
                     : std::string(name) == "ni"         ? fixture_ni()
                                                         : fixture_kah3(true);
        Connection D1 = prepared(fx);
        IdentityReport rep = nijenhuis_identity_check(D1, fx.S);
        CHECK_MESSAGE(rep.pass, (fx.name + ": " + rep.witness));
    }
}

TEST_CASE("structure-preserving connection with both torsion formulas") {
    for (std::size_t i = 0; i < kFixtureCount; ++i) {
        Fixture fx = all_fixtures(i);
        AdaptedResult res = build_adapted(prepared(fx), fx.S);
        CHECK_MESSAGE(res.preserves_F, (fx.name + ": " + res.witness));
        CHECK_MESSAGE(res.preserves_u0, fx.name);
        CHECK_MESSAGE(res.anticommute, fx.name);
        CHECK_MESSAGE(res.torsion_interior, (fx.name + ": " + res.witness));
        CHECK_MESSAGE(res.torsion_u0, (fx.name + ": " + res.witness));
    }
}

TEST_CASE("integrable structures get torsion-free preserving connections") {
    for (const char* name : {"cx_even", "cx_odd", "kah", "cx_even_f2", "kah3", "kah3_h3"}) {
        std::string n(name);
        Fixture fx = n == "cx_even"      ? fixture_cx_even()
                     : n == "cx_odd"     ? fixture_cx_odd()
                     : n == "kah"        ? fixture_kah()
                     : n == "cx_even_f2" ? fixture_cx_even_f2()
                     : n == "kah3"       ? fixture_kah3(false)
                                         : fixture_kah3(true);
        AdaptedResult res = build_adapted(prepared(fx), fx.S);
        CHECK_MESSAGE(torsion(res.D).is_zero(), fx.name);
    }
    // and the non-integrable one does not
    Fixture ni = fixture_ni();
    AdaptedResult res = build_adapted(prepared(ni), ni.S);
    CHECK(!torsion(res.D).is_zero());
}

TEST_CASE("cyclic gamma sums against the intermediate and final torsion") {
    for (const char* name : {"cx_even", "cx_even_f2", "ni"}) {
        std::string n(name);
        Fixture fx = n == "cx_even"      ? fixture_cx_even()
                     : n == "cx_even_f2" ? fixture_cx_even_f2()
                                         : fixture_ni();
        GammaReport rep = gamma_crosscheck(prepared(fx), fx.S);
        CHECK_MESSAGE(rep.d1, (fx.name + ": " + rep.witness));
        CHECK_MESSAGE(rep.dt, (fx.name + ": " + rep.witness));
        CHECK_MESSAGE(rep.dt_equals_nijenhuis, (fx.name + ": " + rep.witness));
    }
}

TEST_CASE("metric connection construction") {
    // constant data: corrections vanish entirely
    Fixture kah = fixture_kah();
    LeviCivitaResult lc = levi_civita(kah.E, *kah.S.Gend);
    CHECK(lc.pass());
    for (const PolyMat& m : lc.D.eta()) CHECK(m.is_zero());
    // twisted variant: nonzero corrections, same postconditions
    Fixture kh = fixture_kah3(true);
    LeviCivitaResult lct = levi_civita(kh.E, *kh.S.Gend);
    CHECK_MESSAGE(lct.metric, lct.witness);
    CHECK(lct.torsion_free);
    CHECK(lct.killer_block_diagonal);
    bool some_nonzero = false;
    for (const PolyMat& m : lct.D.eta()) some_nonzero = some_nonzero || !m.is_zero();
    CHECK(some_nonzero);
}

TEST_CASE("metric connection with parallel u0") {
    for (bool twist : {false, true}) {
        Fixture fx = fixture_kah3(twist);
        LeviCivitaResult lc = levi_civita(fx.E, *fx.S.Gend);
        REQUIRE(lc.pass());
        IdentityReport eki = metric_u0_identity(lc.D, *fx.S.Gend, fx.S.u0);
        CHECK_MESSAGE(eki.pass, (fx.name + ": " + eki.witness));
        MetricU0Result mu = make_metric_u0_parallel(lc.D, *fx.S.Gend, fx.S.u0);
        CHECK_MESSAGE(mu.pass(), (fx.name + ": " + mu.witness));
    }
}

TEST_CASE("u ^ v + Gu ^ Gv is metric-skew for random pairs") {
    Fixture fx = fixture_kah3(false);
    std::size_t N = fx.E.rank(), d = fx.E.d();
    const PolyMat& Gend = *fx.S.Gend;
    PolyMat Gram = PolyMat::from_constant(fx.E.gram(), d);
    PolyMat H = Gend.transpose() * Gram;  // metric matrix G(v,w)
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<Polynomial> u(N, Polynomial(d)), v(N, Polynomial(d));
        for (std::size_t i = 0; i < N; ++i) {
            u[i] = Polynomial::constant(d, Scalar(Rational((long)(rng() % 5) - 2)));
            v[i] = Polynomial::constant(d, Scalar(Rational((long)(rng() % 5) - 2)));
        }
        PolyMat M = poly_wedge(fx.E, u, v) + poly_wedge(fx.E, Gend.apply(u), Gend.apply(v));
        CHECK((M.transpose() * H + H * M).is_zero());
    }
}

TEST_CASE("full metric pipeline, positive and negative") {
    for (const char* name : {"kah", "kah3", "kah3_h3"}) {
        std::string n(name);
        Fixture fx = n == "kah" ? fixture_kah() : fixture_kah3(n == "kah3_h3");
        KahlerConnectionResult res = build_bn_kahler_connection(fx.E, fx.S);
        CHECK_MESSAGE(res.report.pass(), (fx.name + "\n" + res.report.to_string()));
        CHECK(torsion(res.D).is_zero());
    }
    // non-integrable pseudo-Hermitian input: construction runs, the torsion
    // residual is reported as the failing final check
    Fixture bad = kah3_nonintegrable();
    REQUIRE(validate_pseudo_hermitian(bad.E, bad.S).pass());
    REQUIRE(!is_integrable(bad.E, bad.S).integrable);
    KahlerConnectionResult res = build_bn_kahler_connection(bad.E, bad.S);
    CHECK(!res.report.pass());
    bool torsion_failed = false;
    for (const StageReport& st : res.report.stages)
        if (st.stage == "adapted")
            for (const PostCheck& c : st.checks)
                if (c.name == "torsion-free" && !c.pass) torsion_failed = true;
    CHECK(torsion_failed);
    CHECK(!torsion(res.D).is_zero());
}

TEST_CASE("affine model of the adapted space") {
    struct Expect {
        const char* name;
        std::size_t dim;
    };
    for (Expect e : {Expect{"cx_even", 12}, Expect{"cx_odd", 2}, Expect{"kah", 4},
                     Expect{"kah3", 14}}) {
        std::string n(e.name);
        Fixture fx = n == "cx_even"  ? fixture_cx_even()
                     : n == "cx_odd" ? fixture_cx_odd()
                     : n == "kah"    ? fixture_kah()
                                     : fixture_kah3(false);
        AdaptedResult ad = build_adapted(prepared(fx), fx.S);
        AdaptedSpaceModel model = adapted_space(fx.E, fx.S, ad.D);
        CHECK_MESSAGE(model.fiber.dimension == e.dim, fx.name);
        CHECK_MESSAGE(model.dimensions_match, (fx.name + ": " + model.witness));
        CHECK_MESSAGE(model.closure_verified, (fx.name + ": " + model.witness));
    }
}

TEST_CASE("difference of two independently built connections lies in the fiber") {
    Fixture fx = fixture_cx_even();
    Connection D1p = prepared(fx);
    AdaptedResult first = build_adapted(D1p, fx.S);

    // second torsion-free start: base + the skew-symmetrization of a random
    // symmetric 3-tensor (exactly the kernel of the cyclic sum)
    std::size_t N = fx.E.rank();
    std::mt19937_64 rng(3);
    ThreeTensor sigma(N);
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = i; j < N; ++j)
            for (std::size_t k = 0; k < N; ++k) {
                Scalar c{Rational((long)(rng() % 5) - 2)};
                sigma(i, j, k) = c;
                sigma(j, i, k) = c;
            }
    ThreeTensor eta = sk(sigma);
    REQUIRE(cyclic_del(eta).is_zero());
    Connection D2 = Connection::base(fx.E).add(correction_from_constant_tensor(fx.E, eta));
    REQUIRE(torsion(D2).is_zero());
    AdaptedResult second = build_adapted(make_u0_parallel(D2, fx.S.u0), fx.S);
    REQUIRE(second.pass());

    AdaptedSpaceModel model = adapted_space(fx.E, fx.S, first.D);
    Correction delta;
    for (std::size_t k = 0; k < N; ++k)
        delta.push_back(second.D.eta()[k] - first.D.eta()[k]);
    CHECK(correction_in_fiber(fx.E, model.fiber, delta));
}

TEST_CASE("rank certificate: no correction repairs a non-integrable structure") {
    Fixture ni = fixture_ni();
    AdaptedResult ad = build_adapted(prepared(ni), ni.S);
    std::vector<Scalar> p{Scalar(0), Scalar(0), Scalar(1)};
    InfeasibilityCertificate cert = adapted_infeasibility(ad.D, ni.S, p);
    CHECK(cert.infeasible);
    CHECK(cert.rank_augmented == cert.rank_homogeneous + 1);
    // integrable control: the system is consistent
    Fixture ok = fixture_cx_even_f2();
    AdaptedResult ad2 = build_adapted(prepared(ok), ok.S);
    InfeasibilityCertificate cert2 =
        adapted_infeasibility(ad2.D, ok.S, std::vector<Scalar>{Scalar(1), Scalar(1)});
    CHECK(!cert2.infeasible);
}

TEST_CASE("u0-pairing of the Nijenhuis tensor against the u0-Lie derivative of F") {
    for (const char* name : {"cx_even_f2", "ni"}) {
        Fixture fx = std::string(name) == "ni" ? fixture_ni() : fixture_cx_even_f2();
        std::vector<std::vector<Scalar>> uperp = uperp_basis(fx.E, fx.S.u0);
        Section su0 = Section::from_components(fx.E.d(), fx.S.u0);
        PolyMat L = dorfman_lie(fx.E, su0, fx.S.F);
        PolyMat Gram = PolyMat::from_constant(fx.E.gram(), fx.E.d());
        for (std::size_t a = 0; a < uperp.size(); ++a)
            for (std::size_t b = a + 1; b < uperp.size(); ++b) {
                std::vector<Polynomial> u(fx.E.rank(), Polynomial(fx.E.d()));
                std::vector<Polynomial> v = u;
                for (std::size_t i = 0; i < fx.E.rank(); ++i) {
                    u[i] = Polynomial::constant(fx.E.d(), uperp[a][i]);
                    v[i] = Polynomial::constant(fx.E.d(), uperp[b][i]);
                }
                Section su = Section::from_components(fx.E.d(), u);
                Section sv = Section::from_components(fx.E.d(), v);
                std::vector<Polynomial> nf = nijenhuis(fx.E, fx.S, su, sv).components();
                Polynomial lhs(fx.E.d()), rhs(fx.E.d());
                std::vector<Polynomial> Lu = L.apply(u), Fv = fx.S.F.apply(v);
                for (std::size_t i = 0; i < fx.E.rank(); ++i)
                    for (std::size_t j = 0; j < fx.E.rank(); ++j)
                        if (!fx.E.gram()(i, j).is_zero()) {
                            lhs += nf[i] * fx.S.u0[j] * fx.E.gram()(i, j);
                            rhs += Lu[i] * Fv[j] * fx.E.gram()(i, j);
                        }
                CHECK_MESSAGE(lhs == rhs, fx.name);
            }
    }
}
