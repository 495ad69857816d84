#include "bn/adapted.hpp"

#include <random>
#include <sstream>

namespace bn {

namespace {

Polynomial pvec_pair(const Algebroid& E, const std::vector<Polynomial>& a,
                     const std::vector<Polynomial>& b) {
    std::size_t N = E.rank();
    Polynomial r(E.d());
    const Mat& G = E.gram();
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j)
            if (!G(i, j).is_zero()) r += a[i] * b[j] * G(i, j);
    return r;
}

std::vector<Polynomial> pvec_scale(const std::vector<Polynomial>& a, const Polynomial& c) {
    std::vector<Polynomial> r = a;
    for (Polynomial& p : r) p = p * c;
    return r;
}

std::vector<Polynomial> pvec_sub(const std::vector<Polynomial>& a,
                                 const std::vector<Polynomial>& b) {
    std::vector<Polynomial> r = a;
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
    return r;
}

std::vector<Polynomial> lift_const(std::size_t nvars, const std::vector<Scalar>& v) {
    std::vector<Polynomial> r;
    r.reserve(v.size());
    for (const Scalar& s : v) r.push_back(Polynomial::constant(nvars, s));
    return r;
}

Section const_section(std::size_t d, const std::vector<Scalar>& v) {
    return Section::from_components(d, lift_const(d, v));
}

// D_{sum_j c_j e_j} A for a coefficient vector c (polynomial entries), given
// the precomputed frame slices.
PolyMat directional_endo(const std::vector<PolyMat>& slices, const std::vector<Polynomial>& c) {
    PolyMat r(slices[0].rows(), slices[0].cols(), slices[0].nvars());
    for (std::size_t j = 0; j < slices.size(); ++j)
        if (!c[j].is_zero()) r = r + slices[j] * c[j];
    return r;
}

// <A x, y> for polynomial vectors.
Polynomial endo_pair(const Algebroid& E, const PolyMat& A, const std::vector<Polynomial>& x,
                     const std::vector<Polynomial>& y) {
    return pvec_pair(E, A.apply(x), y);
}

std::vector<Polynomial> frame_components(const Algebroid& E, std::size_t k) {
    std::vector<Polynomial> r(E.rank(), Polynomial(E.d()));
    r[k] = Polynomial::constant(E.d(), Scalar(1));
    return r;
}

// Adjoint with respect to the pairing: A* = G^{-1} A^T G.
PolyMat pairing_adjoint(const Algebroid& E, const PolyMat& A) {
    PolyMat G = PolyMat::from_constant(E.gram(), E.d());
    PolyMat Gi = PolyMat::from_constant(E.gram().inverse(), E.d());
    return Gi * A.transpose() * G;
}

bool connection_kills_endo(const Connection& D, const PolyMat& A, std::string* witness) {
    const Algebroid& E = D.algebroid();
    for (std::size_t j = 0; j < E.rank(); ++j) {
        if (!D.apply_to_endo(Section::frame(E.d(), j), A).is_zero()) {
            if (witness) *witness = "covariant derivative nonzero along frame " +
                                    std::to_string(j + 1);
            return false;
        }
    }
    return true;
}

bool connection_kills_vector(const Connection& D, const std::vector<Polynomial>& u0) {
    return covariant_vector_endo(D, u0).is_zero();
}

// Contraction t(a,b,c) over constant coefficient vectors in selected slots.
Polynomial contract3(const PolyThreeTensor& t, const std::vector<Scalar>& a,
                     const std::vector<Scalar>& b, const std::vector<Scalar>& c,
                     std::size_t nvars) {
    Polynomial r(nvars);
    std::size_t N = t.dim();
    for (std::size_t i = 0; i < N; ++i) {
        if (a[i].is_zero()) continue;
        for (std::size_t j = 0; j < N; ++j) {
            if (b[j].is_zero()) continue;
            for (std::size_t k = 0; k < N; ++k) {
                if (c[k].is_zero()) continue;
                r += t(i, j, k) * (a[i] * b[j] * c[k]);
            }
        }
    }
    return r;
}

std::vector<Scalar> rand_coeffs(std::mt19937_64& rng, std::size_t n) {
    std::vector<Scalar> c(n);
    for (Scalar& s : c) s = Scalar(Rational(static_cast<long>(rng() % 5) - 2));
    return c;
}

}  // namespace

PolyMat poly_wedge(const Algebroid& E, const std::vector<Polynomial>& u,
                   const std::vector<Polynomial>& v) {
    // (u ^ v)(w) = <u,w> v - <v,w> u  =>  matrix (v u^T - u v^T) G
    std::size_t N = E.rank();
    PolyMat r(N, N, E.d());
    const Mat& G = E.gram();
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) {
            Polynomial gu(E.d()), gv(E.d());
            for (std::size_t m = 0; m < N; ++m) {
                if (!G(m, j).is_zero()) {
                    gu += u[m] * G(m, j);
                    gv += v[m] * G(m, j);
                }
            }
            r(i, j) = v[i] * gu - u[i] * gv;
        }
    return r;
}

PolyMat covariant_vector_endo(const Connection& D, const std::vector<Polynomial>& u0) {
    const Algebroid& E = D.algebroid();
    std::size_t N = E.rank();
    PolyMat M(N, N, E.d());
    for (std::size_t j = 0; j < N; ++j) {
        std::vector<Polynomial> col =
            D.apply_to_section_components(Section::frame(E.d(), j), u0);
        for (std::size_t i = 0; i < N; ++i) M(i, j) = col[i];
    }
    return M;
}

std::vector<PolyMat> covariant_endo_slices(const Connection& D, const PolyMat& A) {
    const Algebroid& E = D.algebroid();
    std::vector<PolyMat> r;
    r.reserve(E.rank());
    for (std::size_t j = 0; j < E.rank(); ++j)
        r.push_back(D.apply_to_endo(Section::frame(E.d(), j), A));
    return r;
}

Connection torsion_free_base(const Algebroid& E) {
    Connection D0 = Connection::base(E);
    PolyThreeTensor T0 = torsion(D0);
    if (T0.is_zero()) return D0;
    Connection D = D0.add(correction_from_components(E, T0 * Scalar(Rational(-1, 3))));
    if (!torsion(D).is_zero()) throw BnError("torsion-free base construction failed");
    return D;
}

Connection make_u0_parallel(const Connection& D, const std::vector<Polynomial>& u0) {
    const Algebroid& E = D.algebroid();
    std::size_t N = E.rank();
    if (!torsion(D).is_zero()) throw BnError("make_u0_parallel requires a torsion-free input");

    PolyMat Du0 = covariant_vector_endo(D, u0);
    PolyMat sk = (Du0 - pairing_adjoint(E, Du0)) * Scalar(Rational(1, 2));
    PolyMat eta_u0 = -sk - sk;  // -2 (D u0)^sk
    Scalar norm = pvec_pair(E, u0, u0).constant_term();  // (-1)^n

    for (int sign : {+1, -1}) {
        Correction eta;
        for (std::size_t k = 0; k < N; ++k) {
            // split e_k = c u0 + p with p orthogonal to u0
            std::vector<Polynomial> ek = frame_components(E, k);
            Polynomial c = pvec_pair(E, u0, ek) * (Scalar(1) / norm);
            std::vector<Polynomial> p = pvec_sub(ek, pvec_scale(u0, c));
            std::vector<Polynomial> Dpu0 = Du0.apply(p);
            PolyMat etak = poly_wedge(E, u0, Dpu0) * Scalar(sign) + eta_u0 * c;
            eta.push_back(etak);
        }
        Connection D1 = D.add(eta);
        if (connection_kills_vector(D1, u0) && torsion(D1).is_zero()) return D1;
    }
    throw BnError("u0-parallelizing correction failed for both signs");
}

IdentityReport nijenhuis_identity_check(const Connection& D, const BnStructure& S) {
    const Algebroid& E = D.algebroid();
    if (!connection_kills_vector(D, S.u0))
        throw BnError("nijenhuis_identity_check requires D u0 = 0");
    IdentityReport rep;
    std::size_t N = E.rank();
    std::vector<PolyMat> DF = covariant_endo_slices(D, S.F);
    auto DF_along = [&](const std::vector<Polynomial>& c) { return directional_endo(DF, c); };
    std::vector<std::vector<Scalar>> uperp = uperp_basis(E, S.u0);

    for (std::size_t a = 0; a < uperp.size(); ++a) {
        std::vector<Polynomial> u = lift_const(E.d(), uperp[a]);
        Section su = const_section(E.d(), uperp[a]);
        for (std::size_t b = a + 1; b < uperp.size(); ++b) {
            std::vector<Polynomial> v = lift_const(E.d(), uperp[b]);
            Section sv = const_section(E.d(), uperp[b]);
            std::vector<Polynomial> nf =
                nijenhuis(E, S, su, sv).components();
            std::vector<Polynomial> Fu = S.F.apply(u), Fv = S.F.apply(v);
            Section sFu = Section::from_components(E.d(), Fu);
            Section sFv = Section::from_components(E.d(), Fv);
            for (std::size_t c = 0; c < N; ++c) {
                std::vector<Polynomial> w = frame_components(E, c);
                Section sw = Section::frame(E.d(), c);
                std::vector<Polynomial> Fw = S.F.apply(w);
                Section sFw = Section::from_components(E.d(), Fw);

                Polynomial lhs = pvec_pair(E, nf, w);
                Polynomial rhs =
                    -torsion_on_sections(D, sFu, sFv, sw) + torsion_on_sections(D, su, sv, sw) -
                    torsion_on_sections(D, sFu, sv, sFw) - torsion_on_sections(D, su, sFv, sFw) +
                    endo_pair(E, DF_along(Fu), v, w) - endo_pair(E, DF_along(Fv), u, w) +
                    endo_pair(E, S.F * DF_along(v), u, w) -
                    endo_pair(E, S.F * DF_along(u), v, w) -
                    endo_pair(E, S.F * DF_along(w), u, v) + endo_pair(E, DF_along(Fw), u, v);
                if (lhs != rhs) {
                    rep.pass = false;
                    rep.witness = "u0-perp pair (" + std::to_string(a + 1) + "," +
                                  std::to_string(b + 1) + "), frame " + std::to_string(c + 1);
                    return rep;
                }
            }
        }
    }
    return rep;
}

std::vector<PolyMat> a_operator(const Connection& D, const BnStructure& S) {
    const Algebroid& E = D.algebroid();
    std::size_t N = E.rank();
    Scalar norm = pvec_pair(E, S.u0, S.u0).constant_term();
    std::vector<PolyMat> DF = covariant_endo_slices(D, S.F);

    // projector P onto u0^perp along u0
    PolyMat P = PolyMat::identity(N, E.d());
    const Mat& G = E.gram();
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) {
            Polynomial gj(E.d());
            for (std::size_t m = 0; m < N; ++m)
                if (!G(m, j).is_zero()) gj += S.u0[m] * G(m, j);
            P(i, j) -= S.u0[i] * gj * (Scalar(1) / norm);
        }

    // B_i(j,k) = <(D_{P e_i} F) e_k, P e_j> = (P^T G D_{P e_i} F)(j,k)
    PolyMat Gm = PolyMat::from_constant(G, E.d());
    PolyMat Gi = PolyMat::from_constant(G.inverse(), E.d());
    std::vector<PolyMat> B;
    B.reserve(N);
    for (std::size_t i = 0; i < N; ++i) {
        std::vector<Polynomial> pi(N);
        for (std::size_t m = 0; m < N; ++m) pi[m] = P(m, i);
        B.push_back(P.transpose() * Gm * directional_endo(DF, pi));
    }

    std::vector<PolyMat> A;
    A.reserve(N);
    for (std::size_t k = 0; k < N; ++k) {
        PolyMat form(N, N, E.d());
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t j = 0; j < N; ++j)
                form(i, j) = (B[i](j, k) + B[j](i, k)) * Scalar(Rational(1, 2));
        A.push_back(Gi * form);
    }
    return A;
}

AdaptedResult build_adapted(const Connection& D, const BnStructure& S) {
    const Algebroid& E = D.algebroid();
    std::size_t N = E.rank();
    if (!torsion(D).is_zero()) throw BnError("build_adapted requires a torsion-free input");
    if (!connection_kills_vector(D, S.u0)) throw BnError("build_adapted requires D u0 = 0");

    std::vector<PolyMat> DF = covariant_endo_slices(D, S.F);
    std::vector<PolyMat> A = a_operator(D, S);
    Correction eta;
    for (std::size_t k = 0; k < N; ++k)
        eta.push_back(anticommutator(A[k], S.F) * Scalar(Rational(-1, 4)) +
                      S.F * DF[k] * Scalar(Rational(-1, 2)));
    AdaptedResult res{D.add(eta)};

    res.preserves_F = connection_kills_endo(res.D, S.F, &res.witness);
    res.preserves_u0 = connection_kills_vector(res.D, S.u0);
    res.anticommute = true;
    for (std::size_t k = 0; k < N && res.anticommute; ++k)
        if (!anticommutator(DF[k], S.F).is_zero()) res.anticommute = false;

    // T(u,v,w) = 1/4 <N_F(u,v),w> on u0-perp triples, both sides independent
    std::vector<std::vector<Scalar>> uperp = uperp_basis(E, S.u0);
    PolyThreeTensor Tt = torsion(res.D);
    res.torsion_interior = true;
    for (std::size_t a = 0; a < uperp.size() && res.torsion_interior; ++a)
        for (std::size_t b = a + 1; b < uperp.size() && res.torsion_interior; ++b) {
            std::vector<Polynomial> nf =
                nijenhuis(E, S, const_section(E.d(), uperp[a]), const_section(E.d(), uperp[b]))
                    .components();
            for (std::size_t c = 0; c < uperp.size(); ++c) {
                Polynomial lhs = contract3(Tt, uperp[a], uperp[b], uperp[c], E.d());
                Polynomial rhs =
                    pvec_pair(E, nf, lift_const(E.d(), uperp[c])) * Scalar(Rational(1, 4));
                if (lhs != rhs) {
                    res.torsion_interior = false;
                    res.witness = "interior torsion formula fails on u0-perp triple (" +
                                  std::to_string(a + 1) + "," + std::to_string(b + 1) + "," +
                                  std::to_string(c + 1) + ")";
                    break;
                }
            }
        }

    // T(u,v,u0) = 1/2 <(L_{u0}F)u, Fv> on all frame pairs
    Section su0 = Section::from_components(E.d(), S.u0);
    PolyMat Lu0F = dorfman_lie(E, su0, S.F);
    res.torsion_u0 = true;
    for (std::size_t a = 0; a < N && res.torsion_u0; ++a)
        for (std::size_t b = 0; b < N; ++b) {
            std::vector<Polynomial> u = frame_components(E, a), v = frame_components(E, b);
            Polynomial lhs = torsion_on_sections(res.D, Section::frame(E.d(), a),
                                                 Section::frame(E.d(), b), su0);
            Polynomial rhs =
                pvec_pair(E, Lu0F.apply(u), S.F.apply(v)) * Scalar(Rational(1, 2));
            if (lhs != rhs) {
                res.torsion_u0 = false;
                res.witness = "u0-slot torsion formula fails on frame pair (" +
                              std::to_string(a + 1) + "," + std::to_string(b + 1) + ")";
                break;
            }
        }
    return res;
}

GammaReport gamma_crosscheck(const Connection& D, const BnStructure& S) {
    const Algebroid& E = D.algebroid();
    std::size_t N = E.rank();
    if (!torsion(D).is_zero()) throw BnError("gamma_crosscheck requires a torsion-free input");
    if (!connection_kills_vector(D, S.u0)) throw BnError("gamma_crosscheck requires D u0 = 0");
    GammaReport rep;

    std::vector<PolyMat> DF = covariant_endo_slices(D, S.F);
    PolyMat Gm = PolyMat::from_constant(E.gram(), E.d());
    // gamma(i,j,k) = <(D_{e_i} F) e_j, e_k>
    PolyThreeTensor gamma(N, E.d());
    for (std::size_t i = 0; i < N; ++i) {
        PolyMat form = DF[i].transpose() * Gm;
        for (std::size_t j = 0; j < N; ++j)
            for (std::size_t k = 0; k < N; ++k) gamma(i, j, k) = form(j, k);
    }
    // gf(i,j,k) = gamma(i,j,Fk);  fg(i,j,k) = gamma(Fi,j,k)
    PolyThreeTensor gf(N, E.d()), fg(N, E.d());
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j)
            for (std::size_t k = 0; k < N; ++k)
                for (std::size_t m = 0; m < N; ++m) {
                    if (!S.F(m, k).is_zero()) gf(i, j, k) += gamma(i, j, m) * S.F(m, k);
                    if (!S.F(m, i).is_zero()) fg(i, j, k) += gamma(m, j, k) * S.F(m, i);
                }

    // D1 = D - 1/2 F (D F): torsion equals 1/2 cyclic sum of gamma(u,v,Fw)
    Correction eta1;
    for (std::size_t k = 0; k < N; ++k)
        eta1.push_back(S.F * DF[k] * Scalar(Rational(-1, 2)));
    PolyThreeTensor T1 = torsion(D.add(eta1));
    PolyThreeTensor rhs1 = cyclic_del(gf) * Scalar(Rational(1, 2));
    if (!(T1 == rhs1)) {
        rep.d1 = false;
        rep.witness = "intermediate-connection torsion differs from the gamma cyclic sum";
    }

    // Dt = full construction: torsion equals
    // 1/4 cyclic sum (gamma(Fu,v,w) + gamma(u,v,Fw)) on u0-perp triples
    AdaptedResult ad = build_adapted(D, S);
    PolyThreeTensor Tt = torsion(ad.D);
    PolyThreeTensor rhs2 = (cyclic_del(fg) + cyclic_del(gf)) * Scalar(Rational(1, 4));
    std::vector<std::vector<Scalar>> uperp = uperp_basis(E, S.u0);
    for (std::size_t a = 0; a < uperp.size() && rep.dt && rep.dt_equals_nijenhuis; ++a)
        for (std::size_t b = a + 1; b < uperp.size(); ++b) {
            std::vector<Polynomial> nf =
                nijenhuis(E, S, const_section(E.d(), uperp[a]), const_section(E.d(), uperp[b]))
                    .components();
            for (std::size_t c = 0; c < uperp.size(); ++c) {
                Polynomial lhs = contract3(Tt, uperp[a], uperp[b], uperp[c], E.d());
                Polynomial rhs = contract3(rhs2, uperp[a], uperp[b], uperp[c], E.d());
                if (lhs != rhs) {
                    rep.dt = false;
                    rep.witness = "final torsion differs from the two-gamma cyclic sum";
                    break;
                }
                Polynomial nrhs =
                    pvec_pair(E, nf, lift_const(E.d(), uperp[c])) * Scalar(Rational(1, 4));
                if (rhs != nrhs) {
                    rep.dt_equals_nijenhuis = false;
                    rep.witness = "two-gamma cyclic sum differs from the Nijenhuis pairing";
                    break;
                }
            }
            if (!rep.dt || !rep.dt_equals_nijenhuis) break;
        }
    return rep;
}

LeviCivitaResult levi_civita(const Algebroid& E, const PolyMat& Gend) {
    std::size_t N = E.rank();
    Connection D0 = Connection::base(E);
    std::vector<PolyMat> DG = covariant_endo_slices(D0, Gend);

    // metric correction, sign pinned by the postcondition
    Connection D1 = D0;
    bool have = false;
    for (int sign : {+1, -1}) {
        Correction eta;
        for (std::size_t k = 0; k < N; ++k)
            eta.push_back(Gend * DG[k] * Scalar(Rational(sign, 2)));
        Connection cand = D0.add(eta);
        if (connection_kills_endo(cand, Gend, nullptr)) {
            D1 = cand;
            have = true;
            break;
        }
    }
    if (!have) throw BnError("metric correction failed for both signs");

    // type-decomposed torsion killer
    PolyMat Pp = (PolyMat::identity(N, E.d()) + Gend) * Scalar(Rational(1, 2));
    PolyMat Pm = (PolyMat::identity(N, E.d()) - Gend) * Scalar(Rational(1, 2));
    PolyThreeTensor T1 = torsion(D1);
    auto project = [&](const PolyMat& A, const PolyMat& B, const PolyMat& C) {
        PolyThreeTensor r(N, E.d());
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t j = 0; j < N; ++j)
                for (std::size_t k = 0; k < N; ++k) {
                    if (T1(i, j, k).is_zero()) continue;
                    for (std::size_t a = 0; a < N; ++a) {
                        if (A(i, a).is_zero()) continue;
                        for (std::size_t b = 0; b < N; ++b) {
                            if (B(j, b).is_zero()) continue;
                            for (std::size_t c = 0; c < N; ++c) {
                                if (C(k, c).is_zero()) continue;
                                r(a, b, c) += T1(i, j, k) * A(i, a) * B(j, b) * C(k, c);
                            }
                        }
                    }
                }
        return r;
    };
    PolyThreeTensor s = (project(Pp, Pp, Pp) + project(Pm, Pm, Pm)) * Scalar(Rational(1, 3)) +
                        project(Pm, Pp, Pp) + project(Pp, Pm, Pm);
    Correction killer = correction_from_components(E, s * Scalar(-1));
    LeviCivitaResult res{D1.add(killer)};

    res.torsion_free = torsion(res.D).is_zero();
    res.metric = connection_kills_endo(res.D, Gend, &res.witness);
    res.killer_block_diagonal = true;
    for (std::size_t k = 0; k < N; ++k)
        if (!commutator(killer[k], Gend).is_zero()) {
            res.killer_block_diagonal = false;
            res.witness = "torsion killer mixes the metric eigenbundles";
            break;
        }
    return res;
}

IdentityReport metric_u0_identity(const Connection& D, const PolyMat& Gend,
                                  const std::vector<Polynomial>& u0) {
    const Algebroid& E = D.algebroid();
    std::size_t N = E.rank();
    IdentityReport rep;
    PolyMat Du0 = covariant_vector_endo(D, u0);
    PolyMat Gm = PolyMat::from_constant(E.gram(), E.d());
    // <D_v u0, w> = (G Du0)(w-index, v-index)
    PolyMat M = Gm * Du0;
    for (std::size_t v = 0; v < N; ++v)
        for (std::size_t w = 0; w < N; ++w) {
            Polynomial lhs(E.d()), rhs(E.d());
            for (std::size_t m = 0; m < N; ++m) {
                lhs += M(w, m) * Gend(m, v) + M(v, m) * Gend(m, w);
                rhs += Gend(m, w) * M(m, v) + Gend(m, v) * M(m, w);
            }
            if (lhs != rhs) {
                rep.pass = false;
                rep.witness = "frame pair (" + std::to_string(v + 1) + "," +
                              std::to_string(w + 1) + ")";
                return rep;
            }
        }
    return rep;
}

MetricU0Result make_metric_u0_parallel(const Connection& D, const PolyMat& Gend,
                                       const std::vector<Polynomial>& u0) {
    const Algebroid& E = D.algebroid();
    if (!connection_kills_endo(D, Gend, nullptr))
        throw BnError("make_metric_u0_parallel requires D Gend = 0");
    Section su0 = Section::from_components(E.d(), u0);
    if (!dorfman_lie(E, su0, Gend).is_zero())
        throw BnError("make_metric_u0_parallel requires L_{u0} Gend = 0");
    MetricU0Result res{make_u0_parallel(D, u0)};
    res.metric = connection_kills_endo(res.D, Gend, &res.witness);
    res.u0_parallel = connection_kills_vector(res.D, u0);
    res.torsion_free = torsion(res.D).is_zero();
    return res;
}

bool StageReport::pass() const {
    for (const PostCheck& c : checks)
        if (!c.pass) return false;
    return true;
}

bool PipelineReport::pass() const {
    for (const StageReport& s : stages)
        if (!s.pass()) return false;
    return true;
}

std::string PipelineReport::to_string() const {
    std::ostringstream os;
    for (const StageReport& s : stages) {
        os << s.stage << ":";
        for (const PostCheck& c : s.checks) {
            os << " " << c.name << "=" << (c.pass ? "pass" : "FAIL");
            if (!c.pass && !c.witness.empty()) os << "(" << c.witness << ")";
        }
        os << "\n";
    }
    return os.str();
}

KahlerConnectionResult build_bn_kahler_connection(const Algebroid& E, const BnStructure& S) {
    if (!S.Gend) throw BnError("structure carries no generalized metric");
    const PolyMat& Gend = *S.Gend;
    PipelineReport report;

    LeviCivitaResult lc = levi_civita(E, Gend);
    report.stages.push_back({"levi-civita",
                             {{"metric", lc.metric, lc.witness},
                              {"torsion-free", lc.torsion_free, lc.witness},
                              {"killer-block-diagonal", lc.killer_block_diagonal, lc.witness}}});

    Section su0 = Section::from_components(E.d(), S.u0);
    bool u0_lie = dorfman_lie(E, su0, Gend).is_zero();
    Connection D2 = make_u0_parallel(lc.D, S.u0);
    std::string w2;
    bool metric2 = connection_kills_endo(D2, Gend, &w2);
    report.stages.push_back(
        {"u0-parallel",
         {{"u0-lie-derivative-of-metric", u0_lie, "L_{u0} Gend != 0"},
          {"metric", metric2, w2},
          {"u0-parallel", connection_kills_vector(D2, S.u0), ""},
          {"torsion-free", torsion(D2).is_zero(), ""}}});

    // eigenbundle decomposition identities for the stage-two connection; the
    // projector columns span E+- as polynomial sections, and both identities
    // are tensorial on mixed-type triples (the eigenbundles are isotropic to
    // each other), so spanning sections suffice
    std::size_t N = E.rank();
    std::vector<PolyMat> DF = covariant_endo_slices(D2, S.F);
    PolyMat Pp = (PolyMat::identity(N, E.d()) + Gend) * Scalar(Rational(1, 2));
    PolyMat Pm = (PolyMat::identity(N, E.d()) - Gend) * Scalar(Rational(1, 2));
    auto columns = [N](const PolyMat& M) {
        std::vector<std::vector<Polynomial>> cols;
        for (std::size_t j = 0; j < N; ++j) {
            std::vector<Polynomial> c(N);
            for (std::size_t i = 0; i < N; ++i) c[i] = M(i, j);
            cols.push_back(std::move(c));
        }
        return cols;
    };
    PostCheck decompos{"mixed-type-derivative", true, ""};
    PostCheck fin{"mixed-type-bracket", true, ""};
    for (int flip = 0; flip < 2; ++flip) {
        auto Va = columns(flip ? Pm : Pp);
        auto Vb = columns(flip ? Pp : Pm);
        for (const auto& v : Va)
            for (const auto& w : Vb) {
                PolyMat DvF = directional_endo(DF, v);
                for (std::size_t u = 0; u < N; ++u)
                    if (!endo_pair(E, DvF, frame_components(E, u), w).is_zero())
                        decompos = {"mixed-type-derivative", false, "nonzero pairing"};
                for (const auto& ub : Vb) {
                    // <[v, F u] - F [v, u], w> = 0 for u, w of the type opposite to v
                    Section sv = Section::from_components(E.d(), v);
                    Section su = Section::from_components(E.d(), ub);
                    Section sFu = Section::from_components(E.d(), S.F.apply(ub));
                    std::vector<Polynomial> val =
                        pvec_sub(dorfman(E, sv, sFu).components(),
                                 S.F.apply(dorfman(E, sv, su).components()));
                    if (!pvec_pair(E, val, w).is_zero())
                        fin = {"mixed-type-bracket", false, "nonzero pairing"};
                }
            }
    }
    report.stages.push_back({"decomposition", {decompos, fin}});

    AdaptedResult ad = build_adapted(D2, S);
    bool metric_final = connection_kills_endo(ad.D, Gend, nullptr);
    bool torsion_final = torsion(ad.D).is_zero();
    report.stages.push_back({"adapted",
                             {{"preserves-F", ad.preserves_F, ad.witness},
                              {"preserves-u0", ad.preserves_u0, ad.witness},
                              {"metric", metric_final, ""},
                              {"torsion-free", torsion_final, "torsion residual nonzero"}}});
    return {ad.D, std::move(report)};
}

AdaptedSpaceModel adapted_space(const Algebroid& E, const BnStructure& S, const Connection& D,
                                std::size_t samples, std::uint64_t seed) {
    AdaptedSpaceModel model;
    QuadraticSpace V = E.fiber();
    std::vector<Scalar> origin(E.d(), Scalar(0));
    Mat F0 = S.F.eval(origin);
    std::vector<Scalar> u0c(E.rank());
    for (std::size_t i = 0; i < E.rank(); ++i) u0c[i] = S.u0[i].eval(origin);

    std::vector<StructureTensor> tensors{StructureTensor::endomorphism(F0),
                                         StructureTensor::vector_tensor(u0c)};
    if (S.Gend) tensors.push_back(StructureTensor::endomorphism(S.Gend->eval(origin)));
    std::vector<Mat> h = stabilizer_algebra(V, tensors);
    model.fiber = generalized_first_prolongation(V, h);

    // explicit parametrization span
    EigenDecomposition ed = eigen_decompose(E, S);
    std::vector<ThreeTensor> gens;
    if (S.Gend) {
        for (const auto& part : {ed.plus_F, ed.minus_F})
            for (ThreeTensor& t : u_prolongation_spanning_set(V, part))
                gens.push_back(std::move(t));
    } else {
        gens = u_prolongation_spanning_set(V, ed.L);
    }
    std::vector<std::vector<Scalar>> gen_flat, fiber_flat;
    for (const ThreeTensor& t : gens) gen_flat.push_back(t.flat());
    for (const ThreeTensor& t : model.fiber.basis) fiber_flat.push_back(t.flat());
    model.parametrization_rank = span_rank(gen_flat);
    model.dimensions_match = model.parametrization_rank == model.fiber.dimension &&
                             span_contains(fiber_flat, gen_flat) &&
                             span_contains(gen_flat, fiber_flat);
    if (!model.dimensions_match)
        model.witness = "fiber dimension " + std::to_string(model.fiber.dimension) +
                        " vs parametrization rank " + std::to_string(model.parametrization_rank);

    // closure under sampled corrections
    model.closure_verified = true;
    PolyThreeTensor T0 = torsion(D);
    std::mt19937_64 rng(seed);
    auto check_eta = [&](const ThreeTensor& t, const std::string& tag) {
        Correction eta = correction_from_constant_tensor(E, t);
        Connection Dn = D.add(eta);
        bool ok = torsion(Dn) == T0 && connection_kills_endo(Dn, S.F, nullptr) &&
                  connection_kills_vector(Dn, S.u0);
        if (ok && S.Gend) ok = connection_kills_endo(Dn, *S.Gend, nullptr);
        if (!ok) {
            model.closure_verified = false;
            model.witness = tag + " correction breaks adaptedness";
        }
    };
    check_eta(ThreeTensor(E.rank()), "zero");
    for (std::size_t s = 0; s < samples && model.closure_verified; ++s) {
        std::vector<Scalar> c = rand_coeffs(rng, model.fiber.basis.size());
        ThreeTensor t(E.rank());
        for (std::size_t b = 0; b < model.fiber.basis.size(); ++b)
            if (!c[b].is_zero()) t = t + model.fiber.basis[b] * c[b];
        check_eta(t, "sampled");
    }
    return model;
}

bool correction_in_fiber(const Algebroid& E, const ProlongationSpace& fiber,
                         const Correction& delta) {
    std::vector<std::vector<Scalar>> space;
    for (const ThreeTensor& t : fiber.basis) space.push_back(t.flat());
    PolyThreeTensor comp = correction_components(E, delta);
    // rational sample grid {-1,0,1}^d
    std::size_t d = E.d(), npts = 1;
    for (std::size_t i = 0; i < d; ++i) npts *= 3;
    for (std::size_t p = 0; p < npts; ++p) {
        std::vector<Scalar> pt(d);
        std::size_t q = p;
        for (std::size_t i = 0; i < d; ++i, q /= 3) pt[i] = Scalar(Rational((long)(q % 3) - 1));
        ThreeTensor at = comp.eval(pt);
        if (!span_contains(space, {at.flat()})) return false;
    }
    return true;
}

InfeasibilityCertificate adapted_infeasibility(const Connection& D, const BnStructure& S,
                                               const std::vector<Scalar>& point) {
    const Algebroid& E = D.algebroid();
    std::size_t N = E.rank();
    Mat F0 = S.F.eval(point);
    Mat Gi = E.gram().inverse();
    ThreeTensor Tp = torsion(D).eval(point);

    // unknowns: eta(u, j, k) skew in (j,k), indexed by (u, pair j<k)
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t j = 0; j < N; ++j)
        for (std::size_t k = j + 1; k < N; ++k) pairs.emplace_back(j, k);
    std::size_t P = pairs.size();
    InfeasibilityCertificate cert;
    cert.unknowns = N * P;
    auto coeff_of = [&](std::size_t u, std::size_t j, std::size_t k, Scalar& sign)
        -> std::size_t {
        if (j < k) {
            sign = Scalar(1);
        } else {
            std::swap(j, k);
            sign = Scalar(-1);
        }
        std::size_t idx = 0;
        for (; idx < P; ++idx)
            if (pairs[idx].first == j && pairs[idx].second == k) break;
        return u * P + idx;
    };

    std::vector<std::vector<Scalar>> rows;
    std::vector<std::vector<Scalar>> rows_aug;
    auto push_row = [&](std::vector<Scalar> row, const Scalar& b) {
        std::vector<Scalar> aug = row;
        aug.push_back(b);
        rows.push_back(std::move(row));
        rows_aug.push_back(std::move(aug));
    };

    // preservation: [eta_u, F0] = 0 with eta_u(a,b) = sum_c Gi(a,c) eta(u,b,c)
    for (std::size_t u = 0; u < N; ++u)
        for (std::size_t a = 0; a < N; ++a)
            for (std::size_t b = 0; b < N; ++b) {
                std::vector<Scalar> row(cert.unknowns, Scalar(0));
                for (std::size_t m = 0; m < N; ++m) {
                    // eta_u(a,m) F0(m,b): eta_u(a,m) = sum_c Gi(a,c) x_{u,m,c}
                    for (std::size_t c = 0; c < N; ++c) {
                        if (m != c) {
                            Scalar s1;
                            std::size_t id = coeff_of(u, m, c, s1);
                            row[id] += s1 * Gi(a, c) * F0(m, b);
                        }
                        if (b != c) {
                            Scalar s2;
                            std::size_t id = coeff_of(u, b, c, s2);
                            row[id] -= s2 * F0(a, m) * Gi(m, c);
                        }
                    }
                }
                push_row(std::move(row), Scalar(0));
            }

    // torsion shift: cyclic sum of eta = -T at the point
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = i + 1; j < N; ++j)
            for (std::size_t k = j + 1; k < N; ++k) {
                std::vector<Scalar> row(cert.unknowns, Scalar(0));
                Scalar s;
                std::size_t id = coeff_of(i, j, k, s);
                row[id] += s;
                id = coeff_of(j, k, i, s);
                row[id] += s;
                id = coeff_of(k, i, j, s);
                row[id] += s;
                push_row(std::move(row), -Tp(i, j, k));
            }

    cert.rank_homogeneous = from_rows(rows).rank();
    cert.rank_augmented = from_rows(rows_aug).rank();
    cert.infeasible = cert.rank_augmented > cert.rank_homogeneous;
    return cert;
}

}  // namespace bn
