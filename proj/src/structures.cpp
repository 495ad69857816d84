#include "bn/structures.hpp"

#include <sstream>

namespace bn {

namespace {

bool constant_components(const std::vector<Polynomial>& v, std::vector<Scalar>* out) {
    std::vector<Scalar> c;
    for (const auto& p : v) {
        if (!p.is_constant()) return false;
        c.push_back(p.constant_term());
    }
    if (out) *out = std::move(c);
    return true;
}

// grid {-1,0,1}^d of rational sample points
std::vector<std::vector<Scalar>> sample_grid(std::size_t d) {
    std::vector<std::vector<Scalar>> pts(1);
    pts[0] = {};
    for (std::size_t i = 0; i < d; ++i) {
        std::vector<std::vector<Scalar>> next;
        for (const auto& p : pts)
            for (int v : {-1, 0, 1}) {
                auto q = p;
                q.push_back(Scalar(v));
                next.push_back(std::move(q));
            }
        pts = std::move(next);
    }
    return pts;
}

Section section_of(std::size_t d, const std::vector<Scalar>& v) {
    std::vector<Polynomial> comps;
    for (const auto& s : v) comps.push_back(Polynomial::constant(d, s));
    return Section::from_components(d, comps);
}

std::vector<Scalar> conj_vec(const std::vector<Scalar>& v) {
    std::vector<Scalar> r;
    for (const auto& s : v) r.push_back(s.conj());
    return r;
}

// kernel of the stack of the given matrices
std::vector<std::vector<Scalar>> stacked_kernel(const std::vector<Mat>& ms) {
    std::size_t cols = ms.front().cols(), rows = 0;
    for (const auto& m : ms) rows += m.rows();
    Mat st(rows, cols);
    std::size_t at = 0;
    for (const auto& m : ms) {
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t j = 0; j < cols; ++j) st(at + i, j) = m(i, j);
        at += m.rows();
    }
    return st.kernel();
}

}  // namespace

std::string StructureReport::to_string() const {
    std::ostringstream os;
    os << "skew: " << (skew ? "pass" : "FAIL") << "\n"
       << "squares: " << (squares ? "pass" : "FAIL") << "\n"
       << "kills_u0: " << (kills_u0 ? "pass" : "FAIL") << "\n"
       << "u0_norm: " << (u0_norm ? "pass" : "FAIL") << "\n"
       << "rank: " << (rank ? "pass" : "FAIL");
    if (!witness.empty()) os << "\nwitness: " << witness;
    return os.str();
}

StructureReport validate_bn_gacs(const Algebroid& E, const BnStructure& S) {
    StructureReport rep;
    std::size_t N = E.rank(), d = E.d();
    PolyMat G = PolyMat::from_constant(E.gram(), d);
    const PolyMat& F = S.F;
    if (!(F.transpose() * G + G * F).is_zero()) {
        rep.skew = false;
        rep.witness = "F is not skew for the pairing";
    }
    // <u0,u0> = (-1)^d
    Polynomial norm(d);
    auto Gu0 = G.apply(S.u0);
    for (std::size_t i = 0; i < N; ++i) norm += S.u0[i] * Gu0[i];
    Scalar want(d % 2 == 0 ? 1 : -1);
    if (!(norm - Polynomial::constant(d, want)).is_zero()) {
        rep.u0_norm = false;
        if (rep.witness.empty()) rep.witness = "<u0,u0> != (-1)^n: " + norm.to_string();
    }
    // F u0 = 0
    for (const auto& p : F.apply(S.u0))
        if (!p.is_zero()) {
            rep.kills_u0 = false;
            if (rep.witness.empty()) rep.witness = "F u0 != 0";
            break;
        }
    // F^2 = -Id + (-1)^d u0 <., u0>
    PolyMat proj(N, N, d);
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) proj(i, j) = S.u0[i] * Gu0[j] * want;
    PolyMat resid = F * F + PolyMat::identity(N, d) - proj;
    if (!resid.is_zero()) {
        rep.squares = false;
        if (rep.witness.empty()) {
            for (std::size_t i = 0; i < N && rep.witness.empty(); ++i)
                for (std::size_t j = 0; j < N; ++j)
                    if (!resid(i, j).is_zero()) {
                        rep.witness = "F^2 residual at (" + std::to_string(i) + "," +
                                      std::to_string(j) + "): " + resid(i, j).to_string();
                        break;
                    }
        }
    }
    // rank 2d at each grid point
    for (const auto& p : sample_grid(d)) {
        if (F.eval(p).rank() != 2 * d) {
            rep.rank = false;
            if (rep.witness.empty()) rep.witness = "rank F != 2n at a sample point";
            break;
        }
    }
    return rep;
}

std::vector<std::vector<Scalar>> uperp_basis(const Algebroid& E,
                                             const std::vector<Polynomial>& u0) {
    std::vector<Scalar> u0c;
    if (!constant_components(u0, &u0c))
        throw BnError("u0 with non-constant components is not supported here");
    Mat row(1, E.rank());
    auto g = E.gram().apply(u0c);
    for (std::size_t j = 0; j < E.rank(); ++j) row(0, j) = g[j];
    return row.kernel();
}

Section nijenhuis(const Algebroid& E, const BnStructure& S, const Section& u,
                  const Section& v) {
    Section su0 = Section::from_components(E.d(), S.u0);
    if (!pairing(u, su0).is_zero() || !pairing(v, su0).is_zero())
        throw BnError("Nijenhuis arguments must be orthogonal to u0");
    auto apF = [&](const Section& s) {
        return Section::from_components(E.d(), S.F.apply(s.components()));
    };
    Section Fu = apF(u), Fv = apF(v);
    return dorfman(E, Fu, Fv) - dorfman(E, u, v) - apF(dorfman(E, Fu, v) + dorfman(E, u, Fv));
}

std::string IntegrabilityReport::to_string() const {
    std::ostringstream os;
    os << "integrable: " << (integrable ? "yes" : "no");
    if (!witness.empty()) os << "\nwitness: " << witness;
    if (integrable) {
        os << "\nu0_lie_zero: " << (u0_lie_checked ? "pass" : "not checked");
        os << "\nl_bracket_closed: " << (l_closed_checked ? "pass" : "not checked");
    }
    return os.str();
}

IntegrabilityReport is_integrable(const Algebroid& E, const BnStructure& S) {
    IntegrabilityReport rep;
    std::size_t d = E.d();
    auto basis = uperp_basis(E, S.u0);
    rep.integrable = true;
    for (std::size_t a = 0; a < basis.size() && rep.integrable; ++a)
        for (std::size_t b = a + 1; b < basis.size(); ++b) {
            Section u = section_of(d, basis[a]), v = section_of(d, basis[b]);
            if (!nijenhuis(E, S, u, v).is_zero()) {
                rep.integrable = false;
                rep.witness = "N_F != 0 on orthogonal-basis pair (" + std::to_string(a) + "," +
                              std::to_string(b) + ")";
                break;
            }
        }
    if (!rep.integrable) return rep;
    // F preserved by u0 along the bracket
    Section su0 = Section::from_components(d, S.u0);
    if (dorfman_lie(E, su0, S.F).is_zero()) rep.u0_lie_checked = true;
    // Gamma(L) closed under the bracket (constant structures only)
    bool constant_F = true;
    for (std::size_t i = 0; i < S.F.rows() && constant_F; ++i)
        for (std::size_t j = 0; j < S.F.cols(); ++j)
            if (!S.F(i, j).is_constant()) {
                constant_F = false;
                break;
            }
    if (constant_F) {
        auto dec = eigen_decompose(E, S);
        bool closed = true;
        for (const auto& li : dec.L)
            for (const auto& lj : dec.L) {
                Section b = dorfman(E, section_of(d, li), section_of(d, lj));
                for (const auto& lk : dec.L)
                    if (!pairing(b, section_of(d, lk)).is_zero()) closed = false;
                if (!pairing(b, su0).is_zero()) closed = false;
            }
        rep.l_closed_checked = closed;
        if (!closed) {
            rep.integrable = false;
            rep.witness = "Gamma(L) not closed under the bracket";
        }
    }
    return rep;
}

EigenDecomposition eigen_decompose(const Algebroid& E, const BnStructure& S,
                                   const std::vector<Scalar>& point) {
    EigenDecomposition dec;
    std::size_t N = E.rank(), d = E.d();
    dec.N = N;
    Mat F0 = S.F.eval(point);
    Mat Ai = F0 - Mat::identity(N) * Scalar::i();
    dec.L = Ai.kernel();
    for (const auto& l : dec.L) dec.Lbar.push_back(conj_vec(l));
    std::vector<Polynomial> u0p = S.u0;
    dec.u0.clear();
    for (const auto& p : u0p) dec.u0.push_back(p.eval(point));
    if (dec.L.size() != d) throw BnError("i-eigenspace of F has unexpected rank");
    // isotropy of L
    for (const auto& a : dec.L)
        for (const auto& b : dec.L) {
            auto gb = E.gram().apply(b);
            Scalar s(0);
            for (std::size_t i = 0; i < N; ++i) s += a[i] * gb[i];
            if (!s.is_zero()) throw BnError("i-eigenspace of F is not isotropic");
        }
    if (!S.Gend) {
        dec.decomposition_verified = true;
        return dec;
    }
    Mat G0 = S.Gend->eval(point);
    Mat I = Mat::identity(N);
    dec.plus_F = stacked_kernel({Ai, G0 - I});
    dec.minus_F = stacked_kernel({Ai, G0 + I});
    auto g_u0 = G0.apply(dec.u0);
    Scalar sign(d % 2 == 0 ? 1 : -1);
    bool fixes = true;
    for (std::size_t i = 0; i < N; ++i)
        if (g_u0[i] != dec.u0[i] * sign) fixes = false;
    dec.u0_in_plus = fixes && d % 2 == 0;
    // parity-dependent direct sums: (E_s)^C = [span(u0) +] (E_s cap L) + conj,
    // with u0 in E_+ iff d is even
    auto span_dim = [&](std::vector<std::vector<Scalar>> vecs, bool with_u0) {
        if (with_u0) vecs.push_back(dec.u0);
        return span_rank(vecs);
    };
    std::size_t dim_plus = d + 1, dim_minus = d;
    std::vector<std::vector<Scalar>> plus_all = dec.plus_F, minus_all = dec.minus_F;
    for (const auto& v : dec.plus_F) plus_all.push_back(conj_vec(v));
    for (const auto& v : dec.minus_F) minus_all.push_back(conj_vec(v));
    bool even = d % 2 == 0;
    dec.decomposition_verified = fixes &&
                                 span_dim(plus_all, even) == dim_plus &&
                                 span_dim(minus_all, !even) == dim_minus &&
                                 plus_all.size() + (even ? 1 : 0) == dim_plus &&
                                 minus_all.size() + (even ? 0 : 1) == dim_minus;
    return dec;
}

EigenDecomposition eigen_decompose(const Algebroid& E, const BnStructure& S) {
    return eigen_decompose(E, S, std::vector<Scalar>(E.d(), Scalar(0)));
}

std::string MetricReport::to_string() const {
    std::ostringstream os;
    os << "involution: " << (involution ? "pass" : "FAIL") << "\n"
       << "self_adjoint: " << (self_adjoint ? "pass" : "FAIL") << "\n"
       << "minus_nondegenerate: " << (minus_nondegenerate ? "pass" : "FAIL") << "\n"
       << "minus_anchored: " << (minus_anchored ? "pass" : "FAIL") << "\n"
       << "commutes_with_F: " << (commutes ? "pass" : "FAIL") << "\n"
       << "fixes_u0: " << (fixes_u0 ? "pass" : "FAIL") << "\n"
       << "companion_structure: " << (companion ? "pass" : "FAIL") << "\n"
       << "u0_lie_zero: " << (u0_lie ? "pass" : "FAIL");
    if (!witness.empty()) os << "\nwitness: " << witness;
    return os.str();
}

MetricReport validate_pseudo_hermitian(const Algebroid& E, const BnStructure& S) {
    MetricReport rep;
    if (!S.Gend) {
        rep.involution = false;
        rep.witness = "no generalized metric supplied";
        return rep;
    }
    std::size_t N = E.rank(), d = E.d();
    const PolyMat& Gend = *S.Gend;
    PolyMat G = PolyMat::from_constant(E.gram(), d);
    auto fail = [&](bool& flag, const std::string& w) {
        flag = false;
        if (rep.witness.empty()) rep.witness = w;
    };
    if (!(Gend * Gend - PolyMat::identity(N, d)).is_zero()) fail(rep.involution, "Gend^2 != Id");
    if (!(Gend.transpose() * G - G * Gend).is_zero())
        fail(rep.self_adjoint, "Gend not self-adjoint for the pairing");
    if (!(Gend * S.F - S.F * Gend).is_zero()) fail(rep.commutes, "Gend F != F Gend");
    Scalar sign(d % 2 == 0 ? 1 : -1);
    {
        auto gu = Gend.apply(S.u0);
        for (std::size_t i = 0; i < N; ++i)
            if (!(gu[i] - S.u0[i] * sign).is_zero()) {
                fail(rep.fixes_u0, "Gend u0 != (-1)^n u0");
                break;
            }
    }
    // E_- at every grid point: pairing nondegenerate and anchor bijective
    for (const auto& p : sample_grid(d)) {
        Mat G0 = Gend.eval(p);
        auto em = (G0 + Mat::identity(N)).kernel();
        if (em.size() != d) {
            fail(rep.minus_nondegenerate, "dim E_- != n at a sample point");
            break;
        }
        Mat B(d, d), P(d, d);
        for (std::size_t a = 0; a < d; ++a) {
            auto g = E.gram().apply(em[a]);
            for (std::size_t b = 0; b < d; ++b) {
                Scalar s(0);
                for (std::size_t i = 0; i < N; ++i) s += em[b][i] * g[i];
                B(a, b) = s;
            }
            for (std::size_t i = 0; i < d; ++i) P(i, a) = em[a][i];  // anchor components
        }
        if (B.rank() != d) {
            fail(rep.minus_nondegenerate, "pairing degenerate on E_- at a sample point");
            break;
        }
        if (P.rank() != d) {
            fail(rep.minus_anchored, "anchor not bijective on E_- at a sample point");
            break;
        }
    }
    // companion structure Gend F
    BnStructure comp{Gend * S.F, S.u0, std::nullopt};
    StructureReport cs = validate_bn_gacs(E, comp);
    if (!cs.pass()) fail(rep.companion, "companion Gend F: " + cs.witness);
    // L_{u0} Gend = 0, asserted when both F and Gend F are integrable
    if (rep.pass()) {
        auto i1 = is_integrable(E, S);
        auto i2 = is_integrable(E, comp);
        if (i1.integrable && i2.integrable) {
            Section su0 = Section::from_components(d, S.u0);
            if (!dorfman_lie(E, su0, Gend).is_zero()) fail(rep.u0_lie, "L_{u0} Gend != 0");
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// fixtures

namespace {

PolyMat const_mat(std::size_t N, std::size_t d,
                  const std::vector<std::tuple<std::size_t, std::size_t, Rational>>& entries) {
    Mat m(N, N);
    for (const auto& [i, j, v] : entries) m(i, j) = Scalar(v);
    return PolyMat::from_constant(m, d);
}

std::vector<Polynomial> const_vec(std::size_t N, std::size_t d,
                                  const std::vector<std::pair<std::size_t, Rational>>& entries) {
    std::vector<Polynomial> v(N, Polynomial(d));
    for (const auto& [i, s] : entries) v[i] = Polynomial::constant(d, Scalar(s));
    return v;
}

// d=2 complex-structure block: F d1 = d2, F d2 = -d1, F dx1 = dx2, F dx2 = -dx1
std::vector<std::tuple<std::size_t, std::size_t, Rational>> cx_even_entries() {
    return {{1, 0, 1}, {0, 1, -1}, {4, 3, 1}, {3, 4, -1}};
}

}  // namespace

Fixture fixture_cx_even() {
    std::size_t d = 2, N = 5;
    return {"cx_even", Algebroid(d),
            BnStructure{const_mat(N, d, cx_even_entries()), const_vec(N, d, {{2, 1}}),
                        std::nullopt}};
}

Fixture fixture_cx_odd() {
    // frame (d1, e, dx1); u0 = d1 - dx1; F e = d1 + dx1, F d1 = F dx1 = -e/2
    std::size_t d = 1, N = 3;
    return {"cx_odd", Algebroid(d),
            BnStructure{const_mat(N, d,
                                  {{0, 1, 1}, {2, 1, 1}, {1, 0, Rational(-1, 2)},
                                   {1, 2, Rational(-1, 2)}}),
                        const_vec(N, d, {{0, 1}, {2, -1}}), std::nullopt}};
}

Fixture fixture_kah() {
    Fixture f = fixture_cx_even();
    f.name = "kah";
    // Gend swaps d_i <-> dx_i and fixes e (E_- spanned by d_i - dx_i)
    f.S.Gend = const_mat(5, 2, {{3, 0, 1}, {0, 3, 1}, {4, 1, 1}, {1, 4, 1}, {2, 2, 1}});
    return f;
}

Fixture fixture_cx_even_f2() {
    std::size_t d = 2;
    DifferentialForm F2(d, 2), H3(d, 3);
    F2.set({0, 1}, Polynomial::constant(d, Scalar(1)));
    Fixture f = fixture_cx_even();
    return {"cx_even_f2", Algebroid(d, F2, H3), f.S};
}

Fixture fixture_ni() {
    // conjugate the d = 3 structure by I + x3 N with the nilpotent skew
    // N = d1 ^ dx2.  N kills u0 = d3 - dx3 and I + x3 N is orthogonal, so
    // every pointwise invariant survives, but the coordinate-dependent mixing
    // of tangent and cotangent directions destroys bracket involutivity.
    Fixture base = fixture_kah3(false);
    std::size_t d = 3, N = 7;
    QuadraticSpace V = base.E.fiber();
    std::vector<Scalar> w1(N, Scalar(0)), w2(N, Scalar(0));
    w1[0] = Scalar(1);  // d1
    w2[5] = Scalar(1);  // dx2
    Mat nil = wedge_to_endo(V, w1, w2);
    PolyMat x3N = PolyMat::from_constant(nil, d) * Polynomial::variable(d, 2);
    PolyMat P = PolyMat::identity(N, d) + x3N;
    PolyMat Q = PolyMat::identity(N, d) - x3N;
    return {"ni", base.E, BnStructure{P * base.S.F * Q, base.S.u0, std::nullopt}};
}

Fixture fixture_kah3(bool h3_twist) {
    std::size_t d = 3, N = 7;
    // frame (d1,d2,d3,e,dx1,dx2,dx3); u0 = d3 - dx3 (norm -1);
    // F: complex block on (d1,d2,dx1,dx2); F e = d3 + dx3, F(d3+dx3) = -e
    std::vector<std::tuple<std::size_t, std::size_t, Rational>> f = {
        {1, 0, 1}, {0, 1, -1}, {5, 4, 1}, {4, 5, -1},          // block
        {2, 3, 1}, {6, 3, 1},                                  // F e = d3 + dx3
        {3, 2, Rational(-1, 2)}, {3, 6, Rational(-1, 2)}};     // F d3 = F dx3 = -e/2
    std::vector<std::tuple<std::size_t, std::size_t, Rational>> g = {
        {4, 0, 1}, {0, 4, 1}, {5, 1, 1}, {1, 5, 1}, {6, 2, 1}, {2, 6, 1}, {3, 3, 1}};
    DifferentialForm F2(d, 2), H3(d, 3);
    BnStructure S{const_mat(N, d, f), const_vec(N, d, {{2, 1}, {6, -1}}), const_mat(N, d, g)};
    if (!h3_twist) return {"kah3", Algebroid(d, F2, H3), S};
    // twisted variant: transport the constant data along the non-closed
    // 2-form x3/2 dx1^dx2, which lands on the -1/2 volume-twisted bracket;
    // both the structure and its companion stay integrable there
    QuadraticSpace V = Algebroid(d).fiber();
    std::vector<Scalar> w1(N, Scalar(0)), w2(N, Scalar(0));
    w1[4] = Scalar(1);  // dx1
    w2[5] = Scalar(1);  // dx2
    PolyMat xN = PolyMat::from_constant(wedge_to_endo(V, w1, w2), d) *
                 Polynomial::variable(d, 2);
    PolyMat P = PolyMat::identity(N, d) + xN;
    PolyMat Q = PolyMat::identity(N, d) - xN;
    H3.set({0, 1, 2}, Polynomial::constant(d, Scalar(Rational(-1, 2))));
    BnStructure St{P * S.F * Q, S.u0, P * (*S.Gend) * Q};
    return {"kah3_h3", Algebroid(d, F2, H3), St};
}

}  // namespace bn
