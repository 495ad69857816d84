#include "bn/courant.hpp"

#include <algorithm>
#include <random>
#include <sstream>

namespace bn {

namespace {

Mat model_gram(std::size_t d) {
    std::size_t N = 2 * d + 1;
    Mat g(N, N);
    for (std::size_t i = 0; i < d; ++i) {
        g(i, d + 1 + i) = Scalar(Rational(1, 2));
        g(d + 1 + i, i) = Scalar(Rational(1, 2));
    }
    g(d, d) = Scalar(1);
    return g;
}

Polynomial two_form_at(const DifferentialForm& w, const VectorField& X, const VectorField& Y) {
    return interior(Y, interior(X, w)).coeff({});
}

}  // namespace

Algebroid::Algebroid(std::size_t d)
    : d_(d), F2_(d, 2), H3_(d, 3), gram_(model_gram(d)) {}

Algebroid::Algebroid(std::size_t d, DifferentialForm F2, DifferentialForm H3)
    : d_(d), F2_(std::move(F2)), H3_(std::move(H3)), gram_(model_gram(d)) {
    if (F2_.dim() != d || F2_.degree() != 2) throw BnError("F2 must be a 2-form on R^d");
    if (H3_.dim() != d || H3_.degree() != 3) throw BnError("H3 must be a 3-form on R^d");
}

bool Algebroid::twist_closed(std::string* why) const {
    bool ok = true;
    if (!exterior_derivative(F2_).is_zero()) {
        ok = false;
        if (why) *why += "dF2 != 0; ";
    }
    if (!(exterior_derivative(H3_) - wedge(F2_, F2_)).is_zero()) {
        ok = false;
        if (why) *why += "dH3 != F2^F2; ";
    }
    return ok;
}

QuadraticSpace Algebroid::fiber() const {
    return QuadraticSpace(gram_, static_cast<int>(d_ + 1), static_cast<int>(d_));
}

Section::Section(VectorField x, Polynomial fc, DifferentialForm form)
    : d(x.dim()), X(std::move(x)), f(std::move(fc)), xi(std::move(form)) {
    if (xi.dim() != d || xi.degree() != 1 || f.nvars() != d)
        throw BnError("section component mismatch");
}

Section Section::frame(std::size_t d, std::size_t k) {
    Section s(d);
    if (k < d)
        s.X[k] = Polynomial::constant(d, Scalar(1));
    else if (k == d)
        s.f = Polynomial::constant(d, Scalar(1));
    else if (k < 2 * d + 1)
        s.xi = DifferentialForm::dx(d, k - d - 1);
    else
        throw BnError("frame index out of range");
    return s;
}

Section Section::from_components(std::size_t d, const std::vector<Polynomial>& comps) {
    if (comps.size() != 2 * d + 1) throw BnError("component count mismatch");
    Section s(d);
    for (std::size_t i = 0; i < d; ++i) s.X[i] = comps[i];
    s.f = comps[d];
    for (std::size_t i = 0; i < d; ++i)
        if (!comps[d + 1 + i].is_zero()) s.xi.set({static_cast<unsigned>(i)}, comps[d + 1 + i]);
    return s;
}

std::vector<Polynomial> Section::components() const {
    std::vector<Polynomial> c(2 * d + 1, Polynomial(d));
    for (std::size_t i = 0; i < d; ++i) c[i] = X[i];
    c[d] = f;
    for (std::size_t i = 0; i < d; ++i) c[d + 1 + i] = xi.coeff({static_cast<unsigned>(i)});
    return c;
}

bool Section::is_zero() const { return X.is_zero() && f.is_zero() && xi.is_zero(); }

Section Section::operator+(const Section& o) const { return {X + o.X, f + o.f, xi + o.xi}; }
Section Section::operator-(const Section& o) const {
    return {X - o.X, f - o.f, xi - o.xi};
}
Section Section::operator*(const Polynomial& p) const { return {X * p, f * p, xi * p}; }
Section Section::operator*(const Scalar& s) const {
    Polynomial p = Polynomial::constant(d, s);
    return *this * p;
}

VectorField anchor(const Section& u) { return u.X; }

Polynomial pairing(const Section& u, const Section& v) {
    if (u.d != v.d) throw BnError("pairing: dimension mismatch");
    Polynomial r(u.d);
    for (std::size_t i = 0; i < u.d; ++i) {
        unsigned ui = static_cast<unsigned>(i);
        r += u.X[i] * v.xi.coeff({ui}) + v.X[i] * u.xi.coeff({ui});
    }
    r = r * Scalar(Rational(1, 2));
    r += u.f * v.f;
    return r;
}

Section coboundary(std::size_t d, const Polynomial& f) {
    Section s(d);
    auto df = exterior_derivative(DifferentialForm::scalar(d, f));
    s.xi = df;
    return s;
}

Section dorfman(const Algebroid& E, const Section& u, const Section& v,
                const BracketConstants& c) {
    std::size_t d = E.d();
    const VectorField &X = u.X, &Y = v.X;
    const Polynomial &f = u.f, &g = v.f;
    const DifferentialForm &xi = u.xi, &eta = v.xi;

    VectorField rX = lie_bracket(X, Y);
    Polynomial rf = X.apply(g) - Y.apply(f) + two_form_at(E.F2(), X, Y) * Scalar(c.c1);
    DifferentialForm rxi = lie_derivative(X, eta) - interior(Y, exterior_derivative(xi));
    rxi = rxi + exterior_derivative(DifferentialForm::scalar(d, f)) * (g * Scalar(2));
    rxi = rxi + interior(Y, interior(X, E.H3()));
    rxi = rxi + interior(X, E.F2()) * (g * Scalar(c.c2));
    rxi = rxi + interior(Y, E.F2()) * (f * Scalar(c.c3));
    return {std::move(rX), std::move(rf), std::move(rxi)};
}

Section dorfman(const Algebroid& E, const Section& u, const Section& v) {
    return dorfman(E, u, v, kBracketConstants);
}

PolyMat dorfman_lie(const Algebroid& E, const Section& u, const PolyMat& A) {
    std::size_t N = E.rank(), d = E.d();
    PolyMat r(N, N, d);
    for (std::size_t k = 0; k < N; ++k) {
        Section v = Section::frame(d, k);
        std::vector<Polynomial> Av(N, Polynomial(d));
        for (std::size_t i = 0; i < N; ++i) Av[i] = A(i, k);
        Section col = dorfman(E, u, Section::from_components(d, Av)) -
                      Section::from_components(d, A.apply(dorfman(E, u, v).components()));
        auto cc = col.components();
        for (std::size_t i = 0; i < N; ++i) r(i, k) = cc[i];
    }
    return r;
}

std::string AxiomReport::to_string() const {
    std::ostringstream os;
    os << "jacobi: " << (jacobi ? "pass" : "FAIL") << "\n"
       << "module_leibniz: " << (leibniz ? "pass" : "FAIL") << "\n"
       << "metric_invariance: " << (invariance ? "pass" : "FAIL") << "\n"
       << "symmetric_part: " << (symmetric ? "pass" : "FAIL");
    if (!witness.empty()) os << "\nwitness: " << witness;
    return os.str();
}

AxiomReport check_courant_axioms(const Algebroid& E, const std::vector<Section>& samples,
                                 const BracketConstants& c) {
    AxiomReport rep;
    std::string why;
    if (!E.twist_closed(&why)) {
        // expose the closure failure through the axiom it breaks: a non-closed
        // twist falsifies the Jacobi identity on concrete sections below, but
        // we also record the structural reason up front.
        rep.witness = "twist closure: " + why;
    }
    std::size_t n = samples.size(), d = E.d();
    auto note = [&](bool& flag, const char* name, std::size_t i) {
        if (flag) {
            flag = false;
            if (rep.witness.empty())
                rep.witness = std::string(name) + " fails on sample triple starting at index " +
                              std::to_string(i);
        }
    };
    for (std::size_t i = 0; i < n; ++i) {
        const Section& u = samples[i];
        const Section& v = samples[(i + 1) % n];
        const Section& w = samples[(i + 2) % n];
        // Leibniz rule of the bracket in its second slot
        Polynomial fmul = Polynomial::variable(d, i % d) + Polynomial::constant(d, Scalar(1));
        if (!(dorfman(E, u, v * fmul, c) - dorfman(E, u, v, c) * fmul -
              v * anchor(u).apply(fmul))
                 .is_zero())
            note(rep.leibniz, "module_leibniz", i);
        // invariance of the pairing
        if (!(anchor(u).apply(pairing(v, w)) - pairing(dorfman(E, u, v, c), w) -
              pairing(v, dorfman(E, u, w, c)))
                 .is_zero())
            note(rep.invariance, "metric_invariance", i);
        // symmetric part is exact
        if (!(dorfman(E, u, v, c) + dorfman(E, v, u, c) -
              coboundary(d, pairing(u, v) * Scalar(2)))
                 .is_zero())
            note(rep.symmetric, "symmetric_part", i);
        // Jacobi identity in Leibniz form
        Section jac = dorfman(E, u, dorfman(E, v, w, c), c) -
                      dorfman(E, dorfman(E, u, v, c), w, c) -
                      dorfman(E, v, dorfman(E, u, w, c), c);
        if (!jac.is_zero()) note(rep.jacobi, "jacobi", i);
    }
    if (!rep.pass() && rep.witness.empty()) rep.witness = "twist closure";
    if (rep.pass() && !why.empty()) {
        // closure failed structurally but no sampled witness caught it; treat
        // as a Jacobi failure with the structural witness
        rep.jacobi = false;
    }
    return rep;
}

std::vector<Section> random_sections(std::size_t d, std::uint64_t seed, unsigned degree,
                                     std::size_t count) {
    // enumerate monomials of total degree <= degree
    std::vector<Exponents> monos;
    Exponents cur(d, 0);
    auto rec = [&](auto&& self, std::size_t var, unsigned left) -> void {
        if (var == d) {
            monos.push_back(cur);
            return;
        }
        for (unsigned e = 0; e <= left; ++e) {
            cur[var] = e;
            self(self, var + 1, left - e);
        }
        cur[var] = 0;
    };
    rec(rec, 0, degree);
    std::mt19937_64 rng(seed);
    auto coef = [&] { return Scalar(static_cast<long>(rng() % 5) - 2); };
    std::vector<Section> out;
    for (std::size_t s = 0; s < count; ++s) {
        std::vector<Polynomial> comps(2 * d + 1, Polynomial(d));
        for (auto& p : comps)
            for (const auto& m : monos) p.set_coeff(m, coef());
        out.push_back(Section::from_components(d, comps));
    }
    return out;
}

std::vector<BracketConstants> bracket_coefficient_scan() {
    // Twisted 4-dimensional model whose twist couples F2 and H3:
    // F2 = dx1^dx2 + dx3^dx4, H3 = 2 x1 dx2^dx3^dx4, so dH3 = F2^F2.
    const std::size_t d = 4;
    DifferentialForm F2(d, 2), H3(d, 3);
    F2.set({0, 1}, Polynomial::constant(d, Scalar(1)));
    F2.set({2, 3}, Polynomial::constant(d, Scalar(1)));
    H3.set({1, 2, 3}, Polynomial::variable(d, 0) * Scalar(2));
    Algebroid E(d, F2, H3);

    std::size_t N = E.rank();
    std::vector<Section> frames;
    for (std::size_t k = 0; k < N; ++k) frames.push_back(Section::frame(d, k));
    std::vector<Section> affine;  // x1- and x3-weighted frames
    for (std::size_t k = 0; k < N; ++k) {
        affine.push_back(frames[k] * Polynomial::variable(d, 0));
        affine.push_back(frames[k] * Polynomial::variable(d, 2));
    }
    std::vector<Section> small = frames;
    small.insert(small.end(), affine.begin(), affine.end());

    auto invariance_ok = [&](const BracketConstants& c) {
        for (const auto& u : small)
            for (const auto& v : frames)
                for (const auto& w : frames)
                    if (!(anchor(u).apply(pairing(v, w)) - pairing(dorfman(E, u, v, c), w) -
                          pairing(v, dorfman(E, u, w, c)))
                             .is_zero())
                        return false;
        return true;
    };
    auto symmetric_ok = [&](const BracketConstants& c) {
        // symmetric in (u,v), so frames x small covers small x frames too
        for (const auto& u : frames)
            for (const auto& v : small)
                if (!(dorfman(E, u, v, c) + dorfman(E, v, u, c) -
                      coboundary(d, pairing(u, v) * Scalar(2)))
                         .is_zero())
                    return false;
        return true;
    };
    auto jacobi_ok = [&](const BracketConstants& c) {
        auto jac = [&](const Section& u, const Section& v, const Section& w) {
            return (dorfman(E, u, dorfman(E, v, w, c), c) -
                    dorfman(E, dorfman(E, u, v, c), w, c) -
                    dorfman(E, v, dorfman(E, u, w, c), c))
                .is_zero();
        };
        // frame triples with the affine factor rotating through every slot
        for (const auto& a : small)
            for (const auto& v : frames)
                for (const auto& w : frames) {
                    if (!jac(a, v, w)) return false;
                    if (!jac(v, a, w)) return false;
                    if (!jac(v, w, a)) return false;
                }
        return true;
    };

    std::vector<BracketConstants> survivors;
    for (int c1 = -2; c1 <= 2; ++c1)
        for (int c2 = -2; c2 <= 2; ++c2)
            for (int c3 = -2; c3 <= 2; ++c3) {
                BracketConstants c{c1, c2, c3};
                if (!symmetric_ok(c)) continue;   // pins c2 + c3 = 0 (cheap)
                if (!invariance_ok(c)) continue;  // pins c2 = -2 c1
                if (!jacobi_ok(c)) continue;      // needs dH3 = F2^F2 coupling
                survivors.push_back(c);
            }
    return survivors;
}

PolyThreeTensor PolyThreeTensor::operator+(const PolyThreeTensor& o) const {
    PolyThreeTensor r(N_, nvars_);
    for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] = a_[k] + o.a_[k];
    return r;
}

PolyThreeTensor PolyThreeTensor::operator-(const PolyThreeTensor& o) const {
    PolyThreeTensor r(N_, nvars_);
    for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] = a_[k] - o.a_[k];
    return r;
}

PolyThreeTensor PolyThreeTensor::operator*(const Scalar& s) const {
    PolyThreeTensor r(N_, nvars_);
    for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] = a_[k] * s;
    return r;
}

bool PolyThreeTensor::is_zero() const {
    return std::all_of(a_.begin(), a_.end(), [](const Polynomial& p) { return p.is_zero(); });
}

bool PolyThreeTensor::totally_skew() const {
    for (std::size_t i = 0; i < N_; ++i)
        for (std::size_t j = 0; j < N_; ++j)
            for (std::size_t k = 0; k < N_; ++k) {
                if (!((*this)(i, j, k) + (*this)(i, k, j)).is_zero()) return false;
                if (!((*this)(i, j, k) + (*this)(j, i, k)).is_zero()) return false;
            }
    return true;
}

ThreeTensor PolyThreeTensor::eval(const std::vector<Scalar>& point) const {
    ThreeTensor r(N_);
    for (std::size_t i = 0; i < N_; ++i)
        for (std::size_t j = 0; j < N_; ++j)
            for (std::size_t k = 0; k < N_; ++k) r(i, j, k) = (*this)(i, j, k).eval(point);
    return r;
}

PolyThreeTensor cyclic_del(const PolyThreeTensor& t) {
    std::size_t N = t.dim();
    PolyThreeTensor r(N, t.nvars());
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j)
            for (std::size_t k = 0; k < N; ++k)
                r(i, j, k) = t(i, j, k) + t(j, k, i) + t(k, i, j);
    return r;
}

Correction zero_correction(const Algebroid& E) {
    return Correction(E.rank(), PolyMat(E.rank(), E.rank(), E.d()));
}

bool correction_is_skew(const Algebroid& E, const Correction& eta) {
    if (eta.size() != E.rank()) return false;
    PolyMat G = PolyMat::from_constant(E.gram(), E.d());
    for (const auto& m : eta)
        if (!(m.transpose() * G + G * m).is_zero()) return false;
    return true;
}

Correction correction_from_constant_tensor(const Algebroid& E, const ThreeTensor& t) {
    std::size_t N = E.rank();
    if (t.dim() != N) throw BnError("correction tensor dimension mismatch");
    Mat ginv = E.gram().inverse();
    Correction eta;
    for (std::size_t i = 0; i < N; ++i) {
        // <eta_i v, w> = t(i, v, w)  =>  eta_i = G^{-1} S_i^T, S_i = t(i,.,.)
        Mat S(N, N);
        for (std::size_t j = 0; j < N; ++j)
            for (std::size_t k = 0; k < N; ++k) S(j, k) = t(i, j, k);
        eta.push_back(PolyMat::from_constant(ginv * S.transpose(), E.d()));
    }
    return eta;
}

PolyThreeTensor correction_components(const Algebroid& E, const Correction& eta) {
    std::size_t N = E.rank();
    PolyThreeTensor t(N, E.d());
    PolyMat G = PolyMat::from_constant(E.gram(), E.d());
    for (std::size_t i = 0; i < N; ++i) {
        PolyMat form = eta[i].transpose() * G;  // <eta_i e_j, e_k> = form(j,k)
        for (std::size_t j = 0; j < N; ++j)
            for (std::size_t k = 0; k < N; ++k) t(i, j, k) = form(j, k);
    }
    return t;
}

Correction correction_from_components(const Algebroid& E, const PolyThreeTensor& t) {
    std::size_t N = E.rank();
    if (t.dim() != N) throw BnError("correction tensor dimension mismatch");
    PolyMat ginv = PolyMat::from_constant(E.gram().inverse(), E.d());
    Correction eta;
    for (std::size_t i = 0; i < N; ++i) {
        PolyMat S(N, N, E.d());
        for (std::size_t j = 0; j < N; ++j)
            for (std::size_t k = 0; k < N; ++k) S(k, j) = t(i, j, k);  // transpose placement
        eta.push_back(ginv * S);
    }
    return eta;
}

Connection::Connection(const Algebroid& E, Correction eta) : E_(&E), eta_(std::move(eta)) {
    if (!correction_is_skew(E, eta_))
        throw BnError("connection correction is not pointwise skew");
}

Connection Connection::base(const Algebroid& E) { return Connection(E, zero_correction(E)); }

std::vector<Polynomial> Connection::apply_to_section_components(
    const Section& u, const std::vector<Polynomial>& v) const {
    std::size_t N = E_->rank(), d = E_->d();
    auto uc = u.components();
    std::vector<Polynomial> r(N, Polynomial(d));
    for (std::size_t i = 0; i < N; ++i) {
        // directional derivative along the anchor
        for (std::size_t a = 0; a < d; ++a) r[i] += u.X[a] * v[i].derivative(a);
        // correction term eta(u) v
        for (std::size_t k = 0; k < N; ++k) {
            if (uc[k].is_zero()) continue;
            for (std::size_t j = 0; j < N; ++j) {
                const Polynomial& m = eta_[k](i, j);
                if (!m.is_zero() && !v[j].is_zero()) r[i] += uc[k] * m * v[j];
            }
        }
    }
    return r;
}

Section Connection::apply(const Section& u, const Section& v) const {
    return Section::from_components(E_->d(), apply_to_section_components(u, v.components()));
}

PolyMat Connection::apply_to_endo(const Section& u, const PolyMat& A) const {
    // (D_u A) v = D_u(Av) - A(D_u v); on the frame this is the directional
    // derivative of A plus the commutator [eta(u), A].
    std::size_t N = E_->rank(), d = E_->d();
    PolyMat r(N, N, d);
    for (std::size_t a = 0; a < d; ++a) r = r + A.derivative(a) * u.X[a];
    auto uc = u.components();
    for (std::size_t k = 0; k < N; ++k)
        if (!uc[k].is_zero()) r = r + commutator(eta_[k], A) * uc[k];
    return r;
}

Connection Connection::add(const Correction& extra) const {
    Correction e = eta_;
    for (std::size_t k = 0; k < e.size(); ++k) e[k] = e[k] + extra[k];
    return Connection(*E_, std::move(e));
}

PolyThreeTensor torsion(const Connection& D) {
    const Algebroid& E = D.algebroid();
    std::size_t N = E.rank(), d = E.d();
    std::vector<Section> fr;
    for (std::size_t k = 0; k < N; ++k) fr.push_back(Section::frame(d, k));
    PolyThreeTensor T(N, d);
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) {
            Section s = D.apply(fr[i], fr[j]) - D.apply(fr[j], fr[i]) - dorfman(E, fr[i], fr[j]);
            for (std::size_t k = 0; k < N; ++k)
                T(i, j, k) = pairing(s, fr[k]) + pairing(D.apply(fr[k], fr[i]), fr[j]);
        }
    return T;
}

Polynomial torsion_on_sections(const Connection& D, const Section& u, const Section& v,
                               const Section& w) {
    const Algebroid& E = D.algebroid();
    Section s = D.apply(u, v) - D.apply(v, u) - dorfman(E, u, v);
    return pairing(s, w) + pairing(D.apply(w, u), v);
}

ConnectionReport check_connection_axioms(const Connection& D,
                                         const std::vector<Section>& samples) {
    ConnectionReport rep;
    const Algebroid& E = D.algebroid();
    std::size_t n = samples.size(), d = E.d();
    for (std::size_t i = 0; i < n; ++i) {
        const Section& u = samples[i];
        const Section& v = samples[(i + 1) % n];
        Polynomial f = Polynomial::variable(d, i % d);
        if (!(D.apply(v, u * f) - u * anchor(v).apply(f) - D.apply(v, u) * f).is_zero()) {
            if (rep.leibniz) rep.witness = "leibniz fails at sample " + std::to_string(i);
            rep.leibniz = false;
        }
        const Section& w = samples[(i + 2) % n];
        if (!(anchor(w).apply(pairing(u, v)) - pairing(D.apply(w, u), v) -
              pairing(u, D.apply(w, v)))
                 .is_zero()) {
            if (rep.metric) rep.witness = "metricity fails at sample " + std::to_string(i);
            rep.metric = false;
        }
    }
    return rep;
}

PolyMat torsion_anti_part(const Connection& D, const PolyMat& F,
                          const std::vector<Polynomial>& u0) {
    const Algebroid& E = D.algebroid();
    std::size_t N = E.rank(), d = E.d();
    Section su0 = Section::from_components(d, u0);
    PolyMat r(N, N, d);
    for (std::size_t i = 0; i < N; ++i) {
        std::vector<Polynomial> fi(N, Polynomial(d));
        for (std::size_t a = 0; a < N; ++a) fi[a] = F(a, i);
        Section Fei = Section::from_components(d, fi);
        Section ei = Section::frame(d, i);
        for (std::size_t j = 0; j < N; ++j) {
            std::vector<Polynomial> fj(N, Polynomial(d));
            for (std::size_t a = 0; a < N; ++a) fj[a] = F(a, j);
            Section Fej = Section::from_components(d, fj);
            Section ej = Section::frame(d, j);
            Polynomial val = torsion_on_sections(D, Fei, Fej, su0) -
                             torsion_on_sections(D, ei, ej, su0);
            r(i, j) = val * Scalar(Rational(1, 2));
        }
    }
    return r;
}

}  // namespace bn
