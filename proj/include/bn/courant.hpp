#pragma once

#include "bn/calculus.hpp"
#include "bn/linalg.hpp"
#include "bn/quadratic.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace bn {

// Coefficients of the split-model Dorfman bracket (see dorfman below). The
// canonical values are not transcribed on faith: bracket_coefficient_scan
// searches the box {-2..2}^3 and the test suite asserts the surviving set.
struct BracketConstants {
    int c1, c2, c3;
    friend bool operator==(const BracketConstants& a, const BracketConstants& b) {
        return a.c1 == b.c1 && a.c2 == b.c2 && a.c3 == b.c3;
    }
};
inline constexpr BracketConstants kBracketConstants{1, -2, 2};

// Split model of an odd exact Courant algebroid over R^d:
// E = TM + R + T*M, frame order (d_1..d_d, e, dx_1..dx_d), rank 2d+1,
// pairing <X+f+xi, Y+g+eta> = 1/2(eta(X) + xi(Y)) + fg of signature (d+1,d).
class Algebroid {
  public:
    explicit Algebroid(std::size_t d);
    Algebroid(std::size_t d, DifferentialForm F2, DifferentialForm H3);

    std::size_t d() const { return d_; }
    std::size_t rank() const { return 2 * d_ + 1; }
    const DifferentialForm& F2() const { return F2_; }
    const DifferentialForm& H3() const { return H3_; }
    bool twisted() const { return !F2_.is_zero() || !H3_.is_zero(); }

    // dF2 = 0 and dH3 = F2 ^ F2; on failure appends a reason to *why.
    bool twist_closed(std::string* why = nullptr) const;

    const Mat& gram() const { return gram_; }
    QuadraticSpace fiber() const;  // constant-coefficient quadratic space

  private:
    std::size_t d_;
    DifferentialForm F2_, H3_;
    Mat gram_;
};

// Section X + f + xi with polynomial coefficients.
struct Section {
    std::size_t d;
    VectorField X;
    Polynomial f;
    DifferentialForm xi;  // degree 1

    explicit Section(std::size_t dim)
        : d(dim), X(dim), f(dim), xi(dim, 1) {}
    Section(VectorField x, Polynomial fc, DifferentialForm form);

    static Section frame(std::size_t d, std::size_t k);  // k in [0, 2d+1)
    static Section from_components(std::size_t d, const std::vector<Polynomial>& comps);
    std::vector<Polynomial> components() const;  // length 2d+1, frame order

    bool is_zero() const;
    Section operator+(const Section& o) const;
    Section operator-(const Section& o) const;
    Section operator*(const Polynomial& p) const;
    Section operator*(const Scalar& s) const;
    friend bool operator==(const Section& a, const Section& b) {
        return a.X == b.X && a.f == b.f && a.xi == b.xi;
    }
};

VectorField anchor(const Section& u);
Polynomial pairing(const Section& u, const Section& v);

// The coboundary section Df = 0 + 0 + df, satisfying <Df, v> = 1/2 pi(v)f.
Section coboundary(std::size_t d, const Polynomial& f);

// Dorfman bracket with explicit coefficients; dorfman() uses the pinned ones.
Section dorfman(const Algebroid& E, const Section& u, const Section& v,
                const BracketConstants& c);
Section dorfman(const Algebroid& E, const Section& u, const Section& v);

// Dorfman-Lie derivative of an endomorphism section A (matrix in the frame):
// (L_u A)v = [u, Av] - A[u, v], assembled column-wise on the frame.
PolyMat dorfman_lie(const Algebroid& E, const Section& u, const PolyMat& A);

struct AxiomReport {
    bool jacobi = true, leibniz = true, invariance = true, symmetric = true;
    std::string witness;  // first failing axiom and triple, empty on pass
    bool pass() const { return jacobi && leibniz && invariance && symmetric; }
    std::string to_string() const;
};

// Verifies the four Courant axioms on consecutive (cyclic) triples of the
// sample list, plus the twist closure conditions, as polynomial identities.
AxiomReport check_courant_axioms(const Algebroid& E, const std::vector<Section>& samples,
                                 const BracketConstants& c = kBracketConstants);

// Deterministic random sections: coefficients in {-2..2} on all monomials of
// total degree <= degree. Same seed => identical output on every platform.
std::vector<Section> random_sections(std::size_t d, std::uint64_t seed, unsigned degree,
                                     std::size_t count);

// Searches the box {-2..2}^3 for coefficient triples that pass the axiom
// suite on a twisted 4-dimensional model; returns all survivors.
std::vector<BracketConstants> bracket_coefficient_scan();

// 3-tensor of polynomials on the frame (torsion forms, corrections).
class PolyThreeTensor {
  public:
    PolyThreeTensor() : N_(0), nvars_(0) {}
    PolyThreeTensor(std::size_t N, std::size_t nvars)
        : N_(N), nvars_(nvars), a_(N * N * N, Polynomial(nvars)) {}

    std::size_t dim() const { return N_; }
    std::size_t nvars() const { return nvars_; }
    Polynomial& operator()(std::size_t i, std::size_t j, std::size_t k) {
        return a_[(i * N_ + j) * N_ + k];
    }
    const Polynomial& operator()(std::size_t i, std::size_t j, std::size_t k) const {
        return a_[(i * N_ + j) * N_ + k];
    }

    PolyThreeTensor operator+(const PolyThreeTensor& o) const;
    PolyThreeTensor operator-(const PolyThreeTensor& o) const;
    PolyThreeTensor operator*(const Scalar& s) const;
    friend bool operator==(const PolyThreeTensor& a, const PolyThreeTensor& b) {
        return a.N_ == b.N_ && a.a_ == b.a_;
    }

    bool is_zero() const;
    bool totally_skew() const;
    ThreeTensor eval(const std::vector<Scalar>& point) const;

  private:
    std::size_t N_, nvars_;
    std::vector<Polynomial> a_;
};

PolyThreeTensor cyclic_del(const PolyThreeTensor& t);

// Correction tensor eta in E* (x) so(E): one skew polynomial matrix per frame
// direction; eta(u) = sum_k u^k eta[k].
using Correction = std::vector<PolyMat>;

Correction zero_correction(const Algebroid& E);
bool correction_is_skew(const Algebroid& E, const Correction& eta);
Correction correction_from_constant_tensor(const Algebroid& E, const ThreeTensor& t);
// eta as a frame 3-tensor: eta(i,j,k) = <eta_i e_j, e_k>.
PolyThreeTensor correction_components(const Algebroid& E, const Correction& eta);
Correction correction_from_components(const Algebroid& E, const PolyThreeTensor& t);

// Generalized connection D = D0 + eta, D0 the frame-wise directional
// derivative along the anchor (metric for the constant Gram by skewness).
class Connection {
  public:
    Connection(const Algebroid& E, Correction eta);  // throws on non-skew eta
    static Connection base(const Algebroid& E);

    const Algebroid& algebroid() const { return *E_; }
    const Correction& eta() const { return eta_; }

    Section apply(const Section& u, const Section& v) const;  // D_u v
    PolyMat apply_to_endo(const Section& u, const PolyMat& A) const;  // D_u A
    std::vector<Polynomial> apply_to_section_components(const Section& u,
                                                        const std::vector<Polynomial>& v) const;

    Connection add(const Correction& extra) const;

  private:
    const Algebroid* E_;
    Correction eta_;
};

// Torsion T^D(u,v,w) = <D_u v - D_v u - [u,v], w> + <D_w u, v>, on the frame.
PolyThreeTensor torsion(const Connection& D);
// Direct evaluation on arbitrary sections (tensoriality cross-check path).
Polynomial torsion_on_sections(const Connection& D, const Section& u, const Section& v,
                               const Section& w);

struct ConnectionReport {
    bool leibniz = true, metric = true;
    std::string witness;
    bool pass() const { return leibniz && metric; }
};
ConnectionReport check_connection_axioms(const Connection& D,
                                         const std::vector<Section>& samples);

// (T^D)^{F,-}(u,v) = 1/2 (T^D(Fu, Fv, u0) - T^D(u, v, u0)) on the frame.
PolyMat torsion_anti_part(const Connection& D, const PolyMat& F,
                          const std::vector<Polynomial>& u0);

}  // namespace bn
