#pragma once

#include "bn/courant.hpp"

#include <optional>
#include <string>
#include <vector>

namespace bn {

// Generalized almost complex structure of odd type: skew endomorphism F of
// rank 2d with F^2 = -Id + (-1)^d <.,u0> u0, F u0 = 0, <u0,u0> = (-1)^d.
// Optionally paired with a generalized metric involution Gend.
struct BnStructure {
    PolyMat F;                    // (2d+1)^2 polynomial matrix in the frame
    std::vector<Polynomial> u0;   // frame components
    std::optional<PolyMat> Gend;  // generalized metric involution, if any
};

struct StructureReport {
    bool skew = true;          // F^T G + G F = 0
    bool squares = true;       // F^2 = -Id + (-1)^d <.,u0> u0
    bool kills_u0 = true;      // F u0 = 0
    bool u0_norm = true;       // <u0,u0> = (-1)^d
    bool rank = true;          // rank F = 2d on a rational sample grid
    std::string witness;
    bool pass() const { return skew && squares && kills_u0 && u0_norm && rank; }
    std::string to_string() const;
};

StructureReport validate_bn_gacs(const Algebroid& E, const BnStructure& S);

struct MetricReport {
    bool involution = true;      // Gend^2 = Id
    bool self_adjoint = true;    // <Gend u, v> = <u, Gend v>
    bool minus_nondegenerate = true;  // <.,.> restricted to E_- nondegenerate
    bool minus_anchored = true;  // pi|_{E_-} pointwise invertible
    bool commutes = true;        // Gend F = F Gend
    bool fixes_u0 = true;        // Gend u0 = (-1)^d u0
    bool companion = true;       // Gend F satisfies the almost-complex invariants
    bool u0_lie = true;          // L_{u0} Gend = 0 (asserted when both integrable)
    std::string witness;
    bool pass() const {
        return involution && self_adjoint && minus_nondegenerate && minus_anchored &&
               commutes && fixes_u0 && companion && u0_lie;
    }
    std::string to_string() const;
};

MetricReport validate_pseudo_hermitian(const Algebroid& E, const BnStructure& S);

// Constant basis of U^perp = u0^perp (requires constant u0, as all shipped
// structures have).
std::vector<std::vector<Scalar>> uperp_basis(const Algebroid& E,
                                             const std::vector<Polynomial>& u0);

// N_F(u,v) = [Fu, Fv] - [u,v] - F([Fu,v] + [u,Fv]); u,v must be orthogonal
// to u0 (throws otherwise).
Section nijenhuis(const Algebroid& E, const BnStructure& S, const Section& u,
                  const Section& v);

struct IntegrabilityReport {
    bool integrable = false;
    std::string witness;            // frame pair with nonzero N_F, if any
    bool u0_lie_checked = false;    // L_{u0} F = 0 (only asserted on pass)
    bool l_closed_checked = false;  // [Gamma(L), Gamma(L)] in Gamma(L)
    std::string to_string() const;
};

IntegrabilityReport is_integrable(const Algebroid& E, const BnStructure& S);

// Pointwise eigenbundle frames (computed at a rational base point; all
// shipped structures are constant, so one point determines the frames).
struct EigenDecomposition {
    std::size_t N = 0;
    bool u0_in_plus = false;  // parity branch: u0 in E_+ iff d even
    std::vector<std::vector<Scalar>> L, Lbar;  // i/-i eigenframes of F
    std::vector<Scalar> u0;
    // pseudo-Hermitian only: i-eigenframes of F inside (E_+-)^C
    std::vector<std::vector<Scalar>> plus_F, minus_F;
    bool decomposition_verified = false;  // rank checks of the direct sums
};

EigenDecomposition eigen_decompose(const Algebroid& E, const BnStructure& S,
                                   const std::vector<Scalar>& point);
EigenDecomposition eigen_decompose(const Algebroid& E, const BnStructure& S);  // origin

// Shipped structure catalog (rational data only).
struct Fixture {
    std::string name;
    Algebroid E;
    BnStructure S;
};

Fixture fixture_cx_even();            // d=2, constant F from J, u0 = e
Fixture fixture_cx_odd();             // d=1, u0 = del - dx of norm -1
Fixture fixture_kah();                // d=2, Euclidean Gend + cx_even F
Fixture fixture_cx_even_f2();         // cx_even with closed twist F2 = dx1^dx2
Fixture fixture_ni();                 // d=3, x3-dependent conjugated F, not integrable
Fixture fixture_kah3(bool h3_twist);  // d=3 pseudo-Hermitian, odd parity branch

}  // namespace bn
