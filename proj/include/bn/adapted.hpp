#pragma once

#include "bn/structures.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace bn {

// (u ^ v)(w) = <u,w> v - <v,w> u for polynomial frame vectors, as a matrix.
PolyMat poly_wedge(const Algebroid& E, const std::vector<Polynomial>& u,
                   const std::vector<Polynomial>& v);

// D u0 as an endomorphism field: column j = components of D_{e_j} u0.
PolyMat covariant_vector_endo(const Connection& D, const std::vector<Polynomial>& u0);

// D_{e_j} A for every frame direction e_j.
std::vector<PolyMat> covariant_endo_slices(const Connection& D, const PolyMat& A);

// Base connection corrected by -1/3 of its (totally skew) torsion; the result
// is torsion-free for every twist.
Connection torsion_free_base(const Algebroid& E);

// Torsion-free D -> torsion-free D1 with D1 u0 = 0, via the correction
// eta_u = s * u0 ^ D_u u0 (u orthogonal to u0), eta_{u0} = -2 (D u0)^sk.
// The sign s is pinned by the postconditions, not transcribed: both values
// are tried and the one that makes D1 u0 = 0 and keeps the torsion zero wins.
Connection make_u0_parallel(const Connection& D, const std::vector<Polynomial>& u0);

struct IdentityReport {
    bool pass = true;
    std::string witness;
};

// Polynomial identity expressing <N_F(u,v),w> through the torsion of any
// connection with D u0 = 0 and its covariant derivatives of F:
//   <N_F(u,v),w> = -T(Fu,Fv,w) + T(u,v,w) - T(Fu,v,Fw) - T(u,Fv,Fw)
//                  + <(D_{Fu}F)v,w> - <(D_{Fv}F)u,w> + <F(D_vF)u,w>
//                  - <F(D_uF)v,w> - <F(D_wF)u,v> + <(D_{Fw}F)u,v>
// for u,v orthogonal to u0 and arbitrary w; both sides expanded independently.
IdentityReport nijenhuis_identity_check(const Connection& D, const BnStructure& S);

// A-operator of a torsion-free connection with D u0 = 0: for each frame
// direction u, the symmetric endomorphism with
//   <A_u v, w> = 1/2 (<(D_v F)u, w> + <(D_w F)u, v>)
// on the orthogonal complement of u0, extended by zero on the u0-line.
std::vector<PolyMat> a_operator(const Connection& D, const BnStructure& S);

struct AdaptedResult {
    Connection D;  // D - 1/4 {A_u, F} - 1/2 F (D_u F)
    bool preserves_F = false;
    bool preserves_u0 = false;
    bool anticommute = false;       // (D_u F) F + F (D_u F) = 0 for the input D
    bool torsion_interior = false;  // T(u,v,w) = 1/4 <N_F(u,v),w>, u,v,w _|_ u0
    bool torsion_u0 = false;        // T(u,v,u0) = 1/2 <(L_{u0}F)u, Fv>
    std::string witness;
    bool pass() const {
        return preserves_F && preserves_u0 && anticommute && torsion_interior && torsion_u0;
    }
};

// Structure-preserving connection built from a torsion-free D with D u0 = 0.
// Runs on non-integrable structures too; the torsion residual then shows up
// through the (always asserted) torsion identities.
AdaptedResult build_adapted(const Connection& D, const BnStructure& S);

struct GammaReport {
    bool d1 = true;  // T^{D1}(u,v,w) = 1/2 sum_cyc gamma(u,v,Fw), D1 = D - 1/2 F(DF)
    bool dt = true;  // T^{Dt}(u,v,w) = 1/4 sum_cyc (gamma(Fu,v,w) + gamma(u,v,Fw)) on u0-perp
    bool dt_equals_nijenhuis = true;  // that right-hand side = 1/4 <N_F(u,v),w>
    std::string witness;
    bool pass() const { return d1 && dt && dt_equals_nijenhuis; }
};

// Cross-checks of the torsion of the intermediate and final connections
// against cyclic sums of gamma(u,v,w) = <(D_u F)v, w>.
GammaReport gamma_crosscheck(const Connection& D, const BnStructure& S);

struct LeviCivitaResult {
    Connection D;
    bool metric = false;        // D Gend = 0
    bool torsion_free = false;  // T^D = 0
    bool killer_block_diagonal = false;  // torsion-killing correction preserves E+-
    std::string witness;
    bool pass() const { return metric && torsion_free && killer_block_diagonal; }
};

// Torsion-free metric connection: base connection + metric correction
// (sign pinned by the D Gend = 0 postcondition) + type-decomposed torsion
// killer (-1/3 on pure-type parts, full subtraction on the mixed parts in
// the slot of the opposite type).
LeviCivitaResult levi_civita(const Algebroid& E, const PolyMat& Gend);

// Two-sided identity behind the G-skewness of the u0-parallelizing
// correction of a torsion-free metric connection:
//   <D_{Gv} u0, w> + <D_{Gw} u0, v> = <D_v u0, Gw> + <D_w u0, Gv>.
IdentityReport metric_u0_identity(const Connection& D, const PolyMat& Gend,
                                  const std::vector<Polynomial>& u0);

struct MetricU0Result {
    Connection D;
    bool metric = false;
    bool u0_parallel = false;
    bool torsion_free = false;
    std::string witness;
    bool pass() const { return metric && u0_parallel && torsion_free; }
};

// make_u0_parallel specialised to a Levi-Civita input: additionally asserts
// that the metric survives (requires L_{u0} Gend = 0, checked).
MetricU0Result make_metric_u0_parallel(const Connection& D, const PolyMat& Gend,
                                       const std::vector<Polynomial>& u0);

struct PostCheck {
    std::string name;
    bool pass = false;
    std::string witness;
};

struct StageReport {
    std::string stage;
    std::vector<PostCheck> checks;
    bool pass() const;
};

struct PipelineReport {
    std::vector<StageReport> stages;
    bool pass() const;
    std::string to_string() const;
};

struct KahlerConnectionResult {
    Connection D;
    PipelineReport report;
};

// Full pipeline for a structure with metric: levi_civita ->
// make_metric_u0_parallel -> build_adapted, with per-stage postconditions
// including the eigenspace decomposition identities
//   <(D_v F)u, w> = 0 for v in an E+- frame and w in the opposite frame, and
//   <[v, Fu] - F[v,u], w> = 0 on the mixed-type frame triples.
// Non-integrable input is allowed; failures appear as failing checks.
KahlerConnectionResult build_bn_kahler_connection(const Algebroid& E, const BnStructure& S);

struct AdaptedSpaceModel {
    ProlongationSpace fiber;  // { eta : del eta = 0, eta_u in stabilizer } at the origin
    std::size_t parametrization_rank = 0;  // span of the Re(sk .) generators
    bool dimensions_match = false;         // fiber dim = generator span rank (= set equality)
    bool closure_verified = false;         // sampled eta keep D adapted
    std::string witness;
    bool pass() const { return dimensions_match && closure_verified; }
};

// Fiberwise model of the affine space of adapted connections at the origin,
// cross-checked against the explicit complex (or split, with metric)
// parametrization, plus closure of D + eta under random sample corrections.
AdaptedSpaceModel adapted_space(const Algebroid& E, const BnStructure& S, const Connection& D,
                                std::size_t samples = 20, std::uint64_t seed = 0);

// Membership of a correction in the fiber span, checked at every point of the
// rational sample grid.
bool correction_in_fiber(const Algebroid& E, const ProlongationSpace& fiber,
                         const Correction& delta);

struct InfeasibilityCertificate {
    std::size_t unknowns = 0;
    std::size_t rank_homogeneous = 0;
    std::size_t rank_augmented = 0;
    bool infeasible = false;  // rank_augmented > rank_homogeneous
};

// Exact rank certificate that no correction eta makes D + eta torsion-free
// while preserving F at the given point (the finite-dimensional obstruction
// used for non-integrable structures).
InfeasibilityCertificate adapted_infeasibility(const Connection& D, const BnStructure& S,
                                               const std::vector<Scalar>& point);

}  // namespace bn
