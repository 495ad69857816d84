#pragma once

#include "bn/linalg.hpp"

#include <string>
#include <vector>

namespace bn {

// Finite-dimensional quadratic vector space: Gram matrix of <.,.> plus its
// verified signature.
struct QuadraticSpace {
    std::size_t N;
    Mat gram;
    int p, q;

    // Validates symmetry, invertibility and recomputes the signature.
    QuadraticSpace(Mat g, int expected_p, int expected_q);
    explicit QuadraticSpace(Mat g);

    Mat gram_inv() const { return gram.inverse(); }
};

// A in so(V): <Au,v> + <u,Av> = 0 against the Gram matrix.
bool is_skew(const QuadraticSpace& V, const Mat& A);

// (u ^ v)(w) = <u,w> v - <v,w> u, as a matrix.
Mat wedge_to_endo(const QuadraticSpace& V, const std::vector<Scalar>& u, const std::vector<Scalar>& v);

// Element of V* tensor Lambda^2 V*, stored as a full N^3 component array
// skew in the last two slots. Also used for arbitrary 3-tensors; the
// (anti)symmetries are the caller's contract, checked by the named builders.
class ThreeTensor {
  public:
    ThreeTensor() : N_(0) {}
    explicit ThreeTensor(std::size_t N) : N_(N), a_(N * N * N) {}

    std::size_t dim() const { return N_; }
    Scalar& operator()(std::size_t i, std::size_t j, std::size_t k) { return a_[(i * N_ + j) * N_ + k]; }
    const Scalar& operator()(std::size_t i, std::size_t j, std::size_t k) const {
        return a_[(i * N_ + j) * N_ + k];
    }

    ThreeTensor operator+(const ThreeTensor& o) const;
    ThreeTensor operator-(const ThreeTensor& o) const;
    ThreeTensor operator*(const Scalar& s) const;
    friend bool operator==(const ThreeTensor& a, const ThreeTensor& b) {
        return a.N_ == b.N_ && a.a_ == b.a_;
    }

    bool is_zero() const;
    ThreeTensor conj() const;
    bool is_real() const;
    bool skew_last_two() const;
    bool sym_first_two() const;
    bool totally_skew() const;

    const std::vector<Scalar>& flat() const { return a_; }
    std::vector<Scalar> take_flat() && { return std::move(a_); }

  private:
    std::size_t N_;
    std::vector<Scalar> a_;
};

// sk(sigma)(u,v,w) = sigma(u,v,w) - sigma(u,w,v); sigma symmetric in the
// first two slots.
ThreeTensor sk(const ThreeTensor& sigma);

// (del alpha)(u,v,w) = alpha(u,v,w) + alpha(v,w,u) + alpha(w,u,v).
ThreeTensor cyclic_del(const ThreeTensor& alpha);

// alpha(u) as an endomorphism, via the Gram identification:
// <alpha_u v, w> = alpha(u,v,w).
Mat slot_endo(const QuadraticSpace& V, const ThreeTensor& alpha, const std::vector<Scalar>& u);

// endomorphism A in so(V) -> 2-form slice alpha(u, ., .) of e^u tensor A.
ThreeTensor endo_to_three_tensor(const QuadraticSpace& V, std::size_t covector_index, const Mat& A);

// Structure tensors a stabilizer can be computed for.
struct StructureTensor {
    enum class Kind { Endomorphism, Vector } kind;
    Mat endo;                    // Kind::Endomorphism
    std::vector<Scalar> vector;  // Kind::Vector

    static StructureTensor endomorphism(Mat m) { return {Kind::Endomorphism, std::move(m), {}}; }
    static StructureTensor vector_tensor(std::vector<Scalar> v) {
        return {Kind::Vector, Mat(), std::move(v)};
    }
};

// Basis of { A in so(V) : A.T = 0 for all T } ([A,T]=0 for endomorphisms,
// A(t)=0 for vectors).
std::vector<Mat> stabilizer_algebra(const QuadraticSpace& V, const std::vector<StructureTensor>& tensors);

struct ProlongationSpace {
    std::vector<Mat> algebra;          // basis of h
    std::vector<ThreeTensor> basis;    // basis of h^<1>, as elements of V* (x) Lambda^2 V*
    std::size_t dimension = 0;
};

// h^<1> = { alpha in V* (x) h : cyclic_del(alpha) = 0 }, exact kernel computation.
ProlongationSpace generalized_first_prolongation(const QuadraticSpace& V, const std::vector<Mat>& h);

// Explicit spanning set for u(m1,m2)^<1>: real parts of
// eta = alpha (x) (beta ^ conj gamma) + beta (x) (alpha ^ conj gamma), where
// alpha, beta, gamma run over a covector basis dual to the isotropic
// i-eigenspace V_F (given by a basis of complex vectors in V).
std::vector<ThreeTensor> u_prolongation_spanning_set(const QuadraticSpace& V,
                                                     const std::vector<std::vector<Scalar>>& vf_basis);

struct SequenceReport {
    std::size_t N = 0;
    bool complexified = false;
    std::size_t dim_s3 = 0, dim_s2v = 0, dim_vlam2 = 0, dim_lam3 = 0;
    std::size_t rank_sk = 0, rank_del = 0, ker_del = 0;
    bool injective = false, ker_eq_im = false, surjective = false, alternating_sum_zero = false;
    bool pass() const { return injective && ker_eq_im && surjective && alternating_sum_zero; }
    std::string to_string() const;
};

// Exactness of 0 -> S^3 V* -> S^2 V* (x) V* -sk-> V* (x) Lambda^2 V* -del-> Lambda^3 V* -> 0.
SequenceReport check_exact_sequence(std::size_t N, bool complexified);

// Model builders and dimension facts for the structure-group algebras.
struct UModel {
    QuadraticSpace V;        // R^{2m1,2m2} + definite line, line sign (-1)^n
    Mat F;                   // complex structure on the 2n-block, zero on the line
    std::vector<Scalar> u0;  // line generator
};
UModel u_model(std::size_t m1, std::size_t m2);

struct KahlerModel {
    QuadraticSpace V;
    Mat F, Gend;
    std::vector<Scalar> u0;
    std::vector<Mat> h_plus, h_minus;  // u(k1,l1) and u(k2,l2) inside so(V)
};
KahlerModel kahler_model(std::size_t k1, std::size_t l1, std::size_t k2, std::size_t l2);

struct KahlerProlongation {
    ProlongationSpace total, plus, minus;
    bool direct_sum_verified = false;
    std::size_t expected_dimension = 0;
};

// Prolongation of u(k1,l1) + u(k2,l2) with the direct-sum decomposition
// verified by rank.
KahlerProlongation kahler_prolongation(std::size_t k1, std::size_t l1, std::size_t k2, std::size_t l2);

// dim u(k,l)^<1> = m^2 (m+1) with m = k+l (even-rank fiberwise dimension).
std::size_t u_prolongation_dimension(std::size_t m);

}  // namespace bn
