#pragma once

#include "bn/polynomial.hpp"
#include "bn/scalar.hpp"

#include <cstddef>
#include <vector>

namespace bn {

// Dense matrix over GaussianRational. Small sizes only; everything exact.
class Mat {
  public:
    Mat() : rows_(0), cols_(0) {}
    Mat(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}

    static Mat identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Scalar& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const Scalar& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    Mat operator+(const Mat& o) const;
    Mat operator-(const Mat& o) const;
    Mat operator*(const Mat& o) const;
    Mat operator*(const Scalar& s) const;
    Mat operator-() const;
    friend bool operator==(const Mat& a, const Mat& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
    }

    Mat transpose() const;
    Mat conj() const;
    bool is_zero() const;

    std::vector<Scalar> apply(const std::vector<Scalar>& v) const;

    // Gaussian elimination based; all exact.
    std::size_t rank() const;
    std::vector<std::vector<Scalar>> kernel() const;
    Mat inverse() const;  // throws BnError if singular

    // Signature (p, q) of a symmetric invertible matrix with rational entries.
    std::pair<int, int> signature() const;

  private:
    std::size_t rows_, cols_;
    std::vector<Scalar> a_;
};

// Basis of the kernel of M, as column vectors. Rank-nullity holds by
// construction; empty result means injective.
inline std::vector<std::vector<Scalar>> linear_kernel(const Mat& M) { return M.kernel(); }

// Stacks row vectors into a matrix (each inner vector one row).
Mat from_rows(const std::vector<std::vector<Scalar>>& rows);

// Rank of the span of a set of vectors.
std::size_t span_rank(const std::vector<std::vector<Scalar>>& vecs);

// True iff every vector in `sub` lies in the span of `space`.
bool span_contains(const std::vector<std::vector<Scalar>>& space,
                   const std::vector<std::vector<Scalar>>& sub);

// Matrix with polynomial entries (frame-dependent tensors, connections).
class PolyMat {
  public:
    PolyMat() : rows_(0), cols_(0), nvars_(0) {}
    PolyMat(std::size_t rows, std::size_t cols, std::size_t nvars)
        : rows_(rows), cols_(cols), nvars_(nvars), a_(rows * cols, Polynomial(nvars)) {}

    static PolyMat identity(std::size_t n, std::size_t nvars);
    static PolyMat from_constant(const Mat& m, std::size_t nvars);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t nvars() const { return nvars_; }

    Polynomial& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const Polynomial& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    PolyMat operator+(const PolyMat& o) const;
    PolyMat operator-(const PolyMat& o) const;
    PolyMat operator*(const PolyMat& o) const;
    PolyMat operator*(const Polynomial& p) const;
    PolyMat operator*(const Scalar& s) const;
    PolyMat operator-() const;
    friend bool operator==(const PolyMat& a, const PolyMat& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
    }

    PolyMat transpose() const;
    PolyMat conj() const;
    bool is_zero() const;

    PolyMat derivative(std::size_t var) const;  // entry-wise

    std::vector<Polynomial> apply(const std::vector<Polynomial>& v) const;
    Mat eval(const std::vector<Scalar>& point) const;

  private:
    std::size_t rows_, cols_, nvars_;
    std::vector<Polynomial> a_;
};

PolyMat commutator(const PolyMat& a, const PolyMat& b);
PolyMat anticommutator(const PolyMat& a, const PolyMat& b);

}  // namespace bn
