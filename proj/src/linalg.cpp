#include "bn/linalg.hpp"

#include <algorithm>

namespace bn {

Mat Mat::identity(std::size_t n) {
    Mat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = Scalar(1);
    return m;
}

Mat Mat::operator+(const Mat& o) const {
    Mat r(rows_, cols_);
    for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] = a_[k] + o.a_[k];
    return r;
}

Mat Mat::operator-(const Mat& o) const {
    Mat r(rows_, cols_);
    for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] = a_[k] - o.a_[k];
    return r;
}

Mat Mat::operator*(const Mat& o) const {
    if (cols_ != o.rows_) throw BnError("matrix shape mismatch");
    Mat r(rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k) {
            const Scalar& aik = (*this)(i, k);
            if (aik.is_zero()) continue;
            for (std::size_t j = 0; j < o.cols_; ++j) r(i, j) += aik * o(k, j);
        }
    return r;
}

Mat Mat::operator*(const Scalar& s) const {
    Mat r(rows_, cols_);
    for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] = a_[k] * s;
    return r;
}

Mat Mat::operator-() const {
    Mat r(rows_, cols_);
    for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] = -a_[k];
    return r;
}

Mat Mat::transpose() const {
    Mat r(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
    return r;
}

Mat Mat::conj() const {
    Mat r(rows_, cols_);
    for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] = a_[k].conj();
    return r;
}

bool Mat::is_zero() const {
    return std::all_of(a_.begin(), a_.end(), [](const Scalar& s) { return s.is_zero(); });
}

std::vector<Scalar> Mat::apply(const std::vector<Scalar>& v) const {
    if (v.size() != cols_) throw BnError("matrix/vector shape mismatch");
    std::vector<Scalar> r(rows_, Scalar(0));
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            if (!(*this)(i, j).is_zero()) r[i] += (*this)(i, j) * v[j];
    return r;
}

namespace {

// Row echelon form in place; returns pivot column indices.
std::vector<std::size_t> echelon(std::vector<std::vector<Scalar>>& m) {
    std::vector<std::size_t> pivots;
    if (m.empty()) return pivots;
    std::size_t rows = m.size(), cols = m[0].size(), r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t sel = r;
        while (sel < rows && m[sel][c].is_zero()) ++sel;
        if (sel == rows) continue;
        std::swap(m[sel], m[r]);
        Scalar inv = Scalar(1) / m[r][c];
        for (std::size_t j = c; j < cols; ++j) m[r][j] *= inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || m[i][c].is_zero()) continue;
            Scalar f = m[i][c];
            for (std::size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

std::vector<std::vector<Scalar>> to_rows(const Mat& m) {
    std::vector<std::vector<Scalar>> rows(m.rows(), std::vector<Scalar>(m.cols()));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) rows[i][j] = m(i, j);
    return rows;
}

}  // namespace

std::size_t Mat::rank() const {
    auto rows = to_rows(*this);
    return echelon(rows).size();
}

std::vector<std::vector<Scalar>> Mat::kernel() const {
    auto rows = to_rows(*this);
    auto pivots = echelon(rows);
    std::vector<bool> is_pivot(cols_, false);
    for (auto c : pivots) is_pivot[c] = true;
    std::vector<std::vector<Scalar>> basis;
    for (std::size_t free = 0; free < cols_; ++free) {
        if (is_pivot[free]) continue;
        std::vector<Scalar> v(cols_, Scalar(0));
        v[free] = Scalar(1);
        // back-substitute pivot coordinates
        for (std::size_t k = 0; k < pivots.size(); ++k) v[pivots[k]] = -rows[k][free];
        basis.push_back(std::move(v));
    }
    return basis;
}

Mat Mat::inverse() const {
    if (rows_ != cols_) throw BnError("inverse of non-square matrix");
    std::vector<std::vector<Scalar>> aug(rows_, std::vector<Scalar>(2 * cols_));
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) aug[i][j] = (*this)(i, j);
        aug[i][cols_ + i] = Scalar(1);
    }
    auto pivots = echelon(aug);
    // a pivot in the identity half means the left block is rank-deficient
    if (pivots.size() != rows_ || pivots.back() >= cols_) throw BnError("singular matrix");
    Mat r(rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) r(i, j) = aug[i][cols_ + j];
    return r;
}

std::pair<int, int> Mat::signature() const {
    if (rows_ != cols_) throw BnError("signature of non-square matrix");
    // Symmetric congruence diagonalization over the rationals.
    Mat m = *this;
    std::size_t n = rows_;
    int p = 0, q = 0;
    std::vector<bool> done(n, false);
    for (std::size_t step = 0; step < n; ++step) {
        std::size_t piv = n;
        for (std::size_t i = 0; i < n; ++i)
            if (!done[i] && !m(i, i).is_zero()) {
                piv = i;
                break;
            }
        if (piv == n) {
            // remaining diagonal is zero; pull in an off-diagonal entry
            std::size_t a = n, b = n;
            for (std::size_t i = 0; i < n && a == n; ++i)
                for (std::size_t j = 0; j < n && a == n; ++j)
                    if (i != j && !done[i] && !done[j] && !m(i, j).is_zero()) {
                        a = i;
                        b = j;
                    }
            if (a == n) break;  // degenerate remainder
            for (std::size_t j = 0; j < n; ++j) m(a, j) += m(b, j);
            for (std::size_t i = 0; i < n; ++i) m(i, a) += m(i, b);
            piv = a;
        }
        Scalar d = m(piv, piv);
        for (std::size_t i = 0; i < n; ++i) {
            if (i == piv || m(i, piv).is_zero()) continue;
            Scalar f = m(i, piv) / d;
            for (std::size_t j = 0; j < n; ++j) m(i, j) -= f * m(piv, j);
        }
        for (std::size_t j = 0; j < n; ++j) {
            if (j == piv || m(piv, j).is_zero()) continue;
            Scalar f = m(piv, j) / d;
            for (std::size_t i = 0; i < n; ++i) m(i, j) -= f * m(i, piv);
        }
        if (d.re > 0) ++p;
        else if (d.re < 0) ++q;
        done[piv] = true;
    }
    return {p, q};
}

Mat from_rows(const std::vector<std::vector<Scalar>>& rows) {
    if (rows.empty()) return Mat(0, 0);
    Mat m(rows.size(), rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
    return m;
}

std::size_t span_rank(const std::vector<std::vector<Scalar>>& vecs) {
    if (vecs.empty()) return 0;
    return from_rows(vecs).rank();
}

bool span_contains(const std::vector<std::vector<Scalar>>& space,
                   const std::vector<std::vector<Scalar>>& sub) {
    if (sub.empty()) return true;
    std::size_t base = span_rank(space);
    auto joint = space;
    joint.insert(joint.end(), sub.begin(), sub.end());
    return span_rank(joint) == base;
}

// ---------------------------------------------------------------- PolyMat

PolyMat PolyMat::identity(std::size_t n, std::size_t nvars) {
    PolyMat m(n, n, nvars);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = Polynomial::constant(nvars, Scalar(1));
    return m;
}

PolyMat PolyMat::from_constant(const Mat& src, std::size_t nvars) {
    PolyMat m(src.rows(), src.cols(), nvars);
    for (std::size_t i = 0; i < src.rows(); ++i)
        for (std::size_t j = 0; j < src.cols(); ++j)
            m(i, j) = Polynomial::constant(nvars, src(i, j));
    return m;
}

PolyMat PolyMat::operator+(const PolyMat& o) const {
    PolyMat r(rows_, cols_, nvars_);
    for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] = a_[k] + o.a_[k];
    return r;
}

PolyMat PolyMat::operator-(const PolyMat& o) const {
    PolyMat r(rows_, cols_, nvars_);
    for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] = a_[k] - o.a_[k];
    return r;
}

PolyMat PolyMat::operator*(const PolyMat& o) const {
    if (cols_ != o.rows_) throw BnError("matrix shape mismatch");
    PolyMat r(rows_, o.cols_, nvars_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k) {
            const Polynomial& aik = (*this)(i, k);
            if (aik.is_zero()) continue;
            for (std::size_t j = 0; j < o.cols_; ++j) r(i, j) += aik * o(k, j);
        }
    return r;
}

PolyMat PolyMat::operator*(const Polynomial& p) const {
    PolyMat r(rows_, cols_, nvars_);
    for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] = a_[k] * p;
    return r;
}

PolyMat PolyMat::operator*(const Scalar& s) const {
    PolyMat r(rows_, cols_, nvars_);
    for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] = a_[k] * s;
    return r;
}

PolyMat PolyMat::operator-() const {
    PolyMat r(rows_, cols_, nvars_);
    for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] = -a_[k];
    return r;
}

PolyMat PolyMat::transpose() const {
    PolyMat r(cols_, rows_, nvars_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
    return r;
}

PolyMat PolyMat::conj() const {
    PolyMat r(rows_, cols_, nvars_);
    for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] = a_[k].conj();
    return r;
}

bool PolyMat::is_zero() const {
    return std::all_of(a_.begin(), a_.end(), [](const Polynomial& p) { return p.is_zero(); });
}

PolyMat PolyMat::derivative(std::size_t var) const {
    PolyMat r(rows_, cols_, nvars_);
    for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] = a_[k].derivative(var);
    return r;
}

std::vector<Polynomial> PolyMat::apply(const std::vector<Polynomial>& v) const {
    if (v.size() != cols_) throw BnError("matrix/vector shape mismatch");
    std::vector<Polynomial> r(rows_, Polynomial(nvars_));
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            if (!(*this)(i, j).is_zero()) r[i] += (*this)(i, j) * v[j];
    return r;
}

Mat PolyMat::eval(const std::vector<Scalar>& point) const {
    Mat r(rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) r(i, j) = (*this)(i, j).eval(point);
    return r;
}

PolyMat commutator(const PolyMat& a, const PolyMat& b) { return a * b - b * a; }
PolyMat anticommutator(const PolyMat& a, const PolyMat& b) { return a * b + b * a; }

}  // namespace bn
