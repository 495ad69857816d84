#include "bn/quadratic.hpp"

#include <algorithm>
#include <array>
#include <sstream>

namespace bn {

QuadraticSpace::QuadraticSpace(Mat g) : N(g.rows()), gram(std::move(g)) {
    if (gram.rows() != gram.cols()) throw BnError("Gram matrix not square");
    if (!(gram.transpose() == gram)) throw BnError("Gram matrix not symmetric");
    if (gram.rank() != N) throw BnError("Gram matrix singular");
    auto [pp, qq] = gram.signature();
    p = pp;
    q = qq;
}

QuadraticSpace::QuadraticSpace(Mat g, int expected_p, int expected_q) : QuadraticSpace(std::move(g)) {
    if (p != expected_p || q != expected_q)
        throw BnError("Gram signature (" + std::to_string(p) + "," + std::to_string(q) +
                      ") does not match declared (" + std::to_string(expected_p) + "," +
                      std::to_string(expected_q) + ")");
}

bool is_skew(const QuadraticSpace& V, const Mat& A) {
    return (A.transpose() * V.gram + V.gram * A).is_zero();
}

Mat wedge_to_endo(const QuadraticSpace& V, const std::vector<Scalar>& u, const std::vector<Scalar>& v) {
    if (u.size() != V.N || v.size() != V.N) throw BnError("wedge: dimension mismatch");
    auto gu = V.gram.apply(u);
    auto gv = V.gram.apply(v);
    Mat r(V.N, V.N);
    for (std::size_t i = 0; i < V.N; ++i)
        for (std::size_t j = 0; j < V.N; ++j) r(i, j) = v[i] * gu[j] - u[i] * gv[j];
    return r;
}

ThreeTensor ThreeTensor::operator+(const ThreeTensor& o) const {
    ThreeTensor r(N_);
    for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] = a_[k] + o.a_[k];
    return r;
}

ThreeTensor ThreeTensor::operator-(const ThreeTensor& o) const {
    ThreeTensor r(N_);
    for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] = a_[k] - o.a_[k];
    return r;
}

ThreeTensor ThreeTensor::operator*(const Scalar& s) const {
    ThreeTensor r(N_);
    for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] = a_[k] * s;
    return r;
}

bool ThreeTensor::is_zero() const {
    return std::all_of(a_.begin(), a_.end(), [](const Scalar& s) { return s.is_zero(); });
}

ThreeTensor ThreeTensor::conj() const {
    ThreeTensor r(N_);
    for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] = a_[k].conj();
    return r;
}

bool ThreeTensor::is_real() const {
    return std::all_of(a_.begin(), a_.end(), [](const Scalar& s) { return s.is_real(); });
}

bool ThreeTensor::skew_last_two() const {
    for (std::size_t i = 0; i < N_; ++i)
        for (std::size_t j = 0; j < N_; ++j)
            for (std::size_t k = 0; k <= j; ++k)
                if (!((*this)(i, j, k) + (*this)(i, k, j)).is_zero()) return false;
    return true;
}

bool ThreeTensor::sym_first_two() const {
    for (std::size_t i = 0; i < N_; ++i)
        for (std::size_t j = 0; j < i; ++j)
            for (std::size_t k = 0; k < N_; ++k)
                if (!((*this)(i, j, k) - (*this)(j, i, k)).is_zero()) return false;
    return true;
}

bool ThreeTensor::totally_skew() const {
    if (!skew_last_two()) return false;
    for (std::size_t i = 0; i < N_; ++i)
        for (std::size_t j = 0; j <= i; ++j)
            for (std::size_t k = 0; k < N_; ++k)
                if (!((*this)(i, j, k) + (*this)(j, i, k)).is_zero()) return false;
    return true;
}

ThreeTensor sk(const ThreeTensor& sigma) {
    std::size_t N = sigma.dim();
    ThreeTensor r(N);
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j)
            for (std::size_t k = 0; k < N; ++k) r(i, j, k) = sigma(i, j, k) - sigma(i, k, j);
    return r;
}

ThreeTensor cyclic_del(const ThreeTensor& alpha) {
    std::size_t N = alpha.dim();
    ThreeTensor r(N);
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j)
            for (std::size_t k = 0; k < N; ++k)
                r(i, j, k) = alpha(i, j, k) + alpha(j, k, i) + alpha(k, i, j);
    return r;
}

Mat slot_endo(const QuadraticSpace& V, const ThreeTensor& alpha, const std::vector<Scalar>& u) {
    // <A v, w> = alpha(u, v, w)  =>  A = G^{-1} S^T with S_{vw} = alpha(u,v,w)
    Mat S(V.N, V.N);
    for (std::size_t j = 0; j < V.N; ++j)
        for (std::size_t k = 0; k < V.N; ++k) {
            Scalar s(0);
            for (std::size_t i = 0; i < V.N; ++i)
                if (!u[i].is_zero()) s += u[i] * alpha(i, j, k);
            S(j, k) = s;
        }
    // <Av,w> = (Av)^T G w = v^T A^T G w  =>  A^T G = S
    return V.gram_inv() * S.transpose();
}

ThreeTensor endo_to_three_tensor(const QuadraticSpace& V, std::size_t covector_index, const Mat& A) {
    ThreeTensor t(V.N);
    // <A v, w> = (A v)^T G w = v^T (A^T G) w
    Mat form = A.transpose() * V.gram;
    for (std::size_t j = 0; j < V.N; ++j)
        for (std::size_t k = 0; k < V.N; ++k) t(covector_index, j, k) = form(j, k);
    return t;
}

namespace {

std::vector<Mat> so_basis(const QuadraticSpace& V) {
    std::vector<Mat> basis;
    Mat ginv = V.gram_inv();
    for (std::size_t i = 0; i < V.N; ++i)
        for (std::size_t j = i + 1; j < V.N; ++j) {
            Mat K(V.N, V.N);
            K(i, j) = Scalar(1);
            K(j, i) = Scalar(-1);
            basis.push_back(ginv * K);
        }
    return basis;
}

}  // namespace

std::vector<Mat> stabilizer_algebra(const QuadraticSpace& V, const std::vector<StructureTensor>& tensors) {
    auto basis = so_basis(V);
    std::size_t nb = basis.size();
    // rows: one per scalar constraint, columns: coefficients over so-basis
    std::vector<std::vector<Scalar>> rows;
    for (const auto& T : tensors) {
        if (T.kind == StructureTensor::Kind::Endomorphism) {
            for (std::size_t i = 0; i < V.N; ++i)
                for (std::size_t j = 0; j < V.N; ++j) {
                    std::vector<Scalar> row(nb);
                    for (std::size_t b = 0; b < nb; ++b) {
                        Mat c = basis[b] * T.endo - T.endo * basis[b];
                        row[b] = c(i, j);
                    }
                    rows.push_back(std::move(row));
                }
        } else {
            for (std::size_t i = 0; i < V.N; ++i) {
                std::vector<Scalar> row(nb);
                for (std::size_t b = 0; b < nb; ++b) row[b] = basis[b].apply(T.vector)[i];
                rows.push_back(std::move(row));
            }
        }
    }
    std::vector<Mat> result;
    if (rows.empty()) return basis;
    auto ker = from_rows(rows).kernel();
    for (const auto& coeffs : ker) {
        Mat A(V.N, V.N);
        for (std::size_t b = 0; b < nb; ++b)
            if (!coeffs[b].is_zero()) A = A + basis[b] * coeffs[b];
        result.push_back(std::move(A));
    }
    return result;
}

ProlongationSpace generalized_first_prolongation(const QuadraticSpace& V, const std::vector<Mat>& h) {
    std::size_t N = V.N, nh = h.size();
    std::size_t ncols = N * nh;
    // Precompute the three-tensor of each unknown e^k (x) h_a.
    std::vector<ThreeTensor> gens;
    gens.reserve(ncols);
    for (std::size_t k = 0; k < N; ++k)
        for (std::size_t a = 0; a < nh; ++a) gens.push_back(endo_to_three_tensor(V, k, h[a]));
    // Constraint: total skew-symmetrization vanishes; one row per i<j<k triple.
    std::vector<std::vector<Scalar>> rows;
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = i + 1; j < N; ++j)
            for (std::size_t k = j + 1; k < N; ++k) {
                std::vector<Scalar> row(ncols);
                for (std::size_t c = 0; c < ncols; ++c) {
                    const ThreeTensor& t = gens[c];
                    row[c] = t(i, j, k) + t(j, k, i) + t(k, i, j);
                }
                rows.push_back(std::move(row));
            }
    ProlongationSpace out;
    out.algebra = h;
    std::vector<std::vector<Scalar>> ker =
        rows.empty() ? Mat(0, ncols).kernel() : from_rows(rows).kernel();
    for (const auto& coeffs : ker) {
        ThreeTensor t(N);
        for (std::size_t c = 0; c < ncols; ++c)
            if (!coeffs[c].is_zero()) t = t + gens[c] * coeffs[c];
        out.basis.push_back(std::move(t));
    }
    out.dimension = out.basis.size();
    return out;
}

std::vector<ThreeTensor> u_prolongation_spanning_set(const QuadraticSpace& V,
                                                     const std::vector<std::vector<Scalar>>& vf_basis) {
    std::size_t N = V.N, n = vf_basis.size();
    // isotropy check
    for (const auto& a : vf_basis)
        for (const auto& b : vf_basis) {
            Scalar s(0);
            auto gb = V.gram.apply(b);
            for (std::size_t i = 0; i < N; ++i) s += a[i] * gb[i];
            if (!s.is_zero()) throw BnError("V_F basis is not isotropic");
        }
    // covectors alpha_a = <conj l_a, .> span the embedded V_F^*
    std::vector<std::vector<Scalar>> alpha(n), alpha_bar(n);
    for (std::size_t a = 0; a < n; ++a) {
        std::vector<Scalar> conj_l(N);
        for (std::size_t i = 0; i < N; ++i) conj_l[i] = vf_basis[a][i].conj();
        alpha[a] = V.gram.apply(conj_l);
        alpha_bar[a] = V.gram.apply(vf_basis[a]);
    }
    auto make_eta = [&](std::size_t a, std::size_t b, std::size_t c) {
        ThreeTensor t(N);
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t j = 0; j < N; ++j)
                for (std::size_t k = 0; k < N; ++k) {
                    Scalar w_bc = alpha[b][j] * alpha_bar[c][k] - alpha[b][k] * alpha_bar[c][j];
                    Scalar w_ac = alpha[a][j] * alpha_bar[c][k] - alpha[a][k] * alpha_bar[c][j];
                    t(i, j, k) = alpha[a][i] * w_bc + alpha[b][i] * w_ac;
                }
        return t;
    };
    std::vector<ThreeTensor> out;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a; b < n; ++b)
            for (std::size_t c = 0; c < n; ++c) {
                ThreeTensor eta = make_eta(a, b, c);
                out.push_back(eta + eta.conj());                      // eta + conj(eta)
                ThreeTensor ieta = eta * Scalar::i();
                out.push_back(ieta + ieta.conj());                    // i eta + conj(i eta)
            }
    return out;
}

std::string SequenceReport::to_string() const {
    std::ostringstream os;
    os << "space: dimV=" << N << (complexified ? " (complexified)" : " (real)") << "\n"
       << "dims: S3=" << dim_s3 << " S2V=" << dim_s2v << " VL2=" << dim_vlam2 << " L3=" << dim_lam3
       << "\n"
       << "injective: " << (injective ? "pass" : "FAIL") << "\n"
       << "ker_del_eq_im_sk: " << (ker_eq_im ? "pass" : "FAIL") << "\n"
       << "surjective: " << (surjective ? "pass" : "FAIL") << "\n"
       << "alternating_sum_zero: " << (alternating_sum_zero ? "pass" : "FAIL");
    return os.str();
}

SequenceReport check_exact_sequence(std::size_t N, bool complexified) {
    // The matrices of the maps have integer entries in the coordinate bases,
    // so ranks over Q and over Q(i) coincide; the flag is recorded for the
    // report and the computation is the same exact one.
    SequenceReport rep;
    rep.N = N;
    rep.complexified = complexified;

    // coordinate bases
    std::vector<std::array<std::size_t, 3>> s3;  // i<=j<=k
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = i; j < N; ++j)
            for (std::size_t k = j; k < N; ++k) s3.push_back({i, j, k});
    std::vector<std::array<std::size_t, 3>> s2v;  // (i<=j, k)
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = i; j < N; ++j)
            for (std::size_t k = 0; k < N; ++k) s2v.push_back({i, j, k});
    std::vector<std::array<std::size_t, 3>> vl2;  // (i, j<k)
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j)
            for (std::size_t k = j + 1; k < N; ++k) vl2.push_back({i, j, k});
    std::vector<std::array<std::size_t, 3>> l3;  // i<j<k
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = i + 1; j < N; ++j)
            for (std::size_t k = j + 1; k < N; ++k) l3.push_back({i, j, k});

    rep.dim_s3 = s3.size();
    rep.dim_s2v = s2v.size();
    rep.dim_vlam2 = vl2.size();
    rep.dim_lam3 = l3.size();

    auto s2v_index = [&](std::size_t i, std::size_t j, std::size_t k) {
        if (i > j) std::swap(i, j);
        for (std::size_t t = 0; t < s2v.size(); ++t)
            if (s2v[t][0] == i && s2v[t][1] == j && s2v[t][2] == k) return t;
        throw BnError("index bug");
    };

    // inclusion S3 -> S2 (x) V*
    Mat incl(s2v.size(), s3.size());
    for (std::size_t c = 0; c < s3.size(); ++c) {
        auto [i, j, k] = s3[c];
        // the symmetric tensor e^i . e^j . e^k has component 1 at every
        // distinct (sym-pair, last-slot) coordinate it touches
        std::array<std::array<std::size_t, 3>, 3> arr = {{{i, j, k}, {i, k, j}, {j, k, i}}};
        for (auto [a, b, cc] : arr) incl(s2v_index(a, b, cc), c) = Scalar(1);
    }

    // sk : S2 (x) V* -> V* (x) Lambda^2
    Mat skm(vl2.size(), s2v.size());
    for (std::size_t r = 0; r < vl2.size(); ++r) {
        auto [i, j, k] = vl2[r];
        // (sk sigma)(i,j,k) = sigma({i,j},k) - sigma({i,k},j)
        skm(r, s2v_index(i, j, k)) += Scalar(1);
        skm(r, s2v_index(i, k, j)) += Scalar(-1);
    }

    // del : V* (x) Lambda^2 -> Lambda^3
    Mat delm(l3.size(), vl2.size());
    auto add_del = [&](std::size_t row, std::size_t a, std::size_t b, std::size_t c, int outer) {
        // contribution of alpha(a, b, c) with b,c possibly unordered
        int sign = outer;
        if (b == c) return;
        std::size_t bb = b, cc = c;
        if (bb > cc) {
            std::swap(bb, cc);
            sign = -sign;
        }
        for (std::size_t t = 0; t < vl2.size(); ++t)
            if (vl2[t][0] == a && vl2[t][1] == bb && vl2[t][2] == cc) {
                delm(row, t) += Scalar(sign);
                return;
            }
    };
    for (std::size_t r = 0; r < l3.size(); ++r) {
        auto [i, j, k] = l3[r];
        add_del(r, i, j, k, 1);
        add_del(r, j, k, i, 1);
        add_del(r, k, i, j, 1);
    }

    rep.injective = incl.rank() == rep.dim_s3;
    rep.rank_sk = skm.rank();
    rep.rank_del = delm.rank();
    rep.ker_del = rep.dim_vlam2 - rep.rank_del;
    bool composite_zero = (skm * incl).is_zero() && (delm * skm).is_zero();
    bool rank_match_s2v = rep.rank_sk == rep.dim_s2v - rep.dim_s3;
    rep.ker_eq_im = composite_zero && (rep.rank_sk == rep.ker_del) && rank_match_s2v;
    rep.surjective = rep.rank_del == rep.dim_lam3;
    long alt = static_cast<long>(rep.dim_s3) - static_cast<long>(rep.dim_s2v) +
               static_cast<long>(rep.dim_vlam2) - static_cast<long>(rep.dim_lam3);
    rep.alternating_sum_zero = alt == 0;
    return rep;
}

namespace {

// Gram/J blocks for u(k,l): k positive 2x2 pairs then l negative 2x2 pairs.
void append_u_block(std::vector<Rational>& diag, std::vector<std::pair<std::size_t, std::size_t>>& jpairs,
                    std::size_t k, std::size_t l) {
    for (std::size_t t = 0; t < k; ++t) {
        std::size_t at = diag.size();
        diag.push_back(1);
        diag.push_back(1);
        jpairs.push_back({at, at + 1});
    }
    for (std::size_t t = 0; t < l; ++t) {
        std::size_t at = diag.size();
        diag.push_back(-1);
        diag.push_back(-1);
        jpairs.push_back({at, at + 1});
    }
}

Mat diag_mat(const std::vector<Rational>& diag) {
    Mat g(diag.size(), diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) g(i, i) = Scalar(diag[i]);
    return g;
}

Mat complex_structure(std::size_t N, const std::vector<std::pair<std::size_t, std::size_t>>& jpairs) {
    Mat F(N, N);
    for (auto [a, b] : jpairs) {
        F(b, a) = Scalar(1);   // F e_a = e_b
        F(a, b) = Scalar(-1);  // F e_b = -e_a
    }
    return F;
}

}  // namespace

UModel u_model(std::size_t m1, std::size_t m2) {
    std::size_t n = m1 + m2;
    std::vector<Rational> diag;
    std::vector<std::pair<std::size_t, std::size_t>> jpairs;
    append_u_block(diag, jpairs, m1, m2);
    std::size_t line = diag.size();
    diag.push_back(n % 2 == 0 ? 1 : -1);
    int p = static_cast<int>(2 * m1 + (n % 2 == 0 ? 1 : 0));
    int q = static_cast<int>(2 * m2 + (n % 2 == 0 ? 0 : 1));
    QuadraticSpace V(diag_mat(diag), p, q);
    Mat F = complex_structure(V.N, jpairs);
    std::vector<Scalar> u0(V.N, Scalar(0));
    u0[line] = Scalar(1);
    return {std::move(V), std::move(F), std::move(u0)};
}

KahlerModel kahler_model(std::size_t k1, std::size_t l1, std::size_t k2, std::size_t l2) {
    std::size_t n = k1 + l1 + k2 + l2;
    std::size_t m = n / 2;
    std::size_t expect_k = (n % 2 == 0) ? m : m + 1;
    std::size_t expect_l = m;
    if (k1 + k2 != expect_k || l1 + l2 != expect_l)
        throw BnError("inconsistent signature split for n=" + std::to_string(n));
    std::vector<Rational> diag;
    std::vector<std::pair<std::size_t, std::size_t>> jp_plus, jp_minus, jp_all;
    append_u_block(diag, jp_plus, k1, l1);
    std::size_t plus_end = diag.size();
    append_u_block(diag, jp_minus, k2, l2);
    std::size_t minus_end = diag.size();
    std::size_t line = diag.size();
    diag.push_back(n % 2 == 0 ? 1 : -1);
    QuadraticSpace V(diag_mat(diag), static_cast<int>(n + 1), static_cast<int>(n));
    jp_all = jp_plus;
    jp_all.insert(jp_all.end(), jp_minus.begin(), jp_minus.end());
    Mat F = complex_structure(V.N, jp_all);
    Mat Gend(V.N, V.N);
    for (std::size_t i = 0; i < plus_end; ++i) Gend(i, i) = Scalar(1);
    for (std::size_t i = plus_end; i < minus_end; ++i) Gend(i, i) = Scalar(-1);
    Gend(line, line) = Scalar(n % 2 == 0 ? 1 : -1);
    std::vector<Scalar> u0(V.N, Scalar(0));
    u0[line] = Scalar(1);

    std::vector<StructureTensor> base = {StructureTensor::endomorphism(F),
                                         StructureTensor::endomorphism(Gend),
                                         StructureTensor::vector_tensor(u0)};
    auto kill = [&](std::size_t from, std::size_t to, std::vector<StructureTensor> ts) {
        for (std::size_t i = from; i < to; ++i) {
            std::vector<Scalar> e(V.N, Scalar(0));
            e[i] = Scalar(1);
            ts.push_back(StructureTensor::vector_tensor(std::move(e)));
        }
        return ts;
    };
    KahlerModel model{V, std::move(F), std::move(Gend), std::move(u0), {}, {}};
    model.h_plus = stabilizer_algebra(V, kill(plus_end, minus_end, base));  // vanish on V_-
    model.h_minus = stabilizer_algebra(V, kill(0, plus_end, base));         // vanish on V_+
    return model;
}

KahlerProlongation kahler_prolongation(std::size_t k1, std::size_t l1, std::size_t k2, std::size_t l2) {
    KahlerModel model = kahler_model(k1, l1, k2, l2);
    std::vector<StructureTensor> q = {StructureTensor::endomorphism(model.F),
                                      StructureTensor::endomorphism(model.Gend),
                                      StructureTensor::vector_tensor(model.u0)};
    std::vector<Mat> h = stabilizer_algebra(model.V, q);
    KahlerProlongation out;
    out.total = generalized_first_prolongation(model.V, h);
    out.plus = generalized_first_prolongation(model.V, model.h_plus);
    out.minus = generalized_first_prolongation(model.V, model.h_minus);
    std::size_t p1 = k1 + l1, p2 = k2 + l2;
    out.expected_dimension = p1 * p1 * (p1 + 1) + p2 * p2 * (p2 + 1);

    // direct-sum check by rank on flattened coordinates
    std::vector<std::vector<Scalar>> total_rows, sum_rows;
    for (const auto& t : out.total.basis) total_rows.push_back(t.flat());
    for (const auto& t : out.plus.basis) sum_rows.push_back(t.flat());
    for (const auto& t : out.minus.basis) sum_rows.push_back(t.flat());
    out.direct_sum_verified = out.total.dimension == out.plus.dimension + out.minus.dimension &&
                              span_rank(sum_rows) == sum_rows.size() &&
                              span_contains(total_rows, sum_rows);
    return out;
}

std::size_t u_prolongation_dimension(std::size_t m) { return m * m * (m + 1); }

}  // namespace bn
