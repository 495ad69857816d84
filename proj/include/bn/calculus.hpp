#pragma once

#include "bn/polynomial.hpp"

#include <map>
#include <vector>

namespace bn {

// Polynomial vector field on R^d: d components.
class VectorField {
  public:
    explicit VectorField(std::size_t d) : d_(d), comps_(d, Polynomial(d)) {}
    VectorField(std::size_t d, std::vector<Polynomial> comps) : d_(d), comps_(std::move(comps)) {}

    std::size_t dim() const { return d_; }
    Polynomial& operator[](std::size_t i) { return comps_[i]; }
    const Polynomial& operator[](std::size_t i) const { return comps_[i]; }

    bool is_zero() const;
    Polynomial apply(const Polynomial& f) const;  // X(f)

    VectorField operator+(const VectorField& o) const;
    VectorField operator-(const VectorField& o) const;
    VectorField operator*(const Polynomial& f) const;
    friend bool operator==(const VectorField& a, const VectorField& b) {
        return a.d_ == b.d_ && a.comps_ == b.comps_;
    }

  private:
    std::size_t d_;
    std::vector<Polynomial> comps_;
};

// Differential k-form with polynomial coefficients; keys are strictly
// increasing index tuples of length k (degree-0 forms use the empty tuple).
class DifferentialForm {
  public:
    DifferentialForm(std::size_t d, std::size_t degree) : d_(d), k_(degree) {}

    static DifferentialForm scalar(std::size_t d, Polynomial f);
    static DifferentialForm dx(std::size_t d, std::size_t i);

    std::size_t dim() const { return d_; }
    std::size_t degree() const { return k_; }
    bool is_zero() const { return comps_.empty(); }

    const std::map<std::vector<unsigned>, Polynomial>& comps() const { return comps_; }
    void set(const std::vector<unsigned>& idx, Polynomial p);  // idx strictly increasing
    Polynomial coeff(const std::vector<unsigned>& idx) const;

    // Fully antisymmetric evaluation on an arbitrary index tuple.
    Polynomial component(std::vector<unsigned> idx) const;

    DifferentialForm operator+(const DifferentialForm& o) const;
    DifferentialForm operator-(const DifferentialForm& o) const;
    DifferentialForm operator*(const Polynomial& f) const;
    DifferentialForm operator*(const Scalar& s) const;
    DifferentialForm operator-() const;
    friend bool operator==(const DifferentialForm& a, const DifferentialForm& b) {
        return a.d_ == b.d_ && a.k_ == b.k_ && a.comps_ == b.comps_;
    }

  private:
    std::size_t d_, k_;
    std::map<std::vector<unsigned>, Polynomial> comps_;
};

DifferentialForm exterior_derivative(const DifferentialForm& w);
DifferentialForm wedge(const DifferentialForm& a, const DifferentialForm& b);
DifferentialForm interior(const VectorField& X, const DifferentialForm& w);
DifferentialForm lie_derivative(const VectorField& X, const DifferentialForm& w);
VectorField lie_bracket(const VectorField& X, const VectorField& Y);

}  // namespace bn
