#pragma once
//
// Truncated Taylor series ("jets") about a fixed center. Coefficient k holds
// f^(k)(center) / k!. Arithmetic truncates to the smaller order of the operands.
//

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "errors.hpp"

namespace bessel_ccf {

class TaylorJet {
public:
    TaylorJet() = default;
    TaylorJet(double center, std::vector<double> coefficients)
        : center_(center), c_(std::move(coefficients)) {
        if (c_.empty()) c_.push_back(0.0);
    }

    static TaylorJet constant(double center, double value, int order) {
        std::vector<double> c(static_cast<size_t>(order) + 1, 0.0);
        c[0] = value;
        return {center, std::move(c)};
    }
    /// The identity map t -> t expanded about `center`.
    static TaylorJet variable(double center, int order) {
        std::vector<double> c(static_cast<size_t>(order) + 1, 0.0);
        c[0] = center;
        if (order >= 1) c[1] = 1.0;
        return {center, std::move(c)};
    }

    double center() const noexcept { return center_; }
    int order() const noexcept { return static_cast<int>(c_.size()) - 1; }
    double value() const noexcept { return c_[0]; }
    double operator[](size_t k) const { return k < c_.size() ? c_[k] : 0.0; }
    std::span<const double> coefficients() const noexcept { return c_; }

    /// k-th derivative at the center, k! * coefficient k.
    double derivative(int k) const {
        double f = 1.0;
        for (int i = 2; i <= k; ++i) f *= i;
        return (*this)[static_cast<size_t>(k)] * f;
    }

    TaylorJet truncated(int order) const {
        std::vector<double> c(static_cast<size_t>(order) + 1, 0.0);
        for (size_t k = 0; k < c.size() && k < c_.size(); ++k) c[k] = c_[k];
        return {center_, std::move(c)};
    }

    TaylorJet& operator*=(double s) {
        for (auto& v : c_) v *= s;
        return *this;
    }

    friend TaylorJet operator+(const TaylorJet& a, const TaylorJet& b) {
        int n = std::min(a.order(), b.order());
        std::vector<double> c(static_cast<size_t>(n) + 1);
        for (int k = 0; k <= n; ++k) c[k] = a.c_[k] + b.c_[k];
        return {a.center_, std::move(c)};
    }
    friend TaylorJet operator-(const TaylorJet& a, const TaylorJet& b) {
        int n = std::min(a.order(), b.order());
        std::vector<double> c(static_cast<size_t>(n) + 1);
        for (int k = 0; k <= n; ++k) c[k] = a.c_[k] - b.c_[k];
        return {a.center_, std::move(c)};
    }
    friend TaylorJet operator*(const TaylorJet& a, const TaylorJet& b) {
        int n = std::min(a.order(), b.order());
        std::vector<double> c(static_cast<size_t>(n) + 1, 0.0);
        for (int k = 0; k <= n; ++k)
            for (int i = 0; i <= k; ++i) c[k] += a.c_[i] * b.c_[k - i];
        return {a.center_, std::move(c)};
    }
    friend TaylorJet operator*(double s, TaylorJet a) { return a *= s; }
    friend TaylorJet operator*(TaylorJet a, double s) { return a *= s; }
    friend TaylorJet operator+(TaylorJet a, double s) {
        a.c_[0] += s;
        return a;
    }

    /// outer(inner(t)) where `outer` lists Taylor coefficients of the outer
    /// function about inner.value(). Horner in the jet ring.
    friend TaylorJet compose(std::span<const double> outer, const TaylorJet& inner) {
        TaylorJet h = inner;
        h.c_[0] = 0.0;
        TaylorJet acc = constant(inner.center_, 0.0, inner.order());
        for (size_t k = outer.size(); k-- > 0;) acc = acc * h + outer[k];
        return acc;
    }

    /// a^p for a jet with positive value.
    friend TaylorJet pow(const TaylorJet& a, double p) {
        if (!(a.c_[0] > 0.0)) throw domain_error("TaylorJet pow: base value must be positive");
        int n = a.order();
        std::vector<double> h(static_cast<size_t>(n) + 1, 0.0);
        h[0] = std::pow(a.c_[0], p);
        for (int k = 1; k <= n; ++k) {
            double s = 0.0;
            for (int i = 1; i <= k; ++i) s += ((p + 1.0) * i - k) * a.c_[i] * h[k - i];
            h[k] = s / (k * a.c_[0]);
        }
        return {a.center_, std::move(h)};
    }

    friend TaylorJet sin(const TaylorJet& a) { return trig(a, 0); }
    friend TaylorJet cos(const TaylorJet& a) { return trig(a, 1); }

private:
    // Taylor coefficients of sin (phase 0) or cos (phase 1) about a.value().
    static TaylorJet trig(const TaylorJet& a, int phase) {
        double s = std::sin(a.c_[0]), c = std::cos(a.c_[0]);
        const double cycle[4] = {s, c, -s, -c};
        std::vector<double> outer(static_cast<size_t>(a.order()) + 1);
        double fact = 1.0;
        for (size_t k = 0; k < outer.size(); ++k) {
            if (k > 0) fact *= static_cast<double>(k);
            outer[k] = cycle[(k + static_cast<size_t>(phase)) % 4] / fact;
        }
        return compose(outer, a);
    }

    double center_ = 0.0;
    std::vector<double> c_{0.0};
};

}  // namespace bessel_ccf
