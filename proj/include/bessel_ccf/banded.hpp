#pragma once
//
// Banded linear systems solved by Gaussian elimination with partial
// pivoting. Row i has structural nonzeros in columns [i - lower, i + upper];
// pivoting adds at most `lower` extra superdiagonals of fill, so each row is
// stored as a window over columns [i - lower, i + upper + lower].
//
// The scalar type is double or detail::dd.
//

#include <algorithm>
#include <cmath>
#include <vector>

#include "detail/double_double.hpp"
#include "errors.hpp"

namespace bessel_ccf {

template <class T = double>
class BandedSystem {
public:
    BandedSystem(int dimension, int lower, int upper)
        : n_(dimension), kl_(lower), ku_(upper), width_(2 * lower + upper + 1),
          a_(static_cast<size_t>(dimension) * static_cast<size_t>(width_), T(0.0)),
          rhs_(static_cast<size_t>(dimension), T(0.0)) {
        if (dimension < 1 || lower < 0 || upper < 0) throw domain_error("BandedSystem: bad shape");
    }

    int dimension() const noexcept { return n_; }
    int lower() const noexcept { return kl_; }
    int upper() const noexcept { return ku_; }

    bool in_band(int i, int j) const noexcept { return j >= i - kl_ && j <= i + ku_; }

    T& at(int i, int j) {
        if (!in_band(i, j) || j < 0 || j >= n_) throw index_error("BandedSystem: entry outside the band");
        return cell(i, j);
    }
    T at(int i, int j) const { return get(i, j); }
    T& rhs(int i) { return rhs_.at(static_cast<size_t>(i)); }
    T rhs(int i) const { return rhs_.at(static_cast<size_t>(i)); }
    const std::vector<T>& rhs() const noexcept { return rhs_; }

    /// A x computed in the scalar type, for residual checks.
    std::vector<T> apply(const std::vector<T>& x) const {
        std::vector<T> y(static_cast<size_t>(n_), T(0.0));
        for (int i = 0; i < n_; ++i)
            for (int j = std::max(0, i - kl_); j <= std::min(n_ - 1, i + ku_); ++j) y[i] += get(i, j) * x[j];
        return y;
    }

private:
    template <class>
    friend class BandedLU;
    T get(int i, int j) const {
        if (j < i - kl_ || j > i + ku_ + kl_ || j < 0 || j >= n_) return T(0.0);
        return a_[static_cast<size_t>(i) * width_ + static_cast<size_t>(j - i + kl_)];
    }
    T& cell(int i, int j) { return a_[static_cast<size_t>(i) * width_ + static_cast<size_t>(j - i + kl_)]; }

    int n_, kl_, ku_, width_;
    std::vector<T> a_;
    std::vector<T> rhs_;
};

/// LU factors of a BandedSystem; reusable for several right-hand sides.
template <class T = double>
class BandedLU {
public:
    explicit BandedLU(BandedSystem<T> sys) : s_(std::move(sys)), piv_(static_cast<size_t>(s_.n_)) {
        using detail::magnitude;
        const int n = s_.n_, kl = s_.kl_, ku = s_.ku_;
        for (int j = 0; j < n; ++j) {
            const int last_row = std::min(n - 1, j + kl);
            int p = j;
            double best = magnitude(s_.get(j, j));
            for (int r = j + 1; r <= last_row; ++r) {
                double v = magnitude(s_.get(r, j));
                if (v > best) {
                    best = v;
                    p = r;
                }
            }
            if (best == 0.0) throw singular_system_error("banded solve: zero pivot", j);
            piv_[j] = p;
            const int last_col = std::min(n - 1, j + ku + kl);
            if (p != j)
                for (int c = j; c <= last_col; ++c) std::swap(s_.cell(j, c), s_.cell(p, c));
            const T d = s_.get(j, j);
            for (int r = j + 1; r <= last_row; ++r) {
                T m = s_.get(r, j) / d;
                s_.cell(r, j) = m;
                if (magnitude(m) == 0.0) continue;
                for (int c = j + 1; c <= last_col; ++c) s_.cell(r, c) -= m * s_.get(j, c);
            }
        }
    }

    std::vector<T> solve(std::vector<T> b) const {
        const int n = s_.n_, kl = s_.kl_, ku = s_.ku_;
        if (b.size() != static_cast<size_t>(n)) throw domain_error("BandedLU::solve: size mismatch");
        for (int j = 0; j < n; ++j) {
            std::swap(b[j], b[piv_[j]]);
            const int last_row = std::min(n - 1, j + kl);
            for (int r = j + 1; r <= last_row; ++r) b[r] -= s_.get(r, j) * b[j];
        }
        for (int j = n - 1; j >= 0; --j) {
            const int last_col = std::min(n - 1, j + ku + kl);
            T s = b[j];
            for (int c = j + 1; c <= last_col; ++c) s -= s_.get(j, c) * b[c];
            b[j] = s / s_.get(j, j);
        }
        return b;
    }

    std::vector<T> solve() const { return solve(s_.rhs_); }

private:
    BandedSystem<T> s_;
    std::vector<int> piv_;
};

template <class T>
std::vector<T> solve_banded(const BandedSystem<T>& sys) {
    return BandedLU<T>(sys).solve();
}

}  // namespace bessel_ccf
