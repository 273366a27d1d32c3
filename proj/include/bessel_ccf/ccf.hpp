#pragma once
//
// Clenshaw-Curtis-Filon rule  Q[f] = sum_k b_k M(k)  and the convergence
// study machinery built on it.
//

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <tuple>
#include <vector>

#include "chebfit.hpp"
#include "errors.hpp"
#include "moments.hpp"
#include "problem.hpp"

namespace bessel_ccf {

struct QuadratureResult {
    double value = 0.0;
    int N = 0;
    double moment_err_est = 0.0;  ///< sum_k |b_k| err(M(k)) plus summation rounding
    double coeff_tail = 0.0;      ///< |b_N|
};

/// Moment tables keyed by weight (alpha, beta, nu, omega). Each key keeps its
/// largest table; smaller N are served as prefixes. Lookups take a shared
/// lock; a miss builds outside the lock and inserts under an exclusive one.
class MomentCache {
public:
    explicit MomentCache(MomentTableOptions options = {}) : options_(std::move(options)) {}

    MomentTable get(const ProblemSpec& spec, int N) {
        const Key key{spec.alpha, spec.beta, spec.nu, spec.omega};
        {
            std::shared_lock lock(mutex_);
            auto it = tables_.find(key);
            if (it != tables_.end() && it->second->N() >= N) return it->second->prefix(N);
        }
        auto table = std::make_shared<const MomentTable>(moment_table(spec, N, options_));
        std::unique_lock lock(mutex_);
        auto& slot = tables_[key];
        if (!slot || slot->N() < N) slot = table;
        return slot->prefix(N);
    }

    size_t size() const {
        std::shared_lock lock(mutex_);
        return tables_.size();
    }

    /// Largest N stored for this weight, or -1.
    int stored_N(const ProblemSpec& spec) const {
        std::shared_lock lock(mutex_);
        auto it = tables_.find(Key{spec.alpha, spec.beta, spec.nu, spec.omega});
        return it == tables_.end() ? -1 : it->second->N();
    }

private:
    using Key = std::tuple<double, double, double, double>;
    MomentTableOptions options_;
    mutable std::shared_mutex mutex_;
    std::map<Key, std::shared_ptr<const MomentTable>> tables_;
};

/// Q[f] from a table of at least N+1 moments for the same weight.
inline QuadratureResult ccf_integrate(const ProblemSpec& spec, int N, const MomentTable& table) {
    spec.validate();
    if (N < 1) throw domain_error("ccf_integrate: N must be >= 1");
    if (table.N() < N) throw index_error("ccf_integrate: moment table too short");
    if (table.alpha != spec.alpha || table.beta != spec.beta || table.nu != spec.nu || table.omega != spec.omega)
        throw domain_error("ccf_integrate: moment table belongs to another weight");

    auto x = cc_points(N);
    std::vector<double> fx(x.size());
    for (size_t i = 0; i < x.size(); ++i) {
        fx[i] = spec.integrand(x[i]);
        if (!std::isfinite(fx[i]))
            throw parameter_error("integrand '" + to_string(spec.integrand.descriptor) +
                                  "' is not finite at x = " + std::to_string(x[i]));
    }
    const ChebyshevExpansion e = cheb_interp_coeffs(fx);

    QuadratureResult r;
    r.N = N;
    double mag = 0.0;
    for (int k = 0; k <= N; ++k) {
        const size_t i = static_cast<size_t>(k);
        r.value += e.b[i] * table.values[i];
        mag += std::abs(e.b[i] * table.values[i]);
        r.moment_err_est += std::abs(e.b[i]) * table.err_est[i];
    }
    r.moment_err_est += (N + 1) * std::numeric_limits<double>::epsilon() * mag;
    r.coeff_tail = std::abs(e.b.back());
    return r;
}

inline QuadratureResult ccf_integrate(const ProblemSpec& spec, int N, MomentCache& cache) {
    spec.validate();
    if (N < 1) throw domain_error("ccf_integrate: N must be >= 1");
    return ccf_integrate(spec, N, cache.get(spec, N));
}

inline QuadratureResult ccf_integrate(const ProblemSpec& spec, int N) {
    spec.validate();
    if (N < 1) throw domain_error("ccf_integrate: N must be >= 1");
    return ccf_integrate(spec, N, moment_table(spec, N));
}

struct ConvergenceRecord {
    int N = 0;
    double approx = 0.0;
    double reference = 0.0;
    double abs_err = 0.0;
    double moment_err_est = 0.0;
};

/// One record per N. The table for max(N_list) is built once and every
/// smaller N uses its prefix, so results do not depend on evaluation order.
inline std::vector<ConvergenceRecord> convergence_study(const ProblemSpec& spec, const std::vector<int>& N_list,
                                                        double reference, MomentCache& cache) {
    spec.validate();
    if (N_list.empty()) return {};
    for (size_t i = 0; i < N_list.size(); ++i) {
        if (N_list[i] < 1) throw domain_error("convergence_study: N must be >= 1");
        if (i > 0 && N_list[i] <= N_list[i - 1]) throw domain_error("convergence_study: N_list not strictly increasing");
    }
    const MomentTable full = cache.get(spec, N_list.back());
    std::vector<ConvergenceRecord> out;
    out.reserve(N_list.size());
    for (int N : N_list) {
        QuadratureResult q = ccf_integrate(spec, N, full.prefix(N));
        out.push_back({N, q.value, reference, std::abs(q.value - reference), q.moment_err_est});
    }
    return out;
}

inline std::vector<ConvergenceRecord> convergence_study(const ProblemSpec& spec, const std::vector<int>& N_list,
                                                        double reference) {
    MomentCache cache;
    return convergence_study(spec, N_list, reference, cache);
}

/// Half-open range [first, last) of record indices.
struct RecordWindow {
    size_t first = 0;
    size_t last = 0;
};

/// Upper half of the records: the asymptotic regime.
inline RecordWindow default_window(size_t count) { return {count / 2, count}; }

/// Records at or below this multiple of moment_err_est are floor-contaminated.
inline constexpr double fit_floor_factor = 1e2;

/// Least-squares slope of log(abs_err) against log(N) over the window,
/// skipping zero errors and errors within fit_floor_factor of the moment
/// error estimate.
inline double fit_rate(const std::vector<ConvergenceRecord>& records, RecordWindow w) {
    if (w.last > records.size() || w.first >= w.last) throw domain_error("fit_rate: window outside the records");
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int n = 0;
    for (size_t i = w.first; i < w.last; ++i) {
        const auto& r = records[i];
        if (!(r.abs_err > 0.0) || r.abs_err <= fit_floor_factor * r.moment_err_est) continue;
        double x = std::log(static_cast<double>(r.N)), y = std::log(r.abs_err);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    if (n < 4) throw domain_error("fit_rate: fewer than 4 usable records in the window");
    const double den = n * sxx - sx * sx;
    if (den == 0.0) throw domain_error("fit_rate: degenerate window");
    return (n * sxy - sx * sy) / den;
}

inline double fit_rate(const std::vector<ConvergenceRecord>& records) {
    return fit_rate(records, default_window(records.size()));
}

/// Error exponent in N predicted for the integrand's regularity class:
/// -(k+1) when min(alpha, beta) >= -1/2, else -(2 min(alpha, beta) + k + 2).
/// Empty for smooth integrands.
inline std::optional<double> predicted_rate(const ProblemSpec& spec) {
    if (!spec.integrand.regularity) return std::nullopt;
    const double k = *spec.integrand.regularity, m = std::min(spec.alpha, spec.beta);
    return m >= -0.5 ? -(k + 1.0) : -(2.0 * m + k + 2.0);
}

/// abs_err * N^p with p the predicted exponent magnitude, or -slope when
/// no prediction exists.
inline std::vector<double> scaled_errors(const std::vector<ConvergenceRecord>& records, double exponent) {
    std::vector<double> s;
    s.reserve(records.size());
    for (const auto& r : records) s.push_back(r.abs_err * std::pow(static_cast<double>(r.N), exponent));
    return s;
}

}  // namespace bessel_ccf
