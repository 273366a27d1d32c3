#pragma once
//
// Integrand registry. An integrand is named by an IntegrandDescriptor
// ("abs_pow:c=0.5,k=1") and resolved into an evaluable function plus the
// metadata the oracle and the rate predictions need.
//

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "chebfit.hpp"
#include "errors.hpp"

namespace bessel_ccf {

struct IntegrandDescriptor {
    std::string name = "one";
    std::map<std::string, double> params;

    friend bool operator==(const IntegrandDescriptor&, const IntegrandDescriptor&) = default;
};

struct Integrand {
    IntegrandDescriptor descriptor;
    std::function<double(double)> eval;
    /// Interior points where f is not smooth; the oracle cuts panels there.
    std::vector<double> breakpoints;
    /// k with f in X^k (Chebyshev coefficients O(j^-k-1)); empty when f is smooth.
    std::optional<double> regularity;

    double operator()(double x) const { return eval(x); }
};

inline std::string to_string(const IntegrandDescriptor& d) {
    std::ostringstream os;
    os.precision(17);
    os << d.name;
    char sep = ':';
    for (const auto& [k, v] : d.params) {
        os << sep << k << '=' << v;
        sep = ',';
    }
    return os.str();
}

/// Parses "name" or "name:key=value,key=value".
inline IntegrandDescriptor parse_integrand_descriptor(const std::string& text) {
    IntegrandDescriptor d;
    auto colon = text.find(':');
    d.name = text.substr(0, colon);
    if (d.name.empty()) throw usage_error("--f: empty integrand name");
    if (colon == std::string::npos) return d;
    std::stringstream rest(text.substr(colon + 1));
    std::string item;
    while (std::getline(rest, item, ',')) {
        auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0)
            throw usage_error("--f: expected key=value, got '" + item + "'");
        try {
            size_t used = 0;
            std::string val = item.substr(eq + 1);
            double v = std::stod(val, &used);
            if (used != val.size()) throw std::invalid_argument(val);
            d.params[item.substr(0, eq)] = v;
        } catch (const std::exception&) {
            throw usage_error("--f: bad numeric value in '" + item + "'");
        }
    }
    return d;
}

namespace detail {

inline double param(const IntegrandDescriptor& d, const std::string& key, double fallback) {
    auto it = d.params.find(key);
    return it == d.params.end() ? fallback : it->second;
}

inline void check_keys(const IntegrandDescriptor& d, std::initializer_list<std::string> allowed) {
    for (const auto& [k, v] : d.params) {
        bool ok = false;
        for (const auto& a : allowed) ok = ok || a == k;
        if (!ok) throw usage_error("--f: integrand '" + d.name + "' has no parameter '" + k + "'");
    }
}

}  // namespace detail

/// Resolves a descriptor against the built-in registry:
///   one                      f = 1
///   abs_pow:c,k              |x - c|^k
///   one_minus_x2_pow:p       (1 - x^2)^p
///   cheb_poly:c0,c1,...      sum c_i T_i*(x)
///   smooth_exp:s             e^{s x} (s defaults to 1)
///   runge:a,c                1 / (1 + a (x - c)^2)
inline Integrand make_integrand(const IntegrandDescriptor& d) {
    using detail::param;
    Integrand f;
    f.descriptor = d;
    if (d.name == "one") {
        detail::check_keys(d, {});
        f.eval = [](double) { return 1.0; };
    } else if (d.name == "abs_pow") {
        detail::check_keys(d, {"c", "k"});
        double c = param(d, "c", 0.5), k = param(d, "k", 1.0);
        if (!(k > 0.0)) throw usage_error("abs_pow: k must be positive");
        f.eval = [c, k](double x) { return std::pow(std::abs(x - c), k); };
        if (c > 0.0 && c < 1.0) f.breakpoints.push_back(c);
        bool even_integer = std::floor(k) == k && std::fmod(k, 2.0) == 0.0;
        if (!even_integer) f.regularity = k;
    } else if (d.name == "one_minus_x2_pow") {
        detail::check_keys(d, {"p"});
        double p = param(d, "p", 0.8);
        f.eval = [p](double x) { return std::pow((1.0 - x) * (1.0 + x), p); };
        if (!(std::floor(p) == p && p >= 0)) f.regularity = 2.0 * p;
    } else if (d.name == "cheb_poly") {
        std::vector<double> coeffs;
        for (int i = 0;; ++i) {
            auto it = d.params.find("c" + std::to_string(i));
            if (it == d.params.end()) break;
            coeffs.push_back(it->second);
        }
        if (coeffs.empty() || coeffs.size() != d.params.size())
            throw usage_error("cheb_poly: expects consecutive coefficients c0, c1, ...");
        ChebyshevExpansion e{coeffs};
        f.eval = [e](double x) { return cheb_eval(e, std::clamp(x, 0.0, 1.0)); };
    } else if (d.name == "smooth_exp") {
        detail::check_keys(d, {"s"});
        double s = param(d, "s", 1.0);
        f.eval = [s](double x) { return std::exp(s * x); };
    } else if (d.name == "runge") {
        detail::check_keys(d, {"a", "c"});
        double a = param(d, "a", 25.0), c = param(d, "c", 0.5);
        if (!(a > 0.0)) throw usage_error("runge: a must be positive");
        f.eval = [a, c](double x) { return 1.0 / (1.0 + a * (x - c) * (x - c)); };
    } else {
        throw usage_error("--f: unknown integrand '" + d.name + "'");
    }
    return f;
}

inline Integrand make_integrand(const std::string& text) {
    return make_integrand(parse_integrand_descriptor(text));
}

/// Integrand given only by its values at cc_points(N) (descending order);
/// between nodes it is the degree-N interpolant.
inline Integrand make_sampled_integrand(std::vector<double> samples, std::string label = "sampled") {
    if (samples.size() < 2) throw usage_error("sampled integrand: need at least two samples");
    Integrand f;
    f.descriptor.name = std::move(label);
    ChebyshevExpansion e = cheb_interp_coeffs(samples);
    f.eval = [e](double x) { return cheb_eval(e, std::clamp(x, 0.0, 1.0)); };
    return f;
}

}  // namespace bessel_ccf
