#pragma once

#include <cmath>
#include <string>

#include "errors.hpp"
#include "integrands.hpp"

namespace bessel_ccf {

/// Parameters of I[f] = int_0^1 x^alpha (1-x)^beta f(x) J_nu(omega x) dx.
struct ProblemSpec {
    double alpha = 0.0;
    double beta = 0.0;
    double nu = 0.0;
    double omega = 1.0;
    Integrand integrand = make_integrand(IntegrandDescriptor{});

    /// Builds a spec, rejecting alpha <= -1, beta <= -1, nu < 0, omega <= 0.
    static ProblemSpec make(double alpha, double beta, double nu, double omega,
                            Integrand f = make_integrand(IntegrandDescriptor{})) {
        ProblemSpec s{alpha, beta, nu, omega, std::move(f)};
        s.validate();
        return s;
    }

    void validate() const {
        if (!(alpha > -1.0)) throw parameter_error("alpha must be > -1 (got " + std::to_string(alpha) + ")");
        if (!(beta > -1.0)) throw parameter_error("beta must be > -1 (got " + std::to_string(beta) + ")");
        if (!(nu >= 0.0)) throw parameter_error("nu must be >= 0 (got " + std::to_string(nu) + ")");
        if (!(omega > 0.0) || !std::isfinite(omega))
            throw parameter_error("omega must be > 0 (got " + std::to_string(omega) + ")");
    }

    /// x^alpha (1-x)^beta J_nu(omega x) f(x) weight parameters only.
    bool same_weight(const ProblemSpec& o) const {
        return alpha == o.alpha && beta == o.beta && nu == o.nu && omega == o.omega;
    }
};

}  // namespace bessel_ccf
