#pragma once

#include <stdexcept>
#include <string>

namespace bessel_ccf {

/// Root of the library's exception hierarchy.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class domain_error : public error {
public:
    using error::error;
};

/// Argument sits on a pole (Gamma at nonpositive integers, bad 2F3 parameters).
class pole_error : public domain_error {
public:
    using domain_error::domain_error;
};

/// Problem parameters violate alpha > -1, beta > -1, nu >= 0, omega > 0.
class parameter_error : public domain_error {
public:
    using domain_error::domain_error;
};

class index_error : public error {
public:
    using error::error;
};

/// An iterative procedure exhausted its budget without meeting its tolerance.
class convergence_error : public error {
public:
    convergence_error(const std::string& what, double achieved = 0.0)
        : error(what), achieved_(achieved) {}
    double achieved() const noexcept { return achieved_; }

private:
    double achieved_;
};

/// An asymptotic evaluation could not certify the requested accuracy.
class accuracy_error : public error {
public:
    accuracy_error(const std::string& what, double estimate)
        : error(what), estimate_(estimate) {}
    double estimate() const noexcept { return estimate_; }

private:
    double estimate_;
};

class singular_system_error : public error {
public:
    singular_system_error(const std::string& what, long row) : error(what), row_(row) {}
    long row() const noexcept { return row_; }

private:
    long row_;
};

class usage_error : public error {
public:
    using error::error;
};

class io_error : public error {
public:
    using error::error;
};

}  // namespace bessel_ccf
