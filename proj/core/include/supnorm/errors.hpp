#pragma once

#include <stdexcept>
#include <string>

namespace supnorm {

// Thrown when a truncated series/enumeration cannot certify the requested
// tolerance. Carries the radius (or order) that was actually reached and the
// best tail bound available there.
class truncation_error : public std::runtime_error {
public:
    truncation_error(const std::string& what, double achieved_radius, double tail_bound)
        : std::runtime_error(what), achieved_radius_(achieved_radius), tail_bound_(tail_bound) {}

    double achieved_radius() const { return achieved_radius_; }
    double tail_bound() const { return tail_bound_; }

private:
    double achieved_radius_;
    double tail_bound_;
};

// Thrown when an a-posteriori error estimate exceeds the requested tolerance.
class accuracy_error : public std::runtime_error {
public:
    accuracy_error(const std::string& what, double estimate, double tol)
        : std::runtime_error(what), estimate_(estimate), tol_(tol) {}

    double estimate() const { return estimate_; }
    double tol() const { return tol_; }

private:
    double estimate_;
    double tol_;
};

} // namespace supnorm
