#pragma once

#include "bpdi/ansatz.hpp"
#include "bpdi/pauli.hpp"

#include <iosfwd>
#include <span>
#include <stdexcept>
#include <vector>

namespace bpdi {

// Thrown when the parameter-shift rule is requested for a circuit it does
// not cover (shared parameters or non-unit generator scale).
struct UnsupportedMethodError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

enum class DiffRule { ParameterShift, CentralFD };

struct GradientMethod {
    DiffRule kind = DiffRule::ParameterShift;
    double fd_epsilon = 1e-5;

    static GradientMethod parameter_shift() { return {DiffRule::ParameterShift, 0.0}; }
    static GradientMethod central_fd(double eps = 1e-5) { return {DiffRule::CentralFD, eps}; }
};

// Per-term gradient contributions a[alpha][k] = c_alpha * d<P_alpha>/d theta_k,
// together with the full gradient g computed by its own pass over H.
// grad_termwise checks at construction that column sums reproduce g to
// 1e-8 relative.
struct TermwiseGradientMatrix {
    std::size_t n_terms = 0;
    std::size_t n_params = 0;
    std::vector<double> a;  // row-major, n_terms x n_params
    std::vector<double> g;  // length n_params

    double& at(std::size_t alpha, std::size_t k) { return a[alpha * n_params + k]; }
    double at(std::size_t alpha, std::size_t k) const { return a[alpha * n_params + k]; }
    std::vector<double> column(std::size_t k) const;
    std::vector<double> column_sums() const;

    // Plain-text dump: header "terms=<A> params=<K>", then row-major values.
    // The full-gradient vector is not part of the dump.
    void write(std::ostream& os) const;
    static TermwiseGradientMatrix read(std::istream& is);
};

// Gradient of <H> with respect to every parameter. ParameterShift evaluates
// (  <H>(theta_k + pi/2) - <H>(theta_k - pi/2) ) / 2 and requires each
// parameter to be read by exactly one unit-scale single-qubit rotation;
// CentralFD shifts the parameter entry itself, so every gate sharing it
// moves together.
std::vector<double> grad_full(const AnsatzSpec& spec, std::span<const double> theta,
                              const Hamiltonian& h, const GradientMethod& method);

TermwiseGradientMatrix grad_termwise(const AnsatzSpec& spec, std::span<const double> theta,
                                     const Hamiltonian& h, const GradientMethod& method);

// Central-difference gradients for each step size in eps_list.
std::vector<std::vector<double>> fd_sensitivity(const AnsatzSpec& spec,
                                                std::span<const double> theta,
                                                const Hamiltonian& h,
                                                std::span<const double> eps_list);

} // namespace bpdi
