#include "bpdi/gradient.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>

namespace bpdi {

std::vector<double> TermwiseGradientMatrix::column(std::size_t k) const {
    std::vector<double> col(n_terms);
    for (std::size_t alpha = 0; alpha < n_terms; ++alpha) {
        col[alpha] = at(alpha, k);
    }
    return col;
}

std::vector<double> TermwiseGradientMatrix::column_sums() const {
    std::vector<double> sums(n_params, 0.0);
    for (std::size_t alpha = 0; alpha < n_terms; ++alpha) {
        for (std::size_t k = 0; k < n_params; ++k) {
            sums[k] += at(alpha, k);
        }
    }
    return sums;
}

void TermwiseGradientMatrix::write(std::ostream& os) const {
    os << "terms=" << n_terms << " params=" << n_params << '\n';
    os.precision(17);
    for (std::size_t alpha = 0; alpha < n_terms; ++alpha) {
        for (std::size_t k = 0; k < n_params; ++k) {
            if (k > 0) {
                os << ' ';
            }
            os << at(alpha, k);
        }
        os << '\n';
    }
}

TermwiseGradientMatrix TermwiseGradientMatrix::read(std::istream& is) {
    std::string header;
    if (!std::getline(is, header)) {
        throw std::invalid_argument("matrix dump: missing header");
    }
    std::size_t terms = 0;
    std::size_t params = 0;
    if (std::sscanf(header.c_str(), "terms=%zu params=%zu", &terms, &params) != 2) {
        throw std::invalid_argument("matrix dump: malformed header");
    }
    TermwiseGradientMatrix m;
    m.n_terms = terms;
    m.n_params = params;
    m.a.resize(terms * params);
    for (double& v : m.a) {
        if (!(is >> v)) {
            throw std::invalid_argument("matrix dump: truncated data");
        }
    }
    return m;
}

namespace {

// The shift rule covers parameters read by exactly one unit-scale
// single-qubit rotation. Shared or rescaled parameters change the
// generator spectrum and need finite differences instead.
void require_parameter_shift_applicable(const AnsatzSpec& spec) {
    std::vector<int> readers(static_cast<std::size_t>(spec.n_params), 0);
    for (const GateSlot& s : spec.slots) {
        if (s.param < 0) {
            continue;
        }
        ++readers[static_cast<std::size_t>(s.param)];
        if (s.scale != 1.0) {
            throw UnsupportedMethodError(
                "parameter-shift rule needs unit generator scale; use central differences");
        }
        if (s.kind == GateKind::RZZ || s.kind == GateKind::CNOT) {
            throw UnsupportedMethodError(
                "parameter-shift rule covers single-qubit rotations only");
        }
    }
    for (int count : readers) {
        if (count != 1) {
            throw UnsupportedMethodError(
                "parameter-shift rule cannot handle shared parameters; use central differences");
        }
    }
}

struct ShiftPlan {
    double shift = 0.0;
    double prefactor = 0.0;
};

ShiftPlan make_plan(const AnsatzSpec& spec, const GradientMethod& method) {
    if (method.kind == DiffRule::ParameterShift) {
        require_parameter_shift_applicable(spec);
        return {std::numbers::pi / 2.0, 0.5};
    }
    if (!(method.fd_epsilon > 0.0)) {
        throw std::invalid_argument("finite-difference step must be positive");
    }
    return {method.fd_epsilon, 1.0 / (2.0 * method.fd_epsilon)};
}

void check_theta(const AnsatzSpec& spec, std::span<const double> theta) {
    if (static_cast<int>(theta.size()) != spec.n_params) {
        throw std::invalid_argument("theta length does not match parameter count");
    }
}

} // namespace

std::vector<double> grad_full(const AnsatzSpec& spec, std::span<const double> theta,
                              const Hamiltonian& h, const GradientMethod& method) {
    check_theta(spec, theta);
    const ShiftPlan plan = make_plan(spec, method);
    std::vector<double> shifted(theta.begin(), theta.end());
    std::vector<double> g(theta.size());
    for (std::size_t k = 0; k < theta.size(); ++k) {
        shifted[k] = theta[k] + plan.shift;
        const double e_plus = prepare_state(spec, shifted).expectation(h);
        shifted[k] = theta[k] - plan.shift;
        const double e_minus = prepare_state(spec, shifted).expectation(h);
        shifted[k] = theta[k];
        g[k] = plan.prefactor * (e_plus - e_minus);
    }
    return g;
}

TermwiseGradientMatrix grad_termwise(const AnsatzSpec& spec, std::span<const double> theta,
                                     const Hamiltonian& h, const GradientMethod& method) {
    check_theta(spec, theta);
    const ShiftPlan plan = make_plan(spec, method);
    const auto& terms = h.terms();

    TermwiseGradientMatrix m;
    m.n_terms = terms.size();
    m.n_params = theta.size();
    m.a.assign(m.n_terms * m.n_params, 0.0);

    std::vector<double> shifted(theta.begin(), theta.end());
    for (std::size_t k = 0; k < theta.size(); ++k) {
        shifted[k] = theta[k] + plan.shift;
        const Statevector plus = prepare_state(spec, shifted);
        shifted[k] = theta[k] - plan.shift;
        const Statevector minus = prepare_state(spec, shifted);
        shifted[k] = theta[k];
        for (std::size_t alpha = 0; alpha < terms.size(); ++alpha) {
            const double d_exp = plan.prefactor * (plus.expectation(terms[alpha].string) -
                                                   minus.expectation(terms[alpha].string));
            m.at(alpha, k) = terms[alpha].coeff * d_exp;
        }
    }

    m.g = grad_full(spec, theta, h, method);

    const std::vector<double> sums = m.column_sums();
    for (std::size_t k = 0; k < m.n_params; ++k) {
        const double tol = 1e-8 * std::max(1.0, std::abs(m.g[k]));
        if (std::abs(sums[k] - m.g[k]) > tol) {
            std::ostringstream msg;
            msg << "termwise reconstruction failed at parameter " << k << ": column sum "
                << sums[k] << " vs full gradient " << m.g[k];
            throw std::runtime_error(msg.str());
        }
    }
    return m;
}

std::vector<std::vector<double>> fd_sensitivity(const AnsatzSpec& spec,
                                                std::span<const double> theta,
                                                const Hamiltonian& h,
                                                std::span<const double> eps_list) {
    if (eps_list.empty()) {
        throw std::invalid_argument("fd_sensitivity needs at least one step size");
    }
    std::vector<std::vector<double>> grads;
    grads.reserve(eps_list.size());
    for (double eps : eps_list) {
        grads.push_back(grad_full(spec, theta, h, GradientMethod::central_fd(eps)));
    }
    return grads;
}

} // namespace bpdi
