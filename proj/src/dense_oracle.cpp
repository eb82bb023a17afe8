#include "bpdi/dense_oracle.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace bpdi::oracle {

namespace {

constexpr cplx kOne{1.0, 0.0};
constexpr cplx kZero{0.0, 0.0};
constexpr cplx kI{0.0, 1.0};

using Mat2 = std::array<cplx, 4>;

Mat2 letter_matrix(char op) {
    switch (op) {
        case 'I': return {kOne, kZero, kZero, kOne};
        case 'X': return {kZero, kOne, kOne, kZero};
        case 'Y': return {kZero, -kI, kI, kZero};
        case 'Z': return {kOne, kZero, kZero, -kOne};
        default: throw std::invalid_argument("invalid Pauli letter");
    }
}

void check_small(int n_qubits) {
    if (n_qubits < 1 || n_qubits > 10) {
        throw std::invalid_argument("dense oracle supports 1..10 qubits");
    }
}

} // namespace

Mat pauli_matrix(const PauliString& p) {
    check_small(p.size());
    const std::size_t dim = std::size_t{1} << p.size();
    // Entry (r, c) factorizes over qubits: prod_q letter[r_q][c_q].
    Mat m(dim * dim, kZero);
    for (std::size_t r = 0; r < dim; ++r) {
        for (std::size_t c = 0; c < dim; ++c) {
            cplx entry = kOne;
            for (int q = 0; q < p.size(); ++q) {
                const std::size_t rq = (r >> q) & 1u;
                const std::size_t cq = (c >> q) & 1u;
                entry *= letter_matrix(p.op(q))[rq * 2 + cq];
                if (entry == kZero) {
                    break;
                }
            }
            m[r * dim + c] = entry;
        }
    }
    return m;
}

Mat hamiltonian_matrix(const Hamiltonian& h) {
    const std::size_t dim = std::size_t{1} << h.n_qubits();
    Mat m(dim * dim, kZero);
    for (const PauliTerm& t : h.terms()) {
        const Mat p = pauli_matrix(t.string);
        for (std::size_t i = 0; i < m.size(); ++i) {
            m[i] += t.coeff * p[i];
        }
    }
    return m;
}

Mat gate_matrix(const Gate& g, int n_qubits) {
    check_small(n_qubits);
    const std::size_t dim = std::size_t{1} << n_qubits;
    Mat m(dim * dim, kZero);
    const double c = std::cos(g.angle / 2.0);
    const double s = std::sin(g.angle / 2.0);

    auto embed_single = [&](const Mat2& u, int q) {
        for (std::size_t r = 0; r < dim; ++r) {
            const std::size_t rq = (r >> q) & 1u;
            for (std::size_t cq = 0; cq < 2; ++cq) {
                const std::size_t col = (r & ~(std::size_t{1} << q)) | (cq << q);
                m[r * dim + col] = u[rq * 2 + cq];
            }
        }
    };

    switch (g.kind) {
        case GateKind::RX:
            embed_single({cplx{c, 0}, cplx{0, -s}, cplx{0, -s}, cplx{c, 0}}, g.q0);
            break;
        case GateKind::RY:
            embed_single({cplx{c, 0}, cplx{-s, 0}, cplx{s, 0}, cplx{c, 0}}, g.q0);
            break;
        case GateKind::RZ:
            embed_single({std::polar(1.0, -g.angle / 2.0), kZero, kZero,
                          std::polar(1.0, g.angle / 2.0)},
                         g.q0);
            break;
        case GateKind::RZZ:
            for (std::size_t r = 0; r < dim; ++r) {
                const bool unequal = (((r >> g.q0) ^ (r >> g.q1)) & 1u) != 0;
                m[r * dim + r] = std::polar(1.0, unequal ? g.angle / 2.0 : -g.angle / 2.0);
            }
            break;
        case GateKind::CNOT:
            for (std::size_t r = 0; r < dim; ++r) {
                const std::size_t src =
                    ((r >> g.q0) & 1u) ? (r ^ (std::size_t{1} << g.q1)) : r;
                m[r * dim + src] = kOne;
            }
            break;
    }
    return m;
}

std::vector<cplx> apply(const Mat& m, std::span<const cplx> v) {
    const std::size_t dim = v.size();
    if (m.size() != dim * dim) {
        throw std::invalid_argument("matrix/vector size mismatch");
    }
    std::vector<cplx> out(dim, kZero);
    for (std::size_t r = 0; r < dim; ++r) {
        cplx acc = kZero;
        for (std::size_t c = 0; c < dim; ++c) {
            acc += m[r * dim + c] * v[c];
        }
        out[r] = acc;
    }
    return out;
}

std::vector<cplx> simulate(const AnsatzSpec& spec, std::span<const double> theta) {
    if (static_cast<int>(theta.size()) != spec.n_params) {
        throw std::invalid_argument("theta length does not match parameter count");
    }
    check_small(spec.n_qubits);
    std::vector<cplx> state(std::size_t{1} << spec.n_qubits, kZero);
    state[0] = kOne;
    for (const GateSlot& s : spec.slots) {
        const double angle =
            s.param >= 0 ? s.scale * theta[static_cast<std::size_t>(s.param)] : 0.0;
        state = apply(gate_matrix({s.kind, s.q0, s.q1, angle}, spec.n_qubits), state);
    }
    return state;
}

double expectation(std::span<const cplx> state, const Mat& observable) {
    const std::vector<cplx> mv = apply(observable, state);
    cplx acc = kZero;
    for (std::size_t i = 0; i < state.size(); ++i) {
        acc += std::conj(state[i]) * mv[i];
    }
    return acc.real();
}

double expectation(std::span<const cplx> state, const PauliString& p) {
    return expectation(state, pauli_matrix(p));
}

double expectation(std::span<const cplx> state, const Hamiltonian& h) {
    return expectation(state, hamiltonian_matrix(h));
}

std::vector<double> grad_full_fd(const AnsatzSpec& spec, std::span<const double> theta,
                                 const Hamiltonian& h, double eps) {
    const Mat hm = hamiltonian_matrix(h);
    std::vector<double> shifted(theta.begin(), theta.end());
    std::vector<double> g(theta.size());
    for (std::size_t k = 0; k < theta.size(); ++k) {
        shifted[k] = theta[k] + eps;
        const double e_plus = expectation(simulate(spec, shifted), hm);
        shifted[k] = theta[k] - eps;
        const double e_minus = expectation(simulate(spec, shifted), hm);
        shifted[k] = theta[k];
        g[k] = (e_plus - e_minus) / (2.0 * eps);
    }
    return g;
}

std::vector<std::vector<double>> grad_termwise_fd(const AnsatzSpec& spec,
                                                  std::span<const double> theta,
                                                  const Hamiltonian& h, double eps) {
    const auto& terms = h.terms();
    std::vector<Mat> term_mats;
    term_mats.reserve(terms.size());
    for (const PauliTerm& t : terms) {
        term_mats.push_back(pauli_matrix(t.string));
    }

    std::vector<std::vector<double>> a(terms.size(), std::vector<double>(theta.size(), 0.0));
    std::vector<double> shifted(theta.begin(), theta.end());
    for (std::size_t k = 0; k < theta.size(); ++k) {
        shifted[k] = theta[k] + eps;
        const std::vector<cplx> plus = simulate(spec, shifted);
        shifted[k] = theta[k] - eps;
        const std::vector<cplx> minus = simulate(spec, shifted);
        shifted[k] = theta[k];
        for (std::size_t alpha = 0; alpha < terms.size(); ++alpha) {
            const double d_exp = (expectation(plus, term_mats[alpha]) -
                                  expectation(minus, term_mats[alpha])) /
                                 (2.0 * eps);
            a[alpha][k] = terms[alpha].coeff * d_exp;
        }
    }
    return a;
}

} // namespace bpdi::oracle
