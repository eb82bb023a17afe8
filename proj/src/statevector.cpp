#include "bpdi/statevector.hpp"

#include <bit>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace bpdi {

const char* gate_name(GateKind kind) {
    switch (kind) {
        case GateKind::RX: return "RX";
        case GateKind::RY: return "RY";
        case GateKind::RZ: return "RZ";
        case GateKind::RZZ: return "RZZ";
        case GateKind::CNOT: return "CNOT";
    }
    return "?";
}

Statevector::Statevector(int n_qubits) : n_(n_qubits) {
    if (n_qubits < 1 || n_qubits > 24) {
        throw std::invalid_argument("qubit count must be in [1, 24]");
    }
    amps_.assign(std::size_t{1} << n_qubits, cplx{0.0, 0.0});
    amps_[0] = cplx{1.0, 0.0};
}

Statevector init_zero_state(int n_qubits) {
    return Statevector(n_qubits);
}

double Statevector::norm_sq() const {
    double s = 0.0;
    for (const cplx& a : amps_) {
        s += std::norm(a);
    }
    return s;
}

void Statevector::check_target(int q) const {
    if (q < 0 || q >= n_) {
        throw std::out_of_range("gate target out of range");
    }
}

void Statevector::apply(const Gate& g) {
    check_target(g.q0);
    const double c = std::cos(g.angle / 2.0);
    const double s = std::sin(g.angle / 2.0);
    switch (g.kind) {
        case GateKind::RX:
            apply_single(g.q0, {c, 0.0}, {0.0, -s}, {0.0, -s}, {c, 0.0});
            break;
        case GateKind::RY:
            apply_single(g.q0, {c, 0.0}, {-s, 0.0}, {s, 0.0}, {c, 0.0});
            break;
        case GateKind::RZ:
            apply_rz(g.q0, g.angle);
            break;
        case GateKind::RZZ:
            check_target(g.q1);
            if (g.q1 == g.q0) {
                throw std::invalid_argument("RZZ targets must be distinct");
            }
            apply_rzz(g.q0, g.q1, g.angle);
            break;
        case GateKind::CNOT:
            check_target(g.q1);
            if (g.q1 == g.q0) {
                throw std::invalid_argument("CNOT targets must be distinct");
            }
            apply_cnot(g.q0, g.q1);
            break;
    }
}

void Statevector::apply_single(int q, cplx u00, cplx u01, cplx u10, cplx u11) {
    const std::size_t step = std::size_t{1} << q;
    const std::size_t dim = amps_.size();
    for (std::size_t base = 0; base < dim; base += 2 * step) {
        for (std::size_t low = 0; low < step; ++low) {
            const std::size_t i0 = base | low;
            const std::size_t i1 = i0 | step;
            const cplx a0 = amps_[i0];
            const cplx a1 = amps_[i1];
            amps_[i0] = u00 * a0 + u01 * a1;
            amps_[i1] = u10 * a0 + u11 * a1;
        }
    }
}

void Statevector::apply_rz(int q, double angle) {
    const cplx p0 = std::polar(1.0, -angle / 2.0);
    const cplx p1 = std::polar(1.0, angle / 2.0);
    const std::size_t bit = std::size_t{1} << q;
    for (std::size_t x = 0; x < amps_.size(); ++x) {
        amps_[x] *= (x & bit) ? p1 : p0;
    }
}

void Statevector::apply_rzz(int q0, int q1, double angle) {
    // exp(-i angle/2 Z(x)Z): equal bits pick up e^{-i angle/2}, unequal the
    // conjugate phase.
    const cplx same = std::polar(1.0, -angle / 2.0);
    const cplx diff = std::polar(1.0, angle / 2.0);
    const std::size_t b0 = std::size_t{1} << q0;
    const std::size_t b1 = std::size_t{1} << q1;
    for (std::size_t x = 0; x < amps_.size(); ++x) {
        const bool unequal = ((x & b0) != 0) != ((x & b1) != 0);
        amps_[x] *= unequal ? diff : same;
    }
}

void Statevector::apply_cnot(int control, int target) {
    const std::size_t cbit = std::size_t{1} << control;
    const std::size_t tbit = std::size_t{1} << target;
    for (std::size_t x = 0; x < amps_.size(); ++x) {
        if ((x & cbit) && !(x & tbit)) {
            std::swap(amps_[x], amps_[x | tbit]);
        }
    }
}

double Statevector::expectation(const PauliString& p) const {
    if (p.size() != n_) {
        throw std::invalid_argument("Pauli string length does not match state");
    }
    std::size_t flip = 0;
    std::size_t phase_mask = 0;  // bits contributing (-1)^{x_b}: Z and Y sites
    int n_y = 0;
    for (int q = 0; q < n_; ++q) {
        const std::size_t bit = std::size_t{1} << q;
        switch (p.op(q)) {
            case 'X':
                flip |= bit;
                break;
            case 'Y':
                flip |= bit;
                phase_mask |= bit;
                ++n_y;
                break;
            case 'Z':
                phase_mask |= bit;
                break;
            default:
                break;
        }
    }

    if (flip == 0) {
        double acc = 0.0;
        for (std::size_t x = 0; x < amps_.size(); ++x) {
            const double sign = (std::popcount(x & phase_mask) & 1) ? -1.0 : 1.0;
            acc += sign * std::norm(amps_[x]);
        }
        return acc;
    }

    cplx acc{0.0, 0.0};
    for (std::size_t x = 0; x < amps_.size(); ++x) {
        const double sign = (std::popcount(x & phase_mask) & 1) ? -1.0 : 1.0;
        acc += sign * std::conj(amps_[x ^ flip]) * amps_[x];
    }
    static const cplx ipow[4] = {{1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}};
    acc *= ipow[n_y & 3];
    if (std::abs(acc.imag()) > 1e-10) {
        throw std::runtime_error("Pauli expectation has non-negligible imaginary part");
    }
    return acc.real();
}

double Statevector::expectation(const Hamiltonian& h) const {
    if (h.n_qubits() != n_) {
        throw std::invalid_argument("Hamiltonian size does not match state");
    }
    double acc = 0.0;
    for (const PauliTerm& t : h.terms()) {
        acc += t.coeff * expectation(t.string);
    }
    return acc;
}

void Statevector::write_amplitudes(std::ostream& os) const {
    for (std::size_t x = 0; x < amps_.size(); ++x) {
        os << x << ' ' << amps_[x].real() << ' ' << amps_[x].imag() << '\n';
    }
}

} // namespace bpdi
