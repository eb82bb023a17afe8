#pragma once

#include "bpdi/pauli.hpp"

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

namespace bpdi {

using cplx = std::complex<double>;

enum class GateKind { RX, RY, RZ, RZZ, CNOT };

// Rotation convention: R_P(theta) = exp(-i theta/2 P) for P in
// {X, Y, Z, Z(x)Z}. For CNOT, q0 is the control and q1 the target.
struct Gate {
    GateKind kind;
    int q0 = 0;
    int q1 = -1;
    double angle = 0.0;

    static Gate rx(int q, double angle) { return {GateKind::RX, q, -1, angle}; }
    static Gate ry(int q, double angle) { return {GateKind::RY, q, -1, angle}; }
    static Gate rz(int q, double angle) { return {GateKind::RZ, q, -1, angle}; }
    static Gate rzz(int q0, int q1, double angle) { return {GateKind::RZZ, q0, q1, angle}; }
    static Gate cnot(int control, int target) { return {GateKind::CNOT, control, target, 0.0}; }
};

const char* gate_name(GateKind kind);

// Exact 2^n-amplitude state. Basis index bit q holds qubit q.
class Statevector {
public:
    explicit Statevector(int n_qubits);

    int n_qubits() const { return n_; }
    std::size_t dim() const { return amps_.size(); }
    std::span<const cplx> amps() const { return amps_; }
    cplx amp(std::size_t index) const { return amps_[index]; }
    double norm_sq() const;

    void apply(const Gate& g);

    // <psi|P|psi>; the imaginary residue must be below 1e-10 and is dropped.
    double expectation(const PauliString& p) const;
    double expectation(const Hamiltonian& h) const;

    // One amplitude per line: "index real imag".
    void write_amplitudes(std::ostream& os) const;

private:
    void apply_single(int q, cplx u00, cplx u01, cplx u10, cplx u11);
    void apply_rz(int q, double angle);
    void apply_rzz(int q0, int q1, double angle);
    void apply_cnot(int control, int target);
    void check_target(int q) const;

    int n_;
    std::vector<cplx> amps_;
};

// |0...0> on n qubits, 1 <= n <= 24.
Statevector init_zero_state(int n_qubits);

} // namespace bpdi
