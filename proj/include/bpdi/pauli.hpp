#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace bpdi {

// Length-n Pauli word over {I, X, Y, Z}; letter q acts on qubit q, which is
// basis bit q (least significant bit first).
class PauliString {
public:
    PauliString() = default;
    explicit PauliString(std::string letters);

    static PauliString identity(int n_qubits);
    static PauliString single(int n_qubits, int qubit, char op);
    static PauliString two_site(int n_qubits, int q0, int q1, char op);

    int size() const { return static_cast<int>(letters_.size()); }
    char op(int qubit) const { return letters_[static_cast<std::size_t>(qubit)]; }
    bool is_identity() const;
    int weight() const;
    const std::string& letters() const { return letters_; }

    bool operator==(const PauliString&) const = default;

private:
    std::string letters_;
};

struct PauliTerm {
    double coeff = 0.0;
    PauliString string;
};

// Real-coefficient Pauli-sum Hamiltonian. Term order is fixed at
// construction and is the term index used throughout the termwise gradient
// machinery. Duplicate strings are merged (coefficients summed, first
// occurrence keeps its position); terms whose merged coefficient is exactly
// zero are dropped. Identity strings are rejected.
class Hamiltonian {
public:
    Hamiltonian(int n_qubits, std::vector<PauliTerm> terms);

    int n_qubits() const { return n_qubits_; }
    const std::vector<PauliTerm>& terms() const { return terms_; }
    std::size_t term_count() const { return terms_.size(); }

    // One term per line: "<coeff> <letters>".
    void write_text(std::ostream& os) const;

private:
    int n_qubits_;
    std::vector<PauliTerm> terms_;
};

// Open-boundary transverse-field Ising chain:
//   -sum_i Z_i Z_{i+1} + h sum_i X_i,
// terms ordered as all ZZ bonds (ascending site) then all X fields.
Hamiltonian build_tfim(int n, double h);

// Longitudinal-field extension: the TFIM terms followed by hz * Z_i fields.
// With hz == 0 the Z block is omitted and the result equals build_tfim(n, hx).
Hamiltonian build_lfim(int n, double hx, double hz);

} // namespace bpdi
