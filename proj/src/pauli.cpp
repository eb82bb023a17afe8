#include "bpdi/pauli.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

namespace bpdi {

namespace {

bool valid_letter(char c) {
    return c == 'I' || c == 'X' || c == 'Y' || c == 'Z';
}

} // namespace

PauliString::PauliString(std::string letters) : letters_(std::move(letters)) {
    for (char c : letters_) {
        if (!valid_letter(c)) {
            throw std::invalid_argument("Pauli letter must be one of I, X, Y, Z");
        }
    }
}

PauliString PauliString::identity(int n_qubits) {
    if (n_qubits < 1) {
        throw std::invalid_argument("Pauli string needs at least one qubit");
    }
    return PauliString(std::string(static_cast<std::size_t>(n_qubits), 'I'));
}

PauliString PauliString::single(int n_qubits, int qubit, char op) {
    PauliString p = identity(n_qubits);
    if (qubit < 0 || qubit >= n_qubits) {
        throw std::out_of_range("qubit index out of range");
    }
    if (!valid_letter(op)) {
        throw std::invalid_argument("invalid Pauli letter");
    }
    p.letters_[static_cast<std::size_t>(qubit)] = op;
    return p;
}

PauliString PauliString::two_site(int n_qubits, int q0, int q1, char op) {
    if (q0 == q1) {
        throw std::invalid_argument("two-site Pauli needs distinct qubits");
    }
    PauliString p = single(n_qubits, q0, op);
    if (q1 < 0 || q1 >= n_qubits) {
        throw std::out_of_range("qubit index out of range");
    }
    p.letters_[static_cast<std::size_t>(q1)] = op;
    return p;
}

bool PauliString::is_identity() const {
    return letters_.find_first_not_of('I') == std::string::npos;
}

int PauliString::weight() const {
    int w = 0;
    for (char c : letters_) {
        if (c != 'I') {
            ++w;
        }
    }
    return w;
}

Hamiltonian::Hamiltonian(int n_qubits, std::vector<PauliTerm> terms) : n_qubits_(n_qubits) {
    if (n_qubits < 1) {
        throw std::invalid_argument("Hamiltonian needs at least one qubit");
    }
    terms_.reserve(terms.size());
    for (const PauliTerm& t : terms) {
        if (t.string.size() != n_qubits_) {
            throw std::invalid_argument("Pauli string length does not match qubit count");
        }
        if (t.string.is_identity()) {
            throw std::invalid_argument("identity terms are not stored in a Hamiltonian");
        }
        if (!std::isfinite(t.coeff)) {
            throw std::invalid_argument("term coefficient must be finite");
        }
        bool merged = false;
        for (PauliTerm& kept : terms_) {
            if (kept.string == t.string) {
                kept.coeff += t.coeff;
                merged = true;
                break;
            }
        }
        if (!merged) {
            terms_.push_back(t);
        }
    }
    std::erase_if(terms_, [](const PauliTerm& t) { return t.coeff == 0.0; });
}

void Hamiltonian::write_text(std::ostream& os) const {
    for (const PauliTerm& t : terms_) {
        os << t.coeff << ' ' << t.string.letters() << '\n';
    }
}

Hamiltonian build_tfim(int n, double h) {
    if (n < 2) {
        throw std::invalid_argument("TFIM needs n >= 2");
    }
    std::vector<PauliTerm> terms;
    terms.reserve(static_cast<std::size_t>(2 * n - 1));
    for (int i = 0; i + 1 < n; ++i) {
        terms.push_back({-1.0, PauliString::two_site(n, i, i + 1, 'Z')});
    }
    for (int i = 0; i < n; ++i) {
        terms.push_back({h, PauliString::single(n, i, 'X')});
    }
    return Hamiltonian(n, std::move(terms));
}

Hamiltonian build_lfim(int n, double hx, double hz) {
    if (n < 2) {
        throw std::invalid_argument("LFIM needs n >= 2");
    }
    std::vector<PauliTerm> terms;
    terms.reserve(static_cast<std::size_t>(3 * n - 1));
    for (int i = 0; i + 1 < n; ++i) {
        terms.push_back({-1.0, PauliString::two_site(n, i, i + 1, 'Z')});
    }
    for (int i = 0; i < n; ++i) {
        terms.push_back({hx, PauliString::single(n, i, 'X')});
    }
    if (hz != 0.0) {
        for (int i = 0; i < n; ++i) {
            terms.push_back({hz, PauliString::single(n, i, 'Z')});
        }
    }
    return Hamiltonian(n, std::move(terms));
}

} // namespace bpdi
