#include "bpdi/ansatz.hpp"

#include <ostream>
#include <stdexcept>

namespace bpdi {

const char* variant_name(AnsatzVariant v) {
    return v == AnsatzVariant::HEA ? "hea" : "hva";
}

const char* model_name(ModelKind m) {
    return m == ModelKind::TFIM ? "tfim" : "lfim";
}

const char* entangler_name(HeaEntangler e) {
    return e == HeaEntangler::Ring ? "ring" : "line";
}

void AnsatzSpec::write_program(std::ostream& os) const {
    for (const GateSlot& s : slots) {
        os << gate_name(s.kind) << ' ' << s.q0;
        if (s.q1 >= 0) {
            os << ' ' << s.q1;
        }
        os << " param=" << s.param << " scale=" << static_cast<int>(s.scale) << '\n';
    }
}

namespace {

void check_sizes(int n, int d) {
    if (n < 2) {
        throw std::invalid_argument("ansatz needs n >= 2");
    }
    if (d < 1) {
        throw std::invalid_argument("ansatz needs depth >= 1");
    }
}

} // namespace

AnsatzSpec build_hea(int n, int d, HeaEntangler entangler) {
    check_sizes(n, d);
    AnsatzSpec spec;
    spec.variant = AnsatzVariant::HEA;
    spec.model = ModelKind::TFIM;  // unused for HEA; the circuit is problem-agnostic
    spec.n_qubits = n;
    spec.depth = d;
    spec.n_params = 2 * n * d;
    int param = 0;
    for (int layer = 0; layer < d; ++layer) {
        for (int q = 0; q < n; ++q) {
            spec.slots.push_back({GateKind::RY, q, -1, param++, 1.0});
        }
        for (int q = 0; q < n; ++q) {
            spec.slots.push_back({GateKind::RZ, q, -1, param++, 1.0});
        }
        for (int q = 0; q + 1 < n; ++q) {
            spec.slots.push_back({GateKind::CNOT, q, q + 1, -1, 1.0});
        }
        if (entangler == HeaEntangler::Ring) {
            spec.slots.push_back({GateKind::CNOT, n - 1, 0, -1, 1.0});
        }
    }
    return spec;
}

AnsatzSpec build_hva(int n, int d, ModelKind model) {
    check_sizes(n, d);
    AnsatzSpec spec;
    spec.variant = AnsatzVariant::HVA;
    spec.model = model;
    spec.n_qubits = n;
    spec.depth = d;
    const int per_layer = model == ModelKind::LFIM ? 3 : 2;
    spec.n_params = per_layer * d;
    for (int layer = 0; layer < d; ++layer) {
        const int beta = per_layer * layer;
        const int gamma = beta + 1;
        for (int q = 0; q < n; ++q) {
            spec.slots.push_back({GateKind::RX, q, -1, beta, 2.0});
        }
        for (int q = 0; q + 1 < n; ++q) {
            spec.slots.push_back({GateKind::RZZ, q, q + 1, gamma, 2.0});
        }
        if (model == ModelKind::LFIM) {
            const int delta = beta + 2;
            for (int q = 0; q < n; ++q) {
                spec.slots.push_back({GateKind::RZ, q, -1, delta, 2.0});
            }
        }
    }
    return spec;
}

Statevector prepare_state(const AnsatzSpec& spec, std::span<const double> theta) {
    if (static_cast<int>(theta.size()) != spec.n_params) {
        throw std::invalid_argument("theta length does not match parameter count");
    }
    Statevector state(spec.n_qubits);
    for (const GateSlot& s : spec.slots) {
        const double angle =
            s.param >= 0 ? s.scale * theta[static_cast<std::size_t>(s.param)] : 0.0;
        state.apply({s.kind, s.q0, s.q1, angle});
    }
    return state;
}

} // namespace bpdi
