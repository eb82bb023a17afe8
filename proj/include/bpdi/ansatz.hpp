#pragma once

#include "bpdi/statevector.hpp"

#include <iosfwd>
#include <span>
#include <vector>

namespace bpdi {

enum class AnsatzVariant { HEA, HVA };
enum class ModelKind { TFIM, LFIM };
enum class HeaEntangler { Ring, Line };

const char* variant_name(AnsatzVariant v);
const char* model_name(ModelKind m);
const char* entangler_name(HeaEntangler e);

// One slot of the gate program. param < 0 marks a fixed gate (CNOT);
// otherwise the applied angle is scale * theta[param]. Several slots may
// read the same parameter (HVA block sharing).
struct GateSlot {
    GateKind kind;
    int q0 = 0;
    int q1 = -1;
    int param = -1;
    double scale = 1.0;
};

struct AnsatzSpec {
    AnsatzVariant variant = AnsatzVariant::HEA;
    ModelKind model = ModelKind::TFIM;
    int n_qubits = 0;
    int depth = 0;
    int n_params = 0;
    std::vector<GateSlot> slots;

    // One slot per line: "<gate> <targets> param=<idx> scale=<s>".
    void write_program(std::ostream& os) const;
};

// Layered hardware-efficient circuit: per layer, R_y then R_z on every qubit
// (each gate its own parameter), then nearest-neighbor CNOTs (q, q+1) with a
// closing (n-1, 0) when the entangler is a ring. Parameter count 2*n*d.
AnsatzSpec build_hea(int n, int d, HeaEntangler entangler = HeaEntangler::Ring);

// Hamiltonian-aligned circuit: per layer, R_x(2*beta) on every qubit sharing
// one parameter, then R_zz(2*gamma) on open-boundary bonds sharing one
// parameter; for LFIM an R_z(2*delta) block follows. Parameter count 2*d
// (TFIM) or 3*d (LFIM).
AnsatzSpec build_hva(int n, int d, ModelKind model);

// Applies the gate program to |0...0>. theta length must match n_params.
Statevector prepare_state(const AnsatzSpec& spec, std::span<const double> theta);

} // namespace bpdi
