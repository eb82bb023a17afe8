#pragma once

#include "bpdi/ansatz.hpp"
#include "bpdi/pauli.hpp"

#include <complex>
#include <span>
#include <vector>

// Dense-matrix reference implementations used to cross-check the bitwise
// statevector engine and the differentiation rules. Everything here is
// built from explicit 2x2 / 4x4 matrices and Kronecker products and shares
// no code with the fast paths it validates. Intended for n <= 4.
namespace bpdi::oracle {

using Mat = std::vector<cplx>;  // row-major dim x dim

Mat pauli_matrix(const PauliString& p);
Mat gate_matrix(const Gate& g, int n_qubits);
Mat hamiltonian_matrix(const Hamiltonian& h);

std::vector<cplx> apply(const Mat& m, std::span<const cplx> v);

// Gate-by-gate dense simulation of the ansatz program from |0...0>.
std::vector<cplx> simulate(const AnsatzSpec& spec, std::span<const double> theta);

double expectation(std::span<const cplx> state, const Mat& observable);
double expectation(std::span<const cplx> state, const PauliString& p);
double expectation(std::span<const cplx> state, const Hamiltonian& h);

// Central finite differences through the dense simulation.
std::vector<double> grad_full_fd(const AnsatzSpec& spec, std::span<const double> theta,
                                 const Hamiltonian& h, double eps);

// Row-major n_terms x n_params matrix of c_alpha * d<P_alpha>/d theta_k.
std::vector<std::vector<double>> grad_termwise_fd(const AnsatzSpec& spec,
                                                  std::span<const double> theta,
                                                  const Hamiltonian& h, double eps);

} // namespace bpdi::oracle
