#pragma once

// Foldy-Wouthuysen frame: the unitary U with U H_D U^dagger = H_F diagonal, the frequency
// operator of the FW spectrum, and closed forms of transformed operators.

#include <optional>

#include "dqnd/dirac_model.hpp"

namespace dqnd {

struct FwUnitary {
  Operator u;
  DiracParams params;
};

enum class FrequencyRegime { General, Weak, Strong };

struct FrequencyOperator {
  Operator op;
  FrequencyRegime regime;
};

/// U over the full space (identity on probe factors). Entries that would address
/// n = osc_dim are dropped, so U is unitary on the interior only.
SparseMatrix fw_unitary_sparse(const DiracParams& p, const SpaceDescriptor& space);
/// AssemblyError if U U^dagger deviates from 1 by more than 1e-8 on the interior.
FwUnitary build_fw_unitary(const DiracParams& p, const SpaceDescriptor& space);

/// Per-basis-state diagonal of H_F: E_n^+ on |n,up>, -E_{n+1}^+ on |n,down>.
double fw_energy(int n, int spin, const DiracParams& p);
SparseMatrix fw_hamiltonian_sparse(const DiracParams& p, const SpaceDescriptor& space);
Operator fw_hamiltonian(const DiracParams& p, const SpaceDescriptor& space);

/// Level spacing seen by |n, spin>: E_n^+ - E_{n-1}^+ (0 on |0,up>), E_n^- - E_{n-1}^-.
double fw_frequency(int n, int spin, double epsilon);
SparseMatrix frequency_general_sparse(const DiracParams& p, const SpaceDescriptor& space);
FrequencyOperator frequency_operator_general(const DiracParams& p, const SpaceDescriptor& space);

/// U^dagger O U
Operator to_dirac(const Operator& op, const FwUnitary& u);
/// U O U^dagger
Operator to_fw(const Operator& op, const FwUnitary& u);

/// Closed-form U^dagger a U and its adjoint.
std::pair<Operator, Operator> closed_form_transformed_ladder(const DiracParams& p,
                                                          const SpaceDescriptor& space);

/// chi(n) = (1 - sqrt(1 - 2 eps / (1 + 2 eps n))) / eps. DomainError where the root is negative.
double chi(int n, double epsilon);

/// Diagonal chi(n) on the oscillator. At ε > 1/2 chi(0) is undefined: without a corner value
/// this is a DomainError; with one, that value is used. Also assembles the closed-form transformed
/// frequency and checks it against conjugation on the interior (AssemblyError past 1e-9).
Operator chi_operator(const DiracParams& p, const SpaceDescriptor& space,
                      std::optional<EdgeConvention> corner = std::nullopt);

/// Closed-form U^dagger omega U = [[chi(n), i sqrt(2 eps) chi(n) a^dagger],
/// [-i sqrt(2 eps) a chi(n), -chi(n+1)]] with the same corner rule as chi_operator.
Operator closed_form_transformed_frequency(const DiracParams& p, const SpaceDescriptor& space,
                                        std::optional<EdgeConvention> corner = std::nullopt);

}  // namespace dqnd
