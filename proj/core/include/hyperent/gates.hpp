#pragma once

// Optical gate catalog.
//
// Single degree-of-freedom gates are 2x2 (or 3x3 for the qutrit tools);
// two-subsystem gates are given in control-major ordering and are meant to be
// routed to arbitrary register subsystems via PhotonRegister::apply.

#include <string>
#include <vector>

#include "hyperent/hilbert.hpp"

namespace hyperent {

// Pauli-group corrections used by the teleportation recipes.  ISigmaY is the
// real matrix [[0,1],[-1,0]]; using it instead of sigma_y keeps every recipe
// entry real.
enum class PolOp { Identity, SigmaX, ISigmaY, SigmaZ };

Matrix mat2(PolOp op);
// Short names for reports: "I", "X", "iY", "Z".
std::string to_string(PolOp op);
PolOp pol_op_from_string(const std::string& name);

// All four ops in canonical (tie-break) order: I, X, iY, Z.
std::span<const PolOp> pol_ops();

Matrix identity2();
Matrix sigma_x();
Matrix i_sigma_y();
Matrix sigma_z();

// Half-wave plate with fast axis at angle theta (radians) from horizontal:
// [[cos 2t, sin 2t], [sin 2t, -cos 2t]].  hwp(pi/8) is the Hadamard.
UnitaryOp hwp(double theta);
UnitaryOp hadamard2();

// Euler angles (z-y-z) realizing U = Rz(alpha) Ry(beta) Rz(gamma).
struct EulerZyz {
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
};

UnitaryOp su2(const EulerZyz& angles);

// Angles such that su2(angles) maps |0> to exactly (a, b) after
// normalization, including phase.  Throws if (a, b) is the zero vector.
EulerZyz su2_angles_for(cplx a, cplx b);

// Convenience: the unitary preparing (a, b) from |0>.
UnitaryOp prepare_qubit(cplx a, cplx b);

// Controlled-X on control (x) target qubits, firing when the control digit
// equals control_value (0 or 1).
UnitaryOp cnot(int control_value);

// Spiral phase plate: shifts orbital angular momentum by one unit, which
// flips its parity.  On the (E, O) qubit this is sigma_x.
UnitaryOp spp();

// Polarization-controlled parity flip: X on the OAM-parity qubit when the
// polarization is V.  Acts on (pol, oam) in that order.
UnitaryOp pc_o();

// Parity-controlled polarization flip: X on the polarization qubit when the
// OAM parity is O.  Acts on (pol, oam) in that order.
UnitaryOp oc_p();

// Swap of the polarization and OAM-parity values of one photon under the
// pairing H<->E, V<->O: HE->HE, HO->VE, VE->HO, VO->VO.
// Equals pc_o * oc_p * pc_o.
UnitaryOp swap_dofs();

// Fourier-type analyzer basis for a d-level subsystem:
// |k> = d^{-1/2} sum_j exp(i 2 pi j (k + offset) / d) |j>, k = 0..d-1.
// Orthonormal for any real offset.
std::vector<StateVector> fourier_basis(int d, double offset);

// Projector onto the ray spanned by a (normalized) state.
Matrix rank1_projector(const StateVector& s);

// Projective measurement onto a list of orthonormal states.
ProjectorSet basis_projector_set(std::vector<std::string> labels,
                                 const std::vector<StateVector>& states);

// Parity sorter on one OAM-parity qubit: projectors {P_E, P_O}.
ProjectorSet sorter_projectors();

}  // namespace hyperent
