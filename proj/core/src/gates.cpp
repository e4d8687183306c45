#include "hyperent/gates.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hyperent {

namespace {
constexpr double kPi = std::numbers::pi;
const std::array<PolOp, 4> kPolOps = {PolOp::Identity, PolOp::SigmaX, PolOp::ISigmaY,
                                      PolOp::SigmaZ};
}  // namespace

Matrix mat2(PolOp op) {
    switch (op) {
        case PolOp::Identity: return identity2();
        case PolOp::SigmaX: return sigma_x();
        case PolOp::ISigmaY: return i_sigma_y();
        case PolOp::SigmaZ: return sigma_z();
    }
    throw std::invalid_argument("mat2: unknown PolOp");
}

std::string to_string(PolOp op) {
    switch (op) {
        case PolOp::Identity: return "I";
        case PolOp::SigmaX: return "X";
        case PolOp::ISigmaY: return "iY";
        case PolOp::SigmaZ: return "Z";
    }
    throw std::invalid_argument("to_string: unknown PolOp");
}

PolOp pol_op_from_string(const std::string& name) {
    for (PolOp op : kPolOps)
        if (to_string(op) == name) return op;
    throw std::invalid_argument("pol_op_from_string: unknown name '" + name + "'");
}

std::span<const PolOp> pol_ops() { return kPolOps; }

Matrix identity2() { return Matrix::identity(2); }

Matrix sigma_x() { return Matrix(2, {0.0, 1.0, 1.0, 0.0}); }

Matrix i_sigma_y() { return Matrix(2, {0.0, 1.0, -1.0, 0.0}); }

Matrix sigma_z() { return Matrix(2, {1.0, 0.0, 0.0, -1.0}); }

UnitaryOp hwp(double theta) {
    const double c = std::cos(2.0 * theta);
    const double s = std::sin(2.0 * theta);
    return UnitaryOp(Matrix(2, {c, s, s, -c}));
}

UnitaryOp hadamard2() { return hwp(kPi / 8.0); }

UnitaryOp su2(const EulerZyz& angles) {
    const cplx ea = std::polar(1.0, -angles.alpha / 2.0);
    const cplx eg = std::polar(1.0, -angles.gamma / 2.0);
    const double c = std::cos(angles.beta / 2.0);
    const double s = std::sin(angles.beta / 2.0);
    // Rz(a) Ry(b) Rz(g), with Rz(t) = diag(e^{-it/2}, e^{it/2}).
    return UnitaryOp(Matrix(2, {ea * c * eg, -ea * s * std::conj(eg),
                                std::conj(ea) * s * eg, std::conj(ea) * c * std::conj(eg)}));
}

EulerZyz su2_angles_for(cplx a, cplx b) {
    const double n = std::sqrt(std::norm(a) + std::norm(b));
    if (n < 1e-300) throw std::invalid_argument("su2_angles_for: zero target state");
    a /= n;
    b /= n;
    const double arg_a = (std::abs(a) > 0.0) ? std::arg(a) : 0.0;
    const double arg_b = (std::abs(b) > 0.0) ? std::arg(b) : 0.0;
    EulerZyz e;
    e.beta = 2.0 * std::atan2(std::abs(b), std::abs(a));
    e.alpha = arg_b - arg_a;
    e.gamma = -arg_a - arg_b;
    return e;
}

UnitaryOp prepare_qubit(cplx a, cplx b) { return su2(su2_angles_for(a, b)); }

UnitaryOp cnot(int control_value) {
    if (control_value != 0 && control_value != 1)
        throw std::invalid_argument("cnot: control_value must be 0 or 1");
    Matrix m = Matrix::identity(4);
    const int base = 2 * control_value;
    m.at(base, base) = 0.0;
    m.at(base, base + 1) = 1.0;
    m.at(base + 1, base) = 1.0;
    m.at(base + 1, base + 1) = 0.0;
    return UnitaryOp(std::move(m));
}

UnitaryOp spp() { return UnitaryOp(sigma_x()); }

UnitaryOp pc_o() {
    // diag(I, X) on (pol, oam): flip parity in the V sector.
    Matrix m = Matrix::zero(4);
    m.at(0, 0) = 1.0;
    m.at(1, 1) = 1.0;
    m.at(2, 3) = 1.0;
    m.at(3, 2) = 1.0;
    return UnitaryOp(std::move(m));
}

UnitaryOp oc_p() {
    // X on pol in the O sector: HE->HE, HO->VO, VE->VE, VO->HO.
    Matrix m = Matrix::zero(4);
    m.at(0, 0) = 1.0;
    m.at(3, 1) = 1.0;
    m.at(2, 2) = 1.0;
    m.at(1, 3) = 1.0;
    return UnitaryOp(std::move(m));
}

UnitaryOp swap_dofs() {
    // HE->HE, HO->VE, VE->HO, VO->VO.
    Matrix m = Matrix::zero(4);
    m.at(0, 0) = 1.0;
    m.at(2, 1) = 1.0;
    m.at(1, 2) = 1.0;
    m.at(3, 3) = 1.0;
    return UnitaryOp(std::move(m));
}

std::vector<StateVector> fourier_basis(int d, double offset) {
    if (d <= 0) throw std::invalid_argument("fourier_basis: dimension must be positive");
    std::vector<StateVector> basis;
    basis.reserve(d);
    const double norm = 1.0 / std::sqrt(static_cast<double>(d));
    for (int k = 0; k < d; ++k) {
        StateVector v;
        v.dim = d;
        v.amps.resize(d);
        for (int j = 0; j < d; ++j)
            v.amps[j] = norm * std::polar(1.0, 2.0 * kPi * j * (k + offset) / d);
        basis.push_back(std::move(v));
    }
    return basis;
}

Matrix rank1_projector(const StateVector& s) {
    Matrix p = Matrix::zero(s.dim);
    for (int r = 0; r < s.dim; ++r)
        for (int c = 0; c < s.dim; ++c) p.at(r, c) = s.amps[r] * std::conj(s.amps[c]);
    return p;
}

ProjectorSet basis_projector_set(std::vector<std::string> labels,
                                 const std::vector<StateVector>& states) {
    std::vector<Matrix> projectors;
    projectors.reserve(states.size());
    for (const StateVector& s : states) projectors.push_back(rank1_projector(s));
    return ProjectorSet(std::move(labels), std::move(projectors));
}

ProjectorSet sorter_projectors() {
    return basis_projector_set({"E", "O"},
                               {StateVector::basis(2, 0), StateVector::basis(2, 1)});
}

}  // namespace hyperent
