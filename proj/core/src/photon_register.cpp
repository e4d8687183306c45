#include "hyperent/photon_register.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

namespace hyperent {

namespace {

const std::array<std::string, 2> kPolLabels = {"H", "V"};
const std::array<std::string, 2> kParityLabels = {"E", "O"};
const std::array<std::string, 3> kQutritLabels = {"0", "+1", "-1"};

int kind_rank(DofKind kind) {
    switch (kind) {
        case DofKind::Polarization: return 0;
        case DofKind::OamParity: return 1;
        case DofKind::OamQutrit: return 1;
    }
    throw std::invalid_argument("kind_rank: unknown DofKind");
}

bool canonical_less(const DofSpec& a, const DofSpec& b) {
    if (a.photon != b.photon) return a.photon < b.photon;
    return kind_rank(a.kind) < kind_rank(b.kind);
}

}  // namespace

int dim_of(DofKind kind) {
    switch (kind) {
        case DofKind::Polarization: return 2;
        case DofKind::OamParity: return 2;
        case DofKind::OamQutrit: return 3;
    }
    throw std::invalid_argument("dim_of: unknown DofKind");
}

std::span<const std::string> basis_labels(DofKind kind) {
    switch (kind) {
        case DofKind::Polarization: return kPolLabels;
        case DofKind::OamParity: return kParityLabels;
        case DofKind::OamQutrit: return kQutritLabels;
    }
    throw std::invalid_argument("basis_labels: unknown DofKind");
}

int label_index(DofKind kind, const std::string& label) {
    const auto labels = basis_labels(kind);
    for (size_t i = 0; i < labels.size(); ++i)
        if (labels[i] == label) return static_cast<int>(i);
    throw std::invalid_argument("label_index: unknown label '" + label + "'");
}

std::string to_string(const DofSpec& spec) {
    std::string kind;
    switch (spec.kind) {
        case DofKind::Polarization: kind = "pol"; break;
        case DofKind::OamParity: kind = "oam2"; break;
        case DofKind::OamQutrit: kind = "oam3"; break;
    }
    return "p" + std::to_string(spec.photon) + "." + kind;
}

PhotonRegister::PhotonRegister(std::vector<DofSpec> specs)
    : specs_(std::move(specs)), layout_([&] {
          std::vector<int> dims;
          dims.reserve(specs_.size());
          for (const DofSpec& s : specs_) dims.push_back(dim_of(s.kind));
          return SubsystemLayout(dims);
      }()) {
    for (size_t i = 0; i < specs_.size(); ++i) {
        if (specs_[i].photon <= 0)
            throw std::invalid_argument("PhotonRegister: photon numbers are 1-based");
        for (size_t j = i + 1; j < specs_.size(); ++j) {
            if (specs_[i].photon == specs_[j].photon &&
                kind_rank(specs_[i].kind) == kind_rank(specs_[j].kind))
                throw std::invalid_argument("PhotonRegister: duplicate subsystem " +
                                            to_string(specs_[j]));
        }
        if (i > 0 && !canonical_less(specs_[i - 1], specs_[i]))
            throw std::invalid_argument("PhotonRegister: subsystems out of canonical order");
    }
}

int PhotonRegister::find_subsystem(int photon, DofKind kind) const {
    for (int i = 0; i < size(); ++i)
        if (specs_[i].photon == photon && specs_[i].kind == kind) return i;
    throw std::invalid_argument("PhotonRegister: no subsystem " +
                                to_string(DofSpec{photon, kind}));
}

int64_t PhotonRegister::index_of(std::span<const std::string> labels) const {
    if (labels.size() != specs_.size())
        throw std::invalid_argument("PhotonRegister::index_of: label count mismatch");
    std::vector<int> digits(specs_.size());
    for (size_t i = 0; i < specs_.size(); ++i)
        digits[i] = label_index(specs_[i].kind, labels[i]);
    return layout_.index_of(digits);
}

int64_t PhotonRegister::index_of(std::initializer_list<std::string> labels) const {
    return index_of(std::span<const std::string>(labels.begin(), labels.size()));
}

std::vector<std::string> PhotonRegister::labels_of(int64_t index) const {
    const std::vector<int> digits = layout_.digits_of(index);
    std::vector<std::string> labels(digits.size());
    for (size_t i = 0; i < digits.size(); ++i)
        labels[i] = std::string(basis_labels(specs_[i].kind)[digits[i]]);
    return labels;
}

StateVector PhotonRegister::basis_state(std::span<const std::string> labels) const {
    return StateVector::basis(dim(), static_cast<int>(index_of(labels)));
}

StateVector PhotonRegister::basis_state(std::initializer_list<std::string> labels) const {
    return basis_state(std::span<const std::string>(labels.begin(), labels.size()));
}

Matrix PhotonRegister::embed(const Matrix& op, std::span<const int> targets) const {
    std::vector<bool> is_target(specs_.size(), false);
    int op_dim = 1;
    for (int t : targets) {
        if (t < 0 || t >= size()) throw std::invalid_argument("embed: target out of range");
        if (is_target[t]) throw std::invalid_argument("embed: duplicate target");
        is_target[t] = true;
        op_dim *= layout_.dims[t];
    }
    if (op.dim != op_dim)
        throw std::invalid_argument("embed: operator dimension does not match targets");

    // Row-by-row: an entry (r, c) of the full matrix is op(r', c') when the
    // non-target digits of r and c agree, where r', c' collect target digits
    // in target order; zero otherwise.
    const auto target_digit_index = [&](const std::vector<int>& digits) {
        int k = 0;
        for (int t : targets) k = k * layout_.dims[t] + digits[t];
        return k;
    };

    Matrix full = Matrix::zero(dim());
    for (int r = 0; r < dim(); ++r) {
        const std::vector<int> rd = layout_.digits_of(r);
        const int rk = target_digit_index(rd);
        for (int ck = 0; ck < op_dim; ++ck) {
            const cplx v = op.at(rk, ck);
            if (v == cplx{0.0, 0.0}) continue;
            std::vector<int> cd = rd;
            int rem = ck;
            for (size_t ti = targets.size(); ti-- > 0;) {
                const int t = targets[ti];
                cd[t] = rem % layout_.dims[t];
                rem /= layout_.dims[t];
            }
            const int64_t c = layout_.index_of(cd);
            full.at(r, static_cast<int>(c)) = v;
        }
    }
    return full;
}

Matrix PhotonRegister::embed(const Matrix& op, std::initializer_list<int> targets) const {
    return embed(op, std::span<const int>(targets.begin(), targets.size()));
}

StateVector PhotonRegister::apply(const Matrix& op, const StateVector& s,
                                  std::span<const int> targets) const {
    return hyperent::apply(op, s, layout_, targets);
}

StateVector PhotonRegister::apply(const Matrix& op, const StateVector& s,
                                  std::initializer_list<int> targets) const {
    return hyperent::apply(op, s, layout_, std::span<const int>(targets.begin(), targets.size()));
}

StateVector PhotonRegister::apply(const UnitaryOp& op, const StateVector& s,
                                  std::span<const int> targets) const {
    return hyperent::apply(op, s, layout_, targets);
}

StateVector PhotonRegister::apply(const UnitaryOp& op, const StateVector& s,
                                  std::initializer_list<int> targets) const {
    return hyperent::apply(op, s, layout_,
                           std::span<const int>(targets.begin(), targets.size()));
}

PhotonRegister build_register(std::vector<DofSpec> specs) {
    std::stable_sort(specs.begin(), specs.end(), canonical_less);
    return PhotonRegister(std::move(specs));
}

}  // namespace hyperent
