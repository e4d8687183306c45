#pragma once

// Registers of photonic degrees of freedom.
//
// A register is an ordered list of (photon, degree-of-freedom) subsystems with
// a canonical ordering: photons ascend, and within a photon polarization comes
// before any orbital-angular-momentum subsystem.  The first subsystem is the
// most significant digit of the flat state index.

#include <span>
#include <string>
#include <vector>

#include "hyperent/hilbert.hpp"

namespace hyperent {

enum class DofKind {
    Polarization,  // dim 2: H, V
    OamParity,     // dim 2: E (even), O (odd)
    OamQutrit,     // dim 3: 0, +1, -1
};

int dim_of(DofKind kind);

// Basis labels in index order, e.g. {"H","V"} or {"0","+1","-1"}.
std::span<const std::string> basis_labels(DofKind kind);

// Index of a basis label within its kind; throws on unknown labels.
int label_index(DofKind kind, const std::string& label);

struct DofSpec {
    int photon = 0;  // 1-based photon number
    DofKind kind = DofKind::Polarization;

    bool operator==(const DofSpec&) const = default;
};

std::string to_string(const DofSpec& spec);

class PhotonRegister {
  public:
    // Specs must already be in canonical order; build_register sorts for you.
    explicit PhotonRegister(std::vector<DofSpec> specs);

    int size() const { return static_cast<int>(specs_.size()); }
    int dim() const { return layout_.total; }
    const SubsystemLayout& layout() const { return layout_; }
    const std::vector<DofSpec>& specs() const { return specs_; }
    const DofSpec& spec(int subsystem) const { return specs_.at(subsystem); }

    // Position of (photon, kind) in the subsystem list; throws if absent.
    int find_subsystem(int photon, DofKind kind) const;

    // Flat index of the product basis state named by one label per subsystem.
    int64_t index_of(std::span<const std::string> labels) const;
    int64_t index_of(std::initializer_list<std::string> labels) const;

    // Labels of each subsystem for a flat basis index.
    std::vector<std::string> labels_of(int64_t index) const;

    StateVector basis_state(std::span<const std::string> labels) const;
    StateVector basis_state(std::initializer_list<std::string> labels) const;

    // Full-space matrix acting as `op` on `targets` and identity elsewhere.
    // Deliberately independent of hyperent::apply so the two can check each
    // other: embed-then-multiply must agree with in-place application.
    Matrix embed(const Matrix& op, std::span<const int> targets) const;
    Matrix embed(const Matrix& op, std::initializer_list<int> targets) const;

    StateVector apply(const Matrix& op, const StateVector& s,
                      std::span<const int> targets) const;
    StateVector apply(const Matrix& op, const StateVector& s,
                      std::initializer_list<int> targets) const;
    StateVector apply(const UnitaryOp& op, const StateVector& s,
                      std::span<const int> targets) const;
    StateVector apply(const UnitaryOp& op, const StateVector& s,
                      std::initializer_list<int> targets) const;

  private:
    std::vector<DofSpec> specs_;
    SubsystemLayout layout_;
};

// Sorts specs into canonical order and validates uniqueness.
PhotonRegister build_register(std::vector<DofSpec> specs);

}  // namespace hyperent
