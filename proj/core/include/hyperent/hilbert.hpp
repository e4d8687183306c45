#ifndef HYPERENT_HILBERT_HPP
#define HYPERENT_HILBERT_HPP

#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

// Dense complex linear algebra for small multi-photon Hilbert spaces.
// Every register handled here has dimension 64 or less, so all operators
// are kept as plain row-major matrices and states as flat amplitude
// vectors. Nothing in this header knows about photons; subsystem
// structure enters only through SubsystemLayout.

namespace hyperent {

using cplx = std::complex<double>;

/// Tolerance for algebraic identities checked on construction (unitarity,
/// idempotence, completeness).
inline constexpr double kAlgebraTol = 1e-12;

/// Tolerance for quantities accumulated over many terms (probability sums).
inline constexpr double kSumTol = 1e-9;

// ---------------------------------------------------------------------------
// Matrix

struct Matrix {
    int dim = 0;
    std::vector<cplx> e;  // row-major, dim*dim entries

    Matrix() = default;
    Matrix(int d, std::vector<cplx> entries);

    static Matrix identity(int d);
    static Matrix zero(int d);

    cplx& at(int r, int c) { return e[static_cast<size_t>(r) * dim + c]; }
    const cplx& at(int r, int c) const { return e[static_cast<size_t>(r) * dim + c]; }
};

Matrix matmul(const Matrix& a, const Matrix& b);
Matrix adjoint(const Matrix& a);
Matrix kron(const Matrix& a, const Matrix& b);
/// max_ij |a_ij - b_ij|
double max_abs_diff(const Matrix& a, const Matrix& b);
bool approx_equal(const Matrix& a, const Matrix& b, double tol = kAlgebraTol);

/// Largest entry-wise deviation of U U^dagger from the identity.
double unitarity_defect(const Matrix& u);

// ---------------------------------------------------------------------------
// UnitaryOp: a matrix that has been checked to be unitary.

class UnitaryOp {
  public:
    explicit UnitaryOp(Matrix m);  // throws std::invalid_argument if not unitary

    int dim() const { return m_.dim; }
    const Matrix& matrix() const { return m_; }
    const cplx& at(int r, int c) const { return m_.at(r, c); }

    UnitaryOp adjoint() const;
    friend UnitaryOp operator*(const UnitaryOp& a, const UnitaryOp& b);

    static UnitaryOp identity(int d) { return UnitaryOp(Matrix::identity(d)); }

  private:
    Matrix m_;
};

// ---------------------------------------------------------------------------
// StateVector

struct StateVector {
    int dim = 0;
    std::vector<cplx> amps;

    StateVector() = default;
    StateVector(int d, std::vector<cplx> a);

    /// Computational basis vector |index> of the given dimension.
    static StateVector basis(int d, int index);

    double norm() const;
    StateVector normalized() const;  // throws on (numerically) zero vectors
};

cplx inner(const StateVector& a, const StateVector& b);

/// |<a|b>|^2. Both arguments are assumed normalized.
double fidelity(const StateVector& a, const StateVector& b);

/// Tensor product of the given factors, in order. The first factor is the
/// most significant in the resulting index.
StateVector tensor(std::span<const StateVector> factors);
StateVector tensor(std::initializer_list<StateVector> factors);

StateVector apply_matrix(const Matrix& m, const StateVector& s);

// ---------------------------------------------------------------------------
// SubsystemLayout: mixed-radix index bookkeeping for a tensor product of
// subsystems. The first subsystem is the most significant digit.

struct SubsystemLayout {
    std::vector<int> dims;
    std::vector<int64_t> strides;
    int total = 1;

    explicit SubsystemLayout(std::vector<int> subsystem_dims);
    SubsystemLayout() = default;

    int size() const { return static_cast<int>(dims.size()); }

    /// Flat index of a digit string (one digit per subsystem).
    int64_t index_of(std::span<const int> digits) const;
    /// Digit string of a flat index.
    std::vector<int> digits_of(int64_t index) const;
};

/// Applies an operator acting on the listed target subsystems (in the order
/// given, which fixes how the operator's tensor factors line up) to a state
/// over the full layout. The operator dimension must equal the product of
/// the target dimensions. Works by direct index arithmetic; it never forms
/// the full-space matrix.
StateVector apply(const Matrix& op, const StateVector& s, const SubsystemLayout& layout,
                  std::span<const int> targets);
StateVector apply(const UnitaryOp& op, const StateVector& s, const SubsystemLayout& layout,
                  std::span<const int> targets);

/// Contracts <bra| against the listed subsystems of |s> and returns the
/// (unnormalized) state of the remaining subsystems. The bra is given as
/// amplitudes over the joint space of the targets, in target order.
StateVector project_out(const StateVector& s, const SubsystemLayout& layout,
                        const StateVector& bra, std::span<const int> targets);

// ---------------------------------------------------------------------------
// ProjectorSet: a labeled complete family of orthogonal projectors.

class ProjectorSet {
  public:
    /// Validates P = P^dagger, P^2 = P for every element and sum(P) = I.
    ProjectorSet(std::vector<std::string> labels, std::vector<Matrix> projectors);

    int dim() const { return projectors_[0].dim; }
    int size() const { return static_cast<int>(projectors_.size()); }
    const std::vector<std::string>& labels() const { return labels_; }
    const Matrix& projector(int k) const { return projectors_[k]; }
    int index_of_label(const std::string& label) const;

  private:
    std::vector<std::string> labels_;
    std::vector<Matrix> projectors_;
};

/// <s|P|s> for every projector in the set. Values in [-kAlgebraTol, 0) are
/// clamped to zero; anything more negative throws. The probabilities are
/// checked to sum to 1 within kSumTol.
std::vector<double> exact_probs(const StateVector& s, const ProjectorSet& ps);

struct MeasureResult {
    int outcome = 0;          // index into the projector set
    std::string label;
    double probability = 0.0;
    StateVector post;         // normalized post-measurement state
};

/// Samples one projective outcome with Born weights and collapses the state.
MeasureResult measure(const StateVector& s, const ProjectorSet& ps, std::mt19937_64& rng);

// ---------------------------------------------------------------------------
// Deterministic RNG plumbing. All stochastic entry points take an explicit
// seed; shard seeds are derived with splitmix64 so a sharded run is a pure
// function of (seed, shard count).

inline constexpr const char* kRngName = "mt19937_64/splitmix64-derived";

uint64_t splitmix64(uint64_t& state);

/// Seed for the rng of one shard of a sharded computation.
uint64_t shard_seed(uint64_t master_seed, uint64_t shard_index);

std::mt19937_64 make_rng(uint64_t seed);

/// Uniform double in [0, 1) from the top 53 bits, independent of any
/// library distribution implementation.
double uniform01(std::mt19937_64& rng);

/// Uniform integer in [0, n) by rejection, bias-free.
uint64_t uniform_index(std::mt19937_64& rng, uint64_t n);

}  // namespace hyperent

#endif
