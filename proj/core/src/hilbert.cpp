#include "hyperent/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace hyperent {

Matrix::Matrix(int d, std::vector<cplx> entries) : dim(d), e(std::move(entries)) {
    if (dim <= 0 || e.size() != static_cast<size_t>(dim) * dim)
        throw std::invalid_argument("Matrix: entry count does not match dimension");
}

Matrix Matrix::identity(int d) {
    Matrix m = zero(d);
    for (int i = 0; i < d; ++i) m.at(i, i) = 1.0;
    return m;
}

Matrix Matrix::zero(int d) {
    if (d <= 0) throw std::invalid_argument("Matrix: dimension must be positive");
    Matrix m;
    m.dim = d;
    m.e.assign(static_cast<size_t>(d) * d, cplx{0.0, 0.0});
    return m;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.dim != b.dim) throw std::invalid_argument("matmul: dimension mismatch");
    Matrix c = Matrix::zero(a.dim);
    for (int i = 0; i < a.dim; ++i)
        for (int k = 0; k < a.dim; ++k) {
            const cplx aik = a.at(i, k);
            if (aik == cplx{0.0, 0.0}) continue;
            for (int j = 0; j < a.dim; ++j) c.at(i, j) += aik * b.at(k, j);
        }
    return c;
}

Matrix adjoint(const Matrix& a) {
    Matrix c = Matrix::zero(a.dim);
    for (int i = 0; i < a.dim; ++i)
        for (int j = 0; j < a.dim; ++j) c.at(i, j) = std::conj(a.at(j, i));
    return c;
}

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix c = Matrix::zero(a.dim * b.dim);
    for (int i = 0; i < a.dim; ++i)
        for (int j = 0; j < a.dim; ++j) {
            const cplx aij = a.at(i, j);
            if (aij == cplx{0.0, 0.0}) continue;
            for (int k = 0; k < b.dim; ++k)
                for (int l = 0; l < b.dim; ++l)
                    c.at(i * b.dim + k, j * b.dim + l) = aij * b.at(k, l);
        }
    return c;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
    if (a.dim != b.dim) throw std::invalid_argument("max_abs_diff: dimension mismatch");
    double m = 0.0;
    for (size_t i = 0; i < a.e.size(); ++i) m = std::max(m, std::abs(a.e[i] - b.e[i]));
    return m;
}

bool approx_equal(const Matrix& a, const Matrix& b, double tol) {
    return a.dim == b.dim && max_abs_diff(a, b) <= tol;
}

double unitarity_defect(const Matrix& u) {
    return max_abs_diff(matmul(u, adjoint(u)), Matrix::identity(u.dim));
}

UnitaryOp::UnitaryOp(Matrix m) : m_(std::move(m)) {
    if (unitarity_defect(m_) > kAlgebraTol)
        throw std::invalid_argument("UnitaryOp: matrix is not unitary");
}

UnitaryOp UnitaryOp::adjoint() const { return UnitaryOp(hyperent::adjoint(m_)); }

UnitaryOp operator*(const UnitaryOp& a, const UnitaryOp& b) {
    return UnitaryOp(matmul(a.m_, b.m_));
}

StateVector::StateVector(int d, std::vector<cplx> a) : dim(d), amps(std::move(a)) {
    if (dim <= 0 || amps.size() != static_cast<size_t>(dim))
        throw std::invalid_argument("StateVector: amplitude count does not match dimension");
}

StateVector StateVector::basis(int d, int index) {
    if (index < 0 || index >= d) throw std::invalid_argument("StateVector::basis: index out of range");
    StateVector s;
    s.dim = d;
    s.amps.assign(d, cplx{0.0, 0.0});
    s.amps[index] = 1.0;
    return s;
}

double StateVector::norm() const {
    double n2 = 0.0;
    for (const cplx& a : amps) n2 += std::norm(a);
    return std::sqrt(n2);
}

StateVector StateVector::normalized() const {
    const double n = norm();
    if (n < 1e-300) throw std::domain_error("StateVector::normalized: zero vector");
    StateVector s = *this;
    for (cplx& a : s.amps) a /= n;
    return s;
}

cplx inner(const StateVector& a, const StateVector& b) {
    if (a.dim != b.dim) throw std::invalid_argument("inner: dimension mismatch");
    cplx v{0.0, 0.0};
    for (int i = 0; i < a.dim; ++i) v += std::conj(a.amps[i]) * b.amps[i];
    return v;
}

double fidelity(const StateVector& a, const StateVector& b) { return std::norm(inner(a, b)); }

StateVector tensor(std::span<const StateVector> factors) {
    if (factors.empty()) throw std::invalid_argument("tensor: no factors");
    StateVector out = factors[0];
    for (size_t f = 1; f < factors.size(); ++f) {
        const StateVector& x = factors[f];
        StateVector next;
        next.dim = out.dim * x.dim;
        next.amps.resize(next.dim);
        for (int i = 0; i < out.dim; ++i)
            for (int j = 0; j < x.dim; ++j) next.amps[i * x.dim + j] = out.amps[i] * x.amps[j];
        out = std::move(next);
    }
    return out;
}

StateVector tensor(std::initializer_list<StateVector> factors) {
    return tensor(std::span<const StateVector>(factors.begin(), factors.size()));
}

StateVector apply_matrix(const Matrix& m, const StateVector& s) {
    if (m.dim != s.dim) throw std::invalid_argument("apply_matrix: dimension mismatch");
    StateVector out;
    out.dim = s.dim;
    out.amps.assign(s.dim, cplx{0.0, 0.0});
    for (int i = 0; i < m.dim; ++i) {
        cplx acc{0.0, 0.0};
        for (int j = 0; j < m.dim; ++j) acc += m.at(i, j) * s.amps[j];
        out.amps[i] = acc;
    }
    return out;
}

SubsystemLayout::SubsystemLayout(std::vector<int> subsystem_dims) : dims(std::move(subsystem_dims)) {
    if (dims.empty()) throw std::invalid_argument("SubsystemLayout: no subsystems");
    strides.assign(dims.size(), 1);
    for (int i = static_cast<int>(dims.size()) - 2; i >= 0; --i) {
        if (dims[i + 1] <= 0) throw std::invalid_argument("SubsystemLayout: nonpositive dimension");
        strides[i] = strides[i + 1] * dims[i + 1];
    }
    if (dims[0] <= 0) throw std::invalid_argument("SubsystemLayout: nonpositive dimension");
    total = static_cast<int>(strides[0] * dims[0]);
}

int64_t SubsystemLayout::index_of(std::span<const int> digits) const {
    if (digits.size() != dims.size())
        throw std::invalid_argument("SubsystemLayout::index_of: digit count mismatch");
    int64_t idx = 0;
    for (size_t i = 0; i < dims.size(); ++i) {
        if (digits[i] < 0 || digits[i] >= dims[i])
            throw std::invalid_argument("SubsystemLayout::index_of: digit out of range");
        idx += digits[i] * strides[i];
    }
    return idx;
}

std::vector<int> SubsystemLayout::digits_of(int64_t index) const {
    if (index < 0 || index >= total)
        throw std::invalid_argument("SubsystemLayout::digits_of: index out of range");
    std::vector<int> d(dims.size());
    for (size_t i = 0; i < dims.size(); ++i) {
        d[i] = static_cast<int>(index / strides[i]);
        index %= strides[i];
    }
    return d;
}

namespace {

// Enumerates flat base indices with all target digits set to zero, plus the
// flat strides of the target digits, so a subspace operator can be applied
// block by block.
struct TargetView {
    std::vector<int64_t> rest_bases;     // flat index of each non-target digit combo
    std::vector<int64_t> target_offsets; // flat offset of each target-subspace index
    int op_dim = 1;
};

TargetView make_view(const SubsystemLayout& layout, std::span<const int> targets) {
    std::vector<bool> is_target(layout.dims.size(), false);
    for (int t : targets) {
        if (t < 0 || t >= layout.size())
            throw std::invalid_argument("apply: target subsystem out of range");
        if (is_target[t]) throw std::invalid_argument("apply: duplicate target subsystem");
        is_target[t] = true;
    }

    TargetView v;
    for (int t : targets) v.op_dim *= layout.dims[t];

    // Offsets of the operator's column index within the flat state index.
    v.target_offsets.assign(v.op_dim, 0);
    for (int k = 0; k < v.op_dim; ++k) {
        int rem = k;
        int64_t off = 0;
        for (size_t ti = 0; ti < targets.size(); ++ti) {
            int block = 1;
            for (size_t tj = ti + 1; tj < targets.size(); ++tj) block *= layout.dims[targets[tj]];
            const int digit = rem / block;
            rem %= block;
            off += static_cast<int64_t>(digit) * layout.strides[targets[ti]];
        }
        v.target_offsets[k] = off;
    }

    // Flat indices of every combination of the remaining digits.
    std::vector<int> rest;
    for (int i = 0; i < layout.size(); ++i)
        if (!is_target[i]) rest.push_back(i);
    int rest_count = 1;
    for (int r : rest) rest_count *= layout.dims[r];
    v.rest_bases.assign(rest_count, 0);
    for (int k = 0; k < rest_count; ++k) {
        int rem = k;
        int64_t base = 0;
        for (size_t ri = 0; ri < rest.size(); ++ri) {
            int block = 1;
            for (size_t rj = ri + 1; rj < rest.size(); ++rj) block *= layout.dims[rest[rj]];
            const int digit = rem / block;
            rem %= block;
            base += static_cast<int64_t>(digit) * layout.strides[rest[ri]];
        }
        v.rest_bases[k] = base;
    }
    return v;
}

}  // namespace

StateVector apply(const Matrix& op, const StateVector& s, const SubsystemLayout& layout,
                  std::span<const int> targets) {
    if (layout.total != s.dim) throw std::invalid_argument("apply: layout does not match state");
    const TargetView v = make_view(layout, targets);
    if (op.dim != v.op_dim)
        throw std::invalid_argument("apply: operator dimension does not match targets");

    StateVector out = s;
    std::vector<cplx> block(v.op_dim);
    for (int64_t base : v.rest_bases) {
        for (int k = 0; k < v.op_dim; ++k) block[k] = s.amps[base + v.target_offsets[k]];
        for (int r = 0; r < v.op_dim; ++r) {
            cplx acc{0.0, 0.0};
            for (int c = 0; c < v.op_dim; ++c) acc += op.at(r, c) * block[c];
            out.amps[base + v.target_offsets[r]] = acc;
        }
    }
    return out;
}

StateVector apply(const UnitaryOp& op, const StateVector& s, const SubsystemLayout& layout,
                  std::span<const int> targets) {
    return apply(op.matrix(), s, layout, targets);
}

StateVector project_out(const StateVector& s, const SubsystemLayout& layout,
                        const StateVector& bra, std::span<const int> targets) {
    if (layout.total != s.dim) throw std::invalid_argument("project_out: layout mismatch");
    const TargetView v = make_view(layout, targets);
    if (bra.dim != v.op_dim)
        throw std::invalid_argument("project_out: bra dimension does not match targets");

    StateVector out;
    out.dim = static_cast<int>(v.rest_bases.size());
    out.amps.assign(out.dim, cplx{0.0, 0.0});
    for (size_t r = 0; r < v.rest_bases.size(); ++r) {
        cplx acc{0.0, 0.0};
        for (int k = 0; k < v.op_dim; ++k)
            acc += std::conj(bra.amps[k]) * s.amps[v.rest_bases[r] + v.target_offsets[k]];
        out.amps[r] = acc;
    }
    return out;
}

ProjectorSet::ProjectorSet(std::vector<std::string> labels, std::vector<Matrix> projectors)
    : labels_(std::move(labels)), projectors_(std::move(projectors)) {
    if (projectors_.empty()) throw std::invalid_argument("ProjectorSet: empty");
    if (labels_.size() != projectors_.size())
        throw std::invalid_argument("ProjectorSet: label count mismatch");
    const int d = projectors_[0].dim;
    Matrix sum = Matrix::zero(d);
    for (const Matrix& p : projectors_) {
        if (p.dim != d) throw std::invalid_argument("ProjectorSet: inconsistent dimensions");
        if (max_abs_diff(p, adjoint(p)) > kAlgebraTol)
            throw std::invalid_argument("ProjectorSet: element is not Hermitian");
        if (max_abs_diff(matmul(p, p), p) > kAlgebraTol)
            throw std::invalid_argument("ProjectorSet: element is not idempotent");
        for (size_t i = 0; i < sum.e.size(); ++i) sum.e[i] += p.e[i];
    }
    if (max_abs_diff(sum, Matrix::identity(d)) > kAlgebraTol)
        throw std::invalid_argument("ProjectorSet: projectors do not resolve the identity");
}

int ProjectorSet::index_of_label(const std::string& label) const {
    for (size_t i = 0; i < labels_.size(); ++i)
        if (labels_[i] == label) return static_cast<int>(i);
    throw std::invalid_argument("ProjectorSet: unknown label " + label);
}

std::vector<double> exact_probs(const StateVector& s, const ProjectorSet& ps) {
    if (s.dim != ps.dim()) throw std::invalid_argument("exact_probs: dimension mismatch");
    std::vector<double> probs(ps.size());
    for (int k = 0; k < ps.size(); ++k) {
        const StateVector ps_s = apply_matrix(ps.projector(k), s);
        double p = inner(s, ps_s).real();
        if (p < -kAlgebraTol)
            throw std::domain_error("exact_probs: negative probability beyond tolerance");
        probs[k] = std::max(p, 0.0);
    }
    const double sum = std::accumulate(probs.begin(), probs.end(), 0.0);
    if (std::abs(sum - 1.0) > kSumTol)
        throw std::domain_error("exact_probs: probabilities do not sum to 1");
    return probs;
}

MeasureResult measure(const StateVector& s, const ProjectorSet& ps, std::mt19937_64& rng) {
    const std::vector<double> probs = exact_probs(s, ps);
    const double u = uniform01(rng);
    double acc = 0.0;
    int outcome = -1;
    for (int k = 0; k < ps.size(); ++k) {
        acc += probs[k];
        if (u < acc) {
            outcome = k;
            break;
        }
    }
    if (outcome < 0) {
        // u landed in the rounding slack at the top of the cumulative sum.
        for (int k = ps.size() - 1; k >= 0; --k)
            if (probs[k] > 0.0) {
                outcome = k;
                break;
            }
    }
    if (outcome < 0) throw std::domain_error("measure: all outcome probabilities vanish");

    MeasureResult r;
    r.outcome = outcome;
    r.label = ps.labels()[outcome];
    r.probability = probs[outcome];
    r.post = apply_matrix(ps.projector(outcome), s).normalized();
    return r;
}

uint64_t splitmix64(uint64_t& state) {
    state += 0x9E3779B97F4A7C15ull;
    uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

uint64_t shard_seed(uint64_t master_seed, uint64_t shard_index) {
    uint64_t state = master_seed;
    uint64_t v = splitmix64(state);
    state = v ^ (shard_index + 0x632BE59BD9B4E019ull);
    v = splitmix64(state);
    return v;
}

std::mt19937_64 make_rng(uint64_t seed) {
    uint64_t state = seed;
    // Spread a possibly low-entropy user seed over the full state.
    const uint64_t s = splitmix64(state);
    return std::mt19937_64(s);
}

double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

uint64_t uniform_index(std::mt19937_64& rng, uint64_t n) {
    if (n == 0) throw std::invalid_argument("uniform_index: empty range");
    const uint64_t limit = UINT64_MAX - (UINT64_MAX % n);
    for (;;) {
        const uint64_t v = rng();
        if (v < limit) return v % n;
    }
}

}  // namespace hyperent
