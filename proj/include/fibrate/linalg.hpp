#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace fibrate {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// ---------------------------------------------------------------------------
// Error types
// ---------------------------------------------------------------------------

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class DependentInput : public Error {
public:
    using Error::Error;
};

/// Thrown when singular values admit no clean zero/nonzero separation.
class AmbiguousRank : public Error {
public:
    using Error::Error;
};

class AmbiguousSign : public Error {
public:
    using Error::Error;
};

class NotOrthogonal : public Error {
public:
    using Error::Error;
};

class NotSkew : public Error {
public:
    using Error::Error;
};

class NotDecomposable : public Error {
public:
    using Error::Error;
};

class NotUnitNorm : public Error {
public:
    using Error::Error;
};

class NotComplexStructure : public Error {
public:
    NotComplexStructure(const std::string& condition, double residual)
        : Error("not a complex structure: " + condition +
                " (residual " + std::to_string(residual) + ")"),
          condition_(condition),
          residual_(residual) {}

    const std::string& condition() const { return condition_; }
    double residual() const { return residual_; }

private:
    std::string condition_;
    double residual_;
};

class NotQuaternionic : public Error {
public:
    NotQuaternionic(const std::string& identity, double residual)
        : Error("not a quaternionic structure: " + identity +
                " (residual " + std::to_string(residual) + ")"),
          identity_(identity),
          residual_(residual) {}

    const std::string& identity() const { return identity_; }
    double residual() const { return residual_; }

private:
    std::string identity_;
    double residual_;
};

class OffSphere : public Error {
public:
    using Error::Error;
};

class NoConvergence : public Error {
public:
    using Error::Error;
};

class NotLinear : public Error {
public:
    explicit NotLinear(double residual)
        : Error("map is not linear (fit residual " + std::to_string(residual) + ")"),
          residual_(residual) {}

    double residual() const { return residual_; }

private:
    double residual_;
};

class DegenerateSampling : public Error {
public:
    using Error::Error;
};

// ---------------------------------------------------------------------------
// Randomness (state is always explicit, never global)
// ---------------------------------------------------------------------------

inline std::mt19937_64 make_rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline Vector gaussian_vector(Eigen::Index dim, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss;
    Vector v(dim);
    for (Eigen::Index i = 0; i < dim; ++i) v(i) = gauss(rng);
    return v;
}

inline Matrix gaussian_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss;
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = gauss(rng);
    return m;
}

inline Vector random_unit_vector(Eigen::Index dim, std::mt19937_64& rng) {
    for (;;) {
        Vector v = gaussian_vector(dim, rng);
        const double n = v.norm();
        if (n > 1e-6) return v / n;
    }
}

inline Vector random_unit_vector(Eigen::Index dim, std::uint64_t seed) {
    auto rng = make_rng(seed);
    return random_unit_vector(dim, rng);
}

// ---------------------------------------------------------------------------
// Orthonormalization
// ---------------------------------------------------------------------------

/// Modified Gram-Schmidt with a second correction pass. The output spans the
/// maximal linearly independent prefix of the input; a dependent vector either
/// stops the sweep or, with require_independent set, raises DependentInput.
inline std::vector<Vector> orthonormalize(const std::vector<Vector>& input, double tol,
                                          bool require_independent = false) {
    if (input.empty()) throw std::invalid_argument("orthonormalize: empty input");
    const Eigen::Index dim = input.front().size();
    std::vector<Vector> out;
    out.reserve(input.size());
    for (const Vector& v : input) {
        if (v.size() != dim) throw std::invalid_argument("orthonormalize: mixed dimensions");
        Vector r = v;
        for (int pass = 0; pass < 2; ++pass)
            for (const Vector& q : out) r -= q.dot(r) * q;
        if (r.norm() < tol * std::max(1.0, v.norm())) {
            if (require_independent)
                throw DependentInput("orthonormalize: dependent vector (residual " +
                                     std::to_string(r.norm()) + ")");
            break;
        }
        out.push_back(r / r.norm());
    }
    return out;
}

/// Projects the components along an accumulated orthonormal set out of x.
inline Vector project_out(Vector x, const std::vector<Vector>& basis) {
    for (int pass = 0; pass < 2; ++pass)
        for (const Vector& q : basis) x -= q.dot(x) * q;
    return x;
}

// ---------------------------------------------------------------------------
// Numerical kernel
// ---------------------------------------------------------------------------

struct KernelResult {
    Matrix basis;  // columns form an orthonormal basis of the kernel
    Eigen::Index dimension = 0;
    double spectral_gap = std::numeric_limits<double>::infinity();
};

/// Null space of m by SVD. A singular value counts as zero when it is below
/// tol_rel * max(1, sigma_max). The spectral gap (smallest retained singular
/// value over largest discarded one) must exceed 1e3, otherwise the rank
/// decision is untrustworthy and AmbiguousRank is raised.
inline KernelResult kernel(const Matrix& m, double tol_rel = 1e-7) {
    if (!m.allFinite()) throw std::invalid_argument("kernel: non-finite matrix");
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double sigma_max = sv.size() > 0 ? sv(0) : 0.0;
    const double threshold = tol_rel * std::max(1.0, sigma_max);

    Eigen::Index retained = 0;
    while (retained < sv.size() && sv(retained) >= threshold) ++retained;

    KernelResult result;
    result.dimension = m.cols() - retained;
    result.basis = svd.matrixV().rightCols(result.dimension);

    const double inf = std::numeric_limits<double>::infinity();
    if (retained == 0 || result.dimension == 0 || retained == sv.size()) {
        result.spectral_gap = inf;  // kernel empty, full, or only implicit zeros
    } else {
        const double discarded = sv(retained);
        result.spectral_gap = discarded > 0.0 ? sv(retained - 1) / discarded : inf;
    }
    if (result.spectral_gap < 1e3)
        throw AmbiguousRank("kernel: spectral gap " + std::to_string(result.spectral_gap) +
                            " below 1e3, rank is ambiguous");
    return result;
}

// ---------------------------------------------------------------------------
// Determinant sign
// ---------------------------------------------------------------------------

/// Sign of det(m); 0 when |det| falls below 1e-10 times the Hadamard bound
/// (product of row norms, floored at 1).
inline int det_sign(const Matrix& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("det_sign: matrix not square");
    double hadamard = 1.0;
    for (Eigen::Index i = 0; i < m.rows(); ++i) hadamard *= m.row(i).norm();
    const double threshold = 1e-10 * std::max(1.0, hadamard);
    const double det = Eigen::FullPivLU<Matrix>(m).determinant();
    if (std::abs(det) < threshold) return 0;
    return det > 0.0 ? 1 : -1;
}

// ---------------------------------------------------------------------------
// Random orthogonal matrices
// ---------------------------------------------------------------------------

/// Haar-like sampling: Gaussian matrix, orthonormalized columns, determinant
/// sign fixed by negating the last column. Deterministic in the seed.
inline Matrix random_orthogonal(Eigen::Index dim, int want_sign, std::uint64_t seed) {
    if (dim < 1) throw std::invalid_argument("random_orthogonal: dim must be positive");
    if (want_sign != 1 && want_sign != -1)
        throw std::invalid_argument("random_orthogonal: sign must be +1 or -1");
    auto rng = make_rng(seed);
    for (;;) {
        Matrix g = gaussian_matrix(dim, dim, rng);
        std::vector<Vector> cols;
        cols.reserve(dim);
        for (Eigen::Index j = 0; j < dim; ++j) cols.push_back(g.col(j));
        std::vector<Vector> ortho;
        try {
            ortho = orthonormalize(cols, 1e-10, true);
        } catch (const DependentInput&) {
            continue;  // measure-zero event, redraw
        }
        Matrix t(dim, dim);
        for (Eigen::Index j = 0; j < dim; ++j) t.col(j) = ortho[static_cast<std::size_t>(j)];
        if (det_sign(t) != want_sign) t.col(dim - 1) *= -1.0;
        return t;
    }
}

}  // namespace fibrate
