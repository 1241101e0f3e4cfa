// SPDX-License-Identifier: Apache-2.0
#include "tfatom/toeplitz.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "tfatom/errors.hpp"

namespace tfatom {

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;

double wrap_unit(double w) {
    double r = std::fmod(w, 1.0);
    if (r < 0.0)
        r += 1.0;
    // fmod can land exactly on 1.0 after the correction
    if (r >= 1.0)
        r -= 1.0;
    return r;
}

double circular_distance(double w1, double w2) {
    double d = std::abs(w1 - w2);
    d = std::fmod(d, 1.0);
    return std::min(d, 1.0 - d);
}

Eigen::MatrixXcd vandermonde(index_t rows, const std::vector<double>& omegas) {
    Eigen::MatrixXcd v(rows, static_cast<index_t>(omegas.size()));
    for (index_t k = 0; k < v.cols(); ++k)
        for (index_t j = 0; j < rows; ++j)
            v(j, k) = std::polar(1.0, two_pi * omegas[static_cast<std::size_t>(k)] *
                                          static_cast<double>(j));
    return v;
}

// frequencies via generalized eigenvalues of the shifted signal subspace
std::vector<double> pencil_frequencies(const Eigen::MatrixXcd& subspace) {
    const index_t d = subspace.rows(), k = subspace.cols();
    Eigen::MatrixXcd e0 = subspace.topRows(d - 1);
    Eigen::MatrixXcd e1 = subspace.bottomRows(d - 1);
    Eigen::MatrixXcd psi = e0.colPivHouseholderQr().solve(e1);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(psi, false);
    if (es.info() != Eigen::Success)
        throw DecompositionError("shift-operator eigensolve failed");
    std::vector<double> omegas;
    omegas.reserve(static_cast<std::size_t>(k));
    for (index_t i = 0; i < k; ++i)
        omegas.push_back(wrap_unit(std::arg(es.eigenvalues()[i]) / two_pi));
    return omegas;
}

// classical linear-prediction route: fit the recursion, root the companion
// matrix, snap roots to the unit circle
std::vector<double> prony_frequencies(const Eigen::VectorXcd& u, index_t k) {
    const index_t d = u.size();
    const index_t rows = d - k;
    Eigen::MatrixXcd A(rows, k);
    Eigen::VectorXcd b(rows);
    for (index_t r = 0; r < rows; ++r) {
        for (index_t i = 0; i < k; ++i)
            A(r, i) = u[k + r - 1 - i];
        b[r] = -u[k + r];
    }
    Eigen::VectorXcd q = A.colPivHouseholderQr().solve(b);

    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(k, k);
    for (index_t i = 0; i + 1 < k; ++i)
        companion(i + 1, i) = 1.0;
    for (index_t i = 0; i < k; ++i)
        companion(i, k - 1) = -q[k - 1 - i];
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(companion, false);
    if (es.info() != Eigen::Success)
        throw DecompositionError("companion eigensolve failed");
    std::vector<double> omegas;
    omegas.reserve(static_cast<std::size_t>(k));
    for (index_t i = 0; i < k; ++i)
        omegas.push_back(wrap_unit(std::arg(es.eigenvalues()[i]) / two_pi));
    return omegas;
}

} // namespace

Eigen::MatrixXcd toeplitz_build(const Eigen::VectorXcd& u) {
    const index_t d = u.size();
    if (d < 1)
        throw std::invalid_argument("empty generator");
    Eigen::MatrixXcd t(d, d);
    for (index_t r = 0; r < d; ++r) {
        t(r, r) = u[0].real();
        for (index_t c = 0; c < r; ++c)
            t(r, c) = u[r - c];
        for (index_t c = r + 1; c < d; ++c)
            t(r, c) = std::conj(u[c - r]);
    }
    return t;
}

Eigen::VectorXcd toeplitz_pinv(const Eigen::MatrixXcd& X) {
    const index_t d = X.rows();
    if (d < 1 || X.cols() != d)
        throw std::invalid_argument("toeplitz_pinv needs a square matrix");
    Eigen::VectorXcd u(d);
    for (index_t n = 0; n < d; ++n) {
        cplx acc{0.0, 0.0};
        for (index_t k = 0; k + n < d; ++k)
            acc += X(k + n, k) + std::conj(X(k, k + n));
        u[n] = acc / (2.0 * static_cast<double>(d - n));
    }
    return u;
}

Eigen::MatrixXcd psd_project(const Eigen::MatrixXcd& X) {
    if (X.rows() != X.cols())
        throw std::invalid_argument("psd_project needs a square matrix");
    Eigen::MatrixXcd h = 0.5 * (X + X.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("eigensolve failed in psd_project");
    Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0);
    Eigen::MatrixXcd p = es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().adjoint();
    return 0.5 * (p + p.adjoint());
}

std::vector<AtomEstimate> vandermonde_decompose(const Eigen::VectorXcd& u,
                                                double rank_tol, FreqMethod method) {
    const index_t d = u.size();
    if (d < 1)
        throw std::invalid_argument("empty generator");
    if (!(rank_tol > 0.0))
        throw std::invalid_argument("rank_tol must be positive");

    Eigen::MatrixXcd t = toeplitz_build(u);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(t);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("eigensolve failed on the Toeplitz matrix");
    const Eigen::VectorXd& lam = es.eigenvalues(); // ascending
    const double lam_max = lam[d - 1];
    const double lam_min = lam[0];

    if (lam_min < -rank_tol * std::max(lam_max, 0.0))
        throw std::domain_error("generator matrix is not positive semidefinite");
    if (lam_max <= 0.0)
        return {}; // zero generator

    index_t k = 0;
    for (index_t i = 0; i < d; ++i)
        if (lam[i] > rank_tol * lam_max)
            ++k;
    if (k == 0)
        return {};
    if (k == d)
        throw DecompositionError("generator matrix is full rank; no atomic splitting");

    std::vector<double> omegas;
    if (method == FreqMethod::matrix_pencil) {
        omegas = pencil_frequencies(es.eigenvectors().rightCols(k));
    } else {
        omegas = prony_frequencies(u, k);
    }
    std::sort(omegas.begin(), omegas.end());

    // real nonnegative powers from the stacked real least squares V p ~ u
    Eigen::MatrixXcd v = vandermonde(d, omegas);
    Eigen::MatrixXd vr(2 * d, k);
    vr << v.real(), v.imag();
    Eigen::VectorXd ur(2 * d);
    ur << u.real(), u.imag();
    Eigen::VectorXd p = vr.colPivHouseholderQr().solve(ur);

    std::vector<AtomEstimate> atoms(static_cast<std::size_t>(k));
    for (index_t i = 0; i < k; ++i) {
        atoms[static_cast<std::size_t>(i)].omega = omegas[static_cast<std::size_t>(i)];
        atoms[static_cast<std::size_t>(i)].power = std::max(p[i], 0.0);
    }
    return atoms;
}

CoefficientFit solve_coefficients(const std::vector<AtomEstimate>& atoms,
                                  const Eigen::VectorXcd& x) {
    CoefficientFit fit;
    fit.atoms = atoms;
    if (atoms.empty()) {
        fit.residual = x.norm();
        return fit;
    }
    const index_t j = x.size();
    if (j < 1)
        throw std::invalid_argument("empty target block");

    std::vector<double> omegas;
    omegas.reserve(atoms.size());
    for (const auto& a : atoms)
        omegas.push_back(a.omega);
    for (std::size_t i = 0; i < omegas.size(); ++i)
        for (std::size_t l = i + 1; l < omegas.size(); ++l)
            if (circular_distance(omegas[i], omegas[l]) < 1e-9)
                throw DecompositionError("coincident frequencies make the fit ill-conditioned");

    Eigen::MatrixXcd v = vandermonde(j, omegas);
    Eigen::VectorXcd c = v.colPivHouseholderQr().solve(x);
    fit.residual = (v * c - x).norm();

    for (std::size_t i = 0; i < fit.atoms.size(); ++i) {
        auto& atom = fit.atoms[i];
        atom.coefficient = c[static_cast<index_t>(i)];
        const double mag = std::abs(atom.coefficient);
        const double ref = std::sqrt(std::max(atom.power, 0.0));
        if (std::abs(mag - ref) > 1e-6 * std::max(ref, 1e-300)) {
            atom.power = mag * mag;
            atom.power_adjusted = true;
        }
    }
    return fit;
}

} // namespace tfatom
