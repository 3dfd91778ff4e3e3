#pragma once

#include "fcvide/errors.hpp"
#include "fcvide/polynomial.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

namespace fcvide {

/// Clustering tolerance for merging refined roots, relative to local root scale.
inline constexpr double kRootClusterTol = 1e-8;

namespace detail {

using cplx = std::complex<double>;

inline std::vector<cplx> companion_eigenvalues(const Polynomial& p) {
    const int n = p.degree();
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
    for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
    for (int i = 0; i < n; ++i) companion(i, n - 1) = -p.coeffs[i] / p.leading();
    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, /*computeEigenvectors=*/false);
    std::vector<cplx> eigs(n);
    for (int i = 0; i < n; ++i) eigs[i] = solver.eigenvalues()(i);
    return eigs;
}

/// Scale-aware bound used to decide whether P^(j)(z) is "numerically zero".
inline double eval_noise_scale(const Polynomial& p, cplx z) {
    double az = std::abs(z);
    double bound = 0.0, zp = 1.0;
    for (double c : p.coeffs) {
        bound += std::fabs(c) * zp;
        zp *= std::max(1.0, az);
    }
    return std::max(bound, 1e-300);
}

/// Newton iteration on q starting at z0. Returns the last iterate; the
/// caller validates it.
inline cplx newton_polish(const Polynomial& q, cplx z0) {
    const Polynomial dq = q.derivative();
    cplx z = z0;
    for (int it = 0; it < 60; ++it) {
        cplx f = q.eval(z);
        cplx df = dq.eval(z);
        if (std::abs(df) == 0.0) break;
        cplx step = f / df;
        z -= step;
        if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(z))) break;
    }
    return z;
}

} // namespace detail

/// All complex roots with multiplicities. Companion-matrix eigenvalues give
/// the initial estimates; near-coincident eigenvalues (a multiplicity-m root
/// scatters them by ~eps^(1/m)) are collapsed by Newton-refining against the
/// (m-1)-th derivative, where the root is simple, before clustering at the
/// tight tolerance. Conjugate symmetry is enforced by pairwise averaging.
inline std::vector<std::pair<std::complex<double>, int>> poly_roots(const Polynomial& p) {
    using detail::cplx;
    if (p.is_zero()) throw ZeroPolynomial("poly_roots: zero polynomial has no root set");
    if (p.degree() < 1) return {};

    Polynomial work = p * (1.0 / p.max_abs_coeff());
    const int deg = work.degree();
    std::vector<cplx> eigs = detail::companion_eigenvalues(work);

    std::vector<Polynomial> derivs{work};
    for (int m = 1; m < deg; ++m) derivs.push_back(derivs.back().derivative());

    // Capture radius for the local multiplicity estimate: the eigenvalue ring
    // of a multiplicity-m root has radius ~(cond*eps)^(1/m), up to a few
    // hundredths for m ~ 6 with badly scaled coefficients.
    auto capture_radius = [](cplx z) { return 0.1 * std::max(1.0, std::abs(z)); };
    // An eigenvalue belonging to a multiplicity-m root sits within roughly
    // (cond*eps)^(1/m) of it; a Newton result farther than that belongs to a
    // neighboring root, not to this cluster.
    auto scatter_radius = [](int m, cplx z) {
        return std::max(std::pow(1e-8, 1.0 / m), kRootClusterTol) * std::max(1.0, std::abs(z));
    };

    std::vector<cplx> refined(eigs.size());
    for (size_t i = 0; i < eigs.size(); ++i) {
        const cplx z0 = eigs[i];
        int m_est = 0;
        for (const cplx& w : eigs)
            if (std::abs(w - z0) <= capture_radius(z0)) ++m_est;

        cplx best = z0;
        for (int m = m_est; m >= 1; --m) {
            cplx z = detail::newton_polish(derivs[m - 1], z0);
            if (std::abs(z - z0) > scatter_radius(m, z0)) continue;
            // genuine multiplicity >= m: all lower derivatives evaluate to
            // coefficient-noise level at z
            bool ok = true;
            for (int j = 0; j < m && ok; ++j)
                ok = std::abs(derivs[j].eval(z)) <= 1e3 * 2.22e-16 * detail::eval_noise_scale(derivs[j], z);
            if (ok) {
                best = z;
                break;
            }
        }
        refined[i] = best;
    }

    // Cluster the refined estimates; multiplicity = cluster population.
    std::vector<std::pair<cplx, int>> clusters;
    std::vector<bool> used(refined.size(), false);
    for (size_t i = 0; i < refined.size(); ++i) {
        if (used[i]) continue;
        cplx sum = refined[i];
        int count = 1;
        used[i] = true;
        const double tol = kRootClusterTol * std::max(1.0, std::abs(refined[i]));
        for (size_t j = i + 1; j < refined.size(); ++j) {
            if (!used[j]) {
                if (std::abs(refined[j] - refined[i]) <= tol) {
                    sum += refined[j];
                    used[j] = true;
                    ++count;
                }
            }
        }
        clusters.emplace_back(sum / static_cast<double>(count), count);
    }

    // Conjugate symmetrization: snap near-real roots, average true pairs.
    for (auto& [z, m] : clusters)
        if (std::fabs(z.imag()) <= kRootClusterTol * std::max(1.0, std::abs(z))) z = cplx(z.real(), 0.0);
    std::vector<bool> done(clusters.size(), false);
    for (size_t i = 0; i < clusters.size(); ++i) {
        if (done[i] || clusters[i].first.imag() == 0.0) continue;
        for (size_t j = i + 1; j < clusters.size(); ++j) {
            if (done[j] || clusters[j].first.imag() == 0.0 || clusters[j].second != clusters[i].second)
                continue;
            cplx zi = clusters[i].first, zj = clusters[j].first;
            double tol = 1e-6 * std::max(1.0, std::abs(zi));
            if (std::fabs(zi.real() - zj.real()) <= tol && std::fabs(zi.imag() + zj.imag()) <= tol) {
                cplx avg((zi.real() + zj.real()) / 2.0, (zi.imag() - zj.imag()) / 2.0);
                clusters[i].first = avg;
                clusters[j].first = std::conj(avg);
                done[i] = done[j] = true;
                break;
            }
        }
    }

    std::sort(clusters.begin(), clusters.end(), [](const auto& a, const auto& b) {
        if (a.first.real() != b.first.real()) return a.first.real() < b.first.real();
        return a.first.imag() < b.first.imag();
    });
    return clusters;
}

} // namespace fcvide
