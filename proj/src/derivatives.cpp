#include "tropt/derivatives.hpp"

#include "tropt/errors.hpp"

#include <cmath>
#include <numbers>
#include <vector>

namespace tropt {

namespace {

void check_sizes(std::span<const cplx> y, std::span<const double> gamma)
{
    if (y.size() != gamma.size()) {
        throw ConfigError("weight vector length differs from the signal length");
    }
}

} // namespace

cplx tone_kernel(int n, int tone, int n_fft)
{
    const long long idx = (static_cast<long long>(n) * bin_slot(tone, n_fft)) % n_fft;
    const double angle = -2.0 * std::numbers::pi * static_cast<double>(idx) / n_fft;
    return cplx(std::cos(angle), std::sin(angle)) / std::sqrt(static_cast<double>(n_fft));
}

Eigen::VectorXd weighted_jacobian_fast(std::span<const int> tones, std::span<const cplx> y,
                                       std::span<const double> gamma)
{
    check_sizes(y, gamma);
    const int n = static_cast<int>(y.size());
    const auto beta = static_cast<Eigen::Index>(tones.size());
    CVec weighted(y.size());
    for (std::size_t k = 0; k < y.size(); ++k) {
        weighted[k] = gamma[k] * y[k];
    }
    const CVec spectrum = dft(weighted);
    Eigen::VectorXd jac(2 * beta);
    for (Eigen::Index l = 0; l < beta; ++l) {
        const cplx v = spectrum[static_cast<std::size_t>(bin_slot(tones[static_cast<std::size_t>(l)], n))];
        jac(l) = v.real();
        jac(beta + l) = v.imag();
    }
    return jac;
}

Eigen::VectorXd weighted_jacobian_direct(std::span<const int> tones, std::span<const cplx> y,
                                         std::span<const double> gamma)
{
    check_sizes(y, gamma);
    const int n_fft = static_cast<int>(y.size());
    const auto beta = static_cast<Eigen::Index>(tones.size());
    Eigen::VectorXd jac = Eigen::VectorXd::Zero(2 * beta);
    for (Eigen::Index l = 0; l < beta; ++l) {
        double q = 0.0;
        double w = 0.0;
        for (int n = 0; n < n_fft; ++n) {
            const cplx f = tone_kernel(n, tones[static_cast<std::size_t>(l)], n_fft);
            const cplx yn = y[static_cast<std::size_t>(n)];
            q += gamma[static_cast<std::size_t>(n)] * (yn.real() * f.real() - yn.imag() * f.imag());
            w += gamma[static_cast<std::size_t>(n)] * (yn.real() * f.imag() + yn.imag() * f.real());
        }
        jac(l) = q;
        jac(beta + l) = w;
    }
    return jac;
}

Eigen::MatrixXd weighted_hessian_fast(std::span<const int> tones, std::span<const cplx> y,
                                      std::span<const double> gamma, std::span<const double> lambda)
{
    check_sizes(y, gamma);
    check_sizes(y, lambda);
    const int n = static_cast<int>(y.size());
    const auto beta = static_cast<Eigen::Index>(tones.size());

    CVec curvature(y.size());
    std::vector<double> isotropic(y.size());
    for (std::size_t k = 0; k < y.size(); ++k) {
        curvature[k] = lambda[k] * y[k] * y[k];
        isotropic[k] = gamma[k] + 0.5 * lambda[k] * std::norm(y[k]);
    }
    const CVec sum_bins = dft(curvature);
    const CVec diff_bins = dft_real(isotropic);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));

    Eigen::MatrixXd h(2 * beta, 2 * beta);
    for (Eigen::Index l = 0; l < beta; ++l) {
        for (Eigen::Index m = 0; m < beta; ++m) {
            const int tl = tones[static_cast<std::size_t>(l)];
            const int tm = tones[static_cast<std::size_t>(m)];
            const cplx s = sum_bins[static_cast<std::size_t>(bin_slot(tl + tm, n))];
            const cplx d = diff_bins[static_cast<std::size_t>(bin_slot(tl - tm, n))];
            h(l, m) = scale * (0.5 * s.real() + d.real());
            h(l, beta + m) = scale * (0.5 * s.imag() - d.imag());
            h(beta + l, beta + m) = scale * (-0.5 * s.real() + d.real());
        }
    }
    h.bottomLeftCorner(beta, beta) = h.topRightCorner(beta, beta).transpose();
    return h;
}

Eigen::MatrixXd weighted_hessian_direct(std::span<const int> tones, std::span<const cplx> y,
                                        std::span<const double> gamma, std::span<const double> lambda)
{
    check_sizes(y, gamma);
    check_sizes(y, lambda);
    const int n_fft = static_cast<int>(y.size());
    const auto beta = static_cast<Eigen::Index>(tones.size());

    // F_{n,l} for every tone, row-major by n.
    std::vector<cplx> kernel(static_cast<std::size_t>(n_fft) * tones.size());
    for (int n = 0; n < n_fft; ++n) {
        for (std::size_t l = 0; l < tones.size(); ++l) {
            kernel[static_cast<std::size_t>(n) * tones.size() + l] = tone_kernel(n, tones[l], n_fft);
        }
    }

    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(2 * beta, 2 * beta);
    for (int n = 0; n < n_fft; ++n) {
        const auto ns = static_cast<std::size_t>(n);
        const double ry = y[ns].real();
        const double iy = y[ns].imag();
        for (Eigen::Index l = 0; l < beta; ++l) {
            const cplx fl = kernel[ns * tones.size() + static_cast<std::size_t>(l)];
            const double gl = ry * fl.real() - iy * fl.imag();
            const double hl = ry * fl.imag() + iy * fl.real();
            for (Eigen::Index m = 0; m < beta; ++m) {
                const cplx fm = kernel[ns * tones.size() + static_cast<std::size_t>(m)];
                const double gm = ry * fm.real() - iy * fm.imag();
                const double hm = ry * fm.imag() + iy * fm.real();
                const double same = fm.real() * fl.real() + fm.imag() * fl.imag();
                const double cross = fm.imag() * fl.real() - fm.real() * fl.imag();
                h(l, m) += gamma[ns] * same + lambda[ns] * gl * gm;
                h(l, beta + m) += gamma[ns] * cross + lambda[ns] * gl * hm;
                h(beta + l, beta + m) += gamma[ns] * same + lambda[ns] * hl * hm;
            }
        }
    }
    // C_{l,m} = B_{m,l}
    h.bottomLeftCorner(beta, beta) = h.topRightCorner(beta, beta).transpose();
    return h;
}

CholeskyMultiSolve cholesky_solve(const Eigen::MatrixXd& h, const Eigen::MatrixXd& rhs)
{
    CholeskyMultiSolve out;
    Eigen::LLT<Eigen::MatrixXd> llt(h);
    if (llt.info() == Eigen::Success) {
        out.solution = llt.solve(rhs);
        if (out.solution.allFinite()) {
            return out;
        }
    }
    const auto dim = static_cast<double>(h.rows());
    const double trace = h.trace();
    const double base = trace > 0.0 ? trace / dim : 1.0;
    double eps = 1e-8 * base;
    for (int attempt = 0; attempt < 9; ++attempt, eps *= 10.0) {
        Eigen::MatrixXd shifted = h;
        shifted.diagonal().array() += eps;
        Eigen::LLT<Eigen::MatrixXd> retry(shifted);
        if (retry.info() == Eigen::Success) {
            out.solution = retry.solve(rhs);
            if (out.solution.allFinite()) {
                out.regularized = true;
                out.shift = eps;
                return out;
            }
        }
    }
    throw NumericError("Hessian is not positive definite even after regularization", eps);
}

CholeskySolve cholesky_solve(const Eigen::MatrixXd& h, const Eigen::VectorXd& rhs)
{
    CholeskyMultiSolve multi = cholesky_solve(h, Eigen::MatrixXd(rhs));
    return {multi.solution.col(0), multi.regularized, multi.shift};
}

Eigen::VectorXd stack_complex(std::span<const cplx> d)
{
    const auto beta = static_cast<Eigen::Index>(d.size());
    Eigen::VectorXd v(2 * beta);
    for (Eigen::Index l = 0; l < beta; ++l) {
        v(l) = d[static_cast<std::size_t>(l)].real();
        v(beta + l) = d[static_cast<std::size_t>(l)].imag();
    }
    return v;
}

CVec unstack_complex(const Eigen::VectorXd& v)
{
    const Eigen::Index beta = v.size() / 2;
    CVec d(static_cast<std::size_t>(beta));
    for (Eigen::Index l = 0; l < beta; ++l) {
        d[static_cast<std::size_t>(l)] = cplx(v(l), v(beta + l));
    }
    return d;
}

} // namespace tropt
