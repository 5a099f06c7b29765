#include "pinlab/homogeneous.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/tools/roots.hpp>
#include <fftw3.h>

#include "fft_lock.hpp"
#include "pinlab/partition.hpp"

namespace pinlab {

namespace {

constexpr double kCutoff = 40.0;  // e^{-40} is below double resolution of G

// Σ_{n>M} c n^{-s} (1 - e^{-bn}) for bM < kCutoff.
double far_tail(const RenewalLaw& law, double b) {
    const double s = 1.0 + law.alpha();
    const double a = static_cast<double>(law.n_max()) + 0.5;
    auto dg = [&](double x) { return -s * std::pow(x, -s - 1.0) * -std::expm1(-b * x) + b * std::pow(x, -s) * std::exp(-b * x); };
    // ∫_a^∞ g with x = a e^t.
    boost::math::quadrature::exp_sinh<double> integrator;
    const double ab = a * b;
    auto integrand = [&](double t) { return std::exp((1.0 - s) * t) * -std::expm1(-ab * std::exp(t)); };
    const double integral = std::pow(a, 1.0 - s) * integrator.integrate(integrand, 0.0, std::numeric_limits<double>::infinity());
    const double e = std::exp(-b * a), q = -std::expm1(-b * a);
    const double d3g = -s * (s + 1.0) * (s + 2.0) * std::pow(a, -s - 3.0) * q + 3.0 * s * (s + 1.0) * std::pow(a, -s - 2.0) * b * e +
                       3.0 * s * std::pow(a, -s - 1.0) * b * b * e + std::pow(a, -s) * b * b * b * e;
    // Midpoint Euler-Maclaurin: Σ_{n>M} g(n) = ∫_{M+1/2}^∞ g + g'(M+1/2)/24 - 7 g'''(M+1/2)/5760 + ...
    return law.c_K() * (integral + dg(a) / 24.0 - 7.0 * d3g / 5760.0);
}

}  // namespace

double tilted_mass_deficit(const RenewalLaw& law, double b) {
    if (!(b > 0.0)) return 0.0;
    const std::size_t M = law.n_max();
    const double horizon = std::ceil(kCutoff / b);
    const auto K = law.K_table();
    if (horizon < static_cast<double>(M)) {
        const auto stop = static_cast<std::size_t>(horizon);
        double acc = law.Kbar(stop);
        for (std::size_t n = stop; n >= 1; --n) acc += K[n] * -std::expm1(-b * static_cast<double>(n));
        return acc;
    }
    double acc = far_tail(law, b);
    for (std::size_t n = M; n >= 1; --n) acc += K[n] * -std::expm1(-b * static_cast<double>(n));
    return acc;
}

double homogeneous_free_energy(const RenewalLaw& law, double h) {
    if (!(h > 0.0)) return 0.0;
    const double target = -std::expm1(-h);
    auto f = [&](double b) { return tilted_mass_deficit(law, b) - target; };
    const double lo = 1e-15, hi = 50.0;
    const double flo = f(lo), fhi = f(hi);
    if (!(flo <= 0.0 && fhi >= 0.0))
        throw std::runtime_error("homogeneous_free_energy: root not bracketed in [1e-15, 50] for h = " + std::to_string(h));
    std::uintmax_t iters = 200;
    const auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, boost::math::tools::eps_tolerance<double>(52), iters);
    const double root = 0.5 * (a + b);
    if (std::abs(f(root)) > 1e-12) throw std::runtime_error("homogeneous_free_energy: residual above 1e-12");
    return root;
}

std::vector<double> homogeneous_excess_partition(const RenewalLaw& law, double h, std::size_t N) {
    const std::vector<std::int8_t> plus(N, 1);
    const PartitionTrace t = pinned_partition(law, plus, PinningParams{0.0, h}, PartitionOptions{false, true});

    // Z_n = Σ_{m≤n} Z^pin_m K̄(n-m) for every n at once, by FFT convolution.
    const std::size_t L = std::bit_ceil(2 * (N + 1));
    const std::size_t C = L / 2 + 1;
    double* x = fftw_alloc_real(L);
    double* y = fftw_alloc_real(L);
    fftw_complex* X = fftw_alloc_complex(C);
    fftw_complex* Y = fftw_alloc_complex(C);
    fftw_plan px, py, back;
    {
        std::lock_guard lock(detail::fftw_planner_mutex());
        px = fftw_plan_dft_r2c_1d(static_cast<int>(L), x, X, FFTW_ESTIMATE);
        py = fftw_plan_dft_r2c_1d(static_cast<int>(L), y, Y, FFTW_ESTIMATE);
        back = fftw_plan_dft_c2r_1d(static_cast<int>(L), X, x, FFTW_ESTIMATE);
    }
    for (std::size_t i = 0; i < L; ++i) {
        x[i] = i <= N ? std::exp(t.logZpin[i]) : 0.0;
        y[i] = i <= N ? law.Kbar(i) : 0.0;
    }
    fftw_execute(px);
    fftw_execute(py);
    for (std::size_t k = 0; k < C; ++k) {
        const double re = X[k][0] * Y[k][0] - X[k][1] * Y[k][1];
        const double im = X[k][0] * Y[k][1] + X[k][1] * Y[k][0];
        X[k][0] = re / static_cast<double>(L);
        X[k][1] = im / static_cast<double>(L);
    }
    fftw_execute(back);
    std::vector<double> excess(N + 1);
    for (std::size_t n = 0; n <= N; ++n) excess[n] = x[n] - 1.0;
    excess[0] = 0.0;
    {
        std::lock_guard lock(detail::fftw_planner_mutex());
        fftw_destroy_plan(px);
        fftw_destroy_plan(py);
        fftw_destroy_plan(back);
    }
    fftw_free(x);
    fftw_free(y);
    fftw_free(X);
    fftw_free(Y);
    return excess;
}

}  // namespace pinlab
