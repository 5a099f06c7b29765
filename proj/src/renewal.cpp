#include "pinlab/renewal.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <stdexcept>
#include <string>

namespace pinlab {

namespace {

constexpr std::size_t kEulerMaclaurinStart = 1000;

// Σ_{n≥m} n^{-s} by Euler–Maclaurin at a large enough m.
double em_tail(double s, double m) {
    const double ms = std::pow(m, -s);
    double t = m * ms / (s - 1.0) + 0.5 * ms;
    // Bernoulli corrections B_{2k}/(2k)! · s(s+1)...(s+2k-2) · m^{-s-2k+1}
    static constexpr double coef[] = {1.0 / 12.0, -1.0 / 720.0, 1.0 / 30240.0, -1.0 / 1209600.0};
    double rising = s;
    double mp = ms / m;
    for (int k = 0; k < 4; ++k) {
        t += coef[k] * rising * mp;
        rising *= (s + 2.0 * k + 1.0) * (s + 2.0 * k + 2.0);
        mp /= m * m;
    }
    return t;
}

}  // namespace

double power_zeta_tail(double s, std::size_t m) {
    if (!(s > 1.0)) throw std::invalid_argument("power_zeta_tail: need s > 1");
    if (m == 0) throw std::invalid_argument("power_zeta_tail: need m >= 1");
    const std::size_t start = std::max(m, kEulerMaclaurinStart);
    double head = 0.0;
    for (std::size_t n = start; n-- > m;) head += std::pow(static_cast<double>(n), -s);
    return head + em_tail(s, static_cast<double>(start));
}

double power_zeta(double s) {
    return power_zeta_tail(s, 1);
}

double RenewalLaw::nu_pur() const noexcept {
    return std::max(1.0, 1.0 / alpha_);
}

RenewalLaw build_renewal_law(double alpha, std::size_t n_max) {
    if (!(alpha > 0.0)) throw std::invalid_argument("build_renewal_law: alpha must be positive");
    if (alpha == 1.0) throw std::invalid_argument("build_renewal_law: alpha = 1 is not supported");
    if (n_max < 2) throw std::invalid_argument("build_renewal_law: n_max must be >= 2");

    const double s = 1.0 + alpha;
    RenewalLaw law;
    law.alpha_ = alpha;
    law.n_max_ = n_max;

    std::vector<double> powers(n_max + 1, 0.0);
    for (std::size_t n = 1; n <= n_max; ++n) powers[n] = std::pow(static_cast<double>(n), -s);
    const double tail = power_zeta_tail(s, n_max + 1);
    double head = 0.0;
    for (std::size_t n = n_max; n >= 1; --n) head += powers[n];
    law.c_k_ = 1.0 / (head + tail);

    law.k_.assign(n_max + 1, 0.0);
    for (std::size_t n = 1; n <= n_max; ++n) law.k_[n] = law.c_k_ * powers[n];

    // Backward accumulation from the analytic tail keeps K̄ accurate far out.
    law.kbar_.assign(n_max + 1, 0.0);
    law.kbar_[n_max] = law.c_k_ * tail;
    for (std::size_t n = n_max; n >= 1; --n) law.kbar_[n - 1] = law.kbar_[n] + law.k_[n];
    if (std::abs(law.kbar_[0] - 1.0) > 1e-12)
        throw std::logic_error("build_renewal_law: normalization drift " + std::to_string(law.kbar_[0] - 1.0));
    law.kbar_[0] = 1.0;

    law.k_rev_.resize(n_max);
    for (std::size_t j = 0; j < n_max; ++j) law.k_rev_[j] = law.k_[n_max - j];
    law.kbar_rev_.resize(n_max + 1);
    for (std::size_t j = 0; j <= n_max; ++j) law.kbar_rev_[j] = law.kbar_[n_max - j];

    law.mass_ = std::make_shared<RenewalLaw::MassCache>();
    return law;
}

double RenewalLaw::u(std::size_t n) const {
    if (n > n_max_) throw std::out_of_range("renewal mass: n exceeds n_max");
    MassCache& c = *mass_;
    if (n < c.filled.load(std::memory_order_acquire)) return c.values[n];

    std::lock_guard lock(c.mutex);
    std::size_t filled = c.filled.load(std::memory_order_relaxed);
    if (n < filled) return c.values[n];
    if (c.values.empty()) {
        c.values.assign(n_max_ + 1, 0.0);
        c.values[0] = 1.0;
        filled = 1;
        c.filled.store(1, std::memory_order_release);
    }
    const double* kr = k_rev_.data();
    for (std::size_t m = filled; m <= n; ++m) {
        // u(m) = Σ_{j<m} u(j) K(m-j)
        const double* base = kr + (n_max_ - m);
        double acc = 0.0;
#pragma omp simd reduction(+ : acc)
        for (std::size_t j = 0; j < m; ++j) acc += c.values[j] * base[j];
        c.values[m] = acc;
    }
    c.filled.store(n + 1, std::memory_order_release);
    return c.values[n];
}

double RenewalLaw::truncated_mean() const {
    double s = 0.0;
    for (std::size_t n = n_max_; n >= 1; --n) s += static_cast<double>(n) * k_[n];
    return s;
}

std::uint64_t RenewalLaw::checksum() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (std::size_t n = 1; n <= n_max_; ++n) {
        unsigned char bytes[sizeof(double)];
        std::memcpy(bytes, &k_[n], sizeof(double));
        for (unsigned char b : bytes) {
            h ^= b;
            h *= 0x100000001b3ULL;
        }
    }
    return h;
}

nlohmann::json RenewalLaw::summary() const {
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(checksum()));
    return {{"alpha", alpha_}, {"c_K", c_k_}, {"n_max", n_max_}, {"K_checksum", hex}};
}

double renewal_mass(const RenewalLaw& law, std::size_t n) {
    return law.u(n);
}

std::size_t sample_gap(const RenewalLaw& law, Engine& eng) {
    // P(gap > n) = K̄(n): the gap is the first n with K̄(n) < V, V uniform on (0,1).
    const double v = uniform01(eng);
    const auto kbar = law.Kbar_table();
    if (kbar[law.n_max()] >= v) return law.n_max() + 1;
    // kbar is decreasing; find the first index with kbar[n] < v.
    const auto it = std::partition_point(kbar.begin(), kbar.end(), [v](double x) { return x >= v; });
    return static_cast<std::size_t>(it - kbar.begin());
}

std::vector<std::size_t> sample_renewal(const RenewalLaw& law, std::size_t horizon, std::uint64_t seed) {
    if (horizon > law.n_max()) throw std::invalid_argument("sample_renewal: horizon exceeds n_max");
    Engine eng = make_engine(seed);
    std::vector<std::size_t> contacts{0};
    std::size_t pos = 0;
    for (;;) {
        const std::size_t gap = sample_gap(law, eng);
        if (gap > horizon - pos) break;
        pos += gap;
        contacts.push_back(pos);
    }
    return contacts;
}

}  // namespace pinlab
