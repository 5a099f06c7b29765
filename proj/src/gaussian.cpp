#include <bit>
#include <cmath>
#include <complex>
#include <cstring>
#include <map>
#include <mutex>
#include <sstream>

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <fftw3.h>

#include "fft_lock.hpp"
#include "pinlab/environment.hpp"

namespace pinlab {

namespace detail {

std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

}  // namespace detail

namespace {

struct FftwBuffer {
    fftw_complex* data;
    explicit FftwBuffer(std::size_t n) : data(fftw_alloc_complex(n)) {
        if (!data) throw std::bad_alloc();
    }
    ~FftwBuffer() { fftw_free(data); }
    FftwBuffer(const FftwBuffer&) = delete;
    FftwBuffer& operator=(const FftwBuffer&) = delete;
};

}  // namespace

CirculantSampler::CirculantSampler(std::span<const double> rho, std::size_t length) : length_(length) {
    if (length == 0) throw std::invalid_argument("circulant sampler: empty length");
    if (rho.size() < length) throw std::invalid_argument("circulant sampler: need rho[0..length)");
    m_ = std::bit_ceil(2 * length);

    FftwBuffer in(m_), out(m_);
    {
        std::lock_guard lock(detail::fftw_planner_mutex());
        plan_ = fftw_plan_dft_1d(static_cast<int>(m_), in.data, out.data, FFTW_FORWARD, FFTW_ESTIMATE);
    }
    if (!plan_) throw std::runtime_error("circulant sampler: FFT plan creation failed");

    // First row of the circulant: c_j = rho(min(j, m - j)); lags beyond the
    // requested length are never observed, so any symmetric extension works.
    for (std::size_t j = 0; j < m_; ++j) {
        const std::size_t lag = std::min(j, m_ - j);
        in.data[j][0] = lag < rho.size() ? rho[lag] : 0.0;
        in.data[j][1] = 0.0;
    }
    fftw_execute_dft(static_cast<fftw_plan>(plan_), in.data, out.data);

    min_eig_ = out.data[0][0];
    max_eig_ = out.data[0][0];
    for (std::size_t k = 0; k < m_; ++k) {
        min_eig_ = std::min(min_eig_, out.data[k][0]);
        max_eig_ = std::max(max_eig_, out.data[k][0]);
    }
    if (min_eig_ < 0.0 && -min_eig_ >= 1e-8 * max_eig_) {
        std::ostringstream msg;
        msg << "circulant embedding of size " << m_ << " has eigenvalue " << min_eig_ << " (max " << max_eig_ << ")";
        {
            std::lock_guard lock(detail::fftw_planner_mutex());
            fftw_destroy_plan(static_cast<fftw_plan>(plan_));
        }
        throw EmbeddingError(msg.str(), -min_eig_);
    }
    scale_.resize(m_);
    for (std::size_t k = 0; k < m_; ++k) scale_[k] = std::sqrt(std::max(out.data[k][0], 0.0) / static_cast<double>(m_));
}

CirculantSampler::~CirculantSampler() {
    if (plan_) {
        std::lock_guard lock(detail::fftw_planner_mutex());
        fftw_destroy_plan(static_cast<fftw_plan>(plan_));
    }
}

void CirculantSampler::sample(Engine& eng, std::span<double> first, std::span<double> second) const {
    if (first.size() > length_ || second.size() > length_) throw std::invalid_argument("circulant sampler: request too long");
    FftwBuffer in(m_), out(m_);
    std::normal_distribution<double> normal;
    for (std::size_t k = 0; k < m_; ++k) {
        in.data[k][0] = scale_[k] * normal(eng);
        in.data[k][1] = scale_[k] * normal(eng);
    }
    fftw_execute_dft(static_cast<fftw_plan>(plan_), in.data, out.data);
    for (std::size_t i = 0; i < first.size(); ++i) first[i] = out.data[i][0];
    for (std::size_t i = 0; i < second.size(); ++i) second[i] = out.data[i][1];
}

std::shared_ptr<const CirculantSampler> gaussian_sampler(const GaussianSignsParams& params, std::size_t length) {
    static std::mutex cache_mutex;
    static std::map<std::pair<std::uint64_t, std::size_t>, std::shared_ptr<const CirculantSampler>> cache;
    std::uint64_t a_bits;
    std::memcpy(&a_bits, &params.a, sizeof a_bits);
    const auto key = std::make_pair(a_bits, length);
    {
        std::lock_guard lock(cache_mutex);
        if (auto it = cache.find(key); it != cache.end()) return it->second;
    }
    std::vector<double> rho(length);
    for (std::size_t k = 0; k < length; ++k) rho[k] = params.rho(k);
    auto sampler = std::make_shared<const CirculantSampler>(rho, length);
    std::lock_guard lock(cache_mutex);
    // Very long one-off requests are not worth keeping around.
    if (sampler->embedding_size() <= (std::size_t{1} << 18)) cache.emplace(key, sampler);
    return sampler;
}

std::vector<double> sample_stationary_gaussian(std::span<const double> rho, std::size_t length, std::uint64_t seed) {
    std::vector<double> w(length);
    Engine eng = make_engine(seed);
    try {
        CirculantSampler sampler(rho, length);
        sampler.sample(eng, w);
        return w;
    } catch (const EmbeddingError&) {
        if (length > 4096) throw;
    }
    Eigen::MatrixXd cov(length, length);
    for (std::size_t i = 0; i < length; ++i)
        for (std::size_t j = 0; j < length; ++j) cov(i, j) = rho[i > j ? i - j : j - i];
    Eigen::LLT<Eigen::MatrixXd> llt(cov);
    if (llt.info() != Eigen::Success) throw EmbeddingError("dense fallback: covariance is not positive definite", 0.0);
    std::normal_distribution<double> normal;
    Eigen::VectorXd z(length);
    for (std::size_t i = 0; i < length; ++i) z[i] = normal(eng);
    const Eigen::VectorXd x = llt.matrixL() * z;
    for (std::size_t i = 0; i < length; ++i) w[i] = x[i];
    return w;
}

}  // namespace pinlab
