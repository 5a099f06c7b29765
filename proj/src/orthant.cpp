#include "pinlab/orthant.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <boost/math/special_functions/erf.hpp>

namespace pinlab {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kSqrt2 = 1.41421356237309504880;

double normal_cdf(double x) { return 0.5 * std::erfc(-x * kInvSqrt2); }

double log_normal_cdf(double x) {
    if (x > -30.0) return std::log(normal_cdf(x));
    // Mills-ratio asymptotics; relative error below 1e-9 here.
    const double x2 = x * x;
    const double series = 1.0 - 1.0 / x2 + 3.0 / (x2 * x2) - 15.0 / (x2 * x2 * x2);
    return -0.5 * x2 - std::log(-x) - 0.5 * std::log(2.0 * std::numbers::pi) + std::log(series);
}

double normal_quantile(double p) { return -kSqrt2 * boost::math::erfc_inv(2.0 * p); }

// Draw from N(0,1) restricted to [lower, ∞).
double truncated_normal_above(double lower, Engine& eng) {
    if (lower < 30.0) {
        // Inversion: -z is N(0,1) restricted to (-∞, -lower].
        const double mass = normal_cdf(-lower);
        const double u = uniform01(eng) * mass;
        return -normal_quantile(u);
    }
    // Far tail: exponential proposal (Robert 1995).
    const double rate = 0.5 * (lower + std::sqrt(lower * lower + 4.0));
    for (;;) {
        const double z = lower - std::log(uniform01(eng)) / rate;
        if (std::log(uniform01(eng)) <= -0.5 * (z - rate) * (z - rate)) return z;
    }
}

Eigen::MatrixXd cholesky_factor(Eigen::MatrixXd cov) {
    const Eigen::Index n = cov.rows();
    auto try_llt = [&](const Eigen::MatrixXd& m) -> std::optional<Eigen::MatrixXd> {
        Eigen::LLT<Eigen::MatrixXd> llt(m);
        if (llt.info() != Eigen::Success) return std::nullopt;
        Eigen::MatrixXd L = llt.matrixL();
        for (Eigen::Index j = 0; j < n; ++j)
            if (!(L(j, j) * L(j, j) > 1e-10)) return std::nullopt;
        return L;
    };
    if (auto L = try_llt(cov)) return *L;
    const double min_eig = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(cov, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
    std::ostringstream msg;
    msg << "orthant: covariance is not positive definite (minimal eigenvalue " << min_eig << ")";
    if (std::abs(min_eig) > 1e-10) throw std::invalid_argument(msg.str());
    cov.diagonal().array() += 1e-12;
    Eigen::LLT<Eigen::MatrixXd> llt(cov);
    if (llt.info() != Eigen::Success) throw std::invalid_argument(msg.str());
    Eigen::MatrixXd L = llt.matrixL();
    for (Eigen::Index j = 0; j < n; ++j)
        if (!(L(j, j) > 0.0)) throw std::invalid_argument("orthant: degenerate conditional variance");
    return L;
}

struct BatchResult {
    double log_p;
    double min_ess;
};

BatchResult sequential_batch(const Eigen::MatrixXd& L, std::size_t S, double resample_fraction, Engine& eng) {
    const std::size_t n = static_cast<std::size_t>(L.rows());
    std::vector<double> z(n * S), mu(S), lw(S, 0.0), w(S);
    std::vector<std::size_t> pick(S);
    std::vector<double> scratch(S);
    double log_p = 0.0;
    double min_ess = static_cast<double>(S);

    auto log_mean = [&](const std::vector<double>& v) {
        const double m = *std::max_element(v.begin(), v.end());
        double s = 0.0;
        for (double x : v) s += std::exp(x - m);
        return m + std::log(s / static_cast<double>(S));
    };

    for (std::size_t j = 0; j < n; ++j) {
        std::fill(mu.begin(), mu.end(), 0.0);
        for (std::size_t k = 0; k < j; ++k) {
            const double l = L(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k));
            if (l == 0.0) continue;
            const double* zk = z.data() + k * S;
            double* m = mu.data();
#pragma omp simd
            for (std::size_t s = 0; s < S; ++s) m[s] += l * zk[s];
        }
        const double ljj = L(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j));
        double* zj = z.data() + j * S;
        for (std::size_t s = 0; s < S; ++s) {
            const double c = mu[s] / ljj;
            lw[s] += log_normal_cdf(c);
            zj[s] = truncated_normal_above(-c, eng);
        }

        const double m = *std::max_element(lw.begin(), lw.end());
        double s1 = 0.0, s2 = 0.0;
        for (std::size_t s = 0; s < S; ++s) {
            w[s] = std::exp(lw[s] - m);
            s1 += w[s];
            s2 += w[s] * w[s];
        }
        const double ess = s1 * s1 / s2;
        min_ess = std::min(min_ess, ess);
        if (resample_fraction > 0.0 && j + 1 < n && ess < resample_fraction * static_cast<double>(S)) {
            log_p += log_mean(lw);
            // Systematic resampling.
            const double step = s1 / static_cast<double>(S);
            double u = uniform01(eng) * step;
            double cum = w[0];
            std::size_t src = 0;
            for (std::size_t s = 0; s < S; ++s) {
                while (cum < u && src + 1 < S) cum += w[++src];
                pick[s] = src;
                u += step;
            }
            for (std::size_t k = 0; k <= j; ++k) {
                double* row = z.data() + k * S;
                for (std::size_t s = 0; s < S; ++s) scratch[s] = row[pick[s]];
                std::copy(scratch.begin(), scratch.end(), row);
            }
            std::fill(lw.begin(), lw.end(), 0.0);
        }
    }
    log_p += log_mean(lw);
    return {log_p, min_ess};
}

OrthantEstimate plain_mc(const Eigen::MatrixXd& L, std::size_t S, std::uint64_t seed) {
    const std::size_t n = static_cast<std::size_t>(L.rows());
    Engine eng = make_engine(seed);
    std::normal_distribution<double> normal;
    std::vector<double> z(n);
    std::size_t hits = 0;
    for (std::size_t s = 0; s < S; ++s) {
        bool inside = true;
        for (std::size_t j = 0; j < n && inside; ++j) {
            z[j] = normal(eng);
            double w = 0.0;
            for (std::size_t k = 0; k <= j; ++k) w += L(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) * z[k];
            inside = w >= 0.0;
        }
        hits += inside ? 1 : 0;
    }
    OrthantEstimate e;
    e.n = n;
    e.samples = S;
    e.method = OrthantMethod::plain_mc;
    e.ess = static_cast<double>(hits);
    if (hits == 0) {
        e.log_p = -std::numeric_limits<double>::infinity();
        e.std_err = std::numeric_limits<double>::infinity();
        return e;
    }
    const double p = static_cast<double>(hits) / static_cast<double>(S);
    e.log_p = std::log(p);
    e.std_err = std::sqrt((1.0 - p) / static_cast<double>(hits));
    return e;
}

OrthantEstimate sequential(const Eigen::MatrixXd& L, std::size_t samples, std::uint64_t seed, const OrthantOptions& opts) {
    const std::size_t batches = std::max<std::size_t>(2, opts.batches);
    const std::size_t per_batch = std::max<std::size_t>(1, samples / batches);
    std::vector<double> logs(batches);
    double ess = 0.0;
    for (std::size_t b = 0; b < batches; ++b) {
        Engine eng = make_engine(derive_seed(seed, stream_tag("orthant-batch"), b));
        const BatchResult r = sequential_batch(L, per_batch, opts.resample_fraction, eng);
        logs[b] = r.log_p;
        ess += r.min_ess;
    }
    const LogMean lm = log_mean_exp(logs);
    OrthantEstimate e;
    e.n = static_cast<std::size_t>(L.rows());
    e.log_p = std::min(0.0, lm.log_mean);
    e.std_err = lm.std_err;
    e.ess = ess;
    e.samples = per_batch * batches;
    e.method = OrthantMethod::sequential_conditioning;
    return e;
}

Eigen::MatrixXd toeplitz(const GaussianSignsParams& params, std::span<const std::size_t> idx) {
    const auto n = static_cast<Eigen::Index>(idx.size());
    Eigen::MatrixXd cov(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            const std::size_t a = idx[static_cast<std::size_t>(i)], b = idx[static_cast<std::size_t>(j)];
            cov(i, j) = params.rho(a > b ? a - b : b - a);
        }
    return cov;
}

}  // namespace

std::string to_string(OrthantMethod m) {
    switch (m) {
        case OrthantMethod::automatic: return "automatic";
        case OrthantMethod::plain_mc: return "plain-MC";
        case OrthantMethod::sequential_conditioning: return "sequential-conditioning";
    }
    return "unknown";
}

double bivariate_orthant(double rho) {
    return 0.25 + std::asin(rho) / (2.0 * std::numbers::pi);
}

OrthantEstimate orthant_probability_cov(const Eigen::MatrixXd& cov, std::size_t samples, std::uint64_t seed,
                                        const OrthantOptions& opts) {
    if (cov.rows() < 1 || cov.rows() != cov.cols()) throw std::invalid_argument("orthant: square covariance with n >= 1 expected");
    if (cov.rows() > 4096) throw std::invalid_argument("orthant: dimension above 4096");
    if (samples < 2) throw std::invalid_argument("orthant: need at least 2 samples");
    const Eigen::MatrixXd L = cholesky_factor(cov);
    switch (opts.method) {
        case OrthantMethod::plain_mc: return plain_mc(L, samples, seed);
        case OrthantMethod::sequential_conditioning: return sequential(L, samples, seed, opts);
        case OrthantMethod::automatic: break;
    }
    OrthantOptions pilot_opts = opts;
    const std::size_t pilot_n = std::min(samples, opts.pilot_samples);
    const OrthantEstimate pilot = sequential(L, pilot_n, derive_seed(seed, stream_tag("orthant-pilot"), 0), pilot_opts);
    if (std::exp(pilot.log_p) >= opts.plain_mc_threshold) return plain_mc(L, samples, seed);
    return sequential(L, samples, seed, opts);
}

OrthantEstimate orthant_probability(const GaussianSignsParams& params, std::size_t n, std::size_t samples,
                                    std::uint64_t seed, const OrthantOptions& opts) {
    if (n == 0) throw std::invalid_argument("orthant: n must be >= 1");
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i + 1;
    return orthant_probability_cov(toeplitz(params, idx), samples, seed, opts);
}

OrthantEstimate subsequence_orthant(const GaussianSignsParams& params, std::span<const std::size_t> indices,
                                    std::size_t samples, std::uint64_t seed, const OrthantOptions& opts) {
    if (indices.empty()) throw std::invalid_argument("orthant: empty index set");
    if (indices.size() > 4096) throw std::invalid_argument("orthant: more than 4096 indices");
    for (std::size_t i = 1; i < indices.size(); ++i)
        if (indices[i] <= indices[i - 1]) throw std::invalid_argument("orthant: indices must be strictly increasing");
    return orthant_probability_cov(toeplitz(params, indices), samples, seed, opts);
}

OrthantEstimate palm_run_tail(const GaussianSignsParams& params, std::size_t n, std::size_t samples,
                              std::uint64_t seed, const OrthantOptions& opts) {
    if (n == 0) throw std::invalid_argument("palm_run_tail: n must be >= 1");
    std::vector<std::size_t> idx(n + 1);
    for (std::size_t i = 0; i <= n; ++i) idx[i] = i;
    Eigen::MatrixXd cov = toeplitz(params, idx);
    // Coordinate 0 is W_{-1}, asked to be negative: flip its sign.
    cov.row(0) *= -1.0;
    cov.col(0) *= -1.0;
    OrthantEstimate e = orthant_probability_cov(cov, samples, seed, opts);
    e.n = n;
    e.log_p = std::min(0.0, e.log_p - std::log(0.5 - bivariate_orthant(params.rho(1))));
    return e;
}

ExponentFit exponent_fit(const GaussianSignsParams& params, std::span<const std::size_t> n_values, std::size_t samples,
                         std::uint64_t seed, const OrthantOptions& opts) {
    if (n_values.size() < 2) throw std::invalid_argument("exponent_fit: need at least two sizes");
    const auto [lo, hi] = std::minmax_element(n_values.begin(), n_values.end());
    if (*hi < 10 * *lo) throw std::invalid_argument("exponent_fit: sizes must span at least one decade");

    ExponentFit f;
    f.a = params.a;
    f.mode = params.a < 1.0 ? "stretched" : "linear";
    std::vector<double> x, y;
    for (std::size_t i = 0; i < n_values.size(); ++i) {
        const std::size_t n = n_values[i];
        OrthantEstimate e = orthant_probability(params, n, samples, derive_seed(seed, stream_tag("exponent-fit"), n), opts);
        f.points.push_back(e);
        if (e.collapsed() || !std::isfinite(e.log_p) || e.log_p >= 0.0) {
            f.dropped.push_back(n);
            continue;
        }
        const double nd = static_cast<double>(n);
        if (f.mode == "stretched") {
            x.push_back(std::log(nd));
            y.push_back(std::log(-e.log_p));
        } else {
            x.push_back(nd);
            y.push_back(-e.log_p);
        }
    }
    if (x.size() < 2) throw std::runtime_error("exponent_fit: fewer than two usable sizes");
    f.fit = linear_fit(x, y);
    const double t = x.size() > 2 ? student_t_quantile(static_cast<double>(x.size() - 2)) : 0.0;
    f.slope_lo = f.fit.slope - t * f.fit.slope_stderr;
    f.slope_hi = f.fit.slope + t * f.fit.slope_stderr;
    if (f.mode == "stretched") {
        double corr = 0.0;
        for (std::size_t n : n_values)
            if (n >= 3) corr = std::max(corr, std::log(std::log(static_cast<double>(n))) / std::log(static_cast<double>(n)));
        f.window_lo = params.a;
        f.window_hi = params.a + corr;
    }
    return f;
}

nlohmann::json to_json(const OrthantEstimate& e) {
    return {{"n", e.n}, {"log_p", e.log_p}, {"stderr", e.std_err}, {"ess", e.ess}, {"samples", e.samples},
            {"method", to_string(e.method)}};
}

nlohmann::json to_json(const ExponentFit& f) {
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& p : f.points) pts.push_back(to_json(p));
    nlohmann::json j{{"a", f.a},           {"mode", f.mode},         {"points", pts},
                     {"dropped", f.dropped}, {"slope", f.fit.slope}, {"intercept", f.fit.intercept},
                     {"r2", f.fit.r2},       {"slope_ci", {f.slope_lo, f.slope_hi}}};
    if (f.mode == "stretched") j["window"] = {f.window_lo, f.window_hi};
    return j;
}

}  // namespace pinlab
