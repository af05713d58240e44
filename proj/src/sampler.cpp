#include "sinebeta/sampler.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <numbers>

#include "sinebeta/errors.hpp"
#include "sinebeta/quadrature.hpp"

namespace sinebeta {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Sturm counts at many shifts in one sweep over the matrix; the inner loop has no
// dependencies between shifts.
void sturm_counts(const std::vector<double>& d, const std::vector<double>& b2, double pivmin,
                  const std::vector<double>& x, std::vector<double>& q, std::vector<double>& cnt) {
    const std::size_t m = x.size();
    q.assign(m, 1.0);
    cnt.assign(m, 0.0);
    double* qp = q.data();
    double* cp = cnt.data();
    const double* xp = x.data();
    for (std::size_t i = 0; i < d.size(); ++i) {
        const double ai = d[i];
        const double bi = i == 0 ? 0.0 : b2[i - 1];
        for (std::size_t j = 0; j < m; ++j) {
            double v = ai - xp[j] - bi / qp[j];
            v = std::abs(v) < pivmin ? -pivmin : v;
            cp[j] += v < 0.0 ? 1.0 : 0.0;
            qp[j] = v;
        }
    }
}

}  // namespace

std::mt19937_64 replica_rng(std::uint64_t seed, std::uint64_t replica) {
    std::uint64_t s = seed ^ (0xD1B54A32D192ED03ULL * (replica + 1));
    splitmix64(s);
    std::seed_seq seq{static_cast<std::uint32_t>(splitmix64(s)), static_cast<std::uint32_t>(splitmix64(s) >> 32),
                      static_cast<std::uint32_t>(splitmix64(s)), static_cast<std::uint32_t>(splitmix64(s) >> 32)};
    return std::mt19937_64(seq);
}

TridiagonalModel TridiagonalModel::sample(std::size_t n, double beta, std::mt19937_64& rng) {
    if (n < 1) throw InvalidArgument("tridiagonal model: n must be at least 1");
    if (!(beta > 0.0)) throw InvalidArgument("tridiagonal model: beta must be positive");
    TridiagonalModel m;
    m.n = n;
    m.beta = beta;
    std::normal_distribution<double> normal(0.0, 1.0 / std::sqrt(beta));
    m.diag.resize(n);
    for (double& a : m.diag) a = normal(rng);
    m.offdiag.resize(n - 1);
    for (std::size_t k = 1; k < n; ++k) {
        // chi_r / sqrt(2 beta) = sqrt(Gamma(r / 2, 1) / beta), r = beta (n - k)
        std::gamma_distribution<double> gamma(0.5 * beta * static_cast<double>(n - k), 1.0);
        double g = gamma(rng);
        while (!(g > 0.0)) g = gamma(rng);
        m.offdiag[k - 1] = std::sqrt(g / beta);
    }
    return m;
}

double TridiagonalModel::radius() const {
    double r = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double s = std::abs(diag[i]);
        if (i > 0) s += offdiag[i - 1];
        if (i + 1 < n) s += offdiag[i];
        r = std::max(r, s);
    }
    return r;
}

std::size_t TridiagonalModel::sturm_count(double x) const {
    std::vector<double> b2(offdiag.size());
    double bmax = 1.0;
    for (std::size_t i = 0; i < offdiag.size(); ++i) {
        b2[i] = offdiag[i] * offdiag[i];
        bmax = std::max(bmax, b2[i]);
    }
    std::vector<double> q, cnt;
    sturm_counts(diag, b2, DBL_MIN * bmax, {x}, q, cnt);
    return static_cast<std::size_t>(cnt[0]);
}

std::vector<double> TridiagonalModel::eigenvalues_in(double lo, double hi, double tol) const {
    if (!(lo < hi)) return {};
    std::vector<double> b2(offdiag.size());
    double bmax = 1.0;
    for (std::size_t i = 0; i < offdiag.size(); ++i) {
        b2[i] = offdiag[i] * offdiag[i];
        bmax = std::max(bmax, b2[i]);
    }
    const double pivmin = DBL_MIN * bmax;
    std::vector<double> q, cnt;
    sturm_counts(diag, b2, pivmin, {lo, hi}, q, cnt);
    const std::size_t first = static_cast<std::size_t>(cnt[0]);
    const std::size_t last = static_cast<std::size_t>(cnt[1]);
    const std::size_t m = last - first;
    // eigenvalue first + k lies in [a[k], b[k])
    std::vector<double> a(m, lo), b(m, hi);
    std::vector<std::size_t> active(m);
    for (std::size_t k = 0; k < m; ++k) active[k] = k;
    std::vector<double> mids;
    std::vector<std::size_t> slot;
    while (!active.empty()) {
        // brackets shared by several indices give one shift
        mids.clear();
        slot.resize(active.size());
        for (std::size_t j = 0; j < active.size(); ++j) {
            const double mid = 0.5 * (a[active[j]] + b[active[j]]);
            if (mids.empty() || mids.back() != mid) mids.push_back(mid);
            slot[j] = mids.size() - 1;
        }
        sturm_counts(diag, b2, pivmin, mids, q, cnt);
        std::size_t keep = 0;
        for (std::size_t j = 0; j < active.size(); ++j) {
            const std::size_t k = active[j];
            const double mj = mids[slot[j]];
            const std::size_t c = static_cast<std::size_t>(cnt[slot[j]]);
            if (c > first + k) {
                // eigenvalues first + k .. c - 1 are all below the midpoint
                for (std::size_t kk = k; kk < m && first + kk < c; ++kk) b[kk] = std::min(b[kk], mj);
            } else {
                for (std::size_t kk = c > first ? c - first : 0; kk <= k; ++kk) a[kk] = std::max(a[kk], mj);
            }
            const double mid = 0.5 * (a[k] + b[k]);
            if (b[k] - a[k] > tol && mid > a[k] && mid < b[k]) active[keep++] = k;
        }
        active.resize(keep);
    }
    std::vector<double> out(m);
    for (std::size_t k = 0; k < m; ++k) out[k] = 0.5 * (a[k] + b[k]);
    return out;
}

std::vector<double> TridiagonalModel::eigenvalues() const {
    const double r = radius() * (1.0 + 1e-12) + DBL_MIN;
    auto e = eigenvalues_in(-r, std::nextafter(r, INFINITY), 1e-10 * std::max(r, 1e-300));
    return e;
}

double semicircle_density_at_zero(std::size_t n) {
    return std::sqrt(2.0 * static_cast<double>(n)) / std::numbers::pi;
}

double rescaled_support_half_width(std::size_t n) { return 2.0 * static_cast<double>(n) / std::numbers::pi; }

std::vector<double> sample_tridiagonal_eigs(std::size_t n, double beta, std::uint64_t seed) {
    auto rng = replica_rng(seed, 0);
    return TridiagonalModel::sample(n, beta, rng).eigenvalues();
}

BulkSample rescale_bulk(const std::vector<double>& eigs, double window_fraction, double density,
                        double support_half_width) {
    if (!(window_fraction > 0.0 && window_fraction < 1.0))
        throw InvalidArgument("rescale_bulk: window_fraction must lie in (0, 1)");
    if (!(density > 0.0)) throw InvalidArgument("rescale_bulk: density must be positive");
    const double h = window_fraction * support_half_width;
    std::vector<double> pts;
    double lo = INFINITY, hi = -INFINITY;
    for (double e : eigs) {
        const double x = e * density;
        lo = std::min(lo, x);
        hi = std::max(hi, x);
        if (std::abs(x) <= h) pts.push_back(x);
    }
    if (eigs.empty() || lo > -h || hi < h)
        throw InsufficientBulk("rescale_bulk: input does not cover the window [-" + quad::fmt_g(h) + ", " +
                               quad::fmt_g(h) + "]");
    BulkSample s;
    s.config = PointConfiguration(std::move(pts), -h, h);
    s.window_fraction = window_fraction;
    s.density = density;
    s.n_source = eigs.size();
    return s;
}

BulkCalibration calibrate_bulk_density(std::size_t n, double beta, std::uint64_t seed, std::size_t replicas,
                                       double target_count) {
    if (replicas < 2) throw InvalidArgument("calibrate_bulk_density: need at least 2 replicas");
    BulkCalibration c;
    c.semicircle = semicircle_density_at_zero(n);
    const double R = std::sqrt(2.0 * static_cast<double>(n));
    c.interval = std::min(0.5 * target_count / c.semicircle, 0.5 * R);
    const double a = c.interval;
    // semicircle mass of [-a, a] relative to 2a times its value at 0
    const double mass = (a * std::sqrt(R * R - a * a) + R * R * std::asin(a / R)) / std::numbers::pi;
    const double shape = 2 * a * c.semicircle / mass;
    double sum = 0.0, sum2 = 0.0;
    for (std::size_t r = 0; r < replicas; ++r) {
        auto rng = replica_rng(seed ^ 0xC0FFEE1234567ULL, r);
        const auto m = TridiagonalModel::sample(n, beta, rng);
        const double k = static_cast<double>(m.sturm_count(a)) - static_cast<double>(m.sturm_count(-a));
        sum += k;
        sum2 += k * k;
    }
    const double N = static_cast<double>(replicas);
    const double mean = sum / N;
    const double var = std::max(0.0, (sum2 - N * mean * mean) / (N - 1));
    c.density = mean / (2 * a) * shape;
    c.density_error = std::sqrt(var / N) / (2 * a) * shape;
    c.replicas = replicas;
    return c;
}

BulkSample sample_bulk(std::size_t n, double beta, std::uint64_t seed, std::uint64_t replica,
                       double window_fraction, double density) {
    if (!(window_fraction > 0.0 && window_fraction < 1.0))
        throw InvalidArgument("sample_bulk: window_fraction must lie in (0, 1)");
    auto rng = replica_rng(seed, replica);
    const auto m = TridiagonalModel::sample(n, beta, rng);
    const double h = window_fraction * rescaled_support_half_width(n);
    const double a = h / density;
    if (a >= m.radius()) throw InsufficientBulk("sample_bulk: window exceeds the spectrum");
    const double tol = 1e-10 * std::sqrt(2.0 * static_cast<double>(n));
    auto e = m.eigenvalues_in(-a, std::nextafter(a, INFINITY), tol);
    std::vector<double> pts;
    pts.reserve(e.size());
    for (double x : e)
        if (std::abs(x * density) <= h) pts.push_back(x * density);
    BulkSample s;
    s.config = PointConfiguration(std::move(pts), -h, h);
    s.n_source = n;
    s.beta = beta;
    s.seed = seed;
    s.replica = replica;
    s.window_fraction = window_fraction;
    s.density = density;
    return s;
}

}  // namespace sinebeta
