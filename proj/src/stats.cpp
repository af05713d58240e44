#include "sinebeta/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "sinebeta/errors.hpp"

namespace sinebeta::stats {

double mean(std::span<const double> x) {
    if (x.empty()) throw InvalidArgument("mean of an empty sample");
    double s = 0.0;
    for (double v : x) s += v;
    return s / static_cast<double>(x.size());
}

double variance(std::span<const double> x) {
    if (x.size() < 2) throw InvalidArgument("variance needs at least two values");
    const double m = mean(x);
    double s = 0.0;
    for (double v : x) s += (v - m) * (v - m);
    return s / static_cast<double>(x.size() - 1);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double kolmogorov_survival(double t) {
    if (t <= 0.0) return 1.0;
    if (t < 0.2) return 1.0;
    double s = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * t * t);
        s += (k % 2 ? 2.0 : -2.0) * term;
        if (term < 1e-18) break;
    }
    return std::clamp(s, 0.0, 1.0);
}

KSResult ks_one_sample(std::vector<double> x, const std::function<double(double)>& cdf) {
    if (x.empty()) throw InvalidArgument("ks_one_sample: empty sample");
    std::sort(x.begin(), x.end());
    const double n = static_cast<double>(x.size());
    double d = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double f = cdf(x[i]);
        d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
    }
    const double sn = std::sqrt(n);
    return {d, kolmogorov_survival((sn + 0.12 + 0.11 / sn) * d)};
}

KSResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw InvalidArgument("ks_two_sample: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double v = std::min(a[i], b[j]);
        while (i < a.size() && a[i] == v) ++i;
        while (j < b.size() && b[j] == v) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    const double ne = std::sqrt(na * nb / (na + nb));
    return {d, kolmogorov_survival((ne + 0.12 + 0.11 / ne) * d)};
}

namespace {

std::vector<double> ranks(std::span<const double> x) {
    std::vector<std::size_t> idx(x.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
    std::vector<double> r(x.size());
    for (std::size_t i = 0; i < idx.size();) {
        std::size_t j = i;
        while (j + 1 < idx.size() && x[idx[j + 1]] == x[idx[i]]) ++j;
        const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
        i = j + 1;
    }
    return r;
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
    const double ma = mean(a), mb = mean(b);
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    if (saa == 0.0 || sbb == 0.0) return 0.0;
    return sab / std::sqrt(saa * sbb);
}

}  // namespace

SpearmanResult spearman(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 3) throw InvalidArgument("spearman: need matching samples of size >= 3");
    const auto rx = ranks(x), ry = ranks(y);
    SpearmanResult r;
    r.rho = pearson(rx, ry);
    const std::size_t n = x.size();
    if (n <= 9) {
        auto perm = ry;
        std::sort(perm.begin(), perm.end());
        std::size_t total = 0, le = 0;
        do {
            ++total;
            if (pearson(rx, perm) <= r.rho + 1e-12) ++le;
        } while (std::next_permutation(perm.begin(), perm.end()));
        r.p_negative = static_cast<double>(le) / static_cast<double>(total);
    } else {
        const double t = r.rho * std::sqrt((n - 2.0) / std::max(1e-300, 1.0 - r.rho * r.rho));
        r.p_negative = normal_cdf(t);  // large-n approximation
    }
    return r;
}

Interval bootstrap(std::span<const double> x, const Statistic& stat, int resamples, std::uint64_t seed) {
    if (x.empty() || resamples < 2) throw InvalidArgument("bootstrap: empty sample or too few resamples");
    std::mt19937_64 rng(seed);
    std::vector<double> buf(x.size()), reps;
    reps.reserve(static_cast<std::size_t>(resamples));
    const auto n = static_cast<unsigned __int128>(x.size());
    for (int b = 0; b < resamples; ++b) {
        for (double& v : buf) v = x[static_cast<std::size_t>((static_cast<unsigned __int128>(rng()) * n) >> 64)];
        reps.push_back(stat(buf));
    }
    Interval r;
    r.estimate = stat(x);
    r.se = std::sqrt(variance(reps));
    std::sort(reps.begin(), reps.end());
    auto q = [&](double p) {
        const double pos = p * static_cast<double>(reps.size() - 1);
        const std::size_t i = static_cast<std::size_t>(pos);
        const double f = pos - static_cast<double>(i);
        return i + 1 < reps.size() ? reps[i] * (1 - f) + reps[i + 1] * f : reps.back();
    };
    r.lo = q(0.025);
    r.hi = q(0.975);
    return r;
}

Interval jackknife(std::span<const double> x, const Statistic& stat) {
    const std::size_t n = x.size();
    if (n < 2) throw InvalidArgument("jackknife: need at least two values");
    std::vector<double> buf(n - 1), loo(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t k = 0;
        for (std::size_t j = 0; j < n; ++j)
            if (j != i) buf[k++] = x[j];
        loo[i] = stat(buf);
    }
    const double m = mean(loo);
    double s = 0.0;
    for (double v : loo) s += (v - m) * (v - m);
    Interval r;
    r.estimate = stat(x);
    r.se = std::sqrt(s * static_cast<double>(n - 1) / static_cast<double>(n));
    r.lo = r.estimate - 1.96 * r.se;
    r.hi = r.estimate + 1.96 * r.se;
    return r;
}

}  // namespace sinebeta::stats
