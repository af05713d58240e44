#include "sinebeta/transport.hpp"

#include <algorithm>
#include <cmath>

#include "sinebeta/energy.hpp"
#include "sinebeta/errors.hpp"
#include "sinebeta/quadrature.hpp"

namespace sinebeta {

namespace {

const quad::Tolerance kMassTol{1e-17, 1e-14};
const quad::Tolerance kEnergyTol{1e-13, 1e-12};
// psi = Phi(x) - x carries absolute noise of a few ulp of x
const quad::Tolerance kPsiTol{1e-12, 1e-10};

}  // namespace

double s_max(const PerturbationBundle& b) {
    return 0.5 / std::max({1.0, b.sup_norm_m_tilde(), b.l1_norm_m_tilde()});
}

TransportBundle::TransportBundle(std::shared_ptr<const PerturbationBundle> bundle, double s)
    : bundle_(std::move(bundle)), s_(s) {
    if (!bundle_) throw InvalidArgument("TransportBundle: null perturbation bundle");
    if (!std::isfinite(s)) throw NonFinite("TransportBundle: s is not finite");
    s_max_ = sinebeta::s_max(*bundle_);
    if (std::abs(s) > s_max_ * (1.0 + 1e-12))
        throw InvalidArgument("TransportBundle: |s| = " + quad::fmt_g(std::abs(s)) +
                              " exceeds s_max = " + quad::fmt_g(s_max_));
    const double L = lambda(), l = ell();
    strip_lo_ = -L + l / 4;
    strip_hi_ = L - l / 4;
    for (double b : bundle_->breaks())
        if (b >= strip_lo_ && b <= strip_hi_) breaks_.push_back(b);
    if (breaks_.empty() || breaks_.front() != strip_lo_) breaks_.insert(breaks_.begin(), strip_lo_);
    if (breaks_.back() != strip_hi_) breaks_.push_back(strip_hi_);
    cum_.assign(breaks_.size(), 0.0);
    for (std::size_t i = 1; i < breaks_.size(); ++i)
        cum_[i] = cum_[i - 1] + quad::adaptive([this](double t) { return bundle_->m_tilde(t); },
                                               breaks_[i - 1], breaks_[i], kMassTol);
}

double TransportBundle::mu(double x) const { return 1.0 + s_ * bundle_->m_tilde(x); }

double TransportBundle::mass(double z) const {
    if (z <= strip_lo_) return 0.0;
    if (z >= strip_hi_) return cum_.back();
    const auto it = std::upper_bound(breaks_.begin(), breaks_.end(), z);
    const std::size_t i = static_cast<std::size_t>(it - breaks_.begin()) - 1;
    if (z == breaks_[i]) return cum_[i];
    return cum_[i] + quad::adaptive([this](double t) { return bundle_->m_tilde(t); }, breaks_[i], z,
                                    kMassTol);
}

double TransportBundle::cumulative(double z) const {
    z = std::clamp(z, -lambda(), lambda());
    return z + lambda() + s_ * mass(z);
}

double TransportBundle::map(double x) const {
    if (x < -lambda() || x > lambda())
        throw OutOfWindow("transport_map: x = " + quad::fmt_g(x) + " outside [-lambda, lambda]");
    if (s_ == 0.0 || x <= strip_lo_ || x >= strip_hi_) return x;
    // root of g(z) = z - x + s M(z); |s M| <= 1/2 so the root lies in [x - 1, x + 1]
    auto g = [&](double z) { return z - x + s_ * mass(z); };
    double lo = std::max(-lambda(), x - 1.0), hi = std::min(lambda(), x + 1.0);
    double glo = g(lo), ghi = g(hi);
    if (glo > 0.0 || ghi < 0.0)
        throw RootNotBracketed("transport_map: no sign change around x = " + quad::fmt_g(x));
    double z = std::clamp(x - s_ * mass(x), lo, hi);
    const double ztol = 4 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x));
    for (int it = 0; it < 200; ++it) {
        const double gz = g(z);
        if (gz == 0.0) return z;
        if (gz < 0.0)
            lo = z;
        else
            hi = z;
        const double d = 1.0 + s_ * bundle_->m_tilde(z);
        double zn = z - gz / d;
        if (!(zn > lo && zn < hi)) zn = 0.5 * (lo + hi);
        if (std::abs(zn - z) <= ztol || hi - lo <= ztol) return zn;
        z = zn;
    }
    return z;
}

double TransportBundle::psi(double x) const { return map(x) - x; }

double TransportBundle::psi_prime(double x) const { return 1.0 / mu(map(x)) - 1.0; }

double TransportBundle::delta(double x, double y, double px, double py) const {
    if (std::abs(x - y) < 1e-6 * ell()) return psi_prime(0.5 * (x + y));
    return (py - px) / (y - x);
}

double TransportBundle::delta(double x, double y) const {
    if (std::abs(x - y) < 1e-6 * ell()) return psi_prime(0.5 * (x + y));
    return delta(x, y, psi(x), psi(y));
}

double TransportBundle::kernel_F(double x, double y) const { return -std::log1p(delta(x, y)); }

double TransportBundle::kernel_H(double x, double y) const {
    if (std::abs(x) <= lambda()) throw InvalidArgument("kernel_H: x must lie outside Lambda");
    return std::log1p(-psi(y) / (x - y));
}

std::vector<double> TransportBundle::x_breaks() const {
    std::vector<double> out;
    out.reserve(breaks_.size() + 2);
    out.push_back(-lambda());
    for (std::size_t i = 0; i < breaks_.size(); ++i) out.push_back(breaks_[i] + s_ * cum_[i]);
    out.push_back(lambda());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

double TransportBundle::kernel_G(const PointConfiguration& eta, double x,
                                 const std::function<double(double)>& chi) const {
    auto c = [&](double y) { return chi ? chi(y) : 1.0; };
    double s = 0.0;
    for (double p : eta.points()) s += c(p) * kernel_F(x, p);
    const double px = psi(x);
    auto br = x_breaks();
    br.push_back(x);
    s -= quad::adaptive([&](double y) { return c(y) * -std::log1p(delta(x, y, px, psi(y))); },
                        quad::merge_breaks(-lambda(), lambda(), br), kPsiTol);
    return s;
}

PsiBoundsReport psi_bounds_check(const TransportBundle& T, int n) {
    PsiBoundsReport r;
    const double L = T.lambda(), l = T.ell(), s = std::abs(T.s());
    const double l1 = T.bundle().l1_norm_m_tilde();
    double prev = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        const double x = -L + 2 * L * i / (n - 1);
        const double phi = T.map(x);
        const double p = phi - x;
        const double ax = std::abs(x);
        r.sup_psi = std::max(r.sup_psi, std::abs(p));
        if (phi <= prev) r.monotone = false;
        prev = phi;
        if ((x <= -L + l / 4 || x >= L - l / 4) && phi != x) r.identity_on_strips = false;
        r.inverse_residual = std::max(r.inverse_residual, std::abs(T.cumulative(phi) - x - L) / L);
        if (s == 0.0) continue;
        if (l1 > 0) r.l1_ratio = std::max(r.l1_ratio, std::abs(p) / (s * l1));
        double env;
        int regime;
        if (ax <= 10 * l) {
            env = s;
            regime = 0;
        } else if (ax <= L / 2) {
            env = s * l / ax;
            regime = 1;
        } else {
            env = s * l * std::sqrt(L - ax) / std::pow(L, 1.5);
            regime = 2;
        }
        if (env > 0) r.regime_ratio[regime] = std::max(r.regime_ratio[regime], std::abs(p) / env);
        const double h = 1e-3 * l;
        if (x - h > -L + l / 4 && x + h < L - l / 4) {
            // Richardson-extrapolated central difference
            const double d1 = (T.map(x + h) - T.map(x - h)) / (2 * h);
            const double d2 = (T.map(x + h / 2) - T.map(x - h / 2)) / h;
            const double d = (4 * d2 - d1) / 3;
            r.jacobian_residual = std::max(r.jacobian_residual, std::abs(d * T.mu(phi) - 1.0));
        }
    }
    r.rough_bound_ok = r.sup_psi <= 1.0;
    return r;
}

PushForwardCheck push_forward_check(const TransportBundle& T, const RescaledTestFunction& f) {
    const double L = T.lambda();
    const double a = std::max(-L, f.support_lo()), b = std::min(L, f.support_hi());
    PushForwardCheck c;
    if (a >= b) return c;
    std::vector<double> zb{a, b};
    for (double t : T.bundle().breaks())
        if (t > a && t < b) zb.push_back(t);
    std::sort(zb.begin(), zb.end());
    std::vector<double> xb;
    for (double z : zb) xb.push_back(std::clamp(T.cumulative(z) - L, -L, L));
    const quad::Tolerance tol{1e-15, 1e-13};
    c.transported = quad::adaptive([&](double x) { return f(T.map(x)); }, xb, tol);
    c.weighted = quad::adaptive([&](double z) { return f(z) * T.mu(z); }, zb, tol);
    c.relative = std::abs(c.transported - c.weighted) / std::max(std::abs(c.weighted), 1e-300);
    return c;
}

nlohmann::json to_json(const EnergyReport& r) {
    nlohmann::json j;
    j["main_s"] = r.main_s;
    j["re_s"] = r.re_s;
    j["flu_re"] = r.flu_re;
    j["lhs"] = r.lhs;
    j["rhs"] = r.rhs;
    j["residual"] = r.residual;
    j["tolerance"] = r.tolerance;
    j["pass"] = r.pass();
    j["terms"] = r.terms;
    return j;
}

namespace {

void check_inside(const TransportBundle& T, const PointConfiguration& eta) {
    for (double p : eta.points())
        if (p < -T.lambda() || p > T.lambda())
            throw OutOfWindow("energy identity: point " + quad::fmt_g(p) + " outside Lambda");
}

// interaction energies shared by both sides of the identities
struct Shared {
    double leb_leb = 0.0;
    double pts_pts = 0.0;
    double pts_leb = 0.0;  // sum_p U_Leb(p)
};

Shared shared_terms(double L, const std::vector<double>& pts) {
    const auto P = SignedMeasure::points(pts);
    const auto Leb = SignedMeasure::lebesgue(-L, L);
    return {interaction_energy(Leb, Leb, -L, L), interaction_energy(P, P, -L, L),
            interaction_energy(P, Leb, -L, L)};
}

// composite Gauss nodes in x with cached psi values
struct Nodes {
    std::vector<double> x, w, psi;
};

Nodes make_nodes(const TransportBundle& T, int order = 16) {
    Nodes n;
    const auto br = T.x_breaks();
    const auto& rule = quad::gauss_legendre(order);
    for (std::size_t i = 0; i + 1 < br.size(); ++i) {
        const double a = br[i], b = br[i + 1], h = 0.5 * (b - a), c = 0.5 * (a + b);
        for (std::size_t k = 0; k < rule.x.size(); ++k) {
            n.x.push_back(c + h * rule.x[k]);
            n.w.push_back(h * rule.w[k]);
        }
    }
    n.psi.resize(n.x.size());
    for (std::size_t i = 0; i < n.x.size(); ++i) n.psi[i] = T.psi(n.x[i]);
    return n;
}

}  // namespace

EnergyReport verify_energy_splitting(const TransportBundle& T, const PointConfiguration& eta) {
    check_inside(T, eta);
    const auto& B = T.bundle();
    const double L = T.lambda(), s = T.s();
    const auto& pts = eta.points();
    const Shared sh = shared_terms(L, pts);

    EnergyReport r;
    r.lhs = sh.pts_pts - 2 * sh.pts_leb + sh.leb_leb;

    double around = sh.pts_pts - 2 * sh.pts_leb + sh.leb_leb;
    double lp = 0.0, el = 0.0, norm = 0.0, errvar = 0.0, shift = 0.0;
    if (s != 0.0 && !B.is_zero()) {
        // energy around mu_s: potentials of m_tilde computed directly in y
        double tilde_pts = 0.0;
        for (double p : pts) tilde_pts += B.tilde_potential(p);
        const VarianceTerm v = variance_term(B);
        shift = -2 * s * tilde_pts + 2 * s * B.tilde_against_lebesgue_potential() + s * s * v.v;
        around += shift;
        // correction terms: potentials of m (theta variable) and of the endpoint errors
        double lp_pts = 0.0, el_pts = 0.0;
        for (double p : pts) {
            lp_pts += B.lp(p);
            el_pts += B.error_log(p, Side::left) + B.error_log(p, Side::right);
        }
        lp = 2 * s * (lp_pts - B.m_against_lebesgue_potential());
        el = 2 * s * (el_pts - B.error_against_lebesgue_potential());
        norm = -s * s * v.target;
        errvar = -s * s * v.errvar;
        r.terms["variance_v"] = v.v;
        r.terms["norm_sq"] = 0.5 * v.target;
    }
    r.rhs = around + lp + el + norm + errvar;
    r.residual = r.lhs - r.rhs;
    r.tolerance = kEnergyRelTol * std::max(std::abs(r.lhs), 1.0);
    // the same residual without the shared background terms
    r.terms["residual_corrections_only"] = -(shift + lp + el + norm + errvar);
    r.terms["energy_around_mu_s"] = around;
    r.terms["lp_term"] = lp;
    r.terms["errorlog_term"] = el;
    r.terms["norm_term"] = norm;
    r.terms["errorvar_term"] = errvar;
    r.terms["leb_leb"] = sh.leb_leb;
    r.terms["s"] = s;
    return r;
}

EnergyReport verify_energy_expansion(const TransportBundle& T, const PointConfiguration& eta) {
    check_inside(T, eta);
    const auto& B = T.bundle();
    const double L = T.lambda(), s = T.s();
    const auto& pts = eta.points();
    const Shared sh = shared_terms(L, pts);
    const double base = sh.pts_pts - 2 * sh.pts_leb + sh.leb_leb;

    EnergyReport r;
    r.terms["leb_leb"] = sh.leb_leb;
    r.terms["s"] = s;
    if (s == 0.0 || B.is_zero()) {
        r.lhs = r.rhs = base;
        r.tolerance = kEnergyRelTol * std::max(std::abs(r.lhs), 1.0);
        return r;
    }

    // left side: pushed configuration against mu_s, potentials taken directly
    std::vector<double> q(pts.size());
    std::vector<double> psi_p(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        q[i] = T.map(pts[i]);
        psi_p[i] = q[i] - pts[i];
    }
    const auto Q = SignedMeasure::points(q);
    const auto Leb = SignedMeasure::lebesgue(-L, L);
    double qq = interaction_energy(Q, Q, -L, L);
    double q_pot = interaction_energy(Q, Leb, -L, L);
    for (double y : q) q_pot += s * B.tilde_potential(y);
    const VarianceTerm v = variance_term(B);
    const double mu_mu = sh.leb_leb + 2 * s * B.tilde_against_lebesgue_potential() + s * s * v.v;
    r.lhs = qq - 2 * q_pot + mu_mu;

    // Main_s through the kernel -log(1 + Delta_s)
    const Nodes nd = make_nodes(T);
    double pair_sum = 0.0, diag_sum = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        diag_sum += -std::log1p(T.psi_prime(pts[i]));
        for (std::size_t j = 0; j < pts.size(); ++j)
            if (i != j) pair_sum += -std::log1p(T.delta(pts[i], pts[j], psi_p[i], psi_p[j]));
    }
    double cross = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        double c = 0.0;
        for (std::size_t k = 0; k < nd.x.size(); ++k)
            c += nd.w[k] * -std::log1p(T.delta(pts[i], nd.x[k], psi_p[i], nd.psi[k]));
        cross += c;
    }
    double bg = 0.0;
    for (std::size_t a = 0; a < nd.x.size(); ++a) {
        double row = 0.0;
        for (std::size_t b = 0; b < nd.x.size(); ++b)
            row += nd.w[b] * -std::log1p(T.delta(nd.x[a], nd.x[b], nd.psi[a], nd.psi[b]));
        bg += nd.w[a] * row;
    }
    r.main_s = pair_sum + diag_sum - 2 * cross + bg;

    r.re_s = -quad::adaptive(
        [&](double z) {
            const double m = T.mu(z);
            return m * std::log(m);
        },
        B.breaks(), kEnergyTol);

    double flu_pts = 0.0;
    for (double y : q) flu_pts -= std::log(T.mu(y));
    const double flu_bg =
        quad::adaptive([&](double x) { return std::log(T.mu(T.map(x))); }, T.x_breaks(), kEnergyTol);
    r.flu_re = flu_pts + flu_bg;

    r.rhs = base + r.main_s + r.re_s + r.flu_re;
    r.residual = r.lhs - r.rhs;
    r.tolerance = kEnergyRelTol * std::max(std::abs(r.lhs), 1.0);
    r.terms["main_pairs"] = pair_sum;
    r.terms["main_diagonal"] = diag_sum;
    r.terms["main_cross"] = -2 * cross;
    r.terms["main_background"] = bg;
    r.terms["mu_mu_minus_leb_leb"] = mu_mu - sh.leb_leb;
    r.terms["flu_re_background"] = flu_bg;
    r.terms["base_energy"] = base;
    r.terms["residual_corrections_only"] = (qq - sh.pts_pts) - 2 * (q_pot - sh.pts_leb) +
                                           (mu_mu - sh.leb_leb) - (r.main_s + r.re_s + r.flu_re);
    return r;
}

DifferenceField difference_field(const TransportBundle& T, const PointConfiguration& eta, double x) {
    const double L = T.lambda(), s = T.s();
    if (std::abs(x) <= L) throw InvalidArgument("difference_field: x must satisfy |x| > lambda");
    check_inside(T, eta);
    DifferenceField d;
    if (s == 0.0 || T.bundle().is_zero()) return d;
    double pts = 0.0;
    for (double p : eta.points()) {
        const double q = T.map(p);
        d.df += -std::log(std::abs(x - q)) + std::log(std::abs(x - p));
        pts += -std::log1p(-(q - p) / (x - p));
    }
    const auto& B = T.bundle();
    d.lp_part = B.lp(x);
    d.errorlog_part = B.error_log(x, Side::left) + B.error_log(x, Side::right);
    const double bg = quad::adaptive([&](double y) { return std::log1p(-T.psi(y) / (x - y)); },
                                     T.x_breaks(), kPsiTol);
    d.errordf = pts + bg;
    d.residual = d.df - s * d.lp_part - s * d.errorlog_part - d.errordf;
    return d;
}

}  // namespace sinebeta
