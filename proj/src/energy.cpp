#include "sinebeta/energy.hpp"

#include <algorithm>
#include <cmath>

#include "sinebeta/errors.hpp"
#include "sinebeta/quadrature.hpp"

namespace sinebeta {

SignedMeasure SignedMeasure::points(std::vector<double> atoms, double weight) {
    SignedMeasure m;
    m.atoms = std::move(atoms);
    m.atom_weight = weight;
    return m;
}

SignedMeasure SignedMeasure::lebesgue(double lo, double hi, double weight) {
    SignedMeasure m;
    m.parts.push_back({weight, lo, hi, {}, {}});
    return m;
}

SignedMeasure SignedMeasure::density(std::function<double(double)> rho, double lo, double hi,
                                     std::vector<double> breaks, double weight) {
    SignedMeasure m;
    m.parts.push_back({weight, lo, hi, std::move(rho), std::move(breaks)});
    return m;
}

SignedMeasure SignedMeasure::operator+(const SignedMeasure& other) const {
    SignedMeasure out = *this;
    if (!other.atoms.empty()) {
        if (!atoms.empty() && atom_weight != other.atom_weight)
            throw InvalidArgument("SignedMeasure: cannot merge atoms with different weights");
        out.atom_weight = other.atom_weight;
        out.atoms.insert(out.atoms.end(), other.atoms.begin(), other.atoms.end());
    }
    out.parts.insert(out.parts.end(), other.parts.begin(), other.parts.end());
    return out;
}

namespace {

std::vector<double> clipped_atoms(const SignedMeasure& m, double lo, double hi) {
    std::vector<double> a;
    for (double p : m.atoms)
        if (p >= lo && p <= hi) a.push_back(p);
    std::sort(a.begin(), a.end());
    for (std::size_t i = 1; i < a.size(); ++i)
        if (a[i] == a[i - 1]) throw CoincidentPoints("two atoms coincide: energy is -log 0");
    return a;
}

bool clip(const DensityPart& p, double lo, double hi, double& a, double& b) {
    a = std::max(p.lo, lo);
    b = std::min(p.hi, hi);
    return a < b;
}

const quad::Tolerance kTol{1e-14, 1e-12};

// int_a^b -log|x - y| rho(y) dy
double part_potential(const DensityPart& p, double a, double b, double x) {
    if (!p.rho) return quad::log_potential_interval(a, b, x);
    return quad::singular([&](double y, double d) { return -std::log(std::abs(d)) * p.rho(y); }, a, b, x,
                          p.breaks, kTol);
}

double part_pair(const DensityPart& p, double pa, double pb, const DensityPart& q, double qa,
                 double qb) {
    if (!p.rho && !q.rho) return quad::log_energy_rectangle(pa, pb, qa, qb);
    if (!p.rho) return part_pair(q, qa, qb, p, pa, pb);
    // p has a density; integrate it against the potential of q
    const auto br = quad::merge_breaks(pa, pb, [&] {
        std::vector<double> e(p.breaks);
        e.push_back(qa);
        e.push_back(qb);
        return e;
    }());
    return quad::adaptive([&](double x) { return p.rho(x) * part_potential(q, qa, qb, x); }, br, kTol);
}

}  // namespace

double log_potential(const SignedMeasure& m, double x, double lo, double hi) {
    double s = 0.0;
    for (double p : clipped_atoms(m, lo, hi))
        if (p != x) s -= m.atom_weight * std::log(std::abs(p - x));
    for (const auto& part : m.parts) {
        double a, b;
        if (clip(part, lo, hi, a, b)) s += part.weight * part_potential(part, a, b, x);
    }
    return s;
}

double interaction_energy(const SignedMeasure& A, const SignedMeasure& B, double lo, double hi,
                          bool exclude_diagonal) {
    const auto aa = clipped_atoms(A, lo, hi);
    const auto ba = clipped_atoms(B, lo, hi);
    double s = 0.0;
    if (!aa.empty() && !ba.empty()) {
        double pp = 0.0;
        for (double x : aa)
            for (double y : ba) {
                if (x == y) {
                    if (exclude_diagonal) continue;
                    throw CoincidentPoints("atom-atom pair on the diagonal");
                }
                pp -= std::log(std::abs(x - y));
            }
        s += A.atom_weight * B.atom_weight * pp;
    }
    for (const auto& q : B.parts) {
        double a, b;
        if (!clip(q, lo, hi, a, b)) continue;
        for (double x : aa) s += A.atom_weight * q.weight * part_potential(q, a, b, x);
    }
    for (const auto& p : A.parts) {
        double a, b;
        if (!clip(p, lo, hi, a, b)) continue;
        for (double y : ba) s += B.atom_weight * p.weight * part_potential(p, a, b, y);
        for (const auto& q : B.parts) {
            double c, d;
            if (!clip(q, lo, hi, c, d)) continue;
            s += p.weight * q.weight * part_pair(p, a, b, q, c, d);
        }
    }
    if (!std::isfinite(s)) throw NonFinite("interaction_energy: non-finite value");
    return s;
}

}  // namespace sinebeta
