#pragma once

#include <functional>
#include <vector>

namespace sinebeta {

// A density part of a signed measure: weight * rho(y) dy on [lo, hi].
// An empty rho means the Lebesgue density 1, which is handled in closed form.
struct DensityPart {
    double weight = 1.0;
    double lo = 0.0, hi = 0.0;
    std::function<double(double)> rho;
    std::vector<double> breaks;
};

// Finite signed measure: weighted atoms plus density parts.
struct SignedMeasure {
    std::vector<double> atoms;
    double atom_weight = 1.0;
    std::vector<DensityPart> parts;

    static SignedMeasure points(std::vector<double> atoms, double weight = 1.0);
    static SignedMeasure lebesgue(double lo, double hi, double weight = 1.0);
    static SignedMeasure density(std::function<double(double)> rho, double lo, double hi,
                                 std::vector<double> breaks = {}, double weight = 1.0);
    // concatenation; atom weights must agree when both sides carry atoms
    SignedMeasure operator+(const SignedMeasure& other) const;
};

// int -log|x - y| dA(y) over the window, skipping atoms located exactly at x
double log_potential(const SignedMeasure& a, double x, double window_lo, double window_hi);

// iint over (window x window) minus the diagonal of -log|x - y| dA(x) dB(y).
// Atom-atom pairs at the same position are the diagonal: skipped when exclude_diagonal is set,
// otherwise CoincidentPoints is thrown. Repeated atoms inside one measure always throw.
double interaction_energy(const SignedMeasure& a, const SignedMeasure& b, double window_lo,
                          double window_hi, bool exclude_diagonal = true);

}  // namespace sinebeta
