#pragma once

#include <cstddef>
#include <vector>

#include "pinlab/renewal.hpp"

namespace pinlab {

/// G(b) = Σ_{n≥1} K(n)(1 - e^{-bn}) over the full power law, the part beyond
/// n_max by a midpoint Euler–Maclaurin rule.
double tilted_mass_deficit(const RenewalLaw& law, double b);

/// Infinite-volume free energy of the β = 0 model: 0 for h ≤ 0, otherwise the
/// root b of G(b) = 1 - e^{-h}.
double homogeneous_free_energy(const RenewalLaw& law, double h);

/// Z_{n,h} - 1 for the free-boundary homogeneous system, n = 0..N.
std::vector<double> homogeneous_excess_partition(const RenewalLaw& law, double h, std::size_t N);

}  // namespace pinlab
