#pragma once

#include <random>

#include "tsl/beams.hpp"
#include "tsl/grid.hpp"

namespace tsl::testing {

inline Field2D random_field(const TransverseGrid& g, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    Field2D f(g);
    for (Complex& v : f.values) v = Complex(uni(rng), uni(rng));
    return f;
}

// Control pair whose total Rabi frequency is bounded away from zero.
inline ControlPair random_controls(const TransverseGrid& g, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    std::uniform_real_distribution<double> mag(0.5, 1.5);
    ControlPair p;
    p.omega_c2 = random_field(g, rng);
    Field2D o3(g);
    for (Complex& v : o3.values) {
        const double phase = 3.14159265358979 * uni(rng);
        v = mag(rng) * Complex(std::cos(phase), std::sin(phase));
    }
    p.omega_c3 = std::move(o3);
    return p;
}

inline double max_diff(const Field2D& a, const Field2D& b) {
    double m = 0.0;
    for (std::size_t k = 0; k < a.values.size(); ++k)
        m = std::max(m, std::abs(a.values[k] - b.values[k]));
    return m;
}

} // namespace tsl::testing
