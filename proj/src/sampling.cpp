#include "condexp/sampling.hpp"

namespace condexp {

RandomVariable random_measurable(const SigmaAlgebra& g, Rng& rng) {
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::vector<double> atom_values(g.atom_count());
    for (double& v : atom_values) v = unit(rng);
    return from_atom_values(g, atom_values);
}

RandomVariable random_variable(std::size_t n, Rng& rng) {
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::vector<double> values(n);
    for (double& v : values) v = unit(rng);
    return RandomVariable(std::move(values));
}

}  // namespace condexp
