// shared helpers for the test suites
#pragma once

#include <random>
#include <vector>

#include "linefree/form.hpp"

namespace testutil {

inline std::vector<uint32_t> random_coeffs(const linefree::FieldSpec& F, int nvars, int degree,
                                           std::mt19937_64& rng) {
    const auto& B = linefree::MonomialBasis::get(nvars, degree);
    std::vector<uint32_t> c(B.size());
    bool nonzero = false;
    while (!nonzero)
        for (auto& x : c) {
            x = static_cast<uint32_t>(rng() % F.q());
            nonzero |= x != 0;
        }
    return c;
}

inline linefree::HomogeneousForm random_form(const linefree::FieldSpec& F, int nvars, int degree,
                                             std::mt19937_64& rng) {
    return linefree::HomogeneousForm::from_coeff_vector(F, nvars, degree,
                                                        random_coeffs(F, nvars, degree, rng));
}

inline linefree::ProjectiveMap random_pgl(const linefree::FieldSpec& F, int n, std::mt19937_64& rng) {
    int dim = n + 1;
    for (;;) {
        linefree::Coords m;
        m.reserve(static_cast<size_t>(dim) * dim);
        for (int i = 0; i < dim * dim; ++i)
            m.push_back(linefree::FieldElement(F, static_cast<uint32_t>(rng() % F.q())));
        try {
            return linefree::ProjectiveMap::from_matrix(n, std::move(m));
        } catch (const std::invalid_argument&) {
            // singular or zero draw; try again
        }
    }
}

}  // namespace testutil
