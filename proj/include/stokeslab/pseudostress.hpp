#pragma once

#include "stokeslab/analysis.hpp"

namespace stokeslab {

/// Elementwise affine pseudostress built from the CR solution with projected
/// load:  sigma = grad_NC u~ - (Pi0 f / 2) (x) (x - mid(T)) - p~ I.
struct PseudostressField {
    std::vector<Mat2> base;       // grad_NC u~ - p~ I (constant per element)
    std::vector<Vec2> half_load;  // Pi0 f / 2
    std::vector<Vec2> centroid;

    Mat2 value(int tri, Vec2 x) const {
        return base[tri] - outer(half_load[tri], x - centroid[tri]);
    }
};

struct PseudostressResult {
    PseudostressField field;
    DofMap dofmap;                  // CR dof map used for the tilde solve
    DiscreteSolution tilde_solution;  // CR solution for the right-hand side Pi0 f
};

PseudostressResult ps_from_cr(const Triangulation& t, const SourceField& f, const BoundaryTrace& g);

/// (|| grad u - dev sigma ||, || p + tr sigma / 2 ||) by quadrature.
std::pair<double, double> ps_errors(const Triangulation& t, const PseudostressField& ps,
                                    const ExactSolution& exact);

/// int_Omega tr(sigma) dx (zero for any valid pseudostress approximation).
double ps_trace_integral(const Triangulation& t, const PseudostressField& ps);

}  // namespace stokeslab
