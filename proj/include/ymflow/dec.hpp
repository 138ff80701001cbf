#pragma once

#include "ymflow/field.hpp"

namespace ymflow {

/// Flat coboundary: signed sum over boundary cells of each (p+1)-cell,
/// divided by h. d(d(w)) == 0 identically. Dirichlet output is clamped.
FormField exterior_derivative(const FormField& w);

/// Exact transpose of exterior_derivative in the h^3-weighted inner
/// products, including the boundary-condition handling (Dirichlet: minimal
/// d / maximal d*; Neumann: maximal d with the transpose inheriting the
/// normal conditions weakly).
FormField codifferential(const FormField& w);

/// |(1 - Laplace)^{a/2} w|_2 via componentwise FFT; periodic grids only.
double sobolev_norm(const FormField& w, double a);

/// Symbol of the vertex Laplacian at integer mode m.
double laplace_symbol(const GridSpec& g, int m0, int m1, int m2);

}  // namespace ymflow
