#pragma once

#include "errinvar/fourier.hpp"
#include "errinvar/kernels.hpp"
#include "errinvar/localpoly.hpp"

namespace errinvar {

// sum_j sum_k (W_jk - W_j)^2 / (2n): the error variance of the averaged W_j.
double estimate_sigma2_from_replicates(const Sample& sample);

// phi_U(t) = mean_j cos((t/2)(W_j1 - W_j2)), floored at 1e-6, tabulated on
// the grid's frequency nodes and made exactly even.
ErrorModel estimate_charfn_dhm(const Sample& sample, const FourierGrid& grid);

double reliability_ratio(double var_x, double sigma2_u);

// sigma_u^2 giving reliability ratio lambda.
double sigma2_for_reliability(double var_x, double lambda);

}  // namespace errinvar
