#pragma once

#include <string>
#include <utility>
#include <vector>

#include "westervelt/stepper.hpp"
#include "westervelt/types.hpp"

namespace westervelt {

/// Shortest locale-independent decimal form that round-trips the double
/// (17 significant digits).
std::string format_double(double x);

/// Time-series CSV, header `t,sup_u_dev,sup_v,bc_residual,energy`, where
/// sup_u_dev is measured against the given equilibrium estimate r_hat.
void write_series(const std::string& path, const std::vector<SeriesSample>& series,
                  double r_hat);

/// Flat `key = value` summary block.
void write_report(const std::string& path,
                  const std::vector<std::pair<std::string, std::string>>& kv);

/// Eigenvalue CSV `re,im,is_zero_cluster`, sorted by Re descending with ties
/// by Im ascending. Eigenvalues with |lambda| < zero_tol are flagged.
void write_spectrum_csv(const std::string& path, const ComplexVector& eigenvalues,
                        double zero_tol);

}  // namespace westervelt
