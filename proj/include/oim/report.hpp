#pragma once

// Tabular exports of ensemble runs. Numbers use 12 significant digits so that
// identical runs produce byte-identical files.

#include <string>

#include "oim/ensemble.hpp"

namespace oim {

std::string format_csv_number(double v);

/// Header plus one row: n,p1,p2,mu_law,samples,seed,emp_mean_H,se_mean_H,emp_var_H,
/// ana_mean_H,ana_var_H,emp_mean_lam,se_mean_lam,emp_var_lam,ana_mean_lam,ana_var_lam
std::string moments_csv(const EnsembleParams& params, const EnsembleResult& result);

/// h,count,mean_lambda,var_lambda,mean_lambda_min,frac_stable,pred_mean,pred_var,excluded
std::string conditional_csv(const EnsembleResult& result);

/// c,se_c,bins_used,regression_h,mean_slope,mean_intercept,mean_r2,pred_slope,pred_intercept
/// where regression_h lists the energy levels used in the fit, separated by ';'.
std::string fit_csv(const EnsembleParams& params, const EnsembleResult& result);

}  // namespace oim
