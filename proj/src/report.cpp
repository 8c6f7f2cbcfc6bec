#include "oim/report.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace oim {

std::string format_csv_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  std::string s = buf;
  if (s == "-0") s = "0";
  return s;
}

std::string moments_csv(const EnsembleParams& p, const EnsembleResult& r) {
  const auto& m = r.moments;
  const auto f = format_csv_number;
  std::ostringstream out;
  out << "n,p1,p2,mu_law,samples,seed,emp_mean_H,se_mean_H,emp_var_H,ana_mean_H,ana_var_H,"
         "emp_mean_lam,se_mean_lam,emp_var_lam,ana_mean_lam,ana_var_lam\n";
  out << p.n << ',' << f(p.p1) << ',' << f(p.p2) << ',' << p.mu_law.label() << ',' << p.samples << ','
      << p.master_seed << ',' << f(m.empirical_mean_H) << ',' << f(m.se_mean_H) << ',' << f(m.empirical_var_H)
      << ',' << f(m.analytic_mean_H) << ',' << f(m.analytic_var_H) << ',' << f(m.empirical_mean_lambda) << ','
      << f(m.se_mean_lambda) << ',' << f(m.empirical_var_lambda) << ',' << f(m.analytic_mean_lambda) << ','
      << f(m.analytic_var_lambda) << '\n';
  return out.str();
}

std::string conditional_csv(const EnsembleResult& r) {
  const auto f = format_csv_number;
  std::ostringstream out;
  out << "h,count,mean_lambda,var_lambda,mean_lambda_min,frac_stable,pred_mean,pred_var,excluded\n";
  for (const auto& [level, b] : r.bins) {
    out << level << ',' << b.count << ',' << f(b.mean_lambda) << ',' << f(b.var_lambda) << ','
        << f(b.mean_lambda_min) << ',' << f(b.frac_stable) << ',' << f(b.predicted_mean) << ','
        << (b.predicted_var ? f(*b.predicted_var) : "nan") << ',' << (b.excluded ? 1 : 0) << '\n';
  }
  return out.str();
}

std::string fit_csv(const EnsembleParams& p, const EnsembleResult& r) {
  const auto f = format_csv_number;
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  std::ostringstream out;
  out << "c,se_c,bins_used,regression_h,mean_slope,mean_intercept,mean_r2,pred_slope,pred_intercept\n";
  std::string levels;
  if (r.fit)
    for (auto h : r.fit->regression_set) levels += (levels.empty() ? "" : ";") + std::to_string(h);
  out << f(r.fit ? r.fit->c : nan) << ',' << f(r.fit ? r.fit->standard_error : nan) << ','
      << (r.fit ? r.fit->regression_set.size() : 0) << ',' << levels << ','
      << f(r.mean_fit ? r.mean_fit->slope : nan) << ',' << f(r.mean_fit ? r.mean_fit->intercept : nan) << ','
      << f(r.mean_fit ? r.mean_fit->r_squared : nan) << ',' << f(-2.0 / static_cast<double>(p.n)) << ','
      << f(p.mu_law.lower() + p.mu_law.upper()) << '\n';
  return out.str();
}

}  // namespace oim
