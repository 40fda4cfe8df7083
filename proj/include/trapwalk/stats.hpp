#pragma once

namespace trapwalk {

/// Regularized incomplete gamma functions, P(a,x) + Q(a,x) = 1.
double gamma_p(double a, double x);
double gamma_q(double a, double x);

/// Upper-tail p-value of a chi-square statistic with df degrees of freedom.
double chi_square_pvalue(double stat, double df);

}  // namespace trapwalk
