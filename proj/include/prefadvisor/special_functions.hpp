#pragma once

namespace prefadvisor::stats {

/// Regularized incomplete beta I_x(a, b) for a, b > 0 and x in [0, 1].
/// Evaluated with the modified Lentz continued fraction; relative accuracy
/// is around 1e-14 for moderate a and b.
double incomplete_beta(double a, double b, double x);

/// P(|T| >= |t|) for Student's t with `dof` degrees of freedom.
double student_t_two_tailed(double t, double dof);

}  // namespace prefadvisor::stats
