// Copyright 2026 The collabnet Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Distribution functions for the t, F and normal tests.

#pragma once

namespace collabnet::stats {

/// Regularized incomplete beta I_x(a, b), continued fraction (modified Lentz).
double incomplete_beta(double a, double b, double x);

/// P(T <= t) for Student's t with df degrees of freedom.
double t_cdf(double t, double df);
/// Two-sided p-value P(|T| >= |t|).
double t_two_sided_p(double t, double df);
/// t with P(T <= t) = p, by bisection on t_cdf.
double t_quantile(double p, double df);

/// Upper tail P(F >= f) for the F(d1, d2) distribution.
double f_upper_p(double f, double d1, double d2);

double normal_cdf(double z);

}  // namespace collabnet::stats
