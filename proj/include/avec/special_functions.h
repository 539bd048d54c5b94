//
// Copyright 2026 The AVEC Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef AVEC_SPECIAL_FUNCTIONS_H_
#define AVEC_SPECIAL_FUNCTIONS_H_

namespace avec {

// I_x(a, b), a, b > 0, x in [0, 1]. Continued fraction (modified Lentz).
double RegularizedIncompleteBeta(double a, double b, double x);

// P(a, x) and Q(a, x) = 1 - P(a, x), a > 0, x >= 0.
double RegularizedGammaP(double a, double x);
double RegularizedGammaQ(double a, double x);

// Standard normal CDF and survival function.
double NormalCdf(double x);
double NormalSf(double x);

// Upper tail probabilities of the usual sampling distributions.
double ChiSquaredSf(double x, double df);
double FSf(double f, double df1, double df2);
// P(|T| >= |t|) for Student's t with df degrees of freedom.
double StudentTTwoSided(double t, double df);

}  // namespace avec

#endif  // AVEC_SPECIAL_FUNCTIONS_H_
