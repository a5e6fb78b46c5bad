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

#pragma once

#include <vector>

namespace orchsim::classify {

double mean(const std::vector<double>& xs);

// Population standard deviation (divide by n, not n-1): the golden suite is
// treated as the whole reference population, not a sample of one.
double stddev(const std::vector<double>& xs);

// Mean absolute error between two series of equal length. Runs always pad
// unanswered requests with 0, so comparing series of different lengths is a
// caller bug: throws std::invalid_argument.
double mae(const std::vector<double>& a, const std::vector<double>& b);

// Standard score. A zero-variance reference makes any deviation infinitely
// surprising: returns +infinity when x differs from mu, 0 when it matches.
double z_score(double x, double mu, double sigma);

}  // namespace orchsim::classify
