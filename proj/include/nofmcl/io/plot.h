/*
 * Copyright 2026 The nofmcl Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef NOFMCL_IO_PLOT_H_
#define NOFMCL_IO_PLOT_H_

#include <utility>
#include <vector>

#include "nofmcl/io/image.h"

namespace nofmcl::io {

using Series = std::vector<std::pair<double, double>>;

// Line chart of one or more series on shared axes with a black frame.
// Non-finite points break the line. Series are drawn in decreasing gray
// levels.
GrayImage LinePlot(const std::vector<Series>& series, int width = 640,
                   int height = 400);

}  // namespace nofmcl::io

#endif  // NOFMCL_IO_PLOT_H_
