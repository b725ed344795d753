/*
   Copyright 2026 The Liouville Lab Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

// CSV and text output shared by the command-line front end.

#include <string>
#include <vector>

#include "liouville/analytic.hpp"
#include "liouville/pdf_curve.hpp"

namespace liouville {

/// Shortest round-trip decimal form; NaN is written as an empty field.
std::string format_number(double value);

/// CSV with a header row and equal-length numeric columns. `comment`
/// lines, if any, are written first with a leading '#'.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns,
               const std::vector<std::string>& comment = {});

/// Columns (coordinate, density); the first line carries the curve's
/// metadata as a '#' comment.
void write_pdf_csv(const std::string& path, const PdfCurve& curve);

/// Columns t, mean_x, mean_u, var_x, cov_xu, var_u, cov_xi_x, cov_xi_u.
void write_moments_csv(const std::string& path, const MomentSeries& series);

struct XySeries {
    std::vector<double> x;
    std::vector<double> y;
};

/// Reads the first two numeric columns; skips '#' lines and one optional
/// header line.
XySeries read_xy_csv(const std::string& path);

void write_text_file(const std::string& path, const std::string& text);

}  // namespace liouville
