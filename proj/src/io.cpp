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

#include "liouville/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "liouville/error.hpp"

namespace liouville {

std::string format_number(double value) {
    if (std::isnan(value)) return {};
    char buf[64];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
    if (ec != std::errc{}) fail(ErrorKind::Domain, "format_number: conversion failed");
    return std::string(buf, end);
}

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    require(static_cast<bool>(os), ErrorKind::Config, "cannot open " + path + " for writing");
    return os;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

}  // namespace

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns,
               const std::vector<std::string>& comment) {
    require(header.size() == columns.size(), ErrorKind::Domain, "write_csv: header/column mismatch");
    const std::size_t rows = columns.empty() ? 0 : columns.front().size();
    for (const auto& c : columns)
        require(c.size() == rows, ErrorKind::Domain, "write_csv: columns differ in length");
    std::ofstream os = open_out(path);
    for (const auto& line : comment) os << "# " << line << "\r\n";
    for (std::size_t j = 0; j < header.size(); ++j) os << (j ? "," : "") << csv_field(header[j]);
    os << "\r\n";
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < columns.size(); ++j) os << (j ? "," : "") << format_number(columns[j][i]);
        os << "\r\n";
    }
    require(static_cast<bool>(os), ErrorKind::Config, "failed writing " + path);
}

void write_pdf_csv(const std::string& path, const PdfCurve& curve) {
    std::string meta;
    for (const auto& [k, v] : curve.meta) meta += (meta.empty() ? "" : " ") + k + "=" + v;
    if (curve.kind == PdfCurve::Kind::Histogram) meta += " bin_width=" + format_number(curve.bin_width);
    std::vector<std::string> comment{meta};
    for (const auto& w : curve.warnings) comment.push_back("warning: " + w);
    std::string coord = curve.meta_value("variable");
    if (coord.empty()) coord = "x";
    write_csv(path, {coord, "density"}, {curve.coords, curve.density}, comment);
}

void write_moments_csv(const std::string& path, const MomentSeries& series) {
    std::vector<std::vector<double>> cols(8);
    for (const auto& r : series.records) {
        const double v[] = {r.t, r.mean_x, r.mean_u, r.var_x, r.cov_xu, r.var_u, r.cov_xi_x, r.cov_xi_u};
        for (int j = 0; j < 8; ++j) cols[j].push_back(v[j]);
    }
    write_csv(path, {"t", "mean_x", "mean_u", "var_x", "cov_xu", "var_u", "cov_xi_x", "cov_xi_u"},
              cols, {"model=" + series.model});
}

XySeries read_xy_csv(const std::string& path) {
    std::ifstream is(path);
    require(static_cast<bool>(is), ErrorKind::Config, "cannot open " + path);
    XySeries out;
    std::string line;
    bool header_allowed = true;
    std::size_t line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::stringstream ss(line);
        std::string a, b;
        std::getline(ss, a, ',');
        std::getline(ss, b, ',');
        double x = 0.0, y = 0.0;
        const auto trim = [](std::string& s) {
            const auto first = s.find_first_not_of(" \t");
            const auto last = s.find_last_not_of(" \t");
            s = first == std::string::npos ? "" : s.substr(first, last - first + 1);
        };
        trim(a);
        trim(b);
        const auto ra = std::from_chars(a.data(), a.data() + a.size(), x);
        const auto rb = std::from_chars(b.data(), b.data() + b.size(), y);
        const bool ok = ra.ec == std::errc{} && rb.ec == std::errc{} && ra.ptr == a.data() + a.size() &&
                        rb.ptr == b.data() + b.size() && !a.empty() && !b.empty();
        if (!ok) {
            require(header_allowed, ErrorKind::Config,
                    path + ":" + std::to_string(line_no) + ": expected two numeric columns");
            header_allowed = false;
            continue;
        }
        header_allowed = false;
        out.x.push_back(x);
        out.y.push_back(y);
    }
    return out;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream os = open_out(path);
    os << text;
    require(static_cast<bool>(os), ErrorKind::Config, "failed writing " + path);
}

}  // namespace liouville
