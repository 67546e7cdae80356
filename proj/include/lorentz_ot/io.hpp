// Copyright 2026 The lorentz-ot Authors
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

// JSON schemas, CSV tables and a small SVG writer.
//
// Extended reals are written as JSON numbers, or as the strings "inf" and
// "-inf". Points are arrays [t, x1, …, xn].

#ifndef LORENTZ_OT_IO_HPP_
#define LORENTZ_OT_IO_HPP_

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "lorentz_ot/measures.hpp"
#include "lorentz_ot/potentials.hpp"
#include "lorentz_ot/transport.hpp"
#include "lorentz_ot/weakkam.hpp"

namespace lot {

using Json = nlohmann::ordered_json;

// Malformed input document.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Json extended_to_json(ExtendedReal v);
ExtendedReal extended_from_json(const Json& j);

Json point_to_json(const SpacetimePoint& p);
SpacetimePoint point_from_json(const Json& j);

// {dimension, points: [[t, x…]], weights: […]}
Json measure_to_json(const DiscreteMeasure& m);
DiscreteMeasure measure_from_json(const Json& j);

Json certificate_to_json(const Certificate& c);

// {status, primal_value, entries: [[i,j,mass]], dual_rows, dual_cols,
//  certificates}
Json result_to_json(const TransportResult& r, const std::vector<Certificate>& certs);
TransportResult result_from_json(const Json& j, const DiscreteMeasure& mu,
                                 const DiscreteMeasure& nu);

// {points, values, provenance, anchor?}
Json field_to_json(const PotentialField& f);
PotentialField potential_from_json(const Json& j);

// {points, values, time}
Json value_field_to_json(const ValueField& f);
ValueField value_field_from_json(const Json& j);

// {bounds: [x_lo, x_hi, t_lo, t_hi], step}
Grid2 grid_from_json(const Json& j);
Json grid_to_json(const Grid2& g);

Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

// "x,t,value" rows.
std::string grid_field_csv(const GridField& f);
// "t,x1,…,value" rows.
std::string value_field_csv(const ValueField& f);

// Plot in data coordinates (x horizontal, t vertical, t increasing upward).
class SvgPlot {
 public:
  SvgPlot(double x_lo, double x_hi, double t_lo, double t_hi, int width = 640,
          int height = 480);

  void title(const std::string& text);
  void polyline(const std::vector<std::pair<double, double>>& xt,
                const std::string& stroke, double width = 1.5, bool dashed = false);
  void line(double x0, double t0, double x1, double t1, const std::string& stroke,
            double width = 1.0, bool dashed = false);
  void dot(double x, double t, double radius, const std::string& fill);
  void label(double x, double t, const std::string& text);
  // Grey-scale cells; non-finite values are left blank.
  void heatmap(const GridField& f);

  std::string str() const;

 private:
  double px(double x) const;
  double py(double t) const;

  double x_lo_, x_hi_, t_lo_, t_hi_;
  int width_, height_;
  std::string title_;
  std::vector<std::string> body_;
};

}  // namespace lot

#endif  // LORENTZ_OT_IO_HPP_
