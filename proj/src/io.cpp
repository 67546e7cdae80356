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

#include "lorentz_ot/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace lot {

namespace {

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string num(double v) { return fmt("%.17g", v); }

std::string xml_escape(const std::string& text) {
  std::string out;
  for (char ch : text) {
    switch (ch) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

const Json& require(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw SchemaError(std::string("missing key '") + key + "'");
  }
  return j.at(key);
}

void reject_unknown(const Json& j, std::initializer_list<const char*> allowed) {
  for (const auto& [key, _] : j.items()) {
    if (std::none_of(allowed.begin(), allowed.end(),
                     [&](const char* a) { return key == a; })) {
      throw SchemaError("unknown key '" + key + "'");
    }
  }
}

double as_number(const Json& j, const char* what) {
  if (!j.is_number()) throw SchemaError(std::string(what) + " must be a number");
  return j.get<double>();
}

}  // namespace

Json extended_to_json(ExtendedReal v) {
  if (v == kInf) return "inf";
  if (v == -kInf) return "-inf";
  return v;
}

ExtendedReal extended_from_json(const Json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return kInf;
    if (s == "-inf") return -kInf;
    throw SchemaError("bad extended real '" + s + "'");
  }
  return as_number(j, "value");
}

Json point_to_json(const SpacetimePoint& p) {
  Json a = Json::array({p.t});
  for (double v : p.x) a.push_back(v);
  return a;
}

SpacetimePoint point_from_json(const Json& j) {
  if (!j.is_array() || j.size() < 2) {
    throw SchemaError("a point is an array [t, x1, ...] of length >= 2");
  }
  SpacetimePoint p;
  p.t = as_number(j[0], "coordinate");
  for (std::size_t k = 1; k < j.size(); ++k) p.x.push_back(as_number(j[k], "coordinate"));
  return p;
}

Json measure_to_json(const DiscreteMeasure& m) {
  Json pts = Json::array();
  for (const auto& p : m.points()) pts.push_back(point_to_json(p));
  return Json{{"dimension", m.dimension()}, {"points", pts}, {"weights", m.weights()}};
}

DiscreteMeasure measure_from_json(const Json& j) {
  reject_unknown(j, {"dimension", "points", "weights"});
  const Json& pts = require(j, "points");
  const Json& ws = require(j, "weights");
  if (!pts.is_array() || !ws.is_array() || pts.size() != ws.size()) {
    throw SchemaError("points and weights must be arrays of equal length");
  }
  std::vector<SpacetimePoint> points;
  std::vector<double> weights;
  for (const auto& p : pts) points.push_back(point_from_json(p));
  for (const auto& w : ws) weights.push_back(as_number(w, "weight"));
  if (j.contains("dimension")) {
    const auto dim = require(j, "dimension");
    if (!dim.is_number_unsigned()) throw SchemaError("dimension must be a positive integer");
    for (const auto& p : points) {
      if (p.dimension() != dim.get<std::size_t>()) {
        throw SchemaError("point dimension does not match 'dimension'");
      }
    }
  }
  try {
    return DiscreteMeasure(std::move(points), std::move(weights));
  } catch (const std::invalid_argument& e) {
    throw SchemaError(e.what());
  }
}

Json certificate_to_json(const Certificate& c) {
  Json j{{"kind", std::string(to_string(c.kind))}, {"feasible", c.feasible}};
  if (c.gap) j["gap"] = *c.gap;
  if (c.cycle) j["cycle"] = *c.cycle;
  if (c.cycle_delta) j["cycle_delta"] = *c.cycle_delta;
  if (c.kind == CertificateKind::kFeasibility) j["flow_value"] = c.flow_value;
  return j;
}

Json result_to_json(const TransportResult& r, const std::vector<Certificate>& certs) {
  Json entries = Json::array();
  for (const auto& e : r.coupling.entries) entries.push_back(Json::array({e.i, e.j, e.mass}));
  Json j{{"status", std::string(to_string(r.status))},
         {"primal_value", extended_to_json(r.primal_value)},
         {"entries", entries}};
  j["dual_rows"] = r.duals ? Json(r.duals->rows) : Json(nullptr);
  j["dual_cols"] = r.duals ? Json(r.duals->cols) : Json(nullptr);
  Json cj = Json::array();
  for (const auto& c : certs) cj.push_back(certificate_to_json(c));
  j["certificates"] = cj;
  return j;
}

TransportResult result_from_json(const Json& j, const DiscreteMeasure& mu,
                                 const DiscreteMeasure& nu) {
  TransportResult r;
  const auto status = require(j, "status").get<std::string>();
  if (status == "Optimal") {
    r.status = TransportStatus::kOptimal;
  } else if (status == "InfeasibleNoCausalCoupling") {
    r.status = TransportStatus::kInfeasibleNoCausalCoupling;
  } else {
    throw SchemaError("unknown status '" + status + "'");
  }
  r.primal_value = extended_from_json(require(j, "primal_value"));
  r.coupling.source = mu;
  r.coupling.target = nu;
  for (const auto& e : require(j, "entries")) {
    if (!e.is_array() || e.size() != 3) throw SchemaError("entry must be [i, j, mass]");
    r.coupling.entries.push_back(
        {e[0].get<std::size_t>(), e[1].get<std::size_t>(), e[2].get<double>()});
  }
  if (j.contains("dual_rows") && !j["dual_rows"].is_null()) {
    r.duals = DualPair{j["dual_rows"].get<std::vector<double>>(),
                       j["dual_cols"].get<std::vector<double>>()};
  }
  return r;
}

Json field_to_json(const PotentialField& f) {
  Json pts = Json::array(), vals = Json::array();
  for (const auto& p : f.domain) pts.push_back(point_to_json(p));
  for (double v : f.values) vals.push_back(extended_to_json(v));
  Json j{{"points", pts}, {"values", vals}, {"provenance", std::string(to_string(f.provenance))}};
  if (f.anchor) j["anchor"] = *f.anchor;
  return j;
}

PotentialField potential_from_json(const Json& j) {
  reject_unknown(j, {"points", "values", "provenance", "anchor"});
  PotentialField f;
  for (const auto& p : require(j, "points")) f.domain.push_back(point_from_json(p));
  for (const auto& v : require(j, "values")) f.values.push_back(extended_from_json(v));
  if (f.domain.size() != f.values.size()) throw SchemaError("points/values length mismatch");
  const auto prov = require(j, "provenance").get<std::string>();
  if (prov == "ChainBuilt") {
    f.provenance = Provenance::kChainBuilt;
  } else if (prov == "CTransform") {
    f.provenance = Provenance::kCTransform;
  } else if (prov == "Explicit") {
    f.provenance = Provenance::kExplicit;
  } else if (prov == "LaxOleinik") {
    f.provenance = Provenance::kLaxOleinik;
  } else {
    throw SchemaError("unknown provenance '" + prov + "'");
  }
  if (j.contains("anchor")) f.anchor = j["anchor"].get<std::size_t>();
  return f;
}

Json value_field_to_json(const ValueField& f) {
  Json pts = Json::array(), vals = Json::array();
  for (const auto& p : f.carrier) pts.push_back(point_to_json(p));
  for (double v : f.values) vals.push_back(extended_to_json(v));
  return Json{{"points", pts}, {"values", vals}, {"time", f.time}};
}

ValueField value_field_from_json(const Json& j) {
  reject_unknown(j, {"points", "values", "time"});
  ValueField f;
  for (const auto& p : require(j, "points")) f.carrier.push_back(point_from_json(p));
  for (const auto& v : require(j, "values")) f.values.push_back(extended_from_json(v));
  if (f.carrier.size() != f.values.size()) throw SchemaError("points/values length mismatch");
  if (f.carrier.empty()) throw SchemaError("field has no points");
  for (const auto& p : f.carrier) {
    if (p.dimension() != f.carrier.front().dimension()) {
      throw SchemaError("points of differing dimension");
    }
  }
  if (j.contains("time")) f.time = as_number(j["time"], "time");
  return f;
}

Grid2 grid_from_json(const Json& j) {
  reject_unknown(j, {"bounds", "step"});
  const Json& b = require(j, "bounds");
  if (!b.is_array() || b.size() != 4) {
    throw SchemaError("grid bounds must be [x_lo, x_hi, t_lo, t_hi]");
  }
  try {
    return Grid2::covering(as_number(b[0], "bound"), as_number(b[1], "bound"),
                           as_number(b[2], "bound"), as_number(b[3], "bound"),
                           as_number(require(j, "step"), "step"));
  } catch (const std::invalid_argument& e) {
    throw SchemaError(e.what());
  }
}

Json grid_to_json(const Grid2& g) {
  return Json{{"bounds",
               {g.x_min, g.x_min + g.h * static_cast<double>(g.nx - 1), g.t_min,
                g.t_min + g.h * static_cast<double>(g.nt - 1)}},
              {"step", g.h}};
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw SchemaError("'" + path + "': " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
}

std::string grid_field_csv(const GridField& f) {
  std::ostringstream os;
  os << "x,t,value\n";
  for (std::size_t it = 0; it < f.grid.nt; ++it) {
    for (std::size_t ix = 0; ix < f.grid.nx; ++ix) {
      const auto p = f.grid.point(ix, it);
      os << num(p.x[0]) << ',' << num(p.t) << ',' << extended_to_string(f.at(ix, it)) << '\n';
    }
  }
  return os.str();
}

std::string value_field_csv(const ValueField& f) {
  std::ostringstream os;
  os << "t";
  const std::size_t n = f.carrier.empty() ? 0 : f.carrier.front().dimension();
  for (std::size_t k = 0; k < n; ++k) os << ",x" << k + 1;
  os << ",value\n";
  for (std::size_t i = 0; i < f.carrier.size(); ++i) {
    os << num(f.carrier[i].t);
    for (double v : f.carrier[i].x) os << ',' << num(v);
    os << ',' << extended_to_string(f.values[i]) << '\n';
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// SVG.

SvgPlot::SvgPlot(double x_lo, double x_hi, double t_lo, double t_hi, int width, int height)
    : x_lo_(x_lo), x_hi_(x_hi), t_lo_(t_lo), t_hi_(t_hi), width_(width), height_(height) {}

double SvgPlot::px(double x) const {
  return 40.0 + (x - x_lo_) / (x_hi_ - x_lo_) * (width_ - 60.0);
}

double SvgPlot::py(double t) const {
  return height_ - 30.0 - (t - t_lo_) / (t_hi_ - t_lo_) * (height_ - 60.0);
}

void SvgPlot::title(const std::string& text) { title_ = text; }

void SvgPlot::polyline(const std::vector<std::pair<double, double>>& xt,
                       const std::string& stroke, double width, bool dashed) {
  std::string pts;
  for (const auto& [x, t] : xt) pts += fmt("%.2f", px(x)) + "," + fmt("%.2f", py(t)) + " ";
  body_.push_back("<polyline fill=\"none\" stroke=\"" + stroke + "\" stroke-width=\"" +
                  fmt("%.2f", width) + "\"" +
                  (dashed ? " stroke-dasharray=\"5,4\"" : "") + " points=\"" + pts + "\"/>");
}

void SvgPlot::line(double x0, double t0, double x1, double t1, const std::string& stroke,
                   double width, bool dashed) {
  polyline({{x0, t0}, {x1, t1}}, stroke, width, dashed);
}

void SvgPlot::dot(double x, double t, double radius, const std::string& fill) {
  body_.push_back("<circle cx=\"" + fmt("%.2f", px(x)) + "\" cy=\"" + fmt("%.2f", py(t)) +
                  "\" r=\"" + fmt("%.2f", radius) + "\" fill=\"" + fill + "\"/>");
}

void SvgPlot::label(double x, double t, const std::string& text) {
  body_.push_back("<text x=\"" + fmt("%.2f", px(x)) + "\" y=\"" + fmt("%.2f", py(t)) +
                  "\" font-size=\"12\" font-family=\"sans-serif\">" + xml_escape(text) + "</text>");
}

void SvgPlot::heatmap(const GridField& f) {
  double lo = kInf, hi = -kInf;
  for (double v : f.values) {
    if (is_finite(v)) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (lo == kInf) return;
  const double span = hi > lo ? hi - lo : 1.0;
  const double h = f.grid.h;
  for (std::size_t it = 0; it < f.grid.nt; ++it) {
    for (std::size_t ix = 0; ix < f.grid.nx; ++ix) {
      const double v = f.at(ix, it);
      if (!is_finite(v)) continue;
      const auto p = f.grid.point(ix, it);
      const int g = static_cast<int>(std::lround(40.0 + 200.0 * (v - lo) / span));
      const double x0 = px(p.x[0] - h / 2), x1 = px(p.x[0] + h / 2);
      const double y0 = py(p.t + h / 2), y1 = py(p.t - h / 2);
      char buf[160];
      std::snprintf(buf, sizeof buf,
                    "<rect x=\"%.2f\" y=\"%.2f\" width=\"%.2f\" height=\"%.2f\" "
                    "fill=\"rgb(%d,%d,%d)\"/>",
                    x0, y0, x1 - x0 + 0.3, y1 - y0 + 0.3, g, g, g);
      body_.push_back(buf);
    }
  }
}

std::string SvgPlot::str() const {
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width_ << "\" height=\""
     << height_ << "\" viewBox=\"0 0 " << width_ << ' ' << height_ << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  // Axes frame and tick labels at the corners of the data window.
  os << "<rect x=\"40\" y=\"30\" width=\"" << width_ - 60 << "\" height=\"" << height_ - 60
     << "\" fill=\"none\" stroke=\"#888\"/>\n";
  os << "<text x=\"40\" y=\"" << height_ - 12 << "\" font-size=\"11\">x " << fmt("%g", x_lo_)
     << " .. " << fmt("%g", x_hi_) << ", t " << fmt("%g", t_lo_) << " .. "
     << fmt("%g", t_hi_) << "</text>\n";
  if (!title_.empty()) {
    os << "<text x=\"40\" y=\"20\" font-size=\"14\" font-family=\"sans-serif\">" << xml_escape(title_)
       << "</text>\n";
  }
  for (const auto& b : body_) os << b << '\n';
  os << "</svg>\n";
  return os.str();
}

}  // namespace lot
