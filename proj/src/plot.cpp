// Copyright 2026 The shiftspec Authors
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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>
#include <vector>

#include "shiftspec/io.hpp"

namespace shiftspec {

namespace {

constexpr double kSize = 640;
constexpr double kHalf = kSize / 2;
constexpr double kDrawRadius = 290;
constexpr std::size_t kCurveSamples = 512;
constexpr std::size_t kWindingMarks = 64;

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", x);
  return buf;
}

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

struct Canvas {
  double scale;
  double x(double re) const { return kHalf + re * scale; }
  double y(double im) const { return kHalf - im * scale; }
};

std::vector<Complex> image_curve(const HoloMap& f, double radius, std::size_t n) {
  std::vector<Complex> pts;
  pts.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = 2 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
    pts.push_back(eval(f, std::polar(radius, t)));
  }
  return pts;
}

std::string polyline(const Canvas& c, const std::vector<Complex>& pts, const char* stroke) {
  std::string s = "<polygon fill=\"none\" stroke=\"" + std::string(stroke) + "\" stroke-width=\"1.5\" points=\"";
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i) s += ' ';
    s += num(c.x(pts[i].real())) + "," + num(c.y(pts[i].imag()));
  }
  return s + "\"/>\n";
}

std::string circle(const Canvas& c, double r, const std::string& attrs) {
  return "<circle cx=\"" + num(kHalf) + "\" cy=\"" + num(kHalf) + "\" r=\"" + num(r * c.scale) + "\" " +
         attrs + "/>\n";
}

}  // namespace

std::string plot_svg(const OperatorSpec& op, const Verdict& v) {
  const double r1 = v.profile.r1;
  const double r2 = v.profile.r2;
  const auto outer = image_curve(op.map, r1, kCurveSamples);
  const auto inner = r2 > 0 ? image_curve(op.map, r2, kCurveSamples) : std::vector<Complex>{eval(op.map, 0.0)};

  double extent = std::max(1.25, 1.1 * r1);
  for (Complex z : outer) extent = std::max(extent, 1.05 * std::abs(z));
  for (Complex z : inner) extent = std::max(extent, 1.05 * std::abs(z));
  const Canvas c{kDrawRadius / extent};

  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kSize) + "\" height=\"" + num(kSize + 90) +
       "\" viewBox=\"0 0 " + num(kSize) + " " + num(kSize + 90) + "\">\n";
  s += "<rect x=\"0\" y=\"0\" width=\"" + num(kSize) + "\" height=\"" + num(kSize + 90) + "\" fill=\"white\"/>\n";
  s += "<line x1=\"0\" y1=\"" + num(kHalf) + "\" x2=\"" + num(kSize) + "\" y2=\"" + num(kHalf) +
       "\" stroke=\"#dddddd\"/>\n";
  s += "<line x1=\"" + num(kHalf) + "\" y1=\"0\" x2=\"" + num(kHalf) + "\" y2=\"" + num(kSize) +
       "\" stroke=\"#dddddd\"/>\n";

  // Parameter annulus r2 <= |z| <= r1, drawn as an even-odd ring.
  s += "<g id=\"annulus\">\n";
  if (r1 > r2) {
    const double ro = r1 * c.scale;
    const double ri = r2 * c.scale;
    s += "<path fill=\"#9fb7d4\" fill-opacity=\"0.45\" fill-rule=\"evenodd\" stroke=\"#5a7ca8\" d=\"M " +
         num(kHalf + ro) + " " + num(kHalf) + " A " + num(ro) + " " + num(ro) + " 0 1 0 " + num(kHalf - ro) +
         " " + num(kHalf) + " A " + num(ro) + " " + num(ro) + " 0 1 0 " + num(kHalf + ro) + " " + num(kHalf) +
         " Z M " + num(kHalf + ri) + " " + num(kHalf) + " A " + num(ri) + " " + num(ri) + " 0 1 0 " +
         num(kHalf - ri) + " " + num(kHalf) + " A " + num(ri) + " " + num(ri) + " 0 1 0 " + num(kHalf + ri) +
         " " + num(kHalf) + " Z\"/>\n";
  } else {
    s += circle(c, r1, "fill=\"none\" stroke=\"#5a7ca8\" stroke-width=\"3\"");
  }
  s += "</g>\n";

  s += "<g id=\"unit-circle\">\n" + circle(c, 1.0, "fill=\"none\" stroke=\"black\" stroke-dasharray=\"6 4\"") +
       "</g>\n";
  s += "<g id=\"image-outer\">\n" + polyline(c, outer, "#1f4e9c") + "</g>\n";
  s += "<g id=\"image-inner\">\n" + polyline(c, inner, "#d0661b") + "</g>\n";

  s += "<g id=\"winding-samples\" fill=\"#d0661b\">\n";
  if (r2 > 0) {
    for (std::size_t i = 0; i < kWindingMarks; ++i) {
      const Complex p = inner[i * (inner.size() / kWindingMarks)];
      s += "<circle cx=\"" + num(c.x(p.real())) + "\" cy=\"" + num(c.y(p.imag())) + "\" r=\"2\"/>\n";
    }
  }
  s += "</g>\n";

  const double top = kSize + 18;
  auto text = [&](double yy, const std::string& t) {
    s += "<text x=\"12\" y=\"" + num(yy) + "\" font-family=\"monospace\" font-size=\"13\">" + t + "</text>\n";
  };
  s += "<g id=\"legend\">\n";
  text(top, "annulus [r2, r1] = [" + sci(r2) + ", " + sci(r1) + "] (shaded); unit circle dashed");
  text(top + 18, "blue: f(|z| = r1)   orange: f(|z| = r2), dots = winding samples");
  text(top + 36, "min |f| on annulus >= " + sci(v.conditionA.lowerBound) +
                     (v.conditionA.status == CertStatus::Certified ? " (certified)" : " (undecided)") +
                     (v.conditionBEvaluated ? ", winding = " + std::to_string(v.conditionB.winding) : ""));
  text(top + 54, std::string("decision: ") + to_string(v.decision) + " via " + to_string(v.route) +
                     ", margin " + sci(v.margin));
  s += "</g>\n</svg>\n";
  return s;
}

}  // namespace shiftspec
