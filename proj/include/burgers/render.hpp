#pragma once

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "burgers/common.hpp"
#include "burgers/forcing.hpp"
#include "burgers/minimizer.hpp"
#include "burgers/shock.hpp"

namespace burgers {

struct FrameSpec {
  double t_lo = 0.0, t_hi = 1.0;  // viewed time window, time increases upward
  bool show_minimizers = false;
  bool show_shocks = true;
  bool show_global_shocks = true;
  bool show_atoms = true;
  bool show_u_profile = false;
  int t_samples = 160;
  int minimizer_samples = 8;
  int width = 720, height = 720;
};

namespace svg {

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

inline void line(std::string& out, double x1, double y1, double x2, double y2,
                 const char* style) {
  out += "<line x1=\"" + num(x1) + "\" y1=\"" + num(y1) + "\" x2=\"" + num(x2) + "\" y2=\"" +
         num(y2) + "\" " + style + "/>\n";
}

inline void circle(std::string& out, double cx, double cy, double r, const char* style) {
  out += "<circle cx=\"" + num(cx) + "\" cy=\"" + num(cy) + "\" r=\"" + num(r) + "\" " + style +
         "/>\n";
}

}  // namespace svg

// Single frame: forcing atoms as yellow dots with black borders, ordinary
// shocks as dark blue lines, global shocks as thicker light blue lines,
// minimizers as dotted black lines; optional velocity-profile panel on top.
inline std::string render_frame(const MinimizerEngine& engine, const FrameSpec& spec) {
  const double W = spec.width, H = spec.height;
  const double margin = 30.0;
  const double panel_h = spec.show_u_profile ? 0.25 * H : 0.0;
  const double main_top = margin + panel_h, main_bot = H - margin;
  const double left = margin, right = W - margin;
  double t_lo = std::max(spec.t_lo, engine.anchor().T_star + 1e-6);
  double t_hi = spec.t_hi;
  if (!(t_hi > t_lo)) throw Error("frame time window is empty");

  auto X = [&](double x) { return left + torus(x) * (right - left); };
  auto Y = [&](double t) { return main_bot - (t - t_lo) / (t_hi - t_lo) * (main_bot - main_top); };

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + svg::num(W) + "\" height=\"" +
         svg::num(H) + "\" viewBox=\"0 0 " + svg::num(W) + " " + svg::num(H) + "\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out += "<rect x=\"" + svg::num(left) + "\" y=\"" + svg::num(main_top) + "\" width=\"" +
         svg::num(right - left) + "\" height=\"" + svg::num(main_bot - main_top) +
         "\" fill=\"none\" stroke=\"#888888\" stroke-width=\"1\"/>\n";

  // shock rows first so dots draw on top of lines
  struct RowPoint {
    double x;
    bool global;
  };
  std::vector<double> row_t(spec.t_samples);
  std::vector<std::vector<RowPoint>> rows(spec.t_samples);
  if (spec.show_shocks || spec.show_global_shocks) {
    for (int i = 0; i < spec.t_samples; ++i) {
      double t = t_lo + (t_hi - t_lo) * (i + 1.0) / spec.t_samples;
      row_t[i] = t;
      for (const auto& sp : shock_set(engine, t)) rows[i].push_back({sp.x, sp.is_global});
    }
  }
  auto emit_links = [&](std::string& layer, bool want_global, const char* style) {
    for (int i = 0; i + 1 < spec.t_samples; ++i) {
      double dt = row_t[i + 1] - row_t[i];
      for (const auto& p : rows[i]) {
        if (p.global != want_global) continue;
        const RowPoint* best = nullptr;
        double bestd = 0.05 + 4.0 * dt;
        for (const auto& q : rows[i + 1]) {
          double d = torus_dist(p.x, q.x);
          if (d < bestd) {
            bestd = d;
            best = &q;
          }
        }
        if (!best) {
          svg::line(layer, X(p.x), Y(row_t[i]), X(p.x), Y(row_t[i]) - 1.0, style);
          continue;
        }
        double gap = torus_gap(best->x, p.x);
        double xe = torus(p.x) + gap;
        if (xe < 0.0 || xe > 1.0) {  // split wrapped segments at the seam
          double xs = torus(p.x);
          double xw = xe < 0.0 ? 0.0 : 1.0;
          double frac = (xw - xs) / gap;
          double ym = Y(row_t[i]) + frac * (Y(row_t[i + 1]) - Y(row_t[i]));
          svg::line(layer, X(xs), Y(row_t[i]), left + xw * (right - left), ym, style);
          double xw2 = xe < 0.0 ? 1.0 : 0.0;
          svg::line(layer, left + xw2 * (right - left), ym, X(best->x), Y(row_t[i + 1]), style);
        } else {
          svg::line(layer, X(p.x), Y(row_t[i]), X(best->x), Y(row_t[i + 1]), style);
        }
      }
    }
  };

  if (spec.show_shocks) {
    std::string layer = "<g id=\"shocks\">\n";
    emit_links(layer, false, "stroke=\"#1f3b8f\" stroke-width=\"1.2\"");
    layer += "</g>\n";
    out += layer;
  }
  if (spec.show_global_shocks) {
    std::string layer = "<g id=\"global_shocks\">\n";
    emit_links(layer, true, "stroke=\"#74c7ec\" stroke-width=\"3.5\"");
    layer += "</g>\n";
    out += layer;
  }

  if (spec.show_minimizers) {
    std::string layer = "<g id=\"minimizers\">\n";
    const char* style =
        "stroke=\"black\" stroke-width=\"0.8\" stroke-dasharray=\"2,3\" fill=\"none\"";
    for (int k = 0; k < spec.minimizer_samples; ++k) {
      double x = (k + 0.5) / spec.minimizer_samples;
      auto ms = engine.minimizers_at(t_hi, x);
      const auto& path = ms.paths[ms.leftmost];
      for (std::size_t a = 0; a + 1 < path.anchors.size(); ++a) {
        const auto& p = path.anchors[a];
        const auto& q = path.anchors[a + 1];
        if (q.time < t_lo) continue;
        double t1 = p.time, px = p.position;
        if (t1 < t_lo) {  // clip the segment to the viewed window
          double frac = (t_lo - p.time) / (q.time - p.time);
          px = p.position + frac * (q.position - p.position);
          t1 = t_lo;
        }
        double x1 = px - std::floor(px);
        double x2 = x1 + (q.position - px);
        double t2 = q.time;
        while (x2 < 0.0 || x2 > 1.0) {  // unwind torus wraps one at a time
          double xw = x2 < 0.0 ? 0.0 : 1.0;
          double frac = (xw - x1) / (x2 - x1);
          double tm = t1 + frac * (t2 - t1);
          svg::line(layer, left + x1 * (right - left), Y(t1), left + xw * (right - left),
                    Y(tm), style);
          x1 = xw == 0.0 ? 1.0 : 0.0;
          x2 += xw == 0.0 ? 1.0 : -1.0;
          t1 = tm;
        }
        svg::line(layer, left + x1 * (right - left), Y(t1), left + x2 * (right - left), Y(t2),
                  style);
      }
    }
    layer += "</g>\n";
    out += layer;
  }

  if (spec.show_atoms) {
    std::string layer = "<g id=\"atoms\">\n";
    for (const auto& p : engine.field().points()) {
      if (p.time < t_lo || p.time > t_hi) continue;
      svg::circle(layer, X(p.position), Y(p.time), 3.0,
                  "fill=\"#ffd42a\" stroke=\"black\" stroke-width=\"1\"");
    }
    layer += "</g>\n";
    out += layer;
  }

  if (spec.show_u_profile) {
    std::string layer = "<g id=\"u_profile\">\n";
    const Profile prof = engine.profile(t_hi);
    int n = 400;
    double umin = 1e300, umax = -1e300;
    std::vector<double> us(n);
    for (int i = 0; i < n; ++i) {
      us[i] = prof.velocity((i + 0.5) / n);
      umin = std::min(umin, us[i]);
      umax = std::max(umax, us[i]);
    }
    if (umax - umin < 1e-9) {
      umin -= 0.5;
      umax += 0.5;
    }
    double top = margin, bot = margin + panel_h - 10.0;
    auto UY = [&](double u) { return bot - (u - umin) / (umax - umin) * (bot - top); };
    for (int i = 0; i + 1 < n; ++i) {
      double xa = (i + 0.5) / n, xb = (i + 1.5) / n;
      if (std::fabs(us[i + 1] - us[i]) > 0.5 * (umax - umin)) continue;  // skip shock jumps
      svg::line(layer, X(xa), UY(us[i]), X(xb), UY(us[i + 1]),
                "stroke=\"black\" stroke-width=\"1\"");
    }
    layer += "</g>\n";
    out += layer;
  }

  out += "</svg>\n";
  return out;
}

inline std::string frame_filename(int index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "frame_%04d.svg", index);
  return buf;
}

}  // namespace burgers
