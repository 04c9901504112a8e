// Static grayscale plot of a run: the final BEV, the nominal and optimized
// polylines, and the hazard marker, written as binary PGM.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "react/bev.hpp"
#include "react/pipeline.hpp"

namespace react {

namespace detail {

constexpr std::uint8_t kPlotOccupied = 110;
constexpr std::uint8_t kPlotHazard = 60;
constexpr std::uint8_t kPlotNominal = 185;
constexpr std::uint8_t kPlotOptimized = 255;

struct Canvas {
  int width{0};
  int height{0};
  std::vector<std::uint8_t> pixels;

  Canvas(int w, int h) : width(w), height(h), pixels(static_cast<std::size_t>(w) * h, 0) {}

  void set(int u, int v, std::uint8_t value) {
    if (u >= 0 && u < width && v >= 0 && v < height) {
      pixels[static_cast<std::size_t>(v) * width + u] = value;
    }
  }
};

inline void draw_line(Canvas& canvas, int u0, int v0, int u1, int v1, std::uint8_t value) {
  const int du = std::abs(u1 - u0);
  const int dv = -std::abs(v1 - v0);
  const int su = u0 < u1 ? 1 : -1;
  const int sv = v0 < v1 ? 1 : -1;
  int err = du + dv;
  int u = u0;
  int v = v0;
  while (true) {
    canvas.set(u, v, value);
    if (u == u1 && v == v1) {
      break;
    }
    const int e2 = 2 * err;
    if (e2 >= dv) {
      err += dv;
      u += su;
    }
    if (e2 <= du) {
      err += du;
      v += sv;
    }
  }
}

inline void draw_polyline(Canvas& canvas, const std::vector<Vec2>& plan, const Vec2& ego,
                          const GridSpec& grid, std::uint8_t value) {
  PixelCoord prev{};
  bool have_prev = false;
  for (const Vec2& wp : plan) {
    const Vec2 rel = wp - ego;
    const PixelCoord p = metric_to_pixel(rel.x, rel.y, grid);
    if (have_prev) {
      draw_line(canvas, prev.u, prev.v, p.u, p.v, value);
    }
    prev = p;
    have_prev = true;
  }
}

}  // namespace detail

inline void emit_plot(const RunResult& rr, const std::string& path) {
  detail::Canvas canvas(rr.grid.width, rr.grid.height);
  for (int v = 0; v < rr.grid.height; ++v) {
    const std::string& row = rr.bev_rows[static_cast<std::size_t>(v)];
    for (int u = 0; u < rr.grid.width; ++u) {
      if (row[static_cast<std::size_t>(u)] == '1') {
        canvas.set(u, v, detail::kPlotOccupied);
      }
    }
  }
  const Vec2 ego = rr.ego_now.pos();
  if (rr.hazard_xy) {
    const Vec2 rel = *rr.hazard_xy - ego;
    const PixelCoord c = metric_to_pixel(rel.x, rel.y, rr.grid);
    for (int dv = -1; dv <= 1; ++dv) {
      for (int du = -1; du <= 1; ++du) {
        canvas.set(c.u + du, c.v + dv, detail::kPlotHazard);
      }
    }
  }
  detail::draw_polyline(canvas, rr.nominal, ego, rr.grid, detail::kPlotNominal);
  detail::draw_polyline(canvas, rr.optimized, ego, rr.grid, detail::kPlotOptimized);

  std::ofstream f(path, std::ios::binary);
  if (!f) {
    throw std::runtime_error("emit_plot: cannot open " + path);
  }
  f << "P5\n" << rr.grid.width << " " << rr.grid.height << "\n255\n";
  f.write(reinterpret_cast<const char*>(canvas.pixels.data()),
          static_cast<std::streamsize>(canvas.pixels.size()));
  if (!f) {
    throw std::runtime_error("emit_plot: write failed for " + path);
  }
}

}  // namespace react
