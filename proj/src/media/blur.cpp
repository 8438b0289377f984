#include "media/blur.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>

namespace ddpdeid {

Rect clip_rect(Rect r, int width, int height) {
  const int x0 = std::max(r.x, 0);
  const int y0 = std::max(r.y, 0);
  const int x1 = std::min(r.x + r.w, width);
  const int y1 = std::min(r.y + r.h, height);
  return Rect{x0, y0, std::max(0, x1 - x0), std::max(0, y1 - y0)};
}

Rect padded_region(const Region& r, int width, int height, const BlurParams& params) {
  // The epsilon keeps 30 * 0.1 from rounding up to 4.
  const int px = static_cast<int>(std::ceil(r.w * params.padding - 1e-9));
  const int py = static_cast<int>(std::ceil(r.h * params.padding - 1e-9));
  return clip_rect(Rect{r.x - px, r.y - py, r.w + 2 * px, r.h + 2 * py}, width, height);
}

double blur_sigma(const Rect& r, const BlurParams& params) {
  return std::max(r.w, r.h) / params.sigma_divisor;
}

int kernel_size(double sigma, const BlurParams& params) {
  int k = static_cast<int>(std::ceil(6.0 * sigma + 1.0));
  if (k % 2 == 0) ++k;
  return std::max(k, params.min_kernel | 1);
}

std::vector<double> gaussian_kernel(double sigma, int size) {
  std::vector<double> k(static_cast<std::size_t>(size));
  const int r = size / 2;
  double sum = 0;
  for (int i = -r; i <= r; ++i) {
    const double v = std::exp(-(i * i) / (2.0 * sigma * sigma));
    k[static_cast<std::size_t>(i + r)] = v;
    sum += v;
  }
  for (double& v : k) v /= sum;
  return k;
}

int reflect101(int i, int n) {
  if (n == 1) return 0;
  const int period = 2 * (n - 1);
  i = std::abs(i) % period;
  return i < n ? i : period - i;
}

void blur_rect(Image& img, const Rect& area, double sigma, int size) {
  if (area.empty() || img.empty() || sigma <= 0) return;
  const std::vector<double> k = gaussian_kernel(sigma, size);
  const int r = size / 2;
  const int C = img.channels;

  // Horizontal pass for every source row the vertical pass will read.
  std::vector<char> needed(static_cast<std::size_t>(img.height), 0);
  for (int y = area.y; y < area.y + area.h; ++y)
    for (int j = -r; j <= r; ++j) needed[static_cast<std::size_t>(reflect101(y + j, img.height))] = 1;

  std::vector<int> xs(static_cast<std::size_t>(area.w + 2 * r));
  for (int i = 0; i < static_cast<int>(xs.size()); ++i) xs[static_cast<std::size_t>(i)] = reflect101(area.x - r + i, img.width);

  const auto row_stride = static_cast<std::size_t>(area.w * C);
  std::vector<double> tmp(static_cast<std::size_t>(img.height) * row_stride, 0.0);
  for (int y = 0; y < img.height; ++y) {
    if (!needed[static_cast<std::size_t>(y)]) continue;
    double* out = &tmp[static_cast<std::size_t>(y) * row_stride];
    for (int x = 0; x < area.w; ++x) {
      for (int c = 0; c < C; ++c) {
        double acc = 0;
        for (int i = 0; i < size; ++i) acc += k[static_cast<std::size_t>(i)] * img.at(xs[static_cast<std::size_t>(x + i)], y, c);
        out[x * C + c] = acc;
      }
    }
  }

  for (int y = area.y; y < area.y + area.h; ++y) {
    for (int x = 0; x < area.w; ++x) {
      for (int c = 0; c < C; ++c) {
        double acc = 0;
        for (int j = -r; j <= r; ++j) {
          const int sy = reflect101(y + j, img.height);
          acc += k[static_cast<std::size_t>(j + r)] * tmp[static_cast<std::size_t>(sy) * row_stride + static_cast<std::size_t>(x * C + c)];
        }
        img.at(area.x + x, y, c) = static_cast<std::uint8_t>(std::clamp(std::lround(acc), 0L, 255L));
      }
    }
  }
}

std::size_t blur_regions(Image& img, std::span<const Region> regions, const BlurParams& params) {
  std::size_t applied = 0;
  for (const Region& region : regions) {
    const Rect inside = clip_rect(Rect{region.x, region.y, region.w, region.h}, img.width, img.height);
    if (inside.empty()) {
      spdlog::warn("region {}x{}+{}+{} lies outside the {}x{} image; skipped", region.w, region.h,
                   region.x, region.y, img.width, img.height);
      continue;
    }
    const double sigma = blur_sigma(inside, params);
    blur_rect(img, padded_region(region, img.width, img.height, params), sigma,
              kernel_size(sigma, params));
    ++applied;
  }
  return applied;
}

}  // namespace ddpdeid
