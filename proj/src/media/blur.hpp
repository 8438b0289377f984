#pragma once

#include <optional>
#include <span>
#include <vector>

#include "media/image.hpp"
#include "media/regions.hpp"

namespace ddpdeid {

struct BlurParams {
  double padding = 0.10;       // fraction of each dimension added on every side
  double sigma_divisor = 6.0;  // sigma = max(w, h) / divisor
  int min_kernel = 31;
};

struct Rect {
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;

  bool empty() const { return w <= 0 || h <= 0; }
  bool operator==(const Rect&) const = default;
};

Rect clip_rect(Rect r, int width, int height);
// The region grown by the padding fraction (rounded up) and clipped.
Rect padded_region(const Region& r, int width, int height, const BlurParams& params = {});
double blur_sigma(const Rect& r, const BlurParams& params = {});
int kernel_size(double sigma, const BlurParams& params = {});
// Normalised 1-D Gaussian of the given odd size.
std::vector<double> gaussian_kernel(double sigma, int size);

// Index into [0, n) mirrored around the edges without repeating them.
int reflect101(int i, int n);

// Replaces the pixels of `area` with the Gaussian-blurred image; samples
// outside `area` (mirrored at the image border) feed the convolution but are
// never written.
void blur_rect(Image& img, const Rect& area, double sigma, int size);

// Blurs every region in turn. Regions that clip to nothing are skipped with a
// warning. Returns how many regions were applied.
std::size_t blur_regions(Image& img, std::span<const Region> regions, const BlurParams& params = {});

}  // namespace ddpdeid
