#pragma once

#include <cassert>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace trisweep {

// Dense row-major image plane with interleaved channels.
template <typename T>
class Plane {
 public:
  Plane() = default;
  Plane(int width, int height, int channels = 1, T fill = T{})
      : width_(width),
        height_(height),
        channels_(channels),
        data_(static_cast<size_t>(width) * height * channels, fill) {}

  int width() const { return width_; }
  int height() const { return height_; }
  int channels() const { return channels_; }
  size_t size() const { return data_.size(); }
  size_t pixel_count() const { return static_cast<size_t>(width_) * height_; }
  bool empty() const { return data_.empty(); }

  bool SameShape(int width, int height) const {
    return width_ == width && height_ == height;
  }
  template <typename U>
  bool SameShape(const Plane<U>& other) const {
    return width_ == other.width() && height_ == other.height();
  }

  T& at(int x, int y, int c = 0) {
    assert(x >= 0 && x < width_ && y >= 0 && y < height_ && c < channels_);
    return data_[(static_cast<size_t>(y) * width_ + x) * channels_ + c];
  }
  const T& at(int x, int y, int c = 0) const {
    assert(x >= 0 && x < width_ && y >= 0 && y < height_ && c < channels_);
    return data_[(static_cast<size_t>(y) * width_ + x) * channels_ + c];
  }

  // All channels of one pixel.
  std::span<T> pixel(int x, int y) {
    return {data_.data() + (static_cast<size_t>(y) * width_ + x) * channels_,
            static_cast<size_t>(channels_)};
  }
  std::span<const T> pixel(int x, int y) const {
    return {data_.data() + (static_cast<size_t>(y) * width_ + x) * channels_,
            static_cast<size_t>(channels_)};
  }

  std::span<T> data() { return data_; }
  std::span<const T> data() const { return data_; }

  bool operator==(const Plane&) const = default;

 private:
  int width_ = 0;
  int height_ = 0;
  int channels_ = 0;
  std::vector<T> data_;
};

using Image = Plane<double>;
using Mask = Plane<uint8_t>;

// Depth in meters, 0 marks an invalid pixel.
struct DepthMap {
  Image depth;
  int level = 0;

  int width() const { return depth.width(); }
  int height() const { return depth.height(); }
  bool valid(int x, int y) const { return depth.at(x, y) > 0.0; }
};

struct AlphaMap {
  Image alpha;

  int width() const { return alpha.width(); }
  int height() const { return alpha.height(); }
};

// Size of a pyramid level: each level halves the previous, rounding up.
inline int LevelExtent(int extent, int level) {
  for (int l = 0; l < level; ++l) extent = (extent + 1) / 2;
  return extent;
}

}  // namespace trisweep
