#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>

#include "media/blur.hpp"
#include "media/image.hpp"
#include "media/regions.hpp"

namespace ddpdeid {

std::optional<Image> load_image(const std::filesystem::path& path);
std::optional<std::string> encode_jpeg(const Image& img, int jpeg_quality = 95);
bool save_image(const std::filesystem::path& path, const Image& img, int jpeg_quality = 95);

struct VideoInfo {
  int width = 0;
  int height = 0;
  double fps = 0;
};

class FrameReader {
 public:
  virtual ~FrameReader() = default;
  virtual const VideoInfo& info() const = 0;
  // nullopt at the end of the stream
  virtual std::optional<Image> next() = 0;
};

class FrameWriter {
 public:
  virtual ~FrameWriter() = default;
  virtual void write(const Image& frame) = 0;
  virtual void close() = 0;
};

// Codec boundary for video: frames in, frames out. Writers produce video
// streams only; audio is never carried over.
class VideoTranscoder {
 public:
  virtual ~VideoTranscoder() = default;
  virtual std::unique_ptr<FrameReader> open_reader(const std::filesystem::path& path) = 0;
  virtual std::unique_ptr<FrameWriter> open_writer(const std::filesystem::path& path,
                                                   const VideoInfo& info) = 0;
};

// OpenCV's FFmpeg backend. "mp4v" by default; "FFV1" into .mkv is lossless.
class OpenCvTranscoder final : public VideoTranscoder {
 public:
  explicit OpenCvTranscoder(std::string fourcc = "mp4v") : fourcc_(std::move(fourcc)) {}
  std::unique_ptr<FrameReader> open_reader(const std::filesystem::path& path) override;
  std::unique_ptr<FrameWriter> open_writer(const std::filesystem::path& path,
                                           const VideoInfo& info) override;

 private:
  std::string fourcc_;
};

struct MediaOutcome {
  bool placeholder = false;  // input could not be processed; a zero-byte file was written
  std::size_t frames = 0;
  std::size_t regions_applied = 0;
  std::string message;
};

// Undecodable input is never copied through: the output becomes an empty
// placeholder file.
MediaOutcome write_placeholder(const std::filesystem::path& out, std::string reason);

MediaOutcome deidentify_image(const std::filesystem::path& in, const std::filesystem::path& out,
                              std::span<const Region> regions, const BlurParams& params = {});

// Regions with a frame index apply to that frame only; regions without one
// apply to every frame.
MediaOutcome deidentify_video(const std::filesystem::path& in, const std::filesystem::path& out,
                              std::span<const Region> regions, VideoTranscoder& transcoder,
                              const BlurParams& params = {});

}  // namespace ddpdeid
