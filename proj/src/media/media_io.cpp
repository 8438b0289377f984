#include "media/media_io.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cstring>
#include <fstream>
#include <opencv2/imgcodecs.hpp>
#include <opencv2/videoio.hpp>

#include "common/errors.hpp"

namespace ddpdeid {
namespace fs = std::filesystem;
namespace {

Image from_mat(const cv::Mat& m) {
  cv::Mat src = m.isContinuous() ? m : m.clone();
  Image img(src.cols, src.rows, src.channels());
  std::memcpy(img.data.data(), src.data, img.data.size());
  return img;
}

cv::Mat to_mat(const Image& img) {
  cv::Mat m(img.height, img.width, CV_8UC(img.channels));
  std::memcpy(m.data, img.data.data(), img.data.size());
  return m;
}

class CvReader final : public FrameReader {
 public:
  explicit CvReader(cv::VideoCapture cap) : cap_(std::move(cap)) {
    info_.width = static_cast<int>(cap_.get(cv::CAP_PROP_FRAME_WIDTH));
    info_.height = static_cast<int>(cap_.get(cv::CAP_PROP_FRAME_HEIGHT));
    info_.fps = cap_.get(cv::CAP_PROP_FPS);
    if (!(info_.fps > 0)) info_.fps = 25;
  }
  const VideoInfo& info() const override { return info_; }
  std::optional<Image> next() override {
    cv::Mat frame;
    if (!cap_.read(frame) || frame.empty()) return std::nullopt;
    return from_mat(frame);
  }

 private:
  cv::VideoCapture cap_;
  VideoInfo info_;
};

class CvWriter final : public FrameWriter {
 public:
  explicit CvWriter(cv::VideoWriter w) : writer_(std::move(w)) {}
  void write(const Image& frame) override { writer_.write(to_mat(frame)); }
  void close() override { writer_.release(); }

 private:
  cv::VideoWriter writer_;
};

}  // namespace

std::optional<Image> load_image(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (bytes.empty()) return std::nullopt;
  cv::Mat m;
  try {
    m = cv::imdecode(bytes, cv::IMREAD_COLOR | cv::IMREAD_IGNORE_ORIENTATION);
  } catch (const cv::Exception&) {
    return std::nullopt;
  }
  if (m.empty()) return std::nullopt;
  return from_mat(m);
}

std::optional<std::string> encode_jpeg(const Image& img, int jpeg_quality) {
  std::vector<std::uint8_t> buf;
  try {
    if (!cv::imencode(".jpg", to_mat(img), buf, {cv::IMWRITE_JPEG_QUALITY, jpeg_quality})) return std::nullopt;
  } catch (const cv::Exception&) {
    return std::nullopt;
  }
  return std::string(buf.begin(), buf.end());
}

bool save_image(const fs::path& path, const Image& img, int jpeg_quality) {
  const auto bytes = encode_jpeg(img, jpeg_quality);
  if (!bytes) return false;
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(bytes->data(), static_cast<std::streamsize>(bytes->size()));
  return static_cast<bool>(out);
}

std::unique_ptr<FrameReader> OpenCvTranscoder::open_reader(const fs::path& path) {
  if (!fs::is_regular_file(path) || fs::file_size(path) == 0) return nullptr;
  cv::VideoCapture cap;
  try {
    if (!cap.open(path.string(), cv::CAP_FFMPEG)) return nullptr;
  } catch (const cv::Exception&) {
    return nullptr;
  }
  return std::make_unique<CvReader>(std::move(cap));
}

std::unique_ptr<FrameWriter> OpenCvTranscoder::open_writer(const fs::path& path, const VideoInfo& info) {
  if (fourcc_.size() != 4) throw InputError("video codec must be a four-character code: " + fourcc_);
  fs::create_directories(path.parent_path());
  cv::VideoWriter w;
  const int fourcc = cv::VideoWriter::fourcc(fourcc_[0], fourcc_[1], fourcc_[2], fourcc_[3]);
  try {
    if (!w.open(path.string(), cv::CAP_FFMPEG, fourcc, info.fps, cv::Size(info.width, info.height), true)) {
      return nullptr;
    }
  } catch (const cv::Exception&) {
    return nullptr;
  }
  return std::make_unique<CvWriter>(std::move(w));
}

MediaOutcome write_placeholder(const fs::path& out, std::string reason) {
  fs::create_directories(out.parent_path());
  std::ofstream(out, std::ios::binary | std::ios::trunc);
  spdlog::warn("{}: {}; wrote empty placeholder", out.string(), reason);
  return MediaOutcome{true, 0, 0, std::move(reason)};
}

MediaOutcome deidentify_image(const fs::path& in, const fs::path& out, std::span<const Region> regions,
                              const BlurParams& params) {
  auto img = load_image(in);
  if (!img) return write_placeholder(out, "image could not be decoded");
  MediaOutcome result;
  result.frames = 1;
  result.regions_applied = blur_regions(*img, regions, params);
  if (!save_image(out, *img)) return write_placeholder(out, "image could not be encoded");
  return result;
}

MediaOutcome deidentify_video(const fs::path& in, const fs::path& out, std::span<const Region> regions,
                              VideoTranscoder& transcoder, const BlurParams& params) {
  auto reader = transcoder.open_reader(in);
  if (!reader) return write_placeholder(out, "video could not be opened");
  auto first = reader->next();
  if (!first) return write_placeholder(out, "video has no decodable frames");

  VideoInfo info = reader->info();
  info.width = first->width;
  info.height = first->height;
  auto writer = transcoder.open_writer(out, info);
  if (!writer) return write_placeholder(out, "video encoder could not be opened");

  MediaOutcome result;
  int last_frame = -1;
  for (const Region& r : regions) last_frame = std::max(last_frame, r.frame.value_or(-1));
  std::optional<Image> frame = std::move(first);
  std::vector<Region> applicable;
  for (int index = 0; frame; ++index, frame = reader->next()) {
    applicable.clear();
    for (const Region& r : regions) {
      if (!r.frame || *r.frame == index) applicable.push_back(r);
    }
    result.regions_applied += blur_regions(*frame, applicable, params);
    writer->write(*frame);
    ++result.frames;
  }
  writer->close();
  if (last_frame >= 0 && static_cast<std::size_t>(last_frame) >= result.frames) {
    spdlog::warn("{}: regions reference frame {} but the video has {} frames", in.string(), last_frame,
                 result.frames);
  }
  return result;
}

}  // namespace ddpdeid
