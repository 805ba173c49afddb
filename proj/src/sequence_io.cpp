#include "ftec/sequence_io.hpp"

#include <fstream>
#include <sstream>

#include "ftec/error.hpp"
#include "ftec/image_io.hpp"

namespace ftec {

namespace fs = std::filesystem;

SequenceFormat sequence_format_from_string(const std::string& name) {
  if (name == "yuv420" || name == "yuv") return SequenceFormat::Yuv420;
  if (name == "pgm") return SequenceFormat::Pgm;
  if (name == "png") return SequenceFormat::Png;
  if (name == "synthetic") return SequenceFormat::Synthetic;
  throw Error(ErrorCode::UnknownFormat, "unknown input format '" + name + "'");
}

const char* to_string(SequenceFormat f) {
  switch (f) {
    case SequenceFormat::Yuv420: return "yuv420";
    case SequenceFormat::Pgm: return "pgm";
    case SequenceFormat::Png: return "png";
    case SequenceFormat::Synthetic: return "synthetic";
  }
  return "unknown";
}

namespace {

std::vector<Frame> load_yuv420(const fs::path& path, int width, int height) {
  if (width <= 0 || height <= 0 || width % 2 || height % 2) {
    std::ostringstream msg;
    msg << "YUV 4:2:0 needs positive even dimensions, got " << width << "x" << height;
    throw Error(ErrorCode::InvalidConfig, msg.str());
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());

  const std::size_t luma = static_cast<std::size_t>(width) * height;
  const std::size_t chroma = luma / 4;
  const std::size_t frame_bytes = luma + 2 * chroma;
  const auto bytes = static_cast<std::size_t>(fs::file_size(path));
  if (bytes == 0 || bytes % frame_bytes != 0) {
    std::ostringstream msg;
    msg << path.string() << ": " << bytes << " bytes is not a whole number of "
        << frame_bytes << "-byte frames";
    throw Error(ErrorCode::TruncatedFile, msg.str());
  }

  auto read_plane = [&](int w, int h) {
    std::vector<std::uint8_t> buf(static_cast<std::size_t>(w) * h);
    in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    if (in.gcount() != static_cast<std::streamsize>(buf.size()))
      throw Error(ErrorCode::TruncatedFile, path.string() + " ends early");
    return Plane(w, h, std::move(buf));
  };

  std::vector<Frame> frames(bytes / frame_bytes);
  for (Frame& f : frames) {
    f.luma = read_plane(width, height);
    f.cb = read_plane(width / 2, height / 2);
    f.cr = read_plane(width / 2, height / 2);
  }
  return frames;
}

}  // namespace

std::vector<Frame> load_sequence(const fs::path& path, SequenceFormat format,
                                 int width, int height) {
  if (!fs::exists(path)) throw Error(ErrorCode::Io, "no such file: " + path.string());
  switch (format) {
    case SequenceFormat::Yuv420: return load_yuv420(path, width, height);
    case SequenceFormat::Pgm: return {Frame{read_pgm(path), {}, {}}};
    case SequenceFormat::Png: return {Frame{read_png(path), {}, {}}};
    case SequenceFormat::Synthetic: break;
  }
  throw Error(ErrorCode::UnknownFormat, "synthetic sequences are generated, not loaded");
}

void write_yuv420(const fs::path& path, std::span<const Frame> frames) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  auto put = [&](const Plane& p) {
    out.write(reinterpret_cast<const char*>(p.samples().data()),
              static_cast<std::streamsize>(p.samples().size()));
  };
  for (const Frame& f : frames) {
    if (f.luma.width() % 2 || f.luma.height() % 2)
      throw Error(ErrorCode::InvalidConfig, "YUV 4:2:0 needs even frame dimensions");
    put(f.luma);
    const Plane neutral(f.luma.width() / 2, f.luma.height() / 2, 128);
    put(f.cb ? *f.cb : neutral);
    put(f.cr ? *f.cr : neutral);
  }
  if (!out) throw Error(ErrorCode::Io, "failed writing " + path.string());
}

}  // namespace ftec
