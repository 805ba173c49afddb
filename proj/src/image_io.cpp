#include "ftec/image_io.hpp"

#include <png.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "ftec/error.hpp"

namespace ftec {

namespace fs = std::filesystem;

namespace {

// Next whitespace-delimited header token, skipping '#' comments.
std::string pnm_token(std::istream& in) {
  std::string tok;
  char c;
  while (in.get(c)) {
    if (c == '#') {
      std::string rest;
      std::getline(in, rest);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!tok.empty()) break;
      continue;
    }
    tok.push_back(c);
  }
  return tok;
}

int pnm_int(std::istream& in, const fs::path& path) {
  const std::string tok = pnm_token(in);
  try {
    std::size_t used = 0;
    const int v = std::stoi(tok, &used);
    if (used == tok.size()) return v;
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::TruncatedFile, "malformed PGM header in " + path.string());
}

void write_png_buffer(const fs::path& path, int width, int height,
                      png_uint_32 format, const std::uint8_t* data) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(width);
  image.height = static_cast<png_uint_32>(height);
  image.format = format;
  if (!png_image_write_to_file(&image, path.c_str(), 0, data, 0, nullptr))
    throw Error(ErrorCode::Io,
                "cannot write " + path.string() + ": " + image.message);
}

}  // namespace

Plane read_pgm(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  const std::string magic = pnm_token(in);
  if (magic != "P5" && magic != "P2")
    throw Error(ErrorCode::UnknownFormat, path.string() + " is not a graymap");
  const int w = pnm_int(in, path);
  const int h = pnm_int(in, path);
  const int maxval = pnm_int(in, path);
  if (w <= 0 || h <= 0 || maxval <= 0 || maxval > 255)
    throw Error(ErrorCode::UnknownFormat,
                path.string() + ": only 8-bit graymaps are supported");

  std::vector<std::uint8_t> samples(static_cast<std::size_t>(w) * h);
  if (magic == "P5") {
    in.read(reinterpret_cast<char*>(samples.data()),
            static_cast<std::streamsize>(samples.size()));
    if (in.gcount() != static_cast<std::streamsize>(samples.size()))
      throw Error(ErrorCode::TruncatedFile, path.string() + " ends early");
  } else {
    for (auto& s : samples) {
      int v;
      if (!(in >> v)) throw Error(ErrorCode::TruncatedFile, path.string() + " ends early");
      s = static_cast<std::uint8_t>(v);
    }
  }
  if (maxval != 255)
    for (auto& s : samples) s = static_cast<std::uint8_t>(std::lround(s * 255.0 / maxval));
  return Plane(w, h, std::move(samples));
}

void write_pgm(const fs::path& path, const Plane& plane) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << "P5\n" << plane.width() << " " << plane.height() << "\n255\n";
  out.write(reinterpret_cast<const char*>(plane.samples().data()),
            static_cast<std::streamsize>(plane.samples().size()));
  if (!out) throw Error(ErrorCode::Io, "failed writing " + path.string());
}

Plane read_png(const fs::path& path) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, path.c_str())) {
    const std::string why = image.message;
    throw Error(fs::exists(path) ? ErrorCode::UnknownFormat : ErrorCode::Io,
                "cannot read " + path.string() + ": " + why);
  }
  const bool color = (image.format & PNG_FORMAT_FLAG_COLOR) != 0;
  image.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  const int w = static_cast<int>(image.width);
  const int h = static_cast<int>(image.height);
  std::vector<std::uint8_t> buffer(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, buffer.data(), 0, nullptr)) {
    const std::string why = image.message;
    png_image_free(&image);
    throw Error(ErrorCode::TruncatedFile, "cannot decode " + path.string() + ": " + why);
  }
  if (!color) return Plane(w, h, std::move(buffer));

  std::vector<std::uint8_t> luma(static_cast<std::size_t>(w) * h);
  for (std::size_t i = 0; i < luma.size(); ++i) {
    const std::uint8_t* px = buffer.data() + 3 * i;
    luma[i] = to_sample(0.299 * px[0] + 0.587 * px[1] + 0.114 * px[2]);
  }
  return Plane(w, h, std::move(luma));
}

void write_png(const fs::path& path, const Plane& plane) {
  write_png_buffer(path, plane.width(), plane.height(), PNG_FORMAT_GRAY,
                   plane.samples().data());
}

void write_png(const fs::path& path, const RgbImage& image) {
  write_png_buffer(path, image.width, image.height, PNG_FORMAT_RGB,
                   image.rgb.data());
}

}  // namespace ftec
