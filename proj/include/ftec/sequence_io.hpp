#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "ftec/imaging.hpp"

namespace ftec {

enum class SequenceFormat { Yuv420, Pgm, Png, Synthetic };

/// Throws UnknownFormat.
SequenceFormat sequence_format_from_string(const std::string& name);
const char* to_string(SequenceFormat f);

/// Planar 8-bit YUV 4:2:0 frames (Y, then Cb, then Cr, each frame in turn)
/// or a single luma-only PGM/PNG image. Width and height are needed for
/// YUV only. Throws TruncatedFile when the byte count is not a whole
/// number of frames.
std::vector<Frame> load_sequence(const std::filesystem::path& path,
                                 SequenceFormat format, int width = 0,
                                 int height = 0);

/// Frames without chroma are written with neutral (128) chroma.
void write_yuv420(const std::filesystem::path& path, std::span<const Frame> frames);

}  // namespace ftec
