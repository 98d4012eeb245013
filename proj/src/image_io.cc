#include "trisweep/image_io.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <string>

#include "trisweep/error.h"

namespace trisweep {
namespace {

static_assert(std::endian::native == std::endian::little,
              "PFM writer assumes a little-endian host");

std::ofstream OpenOut(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  return out;
}

std::ifstream OpenIn(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  return in;
}

// Reads one whitespace-delimited header token, skipping '#' comments.
std::string Token(std::istream& in, const std::filesystem::path& path) {
  std::string token;
  while (in >> token) {
    if (token[0] != '#') return token;
    std::string rest;
    std::getline(in, rest);
  }
  throw Error(ErrorCode::kParse, "truncated header in " + path.string());
}

int PositiveInt(std::istream& in, const std::filesystem::path& path) {
  const std::string token = Token(in, path);
  try {
    const int value = std::stoi(token);
    if (value > 0) return value;
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::kParse, "bad header value '" + token + "' in " +
                                     path.string());
}

uint8_t Quantize(double v) {
  return static_cast<uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
}

void WriteNetpbm(const std::filesystem::path& path, const Image& image,
                 const char* magic, int channels) {
  if (image.channels() != channels) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string(magic) + " needs " + std::to_string(channels) +
                    " channel(s)");
  }
  auto out = OpenOut(path);
  out << magic << '\n' << image.width() << ' ' << image.height() << "\n255\n";
  std::vector<uint8_t> bytes(image.size());
  std::transform(image.data().begin(), image.data().end(), bytes.begin(),
                 Quantize);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIo, "write failed: " + path.string());
}

Image ReadNetpbm(const std::filesystem::path& path, const char* magic,
                 int channels) {
  auto in = OpenIn(path);
  if (Token(in, path) != magic) {
    throw Error(ErrorCode::kParse,
                path.string() + " is not a " + magic + " file");
  }
  const int width = PositiveInt(in, path);
  const int height = PositiveInt(in, path);
  if (PositiveInt(in, path) != 255) {
    throw Error(ErrorCode::kParse, "only maxval 255 is supported");
  }
  in.get();
  std::vector<uint8_t> bytes(static_cast<size_t>(width) * height * channels);
  in.read(reinterpret_cast<char*>(bytes.data()),
          static_cast<std::streamsize>(bytes.size()));
  if (in.gcount() != static_cast<std::streamsize>(bytes.size())) {
    throw Error(ErrorCode::kParse, "truncated pixel data in " + path.string());
  }
  Image image(width, height, channels);
  std::transform(bytes.begin(), bytes.end(), image.data().begin(),
                 [](uint8_t b) { return b / 255.0; });
  return image;
}

}  // namespace

void WritePfm(const std::filesystem::path& path, const Image& image) {
  if (image.channels() != 1 && image.channels() != 3) {
    throw Error(ErrorCode::kInvalidArgument, "PFM needs 1 or 3 channels");
  }
  auto out = OpenOut(path);
  out << (image.channels() == 3 ? "PF" : "Pf") << '\n'
      << image.width() << ' ' << image.height() << "\n-1.0\n";
  const size_t row = static_cast<size_t>(image.width()) * image.channels();
  std::vector<float> buffer(row);
  for (int y = image.height() - 1; y >= 0; --y) {
    const auto src = image.data().subspan(y * row, row);
    std::transform(src.begin(), src.end(), buffer.begin(),
                   [](double v) { return static_cast<float>(v); });
    out.write(reinterpret_cast<const char*>(buffer.data()),
              static_cast<std::streamsize>(row * sizeof(float)));
  }
  if (!out) throw Error(ErrorCode::kIo, "write failed: " + path.string());
}

Image ReadPfm(const std::filesystem::path& path) {
  auto in = OpenIn(path);
  const std::string magic = Token(in, path);
  int channels = 0;
  if (magic == "Pf") channels = 1;
  else if (magic == "PF") channels = 3;
  else throw Error(ErrorCode::kParse, path.string() + " is not a PFM file");
  const int width = PositiveInt(in, path);
  const int height = PositiveInt(in, path);
  const double scale = std::stod(Token(in, path));
  if (!(scale < 0.0)) {
    throw Error(ErrorCode::kParse, "only little-endian PFM is supported");
  }
  in.get();
  Image image(width, height, channels);
  const size_t row = static_cast<size_t>(width) * channels;
  std::vector<float> buffer(row);
  for (int y = height - 1; y >= 0; --y) {
    in.read(reinterpret_cast<char*>(buffer.data()),
            static_cast<std::streamsize>(row * sizeof(float)));
    if (!in) {
      throw Error(ErrorCode::kParse, "truncated pixel data in " + path.string());
    }
    std::copy(buffer.begin(), buffer.end(), image.data().begin() + y * row);
  }
  return image;
}

void WritePpm(const std::filesystem::path& path, const Image& rgb) {
  WriteNetpbm(path, rgb, "P6", 3);
}

Image ReadPpm(const std::filesystem::path& path) {
  return ReadNetpbm(path, "P6", 3);
}

void WritePgm(const std::filesystem::path& path, const Image& gray) {
  WriteNetpbm(path, gray, "P5", 1);
}

Image ReadPgm(const std::filesystem::path& path) {
  return ReadNetpbm(path, "P5", 1);
}

void WriteMaskPgm(const std::filesystem::path& path, const Mask& mask) {
  Image gray(mask.width(), mask.height(), 1);
  std::transform(mask.data().begin(), mask.data().end(), gray.data().begin(),
                 [](uint8_t m) { return m ? 1.0 : 0.0; });
  WritePgm(path, gray);
}

Mask ReadMaskPgm(const std::filesystem::path& path) {
  const Image gray = ReadPgm(path);
  Mask mask(gray.width(), gray.height(), 1);
  std::transform(gray.data().begin(), gray.data().end(), mask.data().begin(),
                 [](double v) { return static_cast<uint8_t>(v >= 0.5); });
  return mask;
}

}  // namespace trisweep
