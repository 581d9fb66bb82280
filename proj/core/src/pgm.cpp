#include "drest/pgm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace drest {

namespace {

// Reads the next header token, skipping whitespace and '#' comment lines.
std::string next_token(std::istream& in, const std::string& path) {
  int c = in.get();
  while (c != EOF && (std::isspace(c) || c == '#')) {
    if (c == '#')
      while (c != EOF && c != '\n') c = in.get();
    c = in.get();
  }
  std::string token;
  while (c != EOF && !std::isspace(c)) {
    token.push_back(static_cast<char>(c));
    c = in.get();
  }
  if (token.empty()) throw std::runtime_error(path + ": truncated PGM header");
  return token;
}

int next_int(std::istream& in, const std::string& path, const char* what) {
  const std::string token = next_token(in, path);
  try {
    std::size_t used = 0;
    const int value = std::stoi(token, &used);
    if (used != token.size() || value < 0) throw std::invalid_argument(token);
    return value;
  } catch (const std::exception&) {
    throw std::runtime_error(path + ": invalid PGM " + what + " '" + token + "'");
  }
}

}  // namespace

Image load_image(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(path + ": cannot open for reading");

  const std::string magic = next_token(in, path);
  if (magic == "P3" || magic == "P6")
    throw std::runtime_error(path + ": color PNM (" + magic + ") not supported, expected grayscale PGM");
  if (magic != "P2" && magic != "P5")
    throw std::runtime_error(path + ": not a PGM file (magic '" + magic + "', expected P2 or P5)");

  const int width = next_int(in, path, "width");
  const int height = next_int(in, path, "height");
  const int maxval = next_int(in, path, "maxval");
  if (width <= 0 || height <= 0)
    throw std::runtime_error(path + ": invalid PGM dimensions " + std::to_string(width) + "x" +
                             std::to_string(height));
  if (maxval <= 0 || maxval > 255)
    throw std::runtime_error(path + ": unsupported PGM maxval " + std::to_string(maxval) +
                             " (only 8-bit supported)");

  Image img(height, width);
  if (magic == "P5") {
    // Binary: exactly one whitespace byte after maxval, then raw samples.
    std::vector<unsigned char> buf(static_cast<std::size_t>(width) * height);
    in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    if (static_cast<std::size_t>(in.gcount()) != buf.size())
      throw std::runtime_error(path + ": truncated P5 pixel data");
    for (int y = 0; y < height; ++y)
      for (int x = 0; x < width; ++x) {
        const int v = buf[static_cast<std::size_t>(y) * width + x];
        if (v > maxval)
          throw std::runtime_error(path + ": pixel value " + std::to_string(v) + " exceeds maxval");
        img(y, x) = v;
      }
  } else {
    for (int y = 0; y < height; ++y)
      for (int x = 0; x < width; ++x) {
        const int v = next_int(in, path, "pixel");
        if (v > maxval)
          throw std::runtime_error(path + ": pixel value " + std::to_string(v) + " exceeds maxval");
        img(y, x) = v;
      }
  }
  return img;
}

void save_image(const Image& img, const std::string& path, bool clamp) {
  if (img.size() == 0) throw std::invalid_argument("save_image: empty image");

  std::vector<unsigned char> buf(static_cast<std::size_t>(img.rows()) * img.cols());
  for (Eigen::Index y = 0; y < img.rows(); ++y)
    for (Eigen::Index x = 0; x < img.cols(); ++x) {
      long v = std::lround(img(y, x));
      if (clamp) {
        v = std::clamp(v, 0L, 255L);
      } else if (v < 0 || v > 255) {
        throw std::invalid_argument("save_image: value " + std::to_string(img(y, x)) +
                                    " at (" + std::to_string(y) + "," + std::to_string(x) +
                                    ") outside [0,255] and clamp is off");
      }
      buf[static_cast<std::size_t>(y) * img.cols() + x] = static_cast<unsigned char>(v);
    }

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << "P5\n" << img.cols() << " " << img.rows() << "\n255\n";
  out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  if (!out) throw std::runtime_error(path + ": write failed");
}

}  // namespace drest
