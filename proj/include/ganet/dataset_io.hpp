/* Copyright 2026 The ganet Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#ifndef GANET_DATASET_IO_HPP_
#define GANET_DATASET_IO_HPP_

#include <cctype>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "ganet/box.hpp"
#include "ganet/error.hpp"
#include "ganet/image.hpp"
#include "ganet/synth.hpp"

namespace ganet {

namespace fs = std::filesystem;

// Binary PGM (P5) for one channel, PPM (P6) for three; maxval 255.
inline std::string encode_pnm(const Image& img) {
  require(img.channels == 1 || img.channels == 3, "synthetic-data", "PNM output supports 1 or 3 channels");
  std::string out = (img.channels == 1 ? "P5\n" : "P6\n") + std::to_string(img.width) + " " +
                    std::to_string(img.height) + "\n255\n";
  out.append(reinterpret_cast<const char*>(img.pixels.data()), img.pixels.size());
  return out;
}

inline Image decode_pnm(const std::string& data, const std::string& origin = "<memory>") {
  std::size_t pos = 0;
  auto bad = [&origin](const std::string& what) { fail("synthetic-data", origin + ": malformed PNM header: " + what); };
  auto skip_space = [&] {
    while (pos < data.size()) {
      if (data[pos] == '#') {
        while (pos < data.size() && data[pos] != '\n') ++pos;
      } else if (std::isspace(static_cast<unsigned char>(data[pos]))) {
        ++pos;
      } else {
        break;
      }
    }
  };
  auto number = [&]() -> std::size_t {
    skip_space();
    std::size_t start = pos;
    while (pos < data.size() && std::isdigit(static_cast<unsigned char>(data[pos]))) ++pos;
    if (start == pos) bad("expected an integer at byte " + std::to_string(start));
    return std::stoul(data.substr(start, pos - start));
  };
  if (data.size() < 2 || data[0] != 'P' || (data[1] != '5' && data[1] != '6')) bad("magic must be P5 or P6");
  pos = 2;
  Image img;
  img.channels = data[1] == '5' ? 1 : 3;
  img.width = number();
  img.height = number();
  const std::size_t maxval = number();
  if (maxval != 255) bad("maxval must be 255");
  if (pos >= data.size() || !std::isspace(static_cast<unsigned char>(data[pos]))) bad("missing whitespace after maxval");
  ++pos;
  const std::size_t count = img.width * img.height * img.channels;
  if (data.size() - pos != count) bad("expected " + std::to_string(count) + " pixel bytes");
  img.pixels.assign(reinterpret_cast<const std::uint8_t*>(data.data() + pos),
                    reinterpret_cast<const std::uint8_t*>(data.data() + pos + count));
  return img;
}

inline std::string read_file(const fs::path& path, const std::string& module) {
  std::ifstream is(path, std::ios::binary);
  require(static_cast<bool>(is), module, "cannot open " + path.string());
  return std::string((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
}

inline void write_file(const fs::path& path, const std::string& data, const std::string& module) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  require(static_cast<bool>(os), module, "cannot write " + path.string());
  os.write(data.data(), static_cast<std::streamsize>(data.size()));
}

inline void write_pnm(const fs::path& path, const Image& img) { write_file(path, encode_pnm(img), "synthetic-data"); }
inline Image read_pnm(const fs::path& path) { return decode_pnm(read_file(path, "synthetic-data"), path.string()); }

// One `x1 y1 x2 y2` integer line per box.
inline std::string encode_annotations(const std::vector<Box>& boxes) {
  std::string out;
  for (const auto& b : boxes) {
    out += std::to_string(std::llround(b.x1)) + " " + std::to_string(std::llround(b.y1)) + " " +
           std::to_string(std::llround(b.x2)) + " " + std::to_string(std::llround(b.y2)) + "\n";
  }
  return out;
}

inline std::vector<Box> decode_annotations(const std::string& text, const std::string& origin = "<memory>") {
  std::vector<Box> boxes;
  std::istringstream is(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    std::vector<long long> v;
    std::string tok;
    while (ls >> tok) {
      std::size_t used = 0;
      long long x = 0;
      try {
        x = std::stoll(tok, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != tok.size()) fail("synthetic-data", origin + ":" + std::to_string(lineno) + ": non-integer value '" + tok + "'");
      v.push_back(x);
    }
    if (v.size() != 4) fail("synthetic-data", origin + ":" + std::to_string(lineno) + ": expected 4 integers 'x1 y1 x2 y2'");
    if (v[0] >= v[2] || v[1] >= v[3]) {
      fail("synthetic-data", origin + ":" + std::to_string(lineno) + ": box requires x1 < x2 and y1 < y2");
    }
    boxes.push_back(Box{static_cast<double>(v[0]), static_cast<double>(v[1]), static_cast<double>(v[2]),
                        static_cast<double>(v[3])});
  }
  return boxes;
}

inline std::string image_filename(const std::string& name, const Image& img) {
  return name + (img.channels == 3 ? ".ppm" : ".pgm");
}

// Layout: index.txt lists `name seed` per sample; each sample has
// <name>.pgm (or .ppm) and <name>.txt.
inline void write_dataset(const fs::path& dir, const std::vector<SceneSample>& samples) {
  fs::create_directories(dir);
  std::string index;
  for (const auto& s : samples) {
    require(!s.name.empty(), "synthetic-data", "sample without a name");
    write_pnm(dir / image_filename(s.name, s.image), s.image);
    write_file(dir / (s.name + ".txt"), encode_annotations(s.boxes), "synthetic-data");
    index += s.name + " " + std::to_string(s.seed) + "\n";
  }
  write_file(dir / "index.txt", index, "synthetic-data");
}

inline std::vector<SceneSample> read_dataset(const fs::path& dir) {
  require(fs::is_directory(dir), "synthetic-data", "dataset directory does not exist: " + dir.string());
  const std::string index = read_file(dir / "index.txt", "synthetic-data");
  std::vector<SceneSample> out;
  std::istringstream is(index);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    std::istringstream ls(line);
    SceneSample s;
    if (!(ls >> s.name)) continue;
    std::string seed;
    if (ls >> seed) {
      try {
        s.seed = std::stoull(seed);
      } catch (const std::exception&) {
        fail("synthetic-data", (dir / "index.txt").string() + ":" + std::to_string(lineno) + ": bad seed '" + seed + "'");
      }
    }
    fs::path img_path = dir / (s.name + ".pgm");
    if (!fs::exists(img_path)) img_path = dir / (s.name + ".ppm");
    s.image = read_pnm(img_path);
    const fs::path ann = dir / (s.name + ".txt");
    s.boxes = decode_annotations(read_file(ann, "synthetic-data"), ann.string());
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace ganet

#endif  // GANET_DATASET_IO_HPP_
