// Copyright 2026 The Embodied Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "embodied/error.h"
#include "embodied/pointcloud.h"

static_assert(std::endian::native == std::endian::little,
              "binary PLY reading assumes a little-endian host");

namespace embodied {
namespace {

enum class ScalarType { kInt8, kUInt8, kInt16, kUInt16, kInt32, kUInt32,
                        kFloat32, kFloat64 };

std::optional<ScalarType> ParseScalarType(const std::string& name) {
  if (name == "char" || name == "int8") return ScalarType::kInt8;
  if (name == "uchar" || name == "uint8") return ScalarType::kUInt8;
  if (name == "short" || name == "int16") return ScalarType::kInt16;
  if (name == "ushort" || name == "uint16") return ScalarType::kUInt16;
  if (name == "int" || name == "int32") return ScalarType::kInt32;
  if (name == "uint" || name == "uint32") return ScalarType::kUInt32;
  if (name == "float" || name == "float32") return ScalarType::kFloat32;
  if (name == "double" || name == "float64") return ScalarType::kFloat64;
  return std::nullopt;
}

std::size_t ByteSize(ScalarType type) {
  switch (type) {
    case ScalarType::kInt8:
    case ScalarType::kUInt8: return 1;
    case ScalarType::kInt16:
    case ScalarType::kUInt16: return 2;
    case ScalarType::kInt32:
    case ScalarType::kUInt32:
    case ScalarType::kFloat32: return 4;
    case ScalarType::kFloat64: return 8;
  }
  return 0;
}

bool IsFloating(ScalarType t) {
  return t == ScalarType::kFloat32 || t == ScalarType::kFloat64;
}

struct Property {
  std::string name;
  ScalarType type;
  bool is_list = false;
  ScalarType count_type = ScalarType::kUInt8;
};

struct Element {
  std::string name;
  std::size_t count = 0;
  std::vector<Property> properties;
};

enum class Encoding { kAscii, kBinaryLittleEndian };

struct Header {
  Encoding encoding = Encoding::kAscii;
  std::vector<Element> elements;
};

[[noreturn]] void HeaderError(const std::filesystem::path& path, int line,
                              const std::string& what) {
  Throw(ErrorKind::kFormat,
        fmt::format("{}: header line {}: {}", path.string(), line, what));
}

Header ReadHeader(std::istream& in, const std::filesystem::path& path) {
  Header header;
  std::string line;
  int line_no = 0;
  bool saw_format = false;
  auto next = [&]() {
    if (!std::getline(in, line)) {
      HeaderError(path, line_no + 1, "unexpected end of file in header");
    }
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
  };

  next();
  if (line != "ply") HeaderError(path, line_no, "expected 'ply' magic");
  while (true) {
    next();
    std::istringstream tokens(line);
    std::string keyword;
    tokens >> keyword;
    if (keyword.empty() || keyword == "comment" || keyword == "obj_info") {
      continue;
    }
    if (keyword == "end_header") break;
    if (keyword == "format") {
      std::string format, version;
      tokens >> format >> version;
      if (format == "ascii") {
        header.encoding = Encoding::kAscii;
      } else if (format == "binary_little_endian") {
        header.encoding = Encoding::kBinaryLittleEndian;
      } else {
        HeaderError(path, line_no, "unsupported format '" + format + "'");
      }
      saw_format = true;
    } else if (keyword == "element") {
      Element element;
      long long count = -1;
      tokens >> element.name >> count;
      if (element.name.empty() || tokens.fail() || count < 0) {
        HeaderError(path, line_no, "malformed element line '" + line + "'");
      }
      element.count = static_cast<std::size_t>(count);
      header.elements.push_back(std::move(element));
    } else if (keyword == "property") {
      if (header.elements.empty()) {
        HeaderError(path, line_no, "property before any element");
      }
      std::string type_name;
      tokens >> type_name;
      Property property;
      if (type_name == "list") {
        std::string count_name, item_name;
        tokens >> count_name >> item_name >> property.name;
        const auto count_type = ParseScalarType(count_name);
        const auto item_type = ParseScalarType(item_name);
        if (!count_type || !item_type || IsFloating(*count_type) ||
            property.name.empty()) {
          HeaderError(path, line_no, "malformed list property '" + line + "'");
        }
        property.is_list = true;
        property.count_type = *count_type;
        property.type = *item_type;
      } else {
        const auto type = ParseScalarType(type_name);
        tokens >> property.name;
        if (!type || property.name.empty()) {
          HeaderError(path, line_no, "malformed property '" + line + "'");
        }
        property.type = *type;
      }
      header.elements.back().properties.push_back(std::move(property));
    } else {
      HeaderError(path, line_no, "unknown keyword '" + keyword + "'");
    }
  }
  if (!saw_format) HeaderError(path, line_no, "missing format line");
  return header;
}

// Sequential value source over either encoding.
class BodyReader {
 public:
  BodyReader(std::istream& in, Encoding encoding,
             const std::filesystem::path& path)
      : in_(in), encoding_(encoding), path_(path) {}

  double Read(ScalarType type) {
    if (encoding_ == Encoding::kAscii) return ReadAscii();
    return ReadBinary(type);
  }

 private:
  [[noreturn]] void Truncated() {
    Throw(ErrorKind::kFormat,
          fmt::format("{}: body ended before all declared elements were read",
                      path_.string()));
  }

  double ReadAscii() {
    std::string token;
    if (!(in_ >> token)) Truncated();
    char* end = nullptr;
    const double value = std::strtod(token.c_str(), &end);
    if (end != token.c_str() + token.size()) {
      Throw(ErrorKind::kFormat, fmt::format("{}: malformed number '{}'",
                                            path_.string(), token));
    }
    return value;
  }

  double ReadBinary(ScalarType type) {
    std::array<char, 8> buf{};
    if (!in_.read(buf.data(), static_cast<std::streamsize>(ByteSize(type)))) {
      Truncated();
    }
    switch (type) {
      case ScalarType::kInt8: return Load<std::int8_t>(buf);
      case ScalarType::kUInt8: return Load<std::uint8_t>(buf);
      case ScalarType::kInt16: return Load<std::int16_t>(buf);
      case ScalarType::kUInt16: return Load<std::uint16_t>(buf);
      case ScalarType::kInt32: return Load<std::int32_t>(buf);
      case ScalarType::kUInt32: return Load<std::uint32_t>(buf);
      case ScalarType::kFloat32: return Load<float>(buf);
      case ScalarType::kFloat64: return Load<double>(buf);
    }
    return 0.0;
  }

  template <typename T>
  static double Load(const std::array<char, 8>& buf) {
    T value;
    std::memcpy(&value, buf.data(), sizeof(T));
    return static_cast<double>(value);
  }

  std::istream& in_;
  Encoding encoding_;
  const std::filesystem::path& path_;
};

void SkipElement(BodyReader& reader, const Element& element) {
  for (std::size_t i = 0; i < element.count; ++i) {
    for (const Property& property : element.properties) {
      if (property.is_list) {
        const auto n = static_cast<long long>(reader.Read(property.count_type));
        for (long long k = 0; k < n; ++k) reader.Read(property.type);
      } else {
        reader.Read(property.type);
      }
    }
  }
}

}  // namespace

PointCloud LoadPly(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    Throw(ErrorKind::kIo, fmt::format("cannot open '{}'", path.string()));
  }
  const Header header = ReadHeader(in, path);

  const Element* vertex = nullptr;
  std::size_t vertex_pos = 0;
  for (std::size_t e = 0; e < header.elements.size(); ++e) {
    if (header.elements[e].name == "vertex") {
      vertex = &header.elements[e];
      vertex_pos = e;
      break;
    }
  }
  if (vertex == nullptr) {
    Throw(ErrorKind::kFormat,
          fmt::format("{}: header declares no vertex element", path.string()));
  }

  // Slot per vertex property: 0..2 position, 3..5 color, -1 ignored.
  std::vector<int> slot(vertex->properties.size(), -1);
  std::array<bool, 6> seen{};
  static constexpr std::array<const char*, 6> kNames = {
      "x", "y", "z", "red", "green", "blue"};
  for (std::size_t p = 0; p < vertex->properties.size(); ++p) {
    const Property& property = vertex->properties[p];
    for (int s = 0; s < 6; ++s) {
      if (property.name != kNames[s] || property.is_list) continue;
      if (s < 3 && !IsFloating(property.type)) {
        Throw(ErrorKind::kFormat,
              fmt::format("{}: vertex property '{}' must be floating point",
                          path.string(), property.name));
      }
      if (s >= 3 && property.type != ScalarType::kUInt8) {
        Throw(ErrorKind::kFormat,
              fmt::format("{}: vertex property '{}' must be uchar",
                          path.string(), property.name));
      }
      slot[p] = s;
      seen[s] = true;
    }
  }
  if (!seen[0] || !seen[1] || !seen[2]) {
    Throw(ErrorKind::kFormat,
          fmt::format("{}: vertex element lacks x, y or z", path.string()));
  }
  const bool has_color = seen[3] && seen[4] && seen[5];

  BodyReader reader(in, header.encoding, path);
  for (std::size_t e = 0; e < vertex_pos; ++e) {
    SkipElement(reader, header.elements[e]);
  }

  const auto n = static_cast<Eigen::Index>(vertex->count);
  Eigen::Matrix3Xd positions(3, n);
  Colors3X colors = Colors3X::Constant(3, n, kDefaultGray);
  for (Eigen::Index i = 0; i < n; ++i) {
    std::array<double, 6> values{0, 0, 0, kDefaultGray, kDefaultGray,
                                 kDefaultGray};
    for (std::size_t p = 0; p < vertex->properties.size(); ++p) {
      const Property& property = vertex->properties[p];
      if (property.is_list) {
        const auto count =
            static_cast<long long>(reader.Read(property.count_type));
        for (long long k = 0; k < count; ++k) reader.Read(property.type);
        continue;
      }
      const double value = reader.Read(property.type);
      if (slot[p] >= 0) values[slot[p]] = value;
    }
    positions.col(i) << values[0], values[1], values[2];
    if (!positions.col(i).allFinite()) {
      Throw(ErrorKind::kData,
            fmt::format("{}: non-finite coordinate at vertex {}",
                        path.string(), i));
    }
    if (has_color) {
      for (int c = 0; c < 3; ++c) {
        const double v = values[3 + c];
        if (v < 0 || v > 255) {
          Throw(ErrorKind::kData,
                fmt::format("{}: color out of range at vertex {}",
                            path.string(), i));
        }
        colors(c, i) = static_cast<std::uint8_t>(v);
      }
    }
  }
  return PointCloud(std::move(positions), std::move(colors));
}

void SavePly(const PointCloud& cloud, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    Throw(ErrorKind::kIo, fmt::format("cannot write '{}'", path.string()));
  }
  out << "ply\nformat binary_little_endian 1.0\n"
      << "element vertex " << cloud.size() << "\n"
      << "property float x\nproperty float y\nproperty float z\n"
      << "property uchar red\nproperty uchar green\nproperty uchar blue\n"
      << "end_header\n";
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const auto col = static_cast<Eigen::Index>(i);
    const std::array<float, 3> xyz = {
        static_cast<float>(cloud.positions()(0, col)),
        static_cast<float>(cloud.positions()(1, col)),
        static_cast<float>(cloud.positions()(2, col))};
    out.write(reinterpret_cast<const char*>(xyz.data()), sizeof(xyz));
    const std::array<std::uint8_t, 3> rgb = {cloud.colors()(0, col),
                                             cloud.colors()(1, col),
                                             cloud.colors()(2, col)};
    out.write(reinterpret_cast<const char*>(rgb.data()), sizeof(rgb));
  }
  if (!out) {
    Throw(ErrorKind::kIo, fmt::format("short write to '{}'", path.string()));
  }
}

}  // namespace embodied
