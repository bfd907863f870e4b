// Copyright 2026 The CloudJudge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cloudjudge/io.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "cloudjudge/error.hpp"

namespace cloudjudge {
namespace {

constexpr char kCloudMagic[4] = {'J', 'N', 'P', '1'};
constexpr char kActivationMagic[4] = {'J', 'A', 'C', 'T'};
constexpr std::uint32_t kFeatures = 4;

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int k = 0; k < 4; ++k) out.push_back(static_cast<std::uint8_t>(v >> (8 * k)));
}

void put_f32(std::vector<std::uint8_t>& out, float f) {
  put_u32(out, std::bit_cast<std::uint32_t>(f));
}

std::uint32_t get_u32(std::span<const std::uint8_t> b, std::size_t off) {
  std::uint32_t v = 0;
  for (int k = 0; k < 4; ++k) v |= static_cast<std::uint32_t>(b[off + k]) << (8 * k);
  return v;
}

float get_f32(std::span<const std::uint8_t> b, std::size_t off) {
  return std::bit_cast<float>(get_u32(b, off));
}

[[noreturn]] void corrupt(std::size_t offset, const std::string& what) {
  throw Error(ErrorCode::kCorruptPayload,
              what + " at byte offset " + std::to_string(offset));
}

std::uint32_t checked_u32(std::size_t v, const char* what) {
  if (v > 0xffffffffULL) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string(what) + " does not fit in 32 bits");
  }
  return static_cast<std::uint32_t>(v);
}

// float32 image of phi that still lies in (-pi, pi].
float storable_phi(double phi) {
  float f = static_cast<float>(phi);
  if (static_cast<double>(f) > kPi) f = std::nextafter(f, 0.0f);
  if (static_cast<double>(f) <= -kPi) f = std::nextafter(f, 0.0f);
  return f;
}

bool parse_double(std::string_view s, double& out) {
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

bool parse_size(std::string_view s, std::size_t& out) {
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

const std::string kCsvHeader = "jet_id,slot,eta_rel,phi_rel,pt_rel,mask";

}  // namespace

std::string format_g9(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", value);
  return buf;
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kInputMissing, "cannot open " + path.string());
  }
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) {
    throw Error(ErrorCode::kIoFailure, "read error on " + path.string());
  }
  return bytes;
}

void write_file(const std::filesystem::path& path,
                std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(ErrorCode::kIoFailure, "cannot open " + path.string() +
                                           " for writing");
  }
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  out.flush();
  if (!out) {
    throw Error(ErrorCode::kIoFailure, "write error on " + path.string());
  }
}

std::vector<std::uint8_t> encode_clouds(const CloudSample& sample) {
  require_valid(sample);
  const std::size_t capacity = sample.capacity();
  std::vector<std::uint8_t> out;
  out.reserve(kCloudHeaderSize + sample.size() * capacity * kFeatures * 4);
  out.insert(out.end(), std::begin(kCloudMagic), std::end(kCloudMagic));
  put_u32(out, kCloudFileVersion);
  put_u32(out, checked_u32(sample.size(), "n_jets"));
  put_u32(out, checked_u32(capacity, "capacity"));
  put_u32(out, kFeatures);
  out.push_back(static_cast<std::uint8_t>(sample.label));
  out.insert(out.end(), 3, 0);
  for (const auto& cloud : sample.clouds) {
    const auto& slots = cloud.slots();
    for (std::size_t s = 0; s < capacity; ++s) {
      if (s >= slots.size() || !slots[s].genuine()) {
        for (int k = 0; k < 4; ++k) put_f32(out, 0.0f);
        continue;
      }
      const Particle& p = slots[s];
      put_f32(out, static_cast<float>(p.eta_rel));
      put_f32(out, storable_phi(wrap_phi(p.phi_rel)));
      put_f32(out, static_cast<float>(p.pt_rel));
      put_f32(out, 1.0f);
    }
  }
  return out;
}

CloudSample decode_clouds(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kCloudMagic, 4) != 0) {
    throw Error(ErrorCode::kBadMagic, "not a JNP1 cloud file");
  }
  if (bytes.size() < kCloudHeaderSize) corrupt(bytes.size(), "truncated header");
  const std::uint32_t version = get_u32(bytes, 4);
  if (version != kCloudFileVersion) {
    throw Error(ErrorCode::kBadVersion,
                "unsupported cloud file version " + std::to_string(version));
  }
  const std::size_t n_jets = get_u32(bytes, 8);
  const std::size_t capacity = get_u32(bytes, 12);
  if (get_u32(bytes, 16) != kFeatures) corrupt(16, "n_features must be 4");
  const std::uint8_t label = bytes[20];
  if (label > static_cast<std::uint8_t>(JetClass::kOther)) {
    corrupt(20, "unknown label code " + std::to_string(label));
  }
  for (std::size_t k = 21; k < 24; ++k) {
    if (bytes[k] != 0) corrupt(k, "reserved header byte is not zero");
  }
  const std::size_t expected =
      kCloudHeaderSize + n_jets * capacity * kFeatures * 4;
  if (bytes.size() < expected) corrupt(bytes.size(), "truncated payload");
  if (bytes.size() > expected) corrupt(expected, "trailing bytes after payload");

  CloudSample sample;
  sample.label = static_cast<JetClass>(label);
  sample.clouds.reserve(n_jets);
  std::size_t off = kCloudHeaderSize;
  for (std::size_t j = 0; j < n_jets; ++j) {
    std::vector<Particle> slots(capacity);
    for (std::size_t s = 0; s < capacity; ++s) {
      double f[4];
      for (int k = 0; k < 4; ++k, off += 4) {
        f[k] = get_f32(bytes, off);
        if (!std::isfinite(f[k])) corrupt(off, "non-finite float");
      }
      slots[s] = {f[0], f[1], f[2], f[3]};
      if (f[3] == 0.0) slots[s] = Particle{};
    }
    ParticleCloud cloud(std::move(slots), capacity);
    const auto violations = validate(cloud);
    if (!violations.empty()) {
      throw Error(ErrorCode::kValidationFailure,
                  "jet " + std::to_string(j) + ": " + violations.front().message());
    }
    sample.clouds.push_back(std::move(cloud));
  }
  if (sample.clouds.empty()) {
    throw Error(ErrorCode::kValidationFailure, "cloud file holds no jets");
  }
  return sample;
}

void write_clouds(const CloudSample& sample, const std::filesystem::path& path) {
  write_file(path, encode_clouds(sample));
}

CloudSample read_clouds(const std::filesystem::path& path) {
  return decode_clouds(read_file(path));
}

std::string encode_csv(const CloudSample& sample) {
  require_valid(sample);
  std::string out = kCsvHeader + "\n";
  const std::size_t capacity = sample.capacity();
  for (std::size_t j = 0; j < sample.size(); ++j) {
    const auto& slots = sample[j].slots();
    for (std::size_t s = 0; s < capacity; ++s) {
      Particle p = s < slots.size() && slots[s].genuine() ? slots[s] : Particle{};
      std::string phi = format_g9(wrap_phi(p.phi_rel));
      double back = 0.0;
      parse_double(phi, back);
      if (back > kPi) phi = "3.14159265";
      if (back <= -kPi) phi = "-3.14159265";
      out += std::to_string(j) + ',' + std::to_string(s) + ',' +
             format_g9(p.eta_rel) + ',' + phi + ',' + format_g9(p.pt_rel) +
             ',' + (p.genuine() ? '1' : '0') + '\n';
    }
  }
  return out;
}

CloudSample decode_csv(const std::string& text, JetClass label) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& what) {
    throw Error(ErrorCode::kParseFailure,
                "line " + std::to_string(line_no) + ": " + what);
  };
  if (!std::getline(in, line)) {
    line_no = 1;
    fail("missing header");
  }
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCsvHeader) fail("unexpected header '" + line + "'");

  std::vector<std::vector<Particle>> jets;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string_view> fields;
    std::string_view rest(line);
    for (;;) {
      const auto comma = rest.find(',');
      fields.push_back(rest.substr(0, comma));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (fields.size() != 6) fail("expected 6 fields, got " + std::to_string(fields.size()));
    std::size_t jet = 0, slot = 0;
    double v[4];
    if (!parse_size(fields[0], jet) || !parse_size(fields[1], slot)) {
      fail("bad jet_id/slot");
    }
    for (int k = 0; k < 4; ++k) {
      if (!parse_double(fields[2 + k], v[k]) || !std::isfinite(v[k])) {
        fail("bad number '" + std::string(fields[2 + k]) + "'");
      }
    }
    if (jet == jets.size()) {
      jets.emplace_back();
    } else if (jet + 1 != jets.size()) {
      fail("jet_id out of sequence");
    }
    if (slot != jets.back().size()) fail("slot out of sequence");
    Particle p{v[0], v[1], v[2], v[3]};
    if (p.mask == 0.0) p = Particle{};
    jets.back().push_back(p);
  }
  if (jets.empty()) fail("no rows");

  CloudSample sample;
  sample.label = label;
  const std::size_t capacity = jets.front().size();
  for (std::size_t j = 0; j < jets.size(); ++j) {
    if (jets[j].size() != capacity) {
      throw Error(ErrorCode::kParseFailure,
                  "jet " + std::to_string(j) + " has " +
                      std::to_string(jets[j].size()) + " slots, expected " +
                      std::to_string(capacity));
    }
    ParticleCloud cloud(std::move(jets[j]), capacity);
    const auto violations = validate(cloud);
    if (!violations.empty()) {
      throw Error(ErrorCode::kValidationFailure,
                  "jet " + std::to_string(j) + ": " + violations.front().message());
    }
    sample.clouds.push_back(std::move(cloud));
  }
  return sample;
}

void write_csv(const CloudSample& sample, const std::filesystem::path& path) {
  const std::string text = encode_csv(sample);
  write_file(path, std::span<const std::uint8_t>(
                       reinterpret_cast<const std::uint8_t*>(text.data()),
                       text.size()));
}

CloudSample read_csv(const std::filesystem::path& path, JetClass label) {
  const auto bytes = read_file(path);
  return decode_csv(std::string(bytes.begin(), bytes.end()), label);
}

std::vector<std::uint8_t> encode_activations(const ActivationMatrix& acts) {
  if (acts.values.size() != acts.rows * acts.dim) {
    throw Error(ErrorCode::kDimensionMismatch, "activation matrix shape");
  }
  std::vector<std::uint8_t> out;
  out.reserve(kActivationHeaderSize + acts.values.size() * 4);
  out.insert(out.end(), std::begin(kActivationMagic), std::end(kActivationMagic));
  put_u32(out, checked_u32(acts.rows, "n_rows"));
  put_u32(out, checked_u32(acts.dim, "dim"));
  for (double v : acts.values) {
    const float f = static_cast<float>(v);
    if (!std::isfinite(f)) {
      throw Error(ErrorCode::kValidationFailure,
                  "activation not finite as float32");
    }
    put_f32(out, f);
  }
  return out;
}

ActivationMatrix decode_activations(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kActivationMagic, 4) != 0) {
    throw Error(ErrorCode::kBadMagic, "not a JACT activation file");
  }
  if (bytes.size() < kActivationHeaderSize) {
    corrupt(bytes.size(), "truncated header");
  }
  ActivationMatrix acts;
  acts.rows = get_u32(bytes, 4);
  acts.dim = get_u32(bytes, 8);
  const std::size_t expected = kActivationHeaderSize + acts.rows * acts.dim * 4;
  if (bytes.size() < expected) corrupt(bytes.size(), "truncated payload");
  if (bytes.size() > expected) corrupt(expected, "trailing bytes after payload");
  acts.values.resize(acts.rows * acts.dim);
  for (std::size_t i = 0; i < acts.values.size(); ++i) {
    const std::size_t off = kActivationHeaderSize + 4 * i;
    const float f = get_f32(bytes, off);
    if (!std::isfinite(f)) corrupt(off, "non-finite float");
    acts.values[i] = f;
  }
  return acts;
}

void write_activations(const ActivationMatrix& acts,
                       const std::filesystem::path& path) {
  write_file(path, encode_activations(acts));
}

ActivationMatrix read_activations(const std::filesystem::path& path) {
  return decode_activations(read_file(path));
}

ActivationMatrix pack_feature_map(const FeatureMap& map) {
  std::vector<double> v;
  const auto& layers = map.layers();
  v.push_back(static_cast<double>(layers.size()));
  if (!layers.empty()) v.push_back(static_cast<double>(layers.front().in));
  for (const auto& l : layers) v.push_back(static_cast<double>(l.out));
  v.push_back(static_cast<double>(map.output_activation()));
  for (const auto& l : layers) {
    v.insert(v.end(), l.weight.begin(), l.weight.end());
    v.insert(v.end(), l.bias.begin(), l.bias.end());
  }
  return {v.size(), 1, std::move(v)};
}

FeatureMap unpack_feature_map(const ActivationMatrix& packed) {
  const auto& v = packed.values;
  std::size_t pos = 0;
  auto next = [&]() -> double {
    if (pos >= v.size()) {
      throw Error(ErrorCode::kCorruptPayload, "packed feature map too short");
    }
    return v[pos++];
  };
  auto count = [&]() -> std::size_t {
    const double x = next();
    if (!(x >= 0.0) || x != std::floor(x) || x > 1e7) {
      throw Error(ErrorCode::kCorruptPayload, "bad count in packed feature map");
    }
    return static_cast<std::size_t>(x);
  };
  const std::size_t n_layers = count();
  std::vector<std::size_t> dims;
  for (std::size_t k = 0; k <= n_layers && n_layers > 0; ++k) dims.push_back(count());
  const std::size_t act = count();
  if (act > static_cast<std::size_t>(Activation::kSigmoid)) {
    throw Error(ErrorCode::kCorruptPayload, "unknown activation code");
  }
  std::vector<DenseLayer> layers;
  for (std::size_t l = 0; l < n_layers; ++l) {
    DenseLayer layer{dims[l], dims[l + 1], {}, {}};
    layer.weight.resize(layer.in * layer.out);
    for (auto& w : layer.weight) w = next();
    layer.bias.resize(layer.out);
    for (auto& b : layer.bias) b = next();
    layers.push_back(std::move(layer));
  }
  if (pos != v.size()) {
    throw Error(ErrorCode::kCorruptPayload, "packed feature map has extra values");
  }
  return FeatureMap(std::move(layers), static_cast<Activation>(act));
}

}  // namespace cloudjudge
