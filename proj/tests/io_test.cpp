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

#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <algorithm>
#include <functional>
#include <random>

#include <unistd.h>

#include "cloudjudge/error.hpp"
#include "cloudjudge/io.hpp"
#include "cloudjudge/toygen.hpp"
#include "support.hpp"

namespace cloudjudge {
namespace {

using testing::genuine;

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::kInvalidArgument;
}

std::filesystem::path temp(const std::string& name) {
  return std::filesystem::temp_directory_path() /
         ("cloudjudge_io_" + std::to_string(::getpid()) + "_" + name);
}

// Random valid sample whose values are exactly representable as float32.
CloudSample float_sample(std::mt19937_64& rng, std::size_t n, std::size_t cap) {
  std::uniform_int_distribution<int> k(-1000, 1000);
  std::uniform_int_distribution<std::size_t> count(1, cap);
  CloudSample s;
  s.label = JetClass::kTopQuark;
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<Particle> slots(cap);
    const std::size_t m = count(rng);
    for (std::size_t i = 0; i < m; ++i) {
      slots[i] = genuine(k(rng) / 1024.0, k(rng) / 1024.0, std::abs(k(rng)) / 1024.0);
    }
    std::shuffle(slots.begin(), slots.end(), rng);
    s.clouds.emplace_back(slots, cap);
  }
  return s;
}

TEST(CloudFile, SizeArithmetic) {
  const auto s = testing::sample_of({ParticleCloud({genuine(0, 0, 1)}, 2)});
  const auto bytes = encode_clouds(s);
  EXPECT_EQ(bytes.size(), 24u + 32u);
  EXPECT_EQ(std::memcmp(bytes.data(), "JNP1", 4), 0);
  EXPECT_EQ(bytes[4], 1);
  EXPECT_EQ(bytes[8], 1);
  EXPECT_EQ(bytes[12], 2);
  EXPECT_EQ(bytes[16], 4);
  EXPECT_EQ(bytes[20], static_cast<std::uint8_t>(JetClass::kOther));
}

TEST(CloudFile, RoundTripIsExact) {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 50; ++t) {
    const auto s = float_sample(rng, 1 + t % 9, 1 + t % 30);
    const auto back = decode_clouds(encode_clouds(s));
    EXPECT_EQ(back, s);
  }
}

TEST(CloudFile, FileRoundTripAndJunkPadding) {
  std::mt19937_64 rng(2);
  auto s = float_sample(rng, 5, 6);
  for (auto& c : s.clouds) c = testing::with_junk_padding(rng, c);
  const auto path = temp("junk.jnp");
  write_clouds(s, path);
  const auto back = read_clouds(path);
  std::filesystem::remove(path);
  for (std::size_t j = 0; j < s.size(); ++j) {
    for (std::size_t i = 0; i < 6; ++i) {
      if (!s[j].slots()[i].genuine()) EXPECT_EQ(back[j].slots()[i], Particle{});
    }
  }
  EXPECT_EQ(back.label, JetClass::kTopQuark);
}

TEST(CloudFile, ToygenReserializationIsAFixpoint) {
  ToyConfig cfg;
  cfg.n_jets = 200;
  cfg.prongs = 3;
  const auto once = encode_clouds(generate(cfg));
  EXPECT_EQ(encode_clouds(decode_clouds(once)), once);
}

TEST(CloudFile, Errors) {
  const auto good = encode_clouds(
      testing::sample_of({ParticleCloud({genuine(0, 0, 1), genuine(0.5, 0.5, 0.5)}, 3)}));
  auto bad = good;
  bad[0] = 'X';
  EXPECT_EQ(code_of([&] { decode_clouds(bad); }), ErrorCode::kBadMagic);
  bad = good;
  bad[4] = 2;
  EXPECT_EQ(code_of([&] { decode_clouds(bad); }), ErrorCode::kBadVersion);
  bad = good;
  bad[22] = 1;
  EXPECT_EQ(code_of([&] { decode_clouds(bad); }), ErrorCode::kCorruptPayload);

  // Truncation reports the offset where the payload stops.
  bad.assign(good.begin(), good.end() - 5);
  try {
    decode_clouds(bad);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kCorruptPayload);
    EXPECT_NE(std::string(e.what()).find("offset " + std::to_string(bad.size())),
              std::string::npos)
        << e.what();
  }

  // NaN in the eta of slot 1 (payload offset 24 + 16).
  bad = good;
  const float nan = std::nanf("");
  std::memcpy(bad.data() + 40, &nan, 4);
  try {
    decode_clouds(bad);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kCorruptPayload);
    EXPECT_NE(std::string(e.what()).find("offset 40"), std::string::npos) << e.what();
  }

  // Negative pt in slot 0 of jet 0 fails validation with the jet index.
  bad = good;
  const float neg = -1.0f;
  std::memcpy(bad.data() + 24 + 8, &neg, 4);
  try {
    decode_clouds(bad);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kValidationFailure);
    EXPECT_NE(std::string(e.what()).find("jet 0"), std::string::npos) << e.what();
  }

  EXPECT_EQ(code_of([] { read_clouds(temp("does_not_exist")); }), ErrorCode::kInputMissing);
}

TEST(Csv, OneLinePerSlotPlusHeader) {
  const auto s = testing::sample_of({ParticleCloud({genuine(0.5, -0.25, 1)}, 4)});
  const auto text = encode_csv(s);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 5);
  EXPECT_EQ(text.substr(0, text.find('\n')), "jet_id,slot,eta_rel,phi_rel,pt_rel,mask");
  EXPECT_NE(text.find("0,0,0.5,-0.25,1,1\n"), std::string::npos) << text;
}

TEST(Csv, BinaryCsvBinaryRoundTrip) {
  ToyConfig cfg;
  cfg.n_jets = 100;
  cfg.prongs = 2;
  const auto s = decode_clouds(encode_clouds(generate(cfg)));
  const auto back = decode_csv(encode_csv(s), JetClass::kToy);
  const auto again = decode_clouds(encode_clouds(back));
  ASSERT_EQ(again.size(), s.size());
  for (std::size_t j = 0; j < s.size(); ++j) {
    for (std::size_t i = 0; i < s.capacity(); ++i) {
      const auto& a = s[j].slots()[i];
      const auto& b = again[j].slots()[i];
      EXPECT_NEAR(a.eta_rel, b.eta_rel, 1e-7);
      EXPECT_NEAR(a.phi_rel, b.phi_rel, 1e-7);
      EXPECT_NEAR(a.pt_rel, b.pt_rel, 1e-7);
      EXPECT_EQ(a.mask, b.mask);
    }
  }
}

TEST(Csv, MalformedRowNamesTheLine) {
  const std::string text =
      "jet_id,slot,eta_rel,phi_rel,pt_rel,mask\n"
      "0,0,0.1,0.2,0.3,1\n"
      "0,1,0.1,abc,0.3,1\n";
  try {
    decode_csv(text);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParseFailure);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
  EXPECT_EQ(code_of([] { decode_csv("bad header\n"); }), ErrorCode::kParseFailure);
}

TEST(Activations, RoundTripAndErrors) {
  ActivationMatrix a{2, 3, {1, 2, 3, 4.5, -5, 6}};
  const auto bytes = encode_activations(a);
  EXPECT_EQ(bytes.size(), kActivationHeaderSize + 24);
  const auto back = decode_activations(bytes);
  EXPECT_EQ(back.rows, 2u);
  EXPECT_EQ(back.dim, 3u);
  EXPECT_EQ(back.values, a.values);
  auto bad = bytes;
  bad[1] = 'X';
  EXPECT_EQ(code_of([&] { decode_activations(bad); }), ErrorCode::kBadMagic);
  bad.assign(bytes.begin(), bytes.end() - 1);
  EXPECT_EQ(code_of([&] { decode_activations(bad); }), ErrorCode::kCorruptPayload);
}

TEST(Activations, FeatureMapPacksLosslessly) {
  const std::size_t dims[] = {4, 8, 3};
  const auto f = init_feature_map(dims, 5, Activation::kTanh);
  const auto path = temp("map.jact");
  write_activations(pack_feature_map(f), path);
  const auto g = unpack_feature_map(read_activations(path));
  std::filesystem::remove(path);
  ASSERT_EQ(g.layers().size(), 2u);
  EXPECT_EQ(g.output_activation(), Activation::kTanh);
  for (std::size_t l = 0; l < 2; ++l) {
    ASSERT_EQ(g.layers()[l].weight.size(), f.layers()[l].weight.size());
    for (std::size_t k = 0; k < f.layers()[l].weight.size(); ++k) {
      EXPECT_EQ(g.layers()[l].weight[k], static_cast<float>(f.layers()[l].weight[k]));
    }
  }
}

TEST(Format, NineSignificantDigits) {
  EXPECT_EQ(format_g9(0.1), "0.1");
  EXPECT_EQ(format_g9(1.0 / 3.0), "0.333333333");
  EXPECT_EQ(format_g9(1234567891234.0), "1.23456789e+12");
}

}  // namespace
}  // namespace cloudjudge
