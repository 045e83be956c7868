// Copyright 2026 The qtomo Authors
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

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "qtomo/errors.hpp"
#include "qtomo/run_config.hpp"

namespace qtomo {
namespace {

TEST(RunConfig, TextIsSortedAndRoundTrips) {
  RunConfig c;
  c.set("seed", std::uint64_t{18446744073709551615ull});
  c.set("alpha", 0.05);
  c.set("command", "study1");
  c.set("fresh", false);
  c.set("k", 4);
  EXPECT_EQ(c.to_text(), "alpha = 0.05\ncommand = study1\nfresh = false\nk = 4\nseed = 18446744073709551615\n");
  const RunConfig back = RunConfig::parse("# comment\n" + c.to_text());
  EXPECT_EQ(back.entries(), c.entries());
  EXPECT_EQ(back.hash(), c.hash());
  EXPECT_EQ(c.hash().size(), 16u);
}

TEST(RunConfig, HashTracksContent) {
  RunConfig a, b;
  a.set("n", 100);
  b.set("n", 101);
  EXPECT_NE(a.hash(), b.hash());
  b.set("n", 100);
  EXPECT_EQ(a.hash(), b.hash());
}

TEST(RunConfig, MissingKeyAndBadLines) {
  RunConfig c;
  EXPECT_THROW(c.get("missing"), ValidationError);
  EXPECT_THROW(RunConfig::parse("no separator here\n"), ValidationError);
}

TEST(FormatDouble, ShortestRoundTrip) {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, 123456789.125, -2.5}) EXPECT_EQ(std::stod(format_double(v)), v);
  EXPECT_EQ(format_double(0.05), "0.05");
  EXPECT_EQ(format_double(std::numeric_limits<double>::infinity()), "inf");
}

}  // namespace
}  // namespace qtomo
