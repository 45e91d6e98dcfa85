/*
 * Copyright 2026 The gpurace Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <random>

#include "doctest.h"
#include "gpurace/vclock.hpp"

using namespace gpurace;

TEST_SUITE("vclock") {
  TEST_CASE("join") {
    CHECK(vc_join({1, 0}, {0, 2}) == VectorClock{1, 2});
    CHECK(vc_join({3, 1}, {1, 3}) == VectorClock{3, 3});
    VectorClock a{4, 0, 9};
    CHECK(vc_join(a, a) == a);
  }

  TEST_CASE("leq") {
    CHECK(vc_leq({1, 2}, {2, 2}));
    CHECK_FALSE(vc_leq({2, 0}, {1, 5}));
    CHECK(vc_leq(VectorClock(2), {0, 0}));
    CHECK(vc_leq(VectorClock(3), {7, 1, 0}));
  }

  TEST_CASE("width mismatch") {
    CHECK_THROWS_AS(vc_join({1}, {1, 2}), WidthMismatch);
    CHECK_THROWS_AS(vc_leq({1}, {1, 2}), WidthMismatch);
  }

  TEST_CASE("get and set") {
    VectorClock c(3);
    CHECK(c.get(2) == 0);
    CHECK(c.get(99) == 0);
    c.set(1, 5);
    CHECK(c == VectorClock{0, 5, 0});
    CHECK_THROWS_AS(c.set(3, 1), std::out_of_range);
    CHECK(VectorClock::zero(GridShape{2, 2, 2}).width() == 8);
  }

  TEST_CASE("epoch_leq") {
    VectorClock c{0, 3, 0};
    CHECK(epoch_leq(Epoch::none(), c));
    CHECK(epoch_leq(Epoch{3, 1}, c));
    CHECK_FALSE(epoch_leq(Epoch{4, 1}, c));
  }

  TEST_CASE("epoch_leq agrees with vc_leq on the singleton clock") {
    std::mt19937 rng(11);
    for (int k = 0; k < 2000; ++k) {
      VectorClock c(5);
      for (std::uint32_t i = 0; i < 5; ++i) c.set(i, rng() % 4);
      Epoch e{static_cast<Time>(rng() % 4), static_cast<std::uint32_t>(rng() % 5)};
      VectorClock single(5);
      single.set(e.tid, e.time);
      CHECK(epoch_leq(e, c) == vc_leq(single, c));
    }
  }

  TEST_CASE("join laws") {
    std::mt19937 rng(5);
    auto rand_clock = [&] {
      VectorClock c(4);
      for (std::uint32_t i = 0; i < 4; ++i) c.set(i, rng() % 5);
      return c;
    };
    for (int k = 0; k < 500; ++k) {
      VectorClock a = rand_clock(), b = rand_clock(), c = rand_clock();
      CHECK(vc_join(a, b) == vc_join(b, a));
      CHECK(vc_join(vc_join(a, b), c) == vc_join(a, vc_join(b, c)));
      CHECK(vc_leq(a, vc_join(a, b)));
      CHECK(vc_leq(a, b) == (vc_join(a, b) == b));
    }
  }
}
