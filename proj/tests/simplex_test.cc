// Copyright 2026 The AHDP Workbench Authors
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

#include "ahdp/simplex.h"

#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"

namespace ahdp {
namespace {

using ::testing::ElementsAre;
using ::testing::DoubleNear;

TEST(SimplexTest, TextbookProblem) {
  // max 3x + 5y; x <= 4, 2y <= 12, 3x + 2y <= 18 -> 36 at (2, 6).
  auto lp = MaximizeFromOrigin({{1, 0}, {0, 2}, {3, 2}}, {4, 12, 18}, {3, 5});
  ASSERT_TRUE(lp.ok()) << lp.status();
  EXPECT_NEAR(lp->value, 36.0, 1e-12);
  EXPECT_THAT(lp->x, ElementsAre(DoubleNear(2, 1e-12), DoubleNear(6, 1e-12)));
}

TEST(SimplexTest, TerminatesOnCyclingExample) {
  // Beale's problem cycles under the textbook largest-coefficient rule.
  auto lp = MaximizeFromOrigin({{0.25, -60, -0.04, 9},
                                {0.5, -90, -0.02, 3},
                                {0, 0, 1, 0}},
                               {0, 0, 1}, {0.75, -150, 0.02, -6});
  ASSERT_TRUE(lp.ok()) << lp.status();
  EXPECT_NEAR(lp->value, 0.05, 1e-12);
}

TEST(SimplexTest, OriginOptimal) {
  auto lp = MaximizeFromOrigin({{1, 1}}, {1}, {-1, -2});
  ASSERT_TRUE(lp.ok());
  EXPECT_EQ(lp->value, 0.0);
}

TEST(SimplexTest, Errors) {
  EXPECT_EQ(MaximizeFromOrigin({{-1}}, {1}, {1}).status().code(),
            absl::StatusCode::kFailedPrecondition);
  EXPECT_EQ(MaximizeFromOrigin({{1}}, {-1}, {1}).status().code(),
            absl::StatusCode::kInvalidArgument);
  EXPECT_EQ(MaximizeFromOrigin({{1, 2}}, {1}, {1}).status().code(),
            absl::StatusCode::kInvalidArgument);
  EXPECT_EQ(MaximizeFromOrigin({{1}}, {1, 2}, {1}).status().code(),
            absl::StatusCode::kInvalidArgument);
}

}  // namespace
}  // namespace ahdp
