// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------


#include <random>

#include <catch2/catch_amalgamated.hpp>

#include "gobnet/vec3.hpp"

using namespace gobnet;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("unit vectors normalize and reject zero", "[vec3]")
{
    const UnitVec3 u(3.0, 0.0, 4.0);
    CHECK_THAT(u.x(), WithinRel(0.6, 1e-15));
    CHECK_THAT(u.z(), WithinRel(0.8, 1e-15));
    CHECK_THROWS_AS(UnitVec3(0.0, 0.0, 0.0), InvalidArgument);
    CHECK_THROWS_AS(UnitVec3(std::nan(""), 0.0, 1.0), InvalidArgument);
}

TEST_CASE("cross and dot products", "[vec3]")
{
    const Vec3 x{1, 0, 0}, y{0, 1, 0}, z{0, 0, 1};
    CHECK(cross(x, y) == z);
    CHECK(cross(y, z) == x);
    CHECK(dot(x, y) == 0.0);
    CHECK_THAT(angle_between(x, y), WithinAbs(std::numbers::pi / 2, 1e-15));
    CHECK_THAT(angle_between(x, x * 2.0), WithinAbs(0.0, 1e-15));
    CHECK_THAT(angle_between(x, -x), WithinAbs(std::numbers::pi, 1e-15));
}

TEST_CASE("decomposition into normal and tangential parts", "[vec3][property]")
{
    std::mt19937_64 rng(7);
    std::normal_distribution<double> g;
    double worst = 0.0;
    for (int k = 0; k < 100000; ++k)
    {
        const Vec3 v{g(rng), g(rng), g(rng)};
        const UnitVec3 n(Vec3{g(rng), g(rng), g(rng)});
        const Vec3 rebuilt = dot(n.vec(), v) * n.vec() + cross(cross(n.vec(), v), n.vec());
        const Vec3 e = rebuilt - v;
        worst = std::max({worst, std::abs(e.x), std::abs(e.y), std::abs(e.z)});
    }
    CHECK(worst < 1e-12);
}

TEST_CASE("rotations are orthonormal with unit determinant", "[vec3][property]")
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> a(-std::numbers::pi, std::numbers::pi);
    for (int k = 0; k < 1000; ++k)
    {
        const Mat3 r = rotation_y(a(rng)) * rotation_x(a(rng));
        const Mat3 p = r.transposed() * r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                REQUIRE_THAT(p(i, j), WithinAbs(i == j ? 1.0 : 0.0, 1e-12));
        REQUIRE_THAT(r.determinant(), WithinAbs(1.0, 1e-12));
    }
}

TEST_CASE("rotation senses", "[vec3]")
{
    const Vec3 y = rotation_x(std::numbers::pi / 2) * Vec3{0, 1, 0};
    CHECK_THAT(y.z, WithinAbs(1.0, 1e-15));
    const Vec3 z = rotation_y(std::numbers::pi / 2) * Vec3{0, 0, 1};
    CHECK_THAT(z.x, WithinAbs(1.0, 1e-15));
    const Vec3 flipped = rotation_y(std::numbers::pi) * Vec3{1, 2, 3};
    CHECK_THAT(flipped.x, WithinAbs(-1.0, 1e-15));
    CHECK_THAT(flipped.y, WithinAbs(2.0, 1e-15));
    CHECK_THAT(flipped.z, WithinAbs(-3.0, 1e-15));
}
