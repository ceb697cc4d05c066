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

#pragma once

#include <array>
#include <cmath>

#include "errors.hpp"

namespace gobnet
{

struct Vec3
{
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    constexpr Vec3 operator+(const Vec3 &o) const { return {x + o.x, y + o.y, z + o.z}; }
    constexpr Vec3 operator-(const Vec3 &o) const { return {x - o.x, y - o.y, z - o.z}; }
    constexpr Vec3 operator-() const { return {-x, -y, -z}; }
    constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    constexpr Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    constexpr Vec3 &operator+=(const Vec3 &o)
    {
        x += o.x;
        y += o.y;
        z += o.z;
        return *this;
    }
    constexpr bool operator==(const Vec3 &) const = default;
};

constexpr Vec3 operator*(double s, const Vec3 &v) { return v * s; }

constexpr double dot(const Vec3 &a, const Vec3 &b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

constexpr Vec3 cross(const Vec3 &a, const Vec3 &b)
{
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double norm(const Vec3 &v) { return std::sqrt(dot(v, v)); }

// Direction vector. Construction normalizes; a zero vector is rejected.
class UnitVec3
{
public:
    constexpr UnitVec3() : v_{0.0, 0.0, 1.0} {}

    explicit UnitVec3(const Vec3 &v)
    {
        const double n = norm(v);
        if (!(n > 0.0) || !std::isfinite(n))
            throw InvalidArgument("UnitVec3: cannot normalize a zero or non-finite vector");
        v_ = v / n;
    }

    UnitVec3(double x, double y, double z) : UnitVec3(Vec3{x, y, z}) {}

    // Wraps a vector that the caller guarantees is already unit length.
    static constexpr UnitVec3 trusted(const Vec3 &v)
    {
        UnitVec3 u;
        u.v_ = v;
        return u;
    }

    constexpr const Vec3 &vec() const { return v_; }
    constexpr double x() const { return v_.x; }
    constexpr double y() const { return v_.y; }
    constexpr double z() const { return v_.z; }
    constexpr UnitVec3 operator-() const { return trusted(-v_); }
    constexpr operator const Vec3 &() const { return v_; }

private:
    Vec3 v_;
};

// Angle between two directions, robust near 0 and pi.
inline double angle_between(const Vec3 &a, const Vec3 &b)
{
    return std::atan2(norm(cross(a, b)), dot(a, b));
}

// Row-major 3x3 matrix.
struct Mat3
{
    std::array<double, 9> m{1, 0, 0, 0, 1, 0, 0, 0, 1};

    constexpr double operator()(int r, int c) const { return m[static_cast<std::size_t>(3 * r + c)]; }
    constexpr double &operator()(int r, int c) { return m[static_cast<std::size_t>(3 * r + c)]; }

    static constexpr Mat3 identity() { return {}; }

    constexpr Vec3 operator*(const Vec3 &v) const
    {
        return {m[0] * v.x + m[1] * v.y + m[2] * v.z,
                m[3] * v.x + m[4] * v.y + m[5] * v.z,
                m[6] * v.x + m[7] * v.y + m[8] * v.z};
    }

    constexpr Mat3 operator*(const Mat3 &o) const
    {
        Mat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
            {
                double s = 0.0;
                for (int k = 0; k < 3; ++k)
                    s += (*this)(i, k) * o(k, j);
                r(i, j) = s;
            }
        return r;
    }

    constexpr Mat3 transposed() const
    {
        Mat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                r(i, j) = (*this)(j, i);
        return r;
    }

    constexpr double determinant() const
    {
        return m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) +
               m[2] * (m[3] * m[7] - m[4] * m[6]);
    }
};

inline UnitVec3 operator*(const Mat3 &r, const UnitVec3 &u) { return UnitVec3(r * u.vec()); }

// Right-handed rotation about x (counter-clockwise for positive angle).
inline Mat3 rotation_x(double a)
{
    const double c = std::cos(a), s = std::sin(a);
    return Mat3{{1, 0, 0, 0, c, -s, 0, s, c}};
}

inline Mat3 rotation_y(double b)
{
    const double c = std::cos(b), s = std::sin(b);
    return Mat3{{c, 0, s, 0, 1, 0, -s, 0, c}};
}

} // namespace gobnet
