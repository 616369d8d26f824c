// SPDX-License-Identifier: Apache-2.0
//
// rismimo - link-level simulation of RIS-assisted uplink massive MIMO
// Copyright (C) 2026 The rismimo authors
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

#include "rismimo/array_geometry.hpp"

#include "rismimo/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace rismimo
{
    void ArrayGeometry::validate() const
    {
        if (horizontal.empty())
            throw ConfigError("ArrayGeometry: no elements");
        if (horizontal.size() != vertical.size())
            throw ConfigError("ArrayGeometry: horizontal and vertical offsets differ in length");
        if (horizontal[0] != 0.0 || vertical[0] != 0.0)
            throw ConfigError("ArrayGeometry: the first element must be the reference (zero offsets)");
        for (std::size_t m = 0; m < horizontal.size(); ++m)
            if (!std::isfinite(horizontal[m]) || !std::isfinite(vertical[m]))
                throw ConfigError("ArrayGeometry: non-finite element offset");
    }

    ArrayGeometry ArrayGeometry::ula(std::size_t count, double spacing)
    {
        return upa(count, 1, spacing);
    }

    ArrayGeometry ArrayGeometry::upa(std::size_t horizontal_count, std::size_t vertical_count, double spacing)
    {
        if (horizontal_count == 0 || vertical_count == 0)
            throw ConfigError("ArrayGeometry::upa: element counts must be positive");
        ArrayGeometry g;
        g.horizontal.reserve(horizontal_count * vertical_count);
        g.vertical.reserve(horizontal_count * vertical_count);
        for (std::size_t v = 0; v < vertical_count; ++v)
            for (std::size_t h = 0; h < horizontal_count; ++h)
            {
                g.horizontal.push_back(spacing * static_cast<double>(h));
                g.vertical.push_back(spacing * static_cast<double>(v));
            }
        return g;
    }

    arma::cx_vec array_response(const ArrayGeometry &geometry, double azimuth, double elevation)
    {
        geometry.validate();
        const double two_pi = 2.0 * std::numbers::pi;
        const double kh = two_pi * std::sin(azimuth) * std::cos(elevation);
        const double kv = two_pi * std::sin(elevation);
        arma::cx_vec a(geometry.size());
        for (std::size_t m = 0; m < geometry.size(); ++m)
        {
            const double phase = kh * geometry.horizontal[m] + kv * geometry.vertical[m];
            a(m) = {std::cos(phase), std::sin(phase)};
        }
        return a;
    }

    double distance(const Point3 &a, const Point3 &b)
    {
        return std::hypot(a.x - b.x, a.y - b.y, a.z - b.z);
    }

    ArrayFrame ArrayFrame::facing(const Point3 &position, double axis_x, double axis_y, const Point3 &facing)
    {
        const double len = std::hypot(axis_x, axis_y);
        if (len == 0.0)
            throw ConfigError("ArrayFrame: zero-length horizontal axis");
        ArrayFrame f;
        f.position = position;
        f.axis_x = axis_x / len;
        f.axis_y = axis_y / len;
        // perpendicular in the xy-plane, flipped to face the target
        f.boresight_x = -f.axis_y;
        f.boresight_y = f.axis_x;
        if (f.boresight_x * (facing.x - position.x) + f.boresight_y * (facing.y - position.y) < 0.0)
        {
            f.boresight_x = -f.boresight_x;
            f.boresight_y = -f.boresight_y;
        }
        return f;
    }

    LocalAngles local_angles(const ArrayFrame &frame, const Point3 &target)
    {
        const double dx = target.x - frame.position.x;
        const double dy = target.y - frame.position.y;
        const double dz = target.z - frame.position.z;
        const double r = std::hypot(dx, dy, dz);
        if (r == 0.0)
            throw ConfigError("local_angles: target coincides with the array position");

        const double along_axis = (dx * frame.axis_x + dy * frame.axis_y) / r;
        const double along_boresight = (dx * frame.boresight_x + dy * frame.boresight_y) / r;
        LocalAngles out;
        out.elevation = std::asin(std::clamp(dz / r, -1.0, 1.0));
        out.azimuth = std::atan2(along_axis, along_boresight);
        return out;
    }
}
