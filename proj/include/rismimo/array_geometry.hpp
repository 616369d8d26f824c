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

#ifndef RISMIMO_ARRAY_GEOMETRY_HPP
#define RISMIMO_ARRAY_GEOMETRY_HPP

#include <armadillo>
#include <cstddef>
#include <vector>

namespace rismimo
{
    // Planar array lying in the plane spanned by a horizontal axis and the vertical (z) axis.
    // Offsets are measured in wavelengths relative to the first (reference) element.
    struct ArrayGeometry
    {
        std::vector<double> horizontal; // d_H^{m1}
        std::vector<double> vertical;   // d_V^{m1}

        std::size_t size() const { return horizontal.size(); }

        // Throws ConfigError unless both sequences have equal, non-zero length and element 0 is at the origin
        void validate() const;

        // Uniform linear array along the horizontal axis
        static ArrayGeometry ula(std::size_t count, double spacing);

        // Uniform planar array; element index m = v * horizontal_count + h (horizontal index runs fastest)
        static ArrayGeometry upa(std::size_t horizontal_count, std::size_t vertical_count, double spacing);
    };

    // [a]_m = exp(i 2 pi d_H^{m1} sin(az) cos(el)) * exp(i 2 pi d_V^{m1} sin(el))
    arma::cx_vec array_response(const ArrayGeometry &geometry, double azimuth, double elevation);

    struct Point3
    {
        double x = 0.0;
        double y = 0.0;
        double z = 0.0;
    };

    double distance(const Point3 &a, const Point3 &b);

    // Orientation of an array in the global frame. The horizontal axis is a unit vector in the
    // xy-plane, the boresight is the horizontal unit vector perpendicular to it.
    struct ArrayFrame
    {
        Point3 position;
        double axis_x = 0.0; // horizontal axis direction
        double axis_y = 1.0;
        double boresight_x = 1.0;
        double boresight_y = 0.0;

        // Frame with the given horizontal axis; the boresight is the perpendicular pointing towards `facing`
        static ArrayFrame facing(const Point3 &position, double axis_x, double axis_y, const Point3 &facing);
    };

    struct LocalAngles
    {
        double azimuth = 0.0;
        double elevation = 0.0;
    };

    // Azimuth/elevation of `target` as seen from the array, in the convention used by array_response:
    // sin(az) cos(el) is the direction cosine along the horizontal axis, sin(el) along z.
    LocalAngles local_angles(const ArrayFrame &frame, const Point3 &target);
}

#endif
