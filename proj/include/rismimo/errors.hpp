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

#ifndef RISMIMO_ERRORS_HPP
#define RISMIMO_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace rismimo
{
    // Invalid scenario or option values, detected before any sampling starts
    class ConfigError : public std::invalid_argument
    {
    public:
        using std::invalid_argument::invalid_argument;
    };

    // Operand shapes that do not fit together
    class DimensionError : public std::invalid_argument
    {
    public:
        using std::invalid_argument::invalid_argument;
    };

    // RIS element index sets that overlap or exceed the number of elements
    class AssignmentError : public std::invalid_argument
    {
    public:
        using std::invalid_argument::invalid_argument;
    };

    // Zero angular spread passed to the closed-form correlation without opting into the point-mass path
    class DegenerateSpreadError : public std::invalid_argument
    {
    public:
        using std::invalid_argument::invalid_argument;
    };

    // Matrix expected to be positive semidefinite has eigenvalues below the tolerance
    class NotPsdError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    // File read/write failures; the message carries the path
    class IoError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };
}

#endif
