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

#include <stdexcept>
#include <string>

namespace gobnet
{

// Root of every exception thrown by the library.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// Raised when the refraction radicand goes negative.
class TotalInternalReflection : public Error
{
public:
    using Error::Error;
};

// |C q + D| vanished: the waist is imaged at infinity.
class DegenerateTransform : public Error
{
public:
    using Error::Error;
};

class IndexOutOfRange : public Error
{
public:
    using Error::Error;
};

class InvalidArgument : public Error
{
public:
    using Error::Error;
};

class EmptyCluster : public Error
{
public:
    using Error::Error;
};

class UnknownLayout : public Error
{
public:
    using Error::Error;
};

class ParseError : public Error
{
public:
    using Error::Error;
};

class NotAPartition : public Error
{
public:
    using Error::Error;
};

class AllocationInvalid : public Error
{
public:
    using Error::Error;
};

class GridMismatch : public Error
{
public:
    using Error::Error;
};

// Bad user configuration (unit, key, cross-field check).
class ConfigError : public Error
{
public:
    using Error::Error;
};

} // namespace gobnet
