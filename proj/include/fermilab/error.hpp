// Copyright 2026 The fermilab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or
// implied. See the License for the specific language governing
// permissions and limitations under the License.

#pragma once

/// @file
/// Exception hierarchy shared by every module. The C API maps these onto
/// status codes (see fermilab.h).

#include <stdexcept>
#include <string>

namespace fermilab {

/// Base class; never thrown directly.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input outside the domain of an operation (zero Floquet multiplier,
/// energy inside a band where a gap is required, box too small, ...).
class domain_error : public error {
public:
    using error::error;
};

/// A numerical procedure did not reach its accuracy target.
class convergence_error : public error {
public:
    using error::error;
};

/// Malformed serialized input (stencil, coupling descriptor, config).
class parse_error : public error {
public:
    using error::error;
};

/// File could not be read.
class io_error : public error {
public:
    using error::error;
};

} // namespace fermilab
