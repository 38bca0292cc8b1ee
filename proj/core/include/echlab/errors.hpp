// Copyright 2026 The ech-lab Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace echlab {

// Base for every error raised by the library. Callers that only care about
// "the request was invalid" can catch this.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A precondition on an argument was violated (bad parameter, malformed
// profile, point outside a domain, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

class InfiniteVolumeError : public Error {
 public:
  using Error::Error;
};

// A size limit of an exact algorithm was exceeded; the message names the
// bracketed alternative.
class LimitExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace echlab
