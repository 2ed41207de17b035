// Copyright 2026 The rtcdd Authors. All Rights Reserved.
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

#ifndef RTCDD_ERROR_H_
#define RTCDD_ERROR_H_

#include <stdexcept>
#include <string>

namespace rtcdd {

// Every failure raised by the library derives from Error, so callers (the
// CLI in particular) can catch one type and still report the concrete kind
// through name().
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
  virtual const char* name() const noexcept { return "Error"; }
};

#define RTCDD_DEFINE_ERROR(Name)                                   \
  class Name : public Error {                                      \
   public:                                                         \
    explicit Name(const std::string& what) : Error(what) {}        \
    const char* name() const noexcept override { return #Name; }   \
  };

RTCDD_DEFINE_ERROR(FormatError)
RTCDD_DEFINE_ERROR(UnsupportedError)
RTCDD_DEFINE_ERROR(IoError)
RTCDD_DEFINE_ERROR(TooShortError)
RTCDD_DEFINE_ERROR(AlignmentError)
RTCDD_DEFINE_ERROR(ConfigError)
RTCDD_DEFINE_ERROR(SnrUndefinedError)
RTCDD_DEFINE_ERROR(EmptyBatchError)
RTCDD_DEFINE_ERROR(SegmentationError)
RTCDD_DEFINE_ERROR(SchemeError)
RTCDD_DEFINE_ERROR(BoundsError)
RTCDD_DEFINE_ERROR(EmptyError)
RTCDD_DEFINE_ERROR(ShapeError)
RTCDD_DEFINE_ERROR(PairingError)
RTCDD_DEFINE_ERROR(UndefinedMetricError)

#undef RTCDD_DEFINE_ERROR

}  // namespace rtcdd

#endif  // RTCDD_ERROR_H_
