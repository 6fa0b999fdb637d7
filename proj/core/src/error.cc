// Copyright 2026 The FairHOME Authors.
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

#include "fairhome/error.h"

#include <string>

namespace fairhome {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kSchema:
      return "schema error";
    case ErrorCode::kData:
      return "data error";
    case ErrorCode::kUsage:
      return "usage error";
    case ErrorCode::kShape:
      return "shape error";
    case ErrorCode::kTraining:
      return "training error";
    case ErrorCode::kMetricUndefined:
      return "metric undefined";
    case ErrorCode::kIo:
      return "io error";
  }
  return "error";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
      code_(code) {}

}  // namespace fairhome
