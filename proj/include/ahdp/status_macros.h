// Copyright 2026 The AHDP Workbench Authors
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

#ifndef AHDP_STATUS_MACROS_H_
#define AHDP_STATUS_MACROS_H_

#include <utility>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

#define AHDP_STATUS_CONCAT_INNER_(a, b) a##b
#define AHDP_STATUS_CONCAT_(a, b) AHDP_STATUS_CONCAT_INNER_(a, b)

#define AHDP_RETURN_IF_ERROR(expr)               \
  do {                                           \
    const absl::Status _ahdp_status = (expr);    \
    if (!_ahdp_status.ok()) return _ahdp_status; \
  } while (0)

#define AHDP_ASSIGN_OR_RETURN_IMPL_(tmp, lhs, expr) \
  auto tmp = (expr);                                \
  if (!tmp.ok()) return tmp.status();               \
  lhs = std::move(tmp).value()

// Evaluates `expr` (an absl::StatusOr<T>), returning its status on error and
// otherwise move-assigning the value to `lhs`.
#define AHDP_ASSIGN_OR_RETURN(lhs, expr) \
  AHDP_ASSIGN_OR_RETURN_IMPL_(           \
      AHDP_STATUS_CONCAT_(_ahdp_statusor_, __LINE__), lhs, expr)

#endif  // AHDP_STATUS_MACROS_H_
