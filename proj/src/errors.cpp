// Copyright (c) 2026 stratsearch contributors
// SPDX-License-Identifier: Apache-2.0

#include "stratsearch/errors.hpp"

namespace stratsearch {

const char* to_string(EvalFailureKind kind) {
  switch (kind) {
    case EvalFailureKind::NonZeroExit:
      return "non_zero_exit";
    case EvalFailureKind::Timeout:
      return "timeout";
    case EvalFailureKind::MissingReward:
      return "missing_reward";
    case EvalFailureKind::SpawnFailure:
      return "spawn_failure";
    case EvalFailureKind::BadValue:
      return "bad_value";
    case EvalFailureKind::Other:
      return "other";
  }
  return "unknown";
}

}  // namespace stratsearch
