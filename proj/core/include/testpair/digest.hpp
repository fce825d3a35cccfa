// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 testpair contributors

#pragma once

#include <string>
#include <string_view>

namespace testpair {

// 128-bit content digest as 32 lowercase hex chars. The corpus-wide digest
// algorithm is fixed (md5) and recorded in artifact headers; mixing digest
// algorithms within one corpus is not supported.
std::string md5_hex(std::string_view bytes);

inline constexpr std::string_view kDigestAlgorithm = "md5";

}  // namespace testpair
